//! The quadratic sum-rule polynomials and their checks.
//!
//! For eigenvalues `λ_1 ≤ ... ≤ λ_N` of a `d`-dimensional problem with ambient
//! first positive level `Λ_1`,
//!
//! ```text
//! P_N(z) = Σ_j (z - λ_j)(z - Λ_1 - (d+4)/d · λ_j)
//! Q_N(z) = N (z - λ_N)(z - λ_{N+1})
//! ```
//!
//! Both have leading coefficient `N`, so `P_N - Q_N` is affine and its sign on
//! `[λ_N, λ_{N+1}]` is decided by the two endpoint values.

mod recurrence;
mod shifted;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{self, int, Rational};
use crate::spectrum::{PowerSums, Spectrum};

pub use recurrence::{recurrence_counts, RecurrenceResult};
pub use shifted::{default_gap_samples, shifted_sumrule_check};

/// `c2 z² + c1 z + c0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadPoly {
    #[serde(with = "exactnum::serde_rational")]
    pub c2: Rational,
    #[serde(with = "exactnum::serde_rational")]
    pub c1: Rational,
    #[serde(with = "exactnum::serde_rational")]
    pub c0: Rational,
}

impl QuadPoly {
    pub fn new(c2: Rational, c1: Rational, c0: Rational) -> Self {
        Self { c2, c1, c0 }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// `(z - r)(z - s)`.
    pub fn from_roots(r: &Rational, s: &Rational) -> Self {
        Self::new(int(1), -(r + s), r * s)
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        (&self.c2 * z + &self.c1) * z + &self.c0
    }

    pub fn is_zero(&self) -> bool {
        self.c2.is_zero() && self.c1.is_zero() && self.c0.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(&self.c2 * k, &self.c1 * k, &self.c0 * k)
    }

    pub fn derivative_at(&self, z: &Rational) -> Rational {
        int(2) * &self.c2 * z + &self.c1
    }
}

impl std::ops::Add for &QuadPoly {
    type Output = QuadPoly;
    fn add(self, o: &QuadPoly) -> QuadPoly {
        QuadPoly::new(&self.c2 + &o.c2, &self.c1 + &o.c1, &self.c0 + &o.c0)
    }
}

impl std::ops::Sub for &QuadPoly {
    type Output = QuadPoly;
    fn sub(self, o: &QuadPoly) -> QuadPoly {
        QuadPoly::new(&self.c2 - &o.c2, &self.c1 - &o.c1, &self.c0 - &o.c0)
    }
}

impl std::ops::AddAssign<&QuadPoly> for QuadPoly {
    fn add_assign(&mut self, o: &QuadPoly) {
        self.c2 += &o.c2;
        self.c1 += &o.c1;
        self.c0 += &o.c0;
    }
}

impl fmt::Display for QuadPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})z^2 + ({})z + ({})", self.c2, self.c1, self.c0)
    }
}

/// Structured verdict of a polynomial-valued check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub kind: String,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    pub holds: bool,
    pub residual: QuadPoly,
    #[serde(with = "exactnum::serde_rational_pairs")]
    pub witnesses: Vec<(Rational, Rational)>,
    pub notes: String,
}

impl CheckReport {
    /// Re-derives the verdict from the residual and witnesses.
    pub fn verdict_from_data(&self) -> bool {
        match self.kind.as_str() {
            "identity" | "sum-rule-exact" => self.residual.is_zero(),
            _ => self.witnesses.iter().all(|(_, v)| !v.is_positive()),
        }
    }

    pub(crate) fn note_approximate(mut self, spectrum: &Spectrum) -> Self {
        if spectrum.is_approximate() {
            if !self.notes.is_empty() {
                self.notes.push_str("; ");
            }
            self.notes.push_str("approximate: spectrum exactified from floats");
        }
        self
    }
}

fn p_poly_from_sums(sums: &PowerSums, d: u32, lambda1: &Rational) -> QuadPoly {
    let d = int(d as i64);
    let n = int(sums.count as i64);
    let c1 = -(int(2) * (&d + int(2)) / &d * &sums.sum) - lambda1 * &n;
    let c0 = (&d + int(4)) / &d * &sums.sum_sq + lambda1 * &sums.sum;
    QuadPoly::new(n, c1, c0)
}

/// `P_N` for the given eigenvalues.
pub fn p_poly(lambdas: &[Rational], d: u32, lambda1: &Rational) -> Result<QuadPoly> {
    if lambdas.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(p_poly_from_sums(&PowerSums::of(lambdas), d, lambda1))
}

/// `Q_N(z) = N (z - λ_N)(z - λ_{N+1})`.
pub fn q_poly(lambda_n: &Rational, lambda_n1: &Rational, n: u64) -> QuadPoly {
    QuadPoly::from_roots(lambda_n, lambda_n1).scale(&int(n as i64))
}

/// `Σ_j (z - λ_j)(z - h - a λ_j)`.
pub fn generalized_p_poly(lambdas: &[Rational], a: &Rational, h: &Rational) -> Result<QuadPoly> {
    if lambdas.is_empty() {
        return Err(Error::EmptyInput);
    }
    let s = PowerSums::of(lambdas);
    let n = int(s.count as i64);
    let c1 = -(h * &n + (a + int(1)) * &s.sum);
    let c0 = h * &s.sum + a * &s.sum_sq;
    Ok(QuadPoly::new(n, c1, c0))
}

/// Every `N <= n_max` with `λ_N < λ_{N+1}`.
pub fn gap_indices(s: &Spectrum, n_max: u64) -> Result<Vec<u64>> {
    if s.total() < n_max + 1 {
        return Err(Error::InsufficientLevels {
            needed: n_max + 1,
            available: s.total(),
        });
    }
    Ok(s
        .cumulative_counts()
        .into_iter()
        .take_while(|&c| c <= n_max)
        .collect())
}

/// Residual `P_N - Q_N` at a gap, with `Λ_1` supplied explicitly.
fn residual_at_gap(s: &Spectrum, d: u32, lambda1: &Rational, n: u64) -> Result<(QuadPoly, Rational, Rational)> {
    if !s.is_gap(n)? {
        return Err(Error::NotAGap(n));
    }
    let lo = s.eigenvalue(n)?.clone();
    let hi = s.eigenvalue(n + 1)?.clone();
    let p = p_poly_from_sums(&s.power_sums(n)?, d, lambda1);
    let q = q_poly(&lo, &hi, n);
    Ok((&p - &q, lo, hi))
}

/// `P_N = Q_N` on a full-manifold spectrum (`Λ_1` = second distinct level).
pub fn check_identity(s: &Spectrum, d: u32, n: u64) -> Result<CheckReport> {
    let lambda1 = s.first_positive_level()?.clone();
    check_identity_with_lambda1(s, d, &lambda1, n)
}

pub fn check_identity_with_lambda1(
    s: &Spectrum,
    d: u32,
    lambda1: &Rational,
    n: u64,
) -> Result<CheckReport> {
    let (residual, lo, hi) = residual_at_gap(s, d, lambda1, n)?;
    let witnesses = vec![
        (lo.clone(), residual.eval(&lo)),
        (hi.clone(), residual.eval(&hi)),
    ];
    Ok(CheckReport {
        kind: "identity".into(),
        index: Some(n),
        holds: residual.is_zero(),
        residual,
        witnesses,
        notes: format!("d={d} Lambda1={lambda1} unit={}", s.unit().as_str()),
    }
    .note_approximate(s))
}

/// `P_N <= Q_N` on `[λ_N, λ_{N+1}]`, decided at the endpoints.
pub fn check_inequality(s: &Spectrum, d: u32, n: u64) -> Result<CheckReport> {
    let lambda1 = s.first_positive_level()?.clone();
    check_inequality_with_lambda1(s, d, &lambda1, n)
}

pub fn check_inequality_with_lambda1(
    s: &Spectrum,
    d: u32,
    lambda1: &Rational,
    n: u64,
) -> Result<CheckReport> {
    let (residual, lo, hi) = residual_at_gap(s, d, lambda1, n)?;
    assert!(residual.c2.is_zero(), "P_N - Q_N must be affine");
    let at_lo = residual.eval(&lo);
    let at_hi = residual.eval(&hi);
    let holds = !at_lo.is_positive() && !at_hi.is_positive();
    Ok(CheckReport {
        kind: "inequality".into(),
        index: Some(n),
        holds,
        residual,
        witnesses: vec![(lo, at_lo), (hi, at_hi)],
        notes: format!("d={d} Lambda1={lambda1} unit={}", s.unit().as_str()),
    }
    .note_approximate(s))
}

/// `N (λ_{N+1} + λ_N) = (a + 1) Σ_{j<=N} λ_j`, exactly. Needs `N + 1` entries.
pub fn check_gap_condition(lambdas: &[Rational], a: &Rational, n: usize) -> Result<bool> {
    Ok(gap_condition_defect(lambdas, a, &Rational::zero(), n)?.is_zero())
}

/// The same condition for `P_N = Σ (z - λ_j)(z - h - a λ_j)` with a shift `h`:
/// `N (λ_{N+1} + λ_N - h) = (a + 1) Σ λ_j`. With `h = 0` this is
/// [`check_gap_condition`]; for `h ≠ 0` it equals that check applied to the
/// shifted sequence `λ_j + h/(a - 1)`.
pub fn check_gap_condition_shifted(
    lambdas: &[Rational],
    a: &Rational,
    h: &Rational,
    n: usize,
) -> Result<bool> {
    Ok(gap_condition_defect(lambdas, a, h, n)?.is_zero())
}

/// Left minus right side of the (shifted) gap condition.
pub fn gap_condition_defect(
    lambdas: &[Rational],
    a: &Rational,
    h: &Rational,
    n: usize,
) -> Result<Rational> {
    if n == 0 {
        return Err(Error::UnsupportedParameter("N must be positive".into()));
    }
    if lambdas.len() < n + 1 {
        return Err(Error::InsufficientLevels {
            needed: n as u64 + 1,
            available: lambdas.len() as u64,
        });
    }
    let nn = int(n as i64);
    let sum: Rational = lambdas[..n].iter().sum();
    Ok(&nn * (&lambdas[n] + &lambdas[n - 1] - h) - (a + int(1)) * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::spectrum::{cross_spectrum, CrossFamily, CrossSpace, Level, Unit};
    use crate::torus::{torus_spectrum, TorusModuli};
    use proptest::prelude::*;

    fn qp(c2: i64, c1: i64, c0: i64) -> QuadPoly {
        QuadPoly::new(int(c2), int(c1), int(c0))
    }

    fn square() -> Spectrum {
        torus_spectrum(&TorusModuli::square(), &int(5)).unwrap().spectrum
    }

    fn equilateral() -> Spectrum {
        torus_spectrum(&TorusModuli::equilateral(), &int(4)).unwrap().spectrum
    }

    fn rectangular(b_sq: Rational) -> Spectrum {
        torus_spectrum(&TorusModuli::rectangular(b_sq).unwrap(), &int(2))
            .unwrap()
            .spectrum
    }

    fn sphere2(l_max: u64) -> Spectrum {
        cross_spectrum(&CrossSpace::new(CrossFamily::Sphere, 2).unwrap(), l_max).unwrap()
    }

    #[test]
    fn p_poly_examples() {
        assert_eq!(p_poly(&[int(0)], 2, &int(2)).unwrap(), qp(1, -2, 0));
        // ζ(ζ-1) + 4(ζ-1)(ζ-4) = 5ζ² - 21ζ + 16
        let sq = [int(0), int(1), int(1), int(1), int(1)];
        assert_eq!(p_poly(&sq, 2, &int(1)).unwrap(), qp(5, -21, 16));
        assert_eq!(
            p_poly(&[int(0)], 7, &rat(5, 3)).unwrap(),
            QuadPoly::new(int(1), rat(-5, 3), int(0))
        );
        assert_eq!(p_poly(&[], 2, &int(1)), Err(Error::EmptyInput));
    }

    #[test]
    fn q_poly_examples() {
        assert_eq!(q_poly(&int(1), &int(2), 5), qp(5, -15, 10));
        assert_eq!(q_poly(&int(0), &int(0), 3), qp(3, 0, 0));
        assert_eq!(
            q_poly(&rat(4, 3), &int(4), 7),
            QuadPoly::new(int(7), rat(-112, 3), rat(112, 3))
        );
    }

    #[test]
    fn generalized_p_poly_examples() {
        assert_eq!(generalized_p_poly(&[int(1)], &int(3), &int(0)).unwrap(), qp(1, -4, 3));
        assert_eq!(
            generalized_p_poly(&[int(1), int(3)], &int(3), &int(0)).unwrap(),
            qp(2, -16, 30)
        );
        let lambdas = [int(0), rat(1, 3), rat(1, 3), int(2)];
        for d in 1..6u32 {
            let a = int(1) + rat(4, d as i64);
            assert_eq!(
                generalized_p_poly(&lambdas, &a, &rat(7, 5)).unwrap(),
                p_poly(&lambdas, d, &rat(7, 5)).unwrap()
            );
        }
    }

    #[test]
    fn gap_indices_examples() {
        assert_eq!(gap_indices(&sphere2(3), 9).unwrap(), vec![1, 4, 9]);
        assert_eq!(gap_indices(&square(), 5).unwrap(), vec![1, 5]);
        let single = Spectrum::new(Unit::Absolute, vec![Level::new(int(0), 1)]).unwrap();
        assert!(matches!(
            gap_indices(&single, 1),
            Err(Error::InsufficientLevels { .. })
        ));
    }

    #[test]
    fn identity_on_sphere() {
        let r = check_identity(&sphere2(3), 2, 4).unwrap();
        assert!(r.holds);
        assert!(r.residual.is_zero());
        assert!(r.verdict_from_data());
    }

    #[test]
    fn identity_fails_on_square_torus() {
        let r = check_identity(&square(), 2, 5).unwrap();
        assert!(!r.holds);
        assert_eq!(r.residual, qp(0, -6, 6));
    }

    #[test]
    fn identity_fails_on_equilateral_torus() {
        let r = check_identity(&equilateral(), 2, 7).unwrap();
        assert!(!r.holds);
        assert_eq!(r.residual, QuadPoly::new(int(0), int(-4), rat(16, 3)));
    }

    #[test]
    fn refuses_non_gap() {
        assert_eq!(check_identity(&square(), 2, 3), Err(Error::NotAGap(3)));
        assert_eq!(check_inequality(&square(), 2, 2), Err(Error::NotAGap(2)));
    }

    #[test]
    fn inequality_examples() {
        let r = check_inequality(&square(), 2, 5).unwrap();
        assert!(r.holds);
        assert_eq!(r.witnesses, vec![(int(1), int(0)), (int(2), int(-6))]);

        let r9 = check_inequality(&rectangular(int(9)), 2, 3).unwrap();
        assert!(!r9.holds);
        // 4(b² z - 1)/b⁴ in 4π² units with b² = 9
        assert_eq!(r9.residual, QuadPoly::new(int(0), rat(4, 9), rat(-4, 81)));

        let r2 = check_inequality(&rectangular(int(2)), 2, 3).unwrap();
        assert!(r2.holds);
        assert!(r2.verdict_from_data());
    }

    #[test]
    fn rectangular_threshold_is_eight_thirds() {
        for (b_sq, expected) in [
            (rat(3, 2), true),
            (int(2), true),
            (rat(8, 3), true),
            (int(3), false),
            (int(4), false),
            (int(9), false),
        ] {
            let r = check_inequality(&rectangular(b_sq.clone()), 2, 3).unwrap();
            assert_eq!(r.holds, expected, "b^2 = {b_sq}");
        }
    }

    #[test]
    fn explicit_lambda1_for_domain_spectra() {
        // A Dirichlet-type spectrum does not contain the ambient Λ_1.
        let s = Spectrum::new(
            Unit::Absolute,
            vec![Level::new(int(5), 1), Level::new(int(12), 2), Level::new(int(20), 1)],
        )
        .unwrap();
        let r = check_inequality_with_lambda1(&s, 2, &int(2), 1).unwrap();
        assert_eq!(r.residual.c2, int(0));
        assert_eq!(r.witnesses.len(), 2);
    }

    #[test]
    fn gap_condition_examples() {
        for n in 1..=20usize {
            let odd: Vec<Rational> = (1..=n as i64 + 1).map(|k| int(2 * k - 1)).collect();
            assert!(check_gap_condition(&odd, &int(3), n).unwrap());
            let quad: Vec<Rational> =
                (1..=n as i64 + 1).map(|k| int(2 * k * k - 2 * k + 1)).collect();
            assert!(check_gap_condition(&quad, &int(5), n).unwrap());
        }
        assert!(!check_gap_condition(&[int(1), int(2)], &int(3), 1).unwrap());
        assert!(check_gap_condition(&[int(1)], &int(3), 1).is_err());
    }

    #[test]
    fn shifted_gap_condition_matches_shifted_sequence() {
        let space = CrossSpace::new(CrossFamily::Sphere, 3).unwrap();
        let (h, a) = crate::spectrum::cross_parameters(&space);
        let spec = cross_spectrum(&space, 6).unwrap();
        let lambdas = spec.flatten(spec.total()).unwrap();
        let shift = &h / (&a - int(1));
        let shifted: Vec<Rational> = lambdas.iter().map(|l| l + &shift).collect();
        for n in gap_indices(&spec, spec.total() - 1).unwrap() {
            let n = n as usize;
            assert!(check_gap_condition_shifted(&lambdas, &a, &h, n).unwrap());
            assert!(check_gap_condition(&shifted, &a, n).unwrap());
        }
    }

    #[test]
    fn report_json_shape() {
        let r = check_identity(&square(), 2, 5).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["kind"], "identity");
        assert_eq!(v["holds"], false);
        assert_eq!(v["N"], 5);
        assert_eq!(v["residual"], serde_json::json!({"c2": "0", "c1": "-6", "c0": "6"}));
        assert_eq!(v["witnesses"], serde_json::json!([["1", "0"], ["2", "-6"]]));
        let back: CheckReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    fn levels_strategy() -> impl Strategy<Value = Vec<(i64, u64)>> {
        proptest::collection::vec((1i64..20, 1u64..5), 2..6)
    }

    proptest! {
        #[test]
        fn residual_is_affine_and_scale_covariant(steps in levels_strategy(), c_num in 1i64..9, c_den in 1i64..9) {
            let mut value = int(0);
            let mut levels = vec![Level::new(int(0), 1)];
            for (step, mult) in &steps {
                value += rat(*step, 3);
                levels.push(Level::new(value.clone(), *mult));
            }
            let s = Spectrum::new(Unit::Absolute, levels.clone()).unwrap();
            let c = rat(c_num, c_den);
            let scaled = Spectrum::new(
                Unit::Absolute,
                levels.iter().map(|l| Level::new(&l.value * &c, l.mult)).collect(),
            ).unwrap();
            let top = s.total() - 1;
            for n in gap_indices(&s, top).unwrap() {
                for d in [2u32, 3, 5] {
                    let r = check_inequality(&s, d, n).unwrap();
                    prop_assert!(r.residual.c2.is_zero());
                    let rs = check_inequality(&scaled, d, n).unwrap();
                    prop_assert_eq!(r.holds, rs.holds);
                    // residual_c(z) = c² residual(z / c)
                    let z = rat(7, 2);
                    prop_assert_eq!(rs.residual.eval(&z), &c * &c * r.residual.eval(&(&z / &c)));
                    let ri = check_identity(&s, d, n).unwrap();
                    let rsi = check_identity(&scaled, d, n).unwrap();
                    prop_assert_eq!(ri.holds, rsi.holds);
                }
            }
        }
    }
}
