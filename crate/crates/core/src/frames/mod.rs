//! Frame operators of torus eigenspaces.
//!
//! The eigenfunctions at `4π² ν` are `e^{2πi⟨p, x⟩}` for the dual vectors `p`
//! of the shell. Their gradients are `2πi p e^{2πi⟨p, x⟩}`, so
//! `Σ_i ⟨V, ∇f̄_i⟩ ∇f_i = 4π² S V` with `S = Σ_i p_i p_iᵀ`. The shell is a
//! tight frame when `S` is a multiple of the identity.
//!
//! `S_xy` involves `1/b`, so it is stored as `b · S_xy = Σ n_i (m_i - n_i a)`,
//! which vanishes exactly when `S_xy` does.

mod sum_rule;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{self, int, Rational};
use crate::torus::{eigenspace_vectors, torus_spectrum, DualVector, TorusModuli};

pub use sum_rule::{sign_bound_check, sum_rule_sides, verify_sum_rule_identity, SumRuleSides};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameReport {
    pub tight: bool,
    /// Number of vectors in the shell.
    pub multiplicity: u64,
    #[serde(with = "exactnum::serde_rational")]
    pub nu: Rational,
    #[serde(with = "exactnum::serde_rational")]
    pub s_xx: Rational,
    #[serde(with = "exactnum::serde_rational")]
    pub s_yy: Rational,
    #[serde(with = "exactnum::serde_rational")]
    pub s_xy_scaled: Rational,
    /// `c` with `Σ ⟨V, ∇f̄_i⟩ ∇f_i = c · 4π² · V` for the unnormalized
    /// exponentials; present only when tight.
    #[serde(
        default,
        with = "opt_rational",
        skip_serializing_if = "Option::is_none"
    )]
    pub frame_constant_unnormalized: Option<Rational>,
    /// `M ν / d` in the same convention.
    #[serde(with = "exactnum::serde_rational")]
    pub predicted_constant: Rational,
    /// Square of the constant for L²-normalized eigenfunctions,
    /// `(M ν / (d |M|))²` with `|M| = b`.
    #[serde(with = "exactnum::serde_rational")]
    pub normalized_constant_sq: Rational,
    pub unit: String,
    pub notes: String,
}

/// Frame operator of the shell `|p|² = ν`.
pub fn frame_check(moduli: &TorusModuli, nu: &Rational) -> Result<FrameReport> {
    let shell = nonempty_shell(moduli, nu)?;
    let (s_xx, s_yy, s_xy_scaled) = frame_operator(moduli, &shell);
    let tight = num_traits::Zero::is_zero(&s_xy_scaled) && s_xx == s_yy;
    let m = int(shell.len() as i64);
    let d = int(2);
    let predicted = &m * nu / &d;
    let normalized_constant_sq = &predicted * &predicted / moduli.b_sq();
    Ok(FrameReport {
        tight,
        multiplicity: shell.len() as u64,
        nu: nu.clone(),
        frame_constant_unnormalized: tight.then(|| s_xx.clone()),
        s_xx,
        s_yy,
        s_xy_scaled,
        predicted_constant: predicted,
        normalized_constant_sq,
        unit: "4pi^2".into(),
        notes: "normalized constant = unnormalized constant / |M|, |M| = b".into(),
    })
}

/// `(S_xx, S_yy, b · S_xy)`.
pub fn frame_operator(moduli: &TorusModuli, shell: &[DualVector]) -> (Rational, Rational, Rational) {
    let mut s_xx = int(0);
    let mut s_yy = int(0);
    let mut s_xy_scaled = int(0);
    for p in shell {
        let (x, y) = moduli.scaled_components(*p);
        s_xx += &x * &x;
        s_yy += &y * &y;
        s_xy_scaled += &x * &y;
    }
    (s_xx, s_yy / moduli.b_sq(), s_xy_scaled)
}

/// Both addition formulas for the shell at `ν`: the density `Σ|Y|² = M/|M|`
/// (the shell size agrees with the enumerated multiplicity) and the gradient
/// density `Σ|∇Y|² = M Λ / |M|`, i.e. `trace S = M ν`.
pub fn addition_formula_check(moduli: &TorusModuli, nu: &Rational) -> Result<bool> {
    let shell = nonempty_shell(moduli, nu)?;
    let ts = torus_spectrum(moduli, nu)?;
    let mult = ts.spectrum.levels().last().map(|l| l.mult).unwrap_or(0);
    let density = ts.spectrum.top() == nu && mult == shell.len() as u64;
    let (s_xx, s_yy, _) = frame_operator(moduli, &shell);
    let gradient = s_xx + s_yy == int(shell.len() as i64) * nu;
    Ok(density && gradient)
}

fn nonempty_shell(moduli: &TorusModuli, nu: &Rational) -> Result<Vec<DualVector>> {
    let shell = eigenspace_vectors(moduli, nu)?;
    if shell.is_empty() {
        return Err(Error::EmptyEigenspace(format!("no dual vector of {moduli} has norm^2 {nu}")));
    }
    Ok(shell)
}

mod opt_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exactnum::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_str(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;

    #[test]
    fn square_first_shell_is_tight() {
        let r = frame_check(&TorusModuli::square(), &int(1)).unwrap();
        assert!(r.tight);
        assert_eq!(r.frame_constant_unnormalized, Some(int(2)));
        assert_eq!(r.predicted_constant, int(2));
    }

    #[test]
    fn equilateral_first_shell_is_tight() {
        let r = frame_check(&TorusModuli::equilateral(), &rat(4, 3)).unwrap();
        assert!(r.tight);
        assert_eq!(r.frame_constant_unnormalized, Some(int(4)));
        assert_eq!(r.predicted_constant, int(4));
        // (4 / (√3/2))² = 64/3
        assert_eq!(r.normalized_constant_sq, rat(64, 3));
    }

    #[test]
    fn rectangular_first_shell_is_not_tight() {
        let r = frame_check(&TorusModuli::rectangular(int(4)).unwrap(), &rat(1, 4)).unwrap();
        assert!(!r.tight);
        assert_eq!(r.s_xx, int(0));
        assert_eq!(r.s_yy, rat(2, 4));
        assert_eq!(r.frame_constant_unnormalized, None);
    }

    #[test]
    fn empty_shell() {
        assert!(matches!(
            frame_check(&TorusModuli::square(), &int(3)),
            Err(Error::EmptyEigenspace(_))
        ));
        assert!(addition_formula_check(&TorusModuli::square(), &int(3)).is_err());
    }

    #[test]
    fn addition_formulas() {
        assert!(addition_formula_check(&TorusModuli::square(), &int(1)).unwrap());
        assert!(addition_formula_check(&TorusModuli::equilateral(), &rat(4, 3)).unwrap());
        assert!(addition_formula_check(&TorusModuli::rectangular(int(4)).unwrap(), &rat(1, 4)).unwrap());
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(frame_check(&TorusModuli::square(), &int(1)).unwrap()).unwrap();
        assert_eq!(v["frame_constant_unnormalized"], "2");
        assert_eq!(v["unit"], "4pi^2");
        let back: FrameReport = serde_json::from_value(v).unwrap();
        assert!(back.tight);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn trace_identity(a in 0i64..=10, bn in 1i64..=30, bd in 1i64..=8, n in -4i64..=4, m in -4i64..=4) {
            prop_assume!(n != 0 || m != 0);
            let moduli = TorusModuli::new(rat(a, 20), rat(bn, bd)).unwrap();
            let nu = moduli.norm_sq(DualVector::new(n, m));
            let shell = eigenspace_vectors(&moduli, &nu).unwrap();
            let (s_xx, s_yy, _) = frame_operator(&moduli, &shell);
            prop_assert_eq!(s_xx + s_yy, int(shell.len() as i64) * &nu);
            let r = frame_check(&moduli, &nu).unwrap();
            prop_assert_eq!(r.tight, r.s_xy_scaled == int(0) && r.s_xx == r.s_yy);
            if r.tight {
                prop_assert_eq!(r.frame_constant_unnormalized.clone(), Some(r.predicted_constant.clone()));
            }
        }
    }
}
