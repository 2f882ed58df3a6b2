//! The commutator sum rule on a full torus with `G = e^{2πi⟨q, x⟩}`.
//!
//! In the exponential eigenbasis every matrix element is a Kronecker delta:
//! `⟨G φ_j, φ_k⟩ ≠ 0` only for `p_k = p_j + q`, and `G*` shifts by `-q`. With
//! `J` the first `L` levels and everything in `4π²` units, the left side is
//!
//! ```text
//! Σ_{j∈J} [ν_q (z - λ_j)² - (z - λ_j)(ν_q² + 4⟨q, p_j⟩²)]
//! ```
//!
//! and it equals one half of
//!
//! ```text
//! Σ_{j∈J} Σ_{k∉J} (z - λ_j)(z - λ_k)(λ_k - λ_j)([p_k = p_j + q] + [p_k = p_j - q]).
//! ```

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactnum::{int, rat, Rational};
use crate::sumrule::{default_gap_samples, CheckReport, QuadPoly};
use crate::torus::{torus_spectrum_with_levels, DualVector, TorusModuli};

/// Both sides of the sum rule and the data they were built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumRuleSides {
    pub lhs: QuadPoly,
    /// The symmetrized double sum, before halving.
    pub rhs_symmetrized: QuadPoly,
    /// `N = |J|` counted with multiplicity.
    pub n: u64,
    pub lambda_n: Rational,
    /// First level outside `J`.
    pub lambda_next: Rational,
    pub nu_q: Rational,
    pub nu_max: Rational,
}

/// Builds both sides. `nu_max = None` picks `2(Λ_{L-1} + ν_q)`, which holds
/// every `p_j ± q` by the parallelogram law.
pub fn sum_rule_sides(
    moduli: &TorusModuli,
    q: DualVector,
    levels: usize,
    nu_max: Option<&Rational>,
) -> Result<SumRuleSides> {
    if levels == 0 {
        return Err(Error::UnsupportedParameter("J needs at least one level".into()));
    }
    let ts = torus_spectrum_with_levels(moduli, levels + 1)?;
    let spec_levels = ts.spectrum.levels();
    let top = spec_levels[levels - 1].value.clone();
    let lambda_next = spec_levels[levels].value.clone();
    let nu_q = moduli.norm_sq(q);
    let nu_max = match nu_max {
        Some(v) => v.clone(),
        None => int(2) * (&top + &nu_q),
    };
    if nu_max < top {
        return Err(Error::InsufficientCutoff(format!(
            "nu_max = {nu_max} is below the top level {top} of J"
        )));
    }

    let mut lhs = QuadPoly::zero();
    let mut rhs = QuadPoly::zero();
    let mut n = 0u64;
    for pj in ts.shells[..levels].iter().flatten() {
        n += 1;
        let lambda_j = moduli.norm_sq(*pj);
        let ip = moduli.inner(q, *pj);
        // ν_q (z - λ_j)² - (z - λ_j)(ν_q² + 4 ip²)
        let linear = &nu_q * &nu_q + int(4) * &ip * &ip;
        let sq = QuadPoly::from_roots(&lambda_j, &lambda_j).scale(&nu_q);
        let lin = QuadPoly::new(int(0), linear.clone(), -(&linear * &lambda_j));
        lhs += &(&sq - &lin);

        for pk in [*pj + q, *pj - q] {
            let lambda_k = moduli.norm_sq(pk);
            if lambda_k > nu_max {
                return Err(Error::InsufficientCutoff(format!(
                    "{pj} shifted by q lands at {pk} with norm^2 {lambda_k} > nu_max = {nu_max}"
                )));
            }
            if lambda_k <= top {
                continue;
            }
            let w = &lambda_k - &lambda_j;
            rhs += &QuadPoly::from_roots(&lambda_j, &lambda_k).scale(&w);
        }
    }
    Ok(SumRuleSides {
        lhs,
        rhs_symmetrized: rhs,
        n,
        lambda_n: top,
        lambda_next,
        nu_q,
        nu_max,
    })
}

/// Coefficientwise equality of the two sides.
pub fn verify_sum_rule_identity(
    moduli: &TorusModuli,
    q: DualVector,
    levels: usize,
    nu_max: Option<&Rational>,
) -> Result<CheckReport> {
    let sides = sum_rule_sides(moduli, q, levels, nu_max)?;
    let rhs = sides.rhs_symmetrized.scale(&rat(1, 2));
    let residual = &sides.lhs - &rhs;
    let witnesses = [&sides.lambda_n, &sides.lambda_next]
        .into_iter()
        .map(|z| (z.clone(), residual.eval(z)))
        .collect();
    Ok(CheckReport {
        kind: "sum-rule-exact".into(),
        index: Some(sides.n),
        holds: residual.is_zero(),
        residual,
        witnesses,
        notes: format!(
            "torus {moduli}; q = {q}; L = {levels}; nu_max = {}; lhs = {}; rhs = {}; unit=4pi^2",
            sides.nu_max, sides.lhs, rhs
        ),
    })
}

/// `LHS(z) <= N ν_q (z - λ_N)(z - λ_{N+1})` at each sample in the gap after
/// `J`. Empty `z_samples` means endpoints and midpoint.
pub fn sign_bound_check(
    moduli: &TorusModuli,
    q: DualVector,
    levels: usize,
    z_samples: &[Rational],
) -> Result<CheckReport> {
    if q.is_zero() {
        return Err(Error::ZeroVector);
    }
    let sides = sum_rule_sides(moduli, q, levels, None)?;
    let (lo, hi) = (&sides.lambda_n, &sides.lambda_next);
    let samples = if z_samples.is_empty() {
        default_gap_samples(lo, hi)
    } else {
        z_samples.to_vec()
    };
    if let Some(z) = samples.iter().find(|z| *z < lo || *z > hi) {
        return Err(Error::SampleOutOfRange(format!("z = {z} outside [{lo}, {hi}]")));
    }
    let bound = QuadPoly::from_roots(lo, hi).scale(&(int(sides.n as i64) * &sides.nu_q));
    let residual = &sides.lhs - &bound;
    let witnesses: Vec<(Rational, Rational)> = samples
        .into_iter()
        .map(|z| {
            let v = residual.eval(&z);
            (z, v)
        })
        .collect();
    let holds = witnesses.iter().all(|(_, v)| !v.is_positive());
    Ok(CheckReport {
        kind: "sign-bound".into(),
        index: Some(sides.n),
        holds,
        residual,
        witnesses,
        notes: format!("torus {moduli}; q = {q}; L = {levels}; unit=4pi^2"),
    })
}
