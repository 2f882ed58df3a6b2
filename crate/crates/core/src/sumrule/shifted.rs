//! The averaged torus inequality for a chosen set of wave vectors.
//!
//! Taking `G = e^{2πi⟨p_i, x⟩}` for each `p_i` of a set of size `k` and
//! averaging gives, in `4π²` units,
//!
//! ```text
//! Σ_{j<=N} (z - λ_j)(z - (1/k)Σ_i ν(p_i) - (4/k)Σ_i ⟨p_i, p_j⟩²/ν(p_i) - λ_j)
//!     <= N (z - λ_N)(z - λ_{N+1})
//! ```
//!
//! for `z` in `[λ_N, λ_{N+1}]`. When the `p_i` form a tight frame this is
//! the usual `P_N <= Q_N`.

use num_traits::{Signed, Zero};

use super::{q_poly, CheckReport, QuadPoly};
use crate::error::{Error, Result};
use crate::exactnum::{int, rat, Rational};
use crate::torus::{torus_spectrum_covering, DualVector, TorusModuli};

/// `λ_N`, the midpoint, and `λ_{N+1}`.
pub fn default_gap_samples(lo: &Rational, hi: &Rational) -> Vec<Rational> {
    vec![lo.clone(), (lo + hi) * rat(1, 2), hi.clone()]
}

/// Empty `z_samples` means [`default_gap_samples`].
pub fn shifted_sumrule_check(
    moduli: &TorusModuli,
    p_set: &[DualVector],
    n: u64,
    z_samples: &[Rational],
) -> Result<CheckReport> {
    if p_set.is_empty() {
        return Err(Error::EmptyInput);
    }
    if p_set.iter().any(DualVector::is_zero) {
        return Err(Error::ZeroVector);
    }
    let ts = torus_spectrum_covering(moduli, n + 1)?;
    let s = &ts.spectrum;
    if !s.is_gap(n)? {
        return Err(Error::NotAGap(n));
    }
    let lo = s.eigenvalue(n)?.clone();
    let hi = s.eigenvalue(n + 1)?.clone();
    let samples = if z_samples.is_empty() {
        default_gap_samples(&lo, &hi)
    } else {
        z_samples.to_vec()
    };
    if let Some(z) = samples.iter().find(|z| **z < lo || **z > hi) {
        return Err(Error::SampleOutOfRange(format!(
            "z = {z} outside [{lo}, {hi}]"
        )));
    }

    let k = int(p_set.len() as i64);
    let norms: Vec<Rational> = p_set.iter().map(|p| moduli.norm_sq(*p)).collect();
    let mean_norm = norms.iter().sum::<Rational>() / &k;

    // Since N is a gap, the first N enumerated vectors are whole shells.
    let mut lhs = QuadPoly::zero();
    for pj in ts.shells.iter().flatten().take(n as usize) {
        let lambda_j = moduli.norm_sq(*pj);
        let directional: Rational = p_set
            .iter()
            .zip(&norms)
            .map(|(pi, nu)| {
                let ip = moduli.inner(*pi, *pj);
                &ip * &ip / nu
            })
            .sum();
        let shift = &mean_norm + int(4) * directional / &k + &lambda_j;
        lhs += &QuadPoly::from_roots(&lambda_j, &shift);
    }
    let q = q_poly(&lo, &hi, n);
    let residual = &lhs - &q;
    let witnesses: Vec<(Rational, Rational)> = samples
        .into_iter()
        .map(|z| {
            let v = residual.eval(&z);
            (z, v)
        })
        .collect();
    let holds = witnesses.iter().all(|(_, v)| !v.is_positive());
    debug_assert!(residual.c2.is_zero());
    let p_list = p_set
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    Ok(CheckReport {
        kind: "shifted".into(),
        index: Some(n),
        holds,
        residual,
        witnesses,
        notes: format!("torus {moduli}; p_set = {p_list}; unit=4pi^2"),
    })
}
