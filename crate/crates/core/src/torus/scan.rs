//! Checking `P_N <= Q_N` over a grid of torus moduli.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{torus_spectrum, torus_spectrum_covering, TorusModuli};
use crate::error::{Error, Result};
use crate::exactnum::{self, Rational};
use crate::sumrule::{check_inequality, gap_indices};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    #[serde(with = "exactnum::serde_rational")]
    pub a: Rational,
    #[serde(with = "exactnum::serde_rational")]
    pub b_sq: Rational,
    pub in_tau: bool,
    pub gaps_checked: Vec<u64>,
    pub violations: Vec<u64>,
    /// Cutoff actually used for this point.
    #[serde(with = "exactnum::serde_rational")]
    pub nu_max: Rational,
    /// Set when the cutoff did not reach `N_max + 1` eigenvalues; only the
    /// gaps that fit were checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub insufficient: Option<String>,
}

/// One record per grid point, in input order. With `nu_max = None` the
/// cutoff grows per point until `N_max + 1` eigenvalues are enumerated.
pub fn scan_moduli(
    grid: &[TorusModuli],
    nu_max: Option<&Rational>,
    n_max: u64,
) -> Result<Vec<ScanRecord>> {
    if grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    if n_max == 0 {
        return Err(Error::UnsupportedParameter("N_max must be positive".into()));
    }
    grid.par_iter()
        .map(|m| scan_point(m, nu_max, n_max))
        .collect()
}

fn scan_point(moduli: &TorusModuli, nu_max: Option<&Rational>, n_max: u64) -> Result<ScanRecord> {
    let ts = match nu_max {
        Some(nu) => torus_spectrum(moduli, nu)?,
        None => torus_spectrum_covering(moduli, n_max + 1)?,
    };
    let s = &ts.spectrum;
    let (reach, insufficient) = if s.total() > n_max {
        (n_max, None)
    } else {
        (
            s.total() - 1,
            Some(format!(
                "cutoff covers {} eigenvalues, N_max + 1 = {} needed",
                s.total(),
                n_max + 1
            )),
        )
    };
    let gaps = if reach == 0 {
        Vec::new()
    } else {
        gap_indices(s, reach)?
    };
    let mut violations = Vec::new();
    for &n in &gaps {
        if !check_inequality(s, 2, n)?.holds {
            violations.push(n);
        }
    }
    Ok(ScanRecord {
        a: moduli.a().clone(),
        b_sq: moduli.b_sq().clone(),
        in_tau: moduli.in_tau(),
        gaps_checked: gaps,
        violations,
        nu_max: ts.nu_max,
        insufficient,
    })
}

/// `a,b_sq,in_tau,N,holds`, one row per checked gap.
pub fn scan_to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from("a,b_sq,in_tau,N,holds\n");
    for r in records {
        for n in &r.gaps_checked {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.a,
                r.b_sq,
                r.in_tau,
                n,
                !r.violations.contains(n)
            ));
        }
    }
    out
}
