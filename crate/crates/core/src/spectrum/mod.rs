//! Eigenvalue levels with multiplicities.
//!
//! A [`Spectrum`] stores distinct levels `Λ_0 < Λ_1 < ...` and multiplicities
//! `M_l`. The flattened view `λ_1 ≤ λ_2 ≤ ...` repeats each level `M_l` times
//! and is indexed from 1, so that `λ_1 = Λ_0` and `λ_2 = Λ_1`.

pub mod cross;
pub mod io;
pub mod oscillator;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{self, Rational};

pub use cross::{
    cross_counting, cross_eigenvalue, cross_multiplicity, cross_parameters, cross_spectrum,
    cross_spectrum_covering,    CrossFamily, CrossSpace,
};
pub use io::{load_spectrum, LoadMode};
pub use oscillator::oscillator_spectrum;

/// Physical scale of the stored values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "absolute")]
    Absolute,
    /// Stored value `ν` stands for the eigenvalue `4π² ν`.
    #[serde(rename = "4pi^2")]
    FourPiSquared,
}

impl Unit {
    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Absolute => "absolute",
            Unit::FourPiSquared => "4pi^2",
        }
    }

    /// Actual eigenvalue per stored unit.
    pub fn scale(self) -> exactnum::PiScalar {
        match self {
            Unit::Absolute => exactnum::PiScalar::rational(exactnum::int(1)),
            Unit::FourPiSquared => exactnum::PiScalar::new(exactnum::int(4), 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    #[serde(with = "exactnum::serde_rational")]
    pub value: Rational,
    pub mult: u64,
}

impl Level {
    pub fn new(value: Rational, mult: u64) -> Self {
        Self { value, mult }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    unit: Unit,
    levels: Vec<Level>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<String>,
    /// Set when values were exactified from floating-point input.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    approximate: bool,
}

/// Count, sum and sum of squares of the first `count` flattened eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSums {
    pub count: u64,
    pub sum: Rational,
    pub sum_sq: Rational,
}

impl PowerSums {
    pub fn of(lambdas: &[Rational]) -> Self {
        let mut sum = Rational::zero();
        let mut sum_sq = Rational::zero();
        for l in lambdas {
            sum += l;
            sum_sq += l * l;
        }
        Self {
            count: lambdas.len() as u64,
            sum,
            sum_sq,
        }
    }
}

impl Spectrum {
    pub fn new(unit: Unit, levels: Vec<Level>) -> Result<Self> {
        validate_levels(&levels)?;
        Ok(Self {
            unit,
            levels,
            meta: None,
            approximate: false,
        })
    }

    pub fn with_meta(mut self, meta: impl Into<String>) -> Self {
        self.meta = Some(meta.into());
        self
    }

    pub fn mark_approximate(mut self) -> Self {
        self.approximate = true;
        self
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn meta(&self) -> Option<&str> {
        self.meta.as_deref()
    }

    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    /// Re-checks the invariants; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        validate_levels(&self.levels)
    }

    /// Total number of eigenvalues (saturating).
    pub fn total(&self) -> u64 {
        self.levels
            .iter()
            .fold(0u64, |acc, l| acc.saturating_add(l.mult))
    }

    pub fn top(&self) -> &Rational {
        &self.levels.last().expect("spectrum has at least one level").value
    }

    /// First positive level `Λ_1`.
    pub fn first_positive_level(&self) -> Result<&Rational> {
        self.levels
            .iter()
            .map(|l| &l.value)
            .find(|v| v.is_positive())
            .ok_or(Error::InsufficientLevels {
                needed: 2,
                available: self.total(),
            })
    }

    fn insufficient(&self, needed: u64) -> Error {
        Error::InsufficientLevels {
            needed,
            available: self.total(),
        }
    }

    /// `λ_k`, 1-based.
    pub fn eigenvalue(&self, k: u64) -> Result<&Rational> {
        if k == 0 {
            return Err(Error::UnsupportedParameter(
                "eigenvalue index is 1-based".into(),
            ));
        }
        let mut seen = 0u64;
        for level in &self.levels {
            seen = seen.saturating_add(level.mult);
            if seen >= k {
                return Ok(&level.value);
            }
        }
        Err(self.insufficient(k))
    }

    /// `λ_1, ..., λ_n`.
    pub fn flatten(&self, n: u64) -> Result<Vec<Rational>> {
        if n == 0 {
            return Err(Error::UnsupportedParameter("flatten needs N >= 1".into()));
        }
        if self.total() < n {
            return Err(self.insufficient(n));
        }
        let mut out = Vec::with_capacity(n as usize);
        'outer: for level in &self.levels {
            for _ in 0..level.mult {
                if out.len() as u64 == n {
                    break 'outer;
                }
                out.push(level.value.clone());
            }
        }
        Ok(out)
    }

    /// Power sums of `λ_1..λ_n` without materialising the list.
    pub fn power_sums(&self, n: u64) -> Result<PowerSums> {
        if self.total() < n {
            return Err(self.insufficient(n));
        }
        let mut remaining = n;
        let mut sum = Rational::zero();
        let mut sum_sq = Rational::zero();
        for level in &self.levels {
            if remaining == 0 {
                break;
            }
            let take = remaining.min(level.mult);
            let k = exactnum::int(take as i64);
            sum += &k * &level.value;
            sum_sq += &k * &level.value * &level.value;
            remaining -= take;
        }
        Ok(PowerSums {
            count: n,
            sum,
            sum_sq,
        })
    }

    /// Partial sums of multiplicities, i.e. `N_n = M_0 + ... + M_n`.
    pub fn cumulative_counts(&self) -> Vec<u64> {
        let mut acc = 0u64;
        self.levels
            .iter()
            .map(|l| {
                acc = acc.saturating_add(l.mult);
                acc
            })
            .collect()
    }

    /// True when `λ_n < λ_{n+1}`; errors if `λ_{n+1}` is not covered.
    pub fn is_gap(&self, n: u64) -> Result<bool> {
        if n == 0 {
            return Ok(false);
        }
        if self.total() <= n {
            return Err(self.insufficient(n + 1));
        }
        Ok(self.cumulative_counts().contains(&n))
    }
}

fn validate_levels(levels: &[Level]) -> Result<()> {
    let first = levels
        .first()
        .ok_or_else(|| Error::InvalidSpectrum("no levels".into()))?;
    if first.value.is_negative() {
        return Err(Error::NegativeEigenvalue(first.value.to_string()));
    }
    for w in levels.windows(2) {
        if w[0].value >= w[1].value {
            return Err(Error::InvalidSpectrum(format!(
                "levels not strictly increasing: {} then {}",
                w[0].value, w[1].value
            )));
        }
    }
    if let Some(l) = levels.iter().find(|l| l.mult == 0) {
        return Err(Error::InvalidSpectrum(format!(
            "zero multiplicity at level {}",
            l.value
        )));
    }
    Ok(())
}
