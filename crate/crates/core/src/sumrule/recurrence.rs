//! Counting functions forced by the identity `P_N = Q_N` at every level.
//!
//! With `Λ̃_n = Λ_n + h/(a-1)`,
//!
//! ```text
//! N_{n+1} = (a Λ̃_{n+1} - Λ̃_n) / (a Λ̃_{n+1} - Λ̃_{n+2}) · N_n
//! ```

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, is_integer, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceResult {
    /// `N_0, ..., N_{n_max}`.
    #[serde(with = "rational_vec")]
    pub counts: Vec<Rational>,
    /// `integral[n]` is true when `N_n` is an integer.
    pub integral: Vec<bool>,
    pub strictly_increasing: bool,
}

impl RecurrenceResult {
    pub fn all_integral(&self) -> bool {
        self.integral.iter().all(|&b| b)
    }
}

/// Runs the recurrence over `levels = Λ_0, ..., Λ_{n_max+1}`.
pub fn recurrence_counts(
    levels: &[Rational],
    a: &Rational,
    h: &Rational,
    n0: u64,
) -> Result<RecurrenceResult> {
    if *a <= int(1) {
        return Err(Error::UnsupportedParameter(format!("need a > 1, got {a}")));
    }
    if n0 == 0 {
        return Err(Error::UnsupportedParameter("N_0 must be positive".into()));
    }
    if levels.len() < 2 {
        return Err(Error::InsufficientLevels {
            needed: 2,
            available: levels.len() as u64,
        });
    }
    if let Some(w) = levels.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSpectrum(format!(
            "levels not strictly increasing: {} then {}",
            w[0], w[1]
        )));
    }
    let shift = h / (a - int(1));
    let tilde: Vec<Rational> = levels.iter().map(|l| l + &shift).collect();
    let mut counts = vec![int(n0 as i64)];
    for n in 0..levels.len() - 2 {
        let num = a * &tilde[n + 1] - &tilde[n];
        let den = a * &tilde[n + 1] - &tilde[n + 2];
        if !den.is_positive() {
            return Err(Error::GrowthConditionViolated(n));
        }
        let next = &counts[n] * num / den;
        counts.push(next);
    }
    let integral = counts.iter().map(is_integer).collect();
    let strictly_increasing = counts.windows(2).all(|w| w[0] < w[1]);
    Ok(RecurrenceResult {
        counts,
        integral,
        strictly_increasing,
    })
}

mod rational_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exactnum::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
