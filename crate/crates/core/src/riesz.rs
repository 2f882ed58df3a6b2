//! Riesz means `R_σ(z) = Σ_k (z - λ_k)_+^σ` and the two bounds on `R_2`:
//!
//! ```text
//! 2 R_1(z) (z + dΛ_1/4) >= (2 + d/2) R_2(z)
//! R_2(z) <= L_{2,d} |Ω| (z + dΛ_1/4)^{2 + d/2}
//! ```
//!
//! with `L_{2,d} = Γ(3) / ((4π)^{d/2} Γ(3 + d/2))`. `z` and `Λ_1` are given
//! in the spectrum's own unit. The Weyl comparison is made between squares,
//! so the half-integer power `(z + dΛ_1/4)^{2+d/2}` for odd `d` and volumes
//! such as `√3/2` stay exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{
    self, compare_pi_scalars, from_big, int, parse_rational, pow, rat, PiScalar, Rational,
    DEFAULT_PI_DIGITS,
};
use crate::spectrum::Spectrum;

/// Environment variable holding the number of π digits for the first
/// certified comparison attempt.
pub const PRECISION_ENV: &str = "SPECTRAL_SUMRULES_PRECISION";

pub fn precision_from_env() -> u32 {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&d| d > 0)
        .unwrap_or(DEFAULT_PI_DIGITS)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieszSample {
    #[serde(with = "exactnum::serde_rational")]
    pub z: Rational,
    /// `R_σ(z)` in the spectrum's unit raised to `σ`.
    #[serde(with = "exactnum::serde_rational")]
    pub value: Rational,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    pub equality: bool,
    /// Monotonicity: `R_2(z) / (z + dΛ_1/4)^{2+d/2}`; Weyl: `R_2(z) / bound`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieszReport {
    pub kind: String,
    pub sigma: u32,
    pub unit: String,
    pub holds: bool,
    pub samples: Vec<RieszSample>,
    pub verdicts: Vec<bool>,
    pub constant_used: String,
    pub notes: String,
}

impl RieszReport {
    fn new(kind: &str, s: &Spectrum, samples: Vec<RieszSample>, constant_used: String) -> Self {
        let verdicts: Vec<bool> = samples.iter().map(|x| x.holds).collect();
        let mut notes = String::new();
        if s.is_approximate() {
            notes.push_str("approximate: spectrum exactified from floats");
        }
        Self {
            kind: kind.into(),
            sigma: 2,
            unit: s.unit().as_str().into(),
            holds: verdicts.iter().all(|&v| v),
            samples,
            verdicts,
            constant_used,
            notes,
        }
    }
}

/// `Σ_l M_l (z - Λ_l)_+^σ`. For `σ = 0` this counts levels strictly below `z`.
pub fn riesz_mean(s: &Spectrum, sigma: u32, z: &Rational) -> Result<Rational> {
    if z > s.top() {
        return Err(Error::InsufficientLevels {
            needed: s.total().saturating_add(1),
            available: s.total(),
        });
    }
    let mut acc = Rational::zero();
    for level in s.levels() {
        if &level.value >= z {
            break;
        }
        let gap = z - &level.value;
        acc += int(level.mult as i64) * pow(&gap, sigma);
    }
    Ok(acc)
}

/// Every level above `Λ_0` and every midpoint between consecutive levels,
/// up to `z_max` (or the top level).
pub fn default_z_grid(s: &Spectrum, z_max: Option<&Rational>) -> Vec<Rational> {
    let cap = z_max.map_or_else(|| s.top().clone(), |m| m.min(s.top()).clone());
    let mut out = Vec::new();
    for w in s.levels().windows(2) {
        out.push((&w[0].value + &w[1].value) * rat(1, 2));
        out.push(w[1].value.clone());
    }
    out.retain(|z| z <= &cap);
    out
}

fn shifted_point(z: &Rational, d: u32, lambda1: &Rational) -> Rational {
    z + int(d as i64) * lambda1 / int(4)
}

fn check_dimension(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::UnsupportedParameter("dimension must be positive".into()));
    }
    Ok(())
}

fn samples_or_default(s: &Spectrum, z_samples: &[Rational]) -> Result<Vec<Rational>> {
    let zs = if z_samples.is_empty() {
        default_z_grid(s, None)
    } else {
        z_samples.to_vec()
    };
    let floor = &s.levels()[0].value;
    if let Some(z) = zs.iter().find(|z| *z <= floor) {
        return Err(Error::SampleOutOfRange(format!("z = {z} must exceed the lowest level {floor}")));
    }
    Ok(zs)
}

/// `2 R_1(z)(z + dΛ_1/4) >= (2 + d/2) R_2(z)` at each sample.
pub fn r2_monotonicity_check(
    s: &Spectrum,
    d: u32,
    lambda1: &Rational,
    z_samples: &[Rational],
) -> Result<RieszReport> {
    check_dimension(d)?;
    let mut samples = Vec::new();
    let expo = 4 + d;
    for z in samples_or_default(s, z_samples)? {
        let r1 = riesz_mean(s, 1, &z)?;
        let r2 = riesz_mean(s, 2, &z)?;
        let w = shifted_point(&z, d, lambda1);
        let lhs = int(2) * &r1 * &w;
        let rhs = (int(2) + rat(d as i64, 2)) * &r2;
        // R_2 / w^{2+d/2}, via the square to avoid half powers.
        let ratio = (exactnum::to_f64(&(&r2 * &r2 / pow(&w, expo)))).sqrt();
        samples.push(RieszSample {
            holds: lhs >= rhs,
            equality: lhs == rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            value: r2,
            z,
            ratio,
        });
    }
    Ok(RieszReport::new("riesz-mono", s, samples, "none".into()))
}

/// `|Ω|`, stored through its square so that `√(rational)` volumes stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Volume {
    sq: PiScalar,
}

impl Volume {
    /// `|Ω| = c π^k`.
    pub fn pi_multiple(coeff: Rational, power: i32) -> Result<Self> {
        if !coeff.is_positive() {
            return Err(Error::UnsupportedParameter(format!("volume must be positive, got {coeff}")));
        }
        Ok(Self {
            sq: PiScalar::new(&coeff * &coeff, 2 * power),
        })
    }

    /// `|Ω|² = v`.
    pub fn from_square(v: PiScalar) -> Result<Self> {
        if !v.coeff.is_positive() {
            return Err(Error::UnsupportedParameter(format!("volume must be positive, got {v}")));
        }
        Ok(Self { sq: v })
    }

    pub fn square(&self) -> &PiScalar {
        &self.sq
    }
}

impl fmt::Display for Volume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sq.exact_sqrt() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "sqrt({})", self.sq),
        }
    }
}

/// Accepts `c`, `c*pi`, `c*pi^k`, `pi^k` and `sqrt(c)`.
impl FromStr for Volume {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            return Volume::from_square(PiScalar::rational(parse_rational(inner)?));
        }
        let (coeff, rest) = match t.find("pi") {
            None => return Volume::pi_multiple(parse_rational(&t)?, 0),
            Some(i) => (&t[..i], &t[i + 2..]),
        };
        let coeff = coeff.trim_end_matches('*');
        let coeff = if coeff.is_empty() {
            Rational::one()
        } else {
            parse_rational(coeff)?
        };
        let power = if rest.is_empty() {
            1
        } else {
            rest.strip_prefix('^')
                .and_then(|p| p.parse::<i32>().ok())
                .ok_or_else(|| Error::Parse(format!("bad volume {text:?}")))?
        };
        Volume::pi_multiple(coeff, power)
    }
}

/// `L_{2,d}²`, exactly: `4 / ((4π)^d Γ(3 + d/2)²)`.
pub fn weyl_constant_sq(d: u32) -> PiScalar {
    let four_d = pow(&int(4), d);
    if d.is_multiple_of(2) {
        let g = from_big(factorial(2 + d as u64 / 2));
        PiScalar::new(int(4) / (four_d * &g * &g), -(d as i32))
    } else {
        // Γ(k + 1/2) = (2k)! / (4^k k!) · √π with k = (d + 5)/2.
        let k = (d as u64 + 5) / 2;
        let c = from_big(factorial(2 * k)) / (pow(&int(4), k as u32) * from_big(factorial(k)));
        PiScalar::new(int(4) / (four_d * &c * &c), -(d as i32) - 1)
    }
}

fn factorial(n: u64) -> num_bigint::BigInt {
    (1..=n).map(num_bigint::BigInt::from).product()
}

fn describe_constant(d: u32) -> String {
    let sq = weyl_constant_sq(d);
    match sq.exact_sqrt() {
        Some(l) => format!("L_2,{d} = {l}"),
        None => format!("L_2,{d}^2 = {sq}"),
    }
}

/// `R_2(z) <= L_{2,d} |Ω| (z + dΛ_1/4)^{2+d/2}` at each sample, comparing
/// squares with certified π enclosures.
pub fn weyl_bound_check(
    s: &Spectrum,
    d: u32,
    lambda1: &Rational,
    volume: &Volume,
    z_samples: &[Rational],
) -> Result<RieszReport> {
    weyl_bound_check_with_digits(s, d, lambda1, volume, z_samples, precision_from_env())
}

pub fn weyl_bound_check_with_digits(
    s: &Spectrum,
    d: u32,
    lambda1: &Rational,
    volume: &Volume,
    z_samples: &[Rational],
    pi_digits: u32,
) -> Result<RieszReport> {
    check_dimension(d)?;
    let unit = s.unit().scale();
    let zs = if z_samples.is_empty() {
        default_z_grid(s, None)
    } else {
        z_samples.to_vec()
    };
    // Actual R_2 is unit² · R̂_2 and the actual shifted point is unit · ŵ.
    let rhs_factor = weyl_constant_sq(d)
        .mul(volume.square())
        .mul(&unit.powi(4 + d));
    let lhs_factor = unit.powi(4);
    let mut samples = Vec::new();
    let mut undetermined = 0usize;
    for z in zs {
        let r2 = riesz_mean(s, 2, &z)?;
        let w = shifted_point(&z, d, lambda1);
        if w.is_negative() {
            return Err(Error::SampleOutOfRange(format!("z + dΛ_1/4 = {w} is negative")));
        }
        let lhs_sq = lhs_factor.mul(&PiScalar::rational(&r2 * &r2));
        let rhs_sq = rhs_factor.mul(&PiScalar::rational(pow(&w, 4 + d)));
        let order = compare_pi_scalars(&lhs_sq, &rhs_sq, pi_digits);
        if order.is_none() {
            undetermined += 1;
        }
        let ratio = if rhs_sq.coeff.is_zero() {
            f64::INFINITY
        } else {
            lhs_sq.mul(&rhs_sq.recip()).to_f64().sqrt()
        };
        let lhs = unit.powi(2).mul(&PiScalar::rational(r2.clone()));
        let rhs = match rhs_sq.exact_sqrt() {
            Some(v) => v.to_string(),
            None => format!("sqrt({rhs_sq})"),
        };
        samples.push(RieszSample {
            holds: matches!(order, Some(Ordering::Less | Ordering::Equal)),
            equality: order == Some(Ordering::Equal),
            lhs: lhs.to_string(),
            rhs,
            value: r2,
            z,
            ratio,
        });
    }
    let mut report = RieszReport::new("weyl", s, samples, describe_constant(d));
    let vol_note = format!("|Omega| = {volume}");
    report.notes = if report.notes.is_empty() {
        vol_note
    } else {
        format!("{}; {vol_note}", report.notes)
    };
    if undetermined > 0 {
        report
            .notes
            .push_str(&format!("; {undetermined} comparisons undetermined at the digit cap"));
    }
    Ok(report)
}
