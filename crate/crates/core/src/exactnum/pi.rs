//! Quantities of the form `c · π^k` and certified comparisons between them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{pow, to_f64, Rational};

/// Number of decimal digits of π used for the first comparison attempt.
pub const DEFAULT_PI_DIGITS: u32 = 50;

const MAX_PI_DIGITS: u32 = 6400;

/// `coeff · π^power` with exact rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiScalar {
    pub coeff: Rational,
    pub power: i32,
}

impl PiScalar {
    pub fn new(coeff: Rational, power: i32) -> Self {
        if coeff.is_zero() {
            return Self { coeff, power: 0 };
        }
        Self { coeff, power }
    }

    pub fn rational(coeff: Rational) -> Self {
        Self::new(coeff, 0)
    }

    pub fn mul(&self, other: &PiScalar) -> PiScalar {
        PiScalar::new(&self.coeff * &other.coeff, self.power + other.power)
    }

    pub fn powi(&self, e: u32) -> PiScalar {
        PiScalar::new(pow(&self.coeff, e), self.power * e as i32)
    }

    pub fn recip(&self) -> PiScalar {
        PiScalar::new(self.coeff.recip(), -self.power)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * std::f64::consts::PI.powi(self.power)
    }

    /// Exact square root when the coefficient is a perfect rational square and
    /// the π exponent is even.
    pub fn exact_sqrt(&self) -> Option<PiScalar> {
        if self.coeff.is_negative() || self.power % 2 != 0 {
            return None;
        }
        let n = self.coeff.numer().sqrt();
        let d = self.coeff.denom().sqrt();
        if &(&n * &n) == self.coeff.numer() && &(&d * &d) == self.coeff.denom() {
            Some(PiScalar::new(Rational::new(n, d), self.power / 2))
        } else {
            None
        }
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power == 0 {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}·pi^{}", self.coeff, self.power)
        }
    }
}

/// Rational bounds `lo < π < hi` with `hi - lo` below `10^-digits`.
///
/// Uses Machin's formula in fixed point; every truncation is floored, so the
/// accumulated error is bounded by the number of series terms.
pub fn pi_enclosure(digits: u32) -> (Rational, Rational) {
    let guard = 12;
    let scale = BigInt::from(10u32).pow(digits + guard);
    let (a5, t5) = arctan_inv_fixed(5, &scale);
    let (a239, t239) = arctan_inv_fixed(239, &scale);
    let approx: BigInt = 16 * a5 - 4 * a239;
    // Each atan evaluation is within (terms + 1) units of the exact value.
    let err = BigInt::from(16 * (t5 + 1) + 4 * (t239 + 1));
    let lo = Rational::new(&approx - &err, scale.clone());
    let hi = Rational::new(&approx + &err, scale);
    (lo, hi)
}

fn arctan_inv_fixed(x: u32, scale: &BigInt) -> (BigInt, u64) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = scale / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    (sum, k)
}

fn pi_power_interval(lo: &Rational, hi: &Rational, e: i32) -> (Rational, Rational) {
    let m = e.unsigned_abs();
    if e >= 0 {
        (pow(lo, m), pow(hi, m))
    } else {
        (pow(hi, m).recip(), pow(lo, m).recip())
    }
}

/// Certified ordering of `a` against `b`, starting from `start_digits` digits
/// of π and refining as needed. `None` only if the digit cap is hit.
pub fn compare_pi_scalars(a: &PiScalar, b: &PiScalar, start_digits: u32) -> Option<Ordering> {
    if a.coeff.is_zero() || b.coeff.is_zero() || a.power == b.power {
        return Some(a.coeff.cmp(&b.coeff));
    }
    let e = b.power - a.power;
    let mut digits = start_digits.max(10);
    loop {
        let (lo, hi) = pi_enclosure(digits);
        let (plo, phi) = pi_power_interval(&lo, &hi, e);
        let (blo, bhi) = if b.coeff.is_positive() {
            (&b.coeff * &plo, &b.coeff * &phi)
        } else {
            (&b.coeff * &phi, &b.coeff * &plo)
        };
        if a.coeff < blo {
            return Some(Ordering::Less);
        }
        if a.coeff > bhi {
            return Some(Ordering::Greater);
        }
        if digits >= MAX_PI_DIGITS {
            return None;
        }
        digits *= 2;
    }
}

/// `π` as a power-one scalar.
pub fn pi() -> PiScalar {
    PiScalar::new(Rational::one(), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, parse_rational, rat};

    #[test]
    fn enclosure_contains_known_digits() {
        let known =
            parse_rational("3.14159265358979323846264338327950288419716939937510582097494459")
                .unwrap();
        // `known` is truncated, so π lies in [known, known + 1e-62).
        let ulp = parse_rational("1e-62").unwrap();
        let (lo, hi) = pi_enclosure(60);
        assert!(known < hi && lo < &known + &ulp);
        assert!(&hi - &lo < parse_rational("1e-60").unwrap());
    }

    #[test]
    fn compares_across_pi_powers() {
        // 16 π^4 < 18 π^5
        let a = PiScalar::new(int(16), 4);
        let b = PiScalar::new(int(18), 5);
        assert_eq!(compare_pi_scalars(&a, &b, 20), Some(Ordering::Less));
        // 22/7 > π > 333/106
        assert_eq!(
            compare_pi_scalars(&PiScalar::rational(rat(22, 7)), &pi(), 20),
            Some(Ordering::Greater)
        );
        assert_eq!(
            compare_pi_scalars(&PiScalar::rational(rat(333, 106)), &pi(), 20),
            Some(Ordering::Less)
        );
        // 355/113 exceeds π by about 2.7e-7
        assert_eq!(
            compare_pi_scalars(&pi(), &PiScalar::rational(rat(355, 113)), 10),
            Some(Ordering::Less)
        );
    }

    #[test]
    fn negative_coefficients_and_zero() {
        let a = PiScalar::new(int(-1), 2);
        let b = PiScalar::new(int(-10), 0);
        assert_eq!(compare_pi_scalars(&a, &b, 10), Some(Ordering::Greater));
        let z = PiScalar::rational(int(0));
        assert_eq!(compare_pi_scalars(&z, &a, 10), Some(Ordering::Greater));
    }

    #[test]
    fn exact_sqrt_and_display() {
        let x = PiScalar::new(rat(9, 4), 2);
        assert_eq!(x.exact_sqrt(), Some(PiScalar::new(rat(3, 2), 1)));
        assert_eq!(PiScalar::new(int(3), 1).exact_sqrt(), None);
        assert_eq!(PiScalar::new(rat(1, 12), -1).to_string(), "1/12·pi^-1");
        assert_eq!(PiScalar::new(rat(4, 3), 0).to_string(), "4/3");
    }
}
