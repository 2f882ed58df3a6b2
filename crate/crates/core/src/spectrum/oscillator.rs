//! Equally spaced level sequences `Λ_l = l + 1/(a - 1)` solving the counting
//! recurrence with `h = 0`.

use num_traits::{One, Signed};

use super::{Level, Spectrum, Unit};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, int, to_u64, Rational};

/// Levels `l + 1/(a-1)` carrying multiplicity `N_l = C(l + 2/(a-1), l)`.
///
/// For `a = 2` and `a = 3` these are the harmonic-oscillator degeneracies in
/// dimension 3 and 2, shifted down by 1/2.
pub fn oscillator_spectrum(a: &Rational, l_max: u64) -> Result<Spectrum> {
    let k = oscillator_order(a)?;
    let shift = (a - int(1)).recip();
    let levels = (0..=l_max)
        .map(|l| {
            let value = int(l as i64) + &shift;
            let mult = binomial(l + k, l);
            Ok(Level::new(value, to_u64(&mult, "oscillator multiplicity")?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum::new(Unit::Absolute, levels)?
        .with_meta(format!("oscillator a={a} l_max={l_max}")))
}

/// `2/(a - 1)`, which must be a positive integer.
pub fn oscillator_order(a: &Rational) -> Result<u64> {
    let unsupported = || {
        Error::UnsupportedParameter(format!("2/(a-1) must be a positive integer, a = {a}"))
    };
    let am1 = a - int(1);
    if !am1.is_positive() {
        return Err(unsupported());
    }
    let k = int(2) / am1;
    if !k.denom().is_one() {
        return Err(unsupported());
    }
    to_u64(k.numer(), "2/(a-1)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn values_and_mults(s: &Spectrum) -> (Vec<Rational>, Vec<u64>) {
        (
            s.levels().iter().map(|l| l.value.clone()).collect(),
            s.levels().iter().map(|l| l.mult).collect(),
        )
    }

    #[test]
    fn three_dimensional_oscillator() {
        let s = oscillator_spectrum(&int(2), 2).unwrap();
        assert_eq!(values_and_mults(&s), (vec![int(1), int(2), int(3)], vec![1, 3, 6]));
    }

    #[test]
    fn two_dimensional_oscillator() {
        let s = oscillator_spectrum(&int(3), 2).unwrap();
        assert_eq!(
            values_and_mults(&s),
            (vec![rat(1, 2), rat(3, 2), rat(5, 2)], vec![1, 2, 3])
        );
        let s0 = oscillator_spectrum(&int(3), 0).unwrap();
        assert_eq!(s0.levels(), &[Level::new(rat(1, 2), 1)]);
    }

    #[test]
    fn rejects_non_integer_order() {
        assert!(matches!(
            oscillator_spectrum(&rat(5, 2), 3),
            Err(Error::UnsupportedParameter(_))
        ));
        assert!(oscillator_spectrum(&int(1), 3).is_err());
        assert!(oscillator_spectrum(&int(0), 3).is_err());
        assert_eq!(oscillator_order(&rat(5, 3)).unwrap(), 3);
    }
}
