//! Closed-form spectra of the compact rank-one symmetric spaces.
//!
//! Levels are stored in the normalized form `Λ_l = l (l + h - 1)`. Each family
//! fixes `h`, and `a = 1 + 4/d` throughout. The multiplicity and counting
//! formulas below are the gamma-ratio expressions rewritten as binomials with
//! integer arguments (every `d/2` that occurs is an integer for the families
//! where it appears), evaluated in exact rationals and then required to be
//! integral.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{Level, Spectrum, Unit};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, expect_integer, from_big, int, rat, to_u64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossFamily {
    Sphere,
    RealProjective,
    ComplexProjective,
    QuaternionicProjective,
    Cayley,
}

impl CrossFamily {
    pub const ALL: [CrossFamily; 5] = [
        CrossFamily::Sphere,
        CrossFamily::RealProjective,
        CrossFamily::ComplexProjective,
        CrossFamily::QuaternionicProjective,
        CrossFamily::Cayley,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CrossFamily::Sphere => "sphere",
            CrossFamily::RealProjective => "real_projective",
            CrossFamily::ComplexProjective => "complex_projective",
            CrossFamily::QuaternionicProjective => "quaternionic_projective",
            CrossFamily::Cayley => "cayley",
        }
    }
}

impl fmt::Display for CrossFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CrossFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "sphere" | "s" => Ok(CrossFamily::Sphere),
            "real_projective" | "rp" => Ok(CrossFamily::RealProjective),
            "complex_projective" | "cp" => Ok(CrossFamily::ComplexProjective),
            "quaternionic_projective" | "hp" => Ok(CrossFamily::QuaternionicProjective),
            "cayley" | "op" => Ok(CrossFamily::Cayley),
            other => Err(Error::Parse(format!("unknown CROSS family {other:?}"))),
        }
    }
}

/// A CROSS family together with its real dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossSpace {
    family: CrossFamily,
    dim: u32,
}

impl CrossSpace {
    pub fn new(family: CrossFamily, dim: u32) -> Result<Self> {
        let bad = |reason| {
            Err(Error::InvalidDimension {
                family: family.name(),
                dim,
                reason,
            })
        };
        match family {
            CrossFamily::Sphere | CrossFamily::RealProjective if dim < 2 => bad("need d >= 2"),
            CrossFamily::ComplexProjective if dim < 2 || !dim.is_multiple_of(2) => {
                bad("need d even and d >= 2")
            }
            CrossFamily::QuaternionicProjective if dim < 4 || !dim.is_multiple_of(4) => {
                bad("need d divisible by 4 and d >= 4")
            }
            CrossFamily::Cayley if dim != 16 => bad("need d = 16"),
            _ => Ok(Self { family, dim }),
        }
    }

    pub fn family(&self) -> CrossFamily {
        self.family
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }
}

impl fmt::Display for CrossSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} d={}", self.family, self.dim)
    }
}

/// `(h, a)` for the family.
pub fn cross_parameters(space: &CrossSpace) -> (Rational, Rational) {
    let d = space.dim as i64;
    let a = int(1) + rat(4, d);
    let h = match space.family {
        CrossFamily::Sphere => int(d),
        CrossFamily::RealProjective => rat(d + 1, 2),
        CrossFamily::ComplexProjective => int(1 + d / 2),
        CrossFamily::QuaternionicProjective => int(d / 2 + 2),
        CrossFamily::Cayley => int(d / 2 + 4),
    };
    (h, a)
}

/// `Λ_l = l (l + h - 1)`.
pub fn cross_eigenvalue(space: &CrossSpace, l: u64) -> Rational {
    let (h, _) = cross_parameters(space);
    let l = int(l as i64);
    &l * (&l + h - int(1))
}

fn b(n: u64, k: u64) -> Rational {
    from_big(binomial(n, k))
}

fn q(n: u64) -> Rational {
    int(n as i64)
}

/// `m_l` for `l >= 1` (and `m_0 = 1`).
pub fn cross_multiplicity(space: &CrossSpace, l: u64) -> Result<BigInt> {
    if l == 0 {
        return Ok(BigInt::one());
    }
    let d = space.dim as u64;
    let value = match space.family {
        // (2l + d - 1)/l · C(l - 2 + d, l - 1)
        CrossFamily::Sphere => q(2 * l + d - 1) / q(l) * b(l + d - 2, l - 1),
        // (2 + (d - 1)/(2l)) · C(d + 2l - 2, d - 1)
        CrossFamily::RealProjective => {
            (q(2) + q(d - 1) / q(2 * l)) * b(d + 2 * l - 2, d - 1)
        }
        // (1 + 4l/d) · C(l - 1 + d/2, l)^2
        CrossFamily::ComplexProjective => {
            let c = b(l - 1 + d / 2, l);
            (q(1) + q(4 * l) / q(d)) * &c * &c
        }
        // (d + 4l + 2)/(2l(l + 1)) · C(l - 1 + d/2, l) · C(l + d/2, l - 1)
        CrossFamily::QuaternionicProjective => {
            q(d + 4 * l + 2) / q(2 * l * (l + 1)) * b(l - 1 + d / 2, l) * b(l + d / 2, l - 1)
        }
        // 3(d + 4l + 6)/(l(l+1)(l+2)(l+3)) · C(l - 1 + d/2, l) · C(l + d/2 + 2, l - 1)
        CrossFamily::Cayley => {
            q(3 * (d + 4 * l + 6)) / q(l * (l + 1) * (l + 2) * (l + 3))
                * b(l - 1 + d / 2, l)
                * b(l + d / 2 + 2, l - 1)
        }
    };
    expect_integer(value, format!("m_{l} on {space}"))
}

/// `N_l = m_0 + ... + m_l` from its own closed form.
pub fn cross_counting(space: &CrossSpace, l: u64) -> Result<BigInt> {
    if l == 0 {
        return Ok(BigInt::one());
    }
    let d = space.dim as u64;
    let value = match space.family {
        // (d + 2l)/d · C(l + d - 1, l)
        CrossFamily::Sphere => q(d + 2 * l) / q(d) * b(l + d - 1, l),
        // C(d + 2l, d)
        CrossFamily::RealProjective => b(d + 2 * l, d),
        // C(l + d/2, l)^2
        CrossFamily::ComplexProjective => {
            let c = b(l + d / 2, l);
            &c * &c
        }
        // (d + 2l + 2)(d + 2l)/(2 d l (l + 1)) · C(l - 1 + d/2, l) · C(l + d/2, l - 1)
        CrossFamily::QuaternionicProjective => {
            q((d + 2 * l + 2) * (d + 2 * l)) / q(2 * d * l * (l + 1))
                * b(l - 1 + d / 2, l)
                * b(l + d / 2, l - 1)
        }
        // 3(d + 2l + 6)(d + 2l)/(d l(l+1)(l+2)(l+3)) · C(l - 1 + d/2, l) · C(l + d/2 + 2, l - 1)
        CrossFamily::Cayley => {
            q(3 * (d + 2 * l + 6) * (d + 2 * l)) / q(d * l * (l + 1) * (l + 2) * (l + 3))
                * b(l - 1 + d / 2, l)
                * b(l + d / 2 + 2, l - 1)
        }
    };
    expect_integer(value, format!("N_{l} on {space}"))
}

/// Levels `(Λ_l, m_l)` for `l = 0..=l_max`.
pub fn cross_spectrum(space: &CrossSpace, l_max: u64) -> Result<Spectrum> {
    let levels = (0..=l_max)
        .map(|l| {
            let m = cross_multiplicity(space, l)?;
            Ok(Level::new(
                cross_eigenvalue(space, l),
                to_u64(&m, "multiplicity")?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum::new(Unit::Absolute, levels)?
        .with_meta(format!("cross {} d={} l_max={l_max}", space.family, space.dim)))
}

/// Smallest `l_max` whose spectrum holds more than `n` eigenvalues.
pub fn cross_spectrum_covering(space: &CrossSpace, n: u64) -> Result<Spectrum> {
    let mut l = 0u64;
    loop {
        let count = cross_counting(space, l)?;
        if count > BigInt::from(n) {
            return cross_spectrum(space, l);
        }
        l += 1;
    }
}
