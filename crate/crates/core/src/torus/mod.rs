//! Flat 2-tori `R² / Γ` with `Γ` spanned by `(1, 0)` and `(a, b)`.
//!
//! Only `b²` is stored, so all eigenvalues are exact rationals in units of
//! `4π²`: the dual vector `p = n w1* + m w2*` has `|p|² = n² + (m - n a)² / b²`.

mod scan;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{self, ceil_int, int, rat, Rational};
use crate::spectrum::{Level, Spectrum, Unit};

pub use scan::{scan_moduli, scan_to_csv, ScanRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusModuli {
    #[serde(with = "exactnum::serde_rational")]
    a: Rational,
    #[serde(with = "exactnum::serde_rational")]
    b_sq: Rational,
}

impl TorusModuli {
    pub fn new(a: Rational, b_sq: Rational) -> Result<Self> {
        if a.is_negative() || a > rat(1, 2) {
            return Err(Error::InvalidModuli(format!("need 0 <= a <= 1/2, got a = {a}")));
        }
        if !b_sq.is_positive() {
            return Err(Error::InvalidModuli(format!("need b^2 > 0, got {b_sq}")));
        }
        Ok(Self { a, b_sq })
    }

    pub fn square() -> Self {
        Self::new(int(0), int(1)).unwrap()
    }

    pub fn equilateral() -> Self {
        Self::new(rat(1, 2), rat(3, 4)).unwrap()
    }

    pub fn rectangular(b_sq: Rational) -> Result<Self> {
        Self::new(int(0), b_sq)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b_sq(&self) -> &Rational {
        &self.b_sq
    }

    /// Inside the fundamental domain, `a² + b² >= 1`.
    pub fn in_tau(&self) -> bool {
        &self.a * &self.a + &self.b_sq >= int(1)
    }

    /// `|p|²` for `p = n w1* + m w2*`.
    pub fn norm_sq(&self, v: DualVector) -> Rational {
        self.inner(v, v)
    }

    /// `⟨p, p'⟩ = n n' + (m - n a)(m' - n' a) / b²`.
    pub fn inner(&self, u: DualVector, v: DualVector) -> Rational {
        let (ux, uy) = self.scaled_components(u);
        let (vx, vy) = self.scaled_components(v);
        ux * vx + uy * vy / &self.b_sq
    }

    /// `(p_x, b · p_y) = (n, m - n a)`, both rational.
    pub fn scaled_components(&self, v: DualVector) -> (Rational, Rational) {
        let n = int(v.n);
        let y = int(v.m) - &n * &self.a;
        (n, y)
    }
}

impl fmt::Display for TorusModuli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={} b^2={}", self.a, self.b_sq)
    }
}

/// Lattice coordinates `(n, m)` of a dual vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualVector {
    pub n: i64,
    pub m: i64,
}

impl DualVector {
    pub const ZERO: DualVector = DualVector { n: 0, m: 0 };

    pub fn new(n: i64, m: i64) -> Self {
        Self { n, m }
    }

    pub fn is_zero(&self) -> bool {
        self.n == 0 && self.m == 0
    }
}

impl std::ops::Neg for DualVector {
    type Output = DualVector;
    fn neg(self) -> DualVector {
        DualVector::new(-self.n, -self.m)
    }
}

impl std::ops::Add for DualVector {
    type Output = DualVector;
    fn add(self, o: DualVector) -> DualVector {
        DualVector::new(self.n + o.n, self.m + o.m)
    }
}

impl std::ops::Sub for DualVector {
    type Output = DualVector;
    fn sub(self, o: DualVector) -> DualVector {
        DualVector::new(self.n - o.n, self.m - o.m)
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

pub fn norm_sq(moduli: &TorusModuli, v: DualVector) -> Rational {
    moduli.norm_sq(v)
}

/// Torus spectrum to a norm cutoff together with the wave vectors of each level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusSpectrum {
    pub moduli: TorusModuli,
    pub nu_max: Rational,
    pub spectrum: Spectrum,
    /// `shells[l]` lists the dual vectors of level `l`, sorted.
    pub shells: Vec<Vec<DualVector>>,
}

impl TorusSpectrum {
    pub fn shell_of(&self, nu: &Rational) -> Option<&[DualVector]> {
        self.spectrum
            .levels()
            .iter()
            .position(|l| &l.value == nu)
            .map(|i| self.shells[i].as_slice())
    }
}

/// Every dual vector with `|p|² <= nu_max`, ordered by `(|p|², n, m)`.
///
/// For each `n` with `n² <= nu_max` the admissible `m` satisfy
/// `(m - n a)² <= (nu_max - n²) b²`; that set is an integer interval around
/// `n a`, walked outward from `ceil(n a)` until the bound fails on each side.
pub fn enumerate_dual_vectors(
    moduli: &TorusModuli,
    nu_max: &Rational,
) -> Vec<(Rational, DualVector)> {
    if nu_max.is_negative() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let n_bound = num_integer::Roots::sqrt(&exactnum::floor_int(nu_max))
        .to_i64()
        .expect("cutoff fits in i64");
    for n in -n_bound..=n_bound {
        let n_sq = int(n * n);
        if n_sq > *nu_max {
            continue;
        }
        let radius_sq = (nu_max - n_sq) * moduli.b_sq();
        let center = int(n) * moduli.a();
        let start = ceil_int(&center).to_i64().expect("m fits in i64");
        let within = |m: i64| {
            let off = int(m) - &center;
            &off * &off <= radius_sq
        };
        let mut m = start;
        while within(m) {
            out.push(DualVector::new(n, m));
            m += 1;
        }
        let mut m = start - 1;
        while within(m) {
            out.push(DualVector::new(n, m));
            m -= 1;
        }
    }
    let mut keyed: Vec<(Rational, DualVector)> =
        out.into_iter().map(|v| (moduli.norm_sq(v), v)).collect();
    keyed.sort();
    keyed
}

pub fn torus_spectrum(moduli: &TorusModuli, nu_max: &Rational) -> Result<TorusSpectrum> {
    if nu_max.is_negative() {
        return Err(Error::UnsupportedParameter(format!(
            "nu_max must be nonnegative, got {nu_max}"
        )));
    }
    let mut grouped: BTreeMap<Rational, Vec<DualVector>> = BTreeMap::new();
    for (nu, v) in enumerate_dual_vectors(moduli, nu_max) {
        grouped.entry(nu).or_default().push(v);
    }
    let mut levels = Vec::with_capacity(grouped.len());
    let mut shells = Vec::with_capacity(grouped.len());
    for (nu, vs) in grouped {
        levels.push(Level::new(nu, vs.len() as u64));
        shells.push(vs);
    }
    let spectrum = Spectrum::new(Unit::FourPiSquared, levels)?
        .with_meta(format!("torus {moduli} nu_max={nu_max}"));
    Ok(TorusSpectrum {
        moduli: moduli.clone(),
        nu_max: nu_max.clone(),
        spectrum,
        shells,
    })
}

/// Grows the cutoff geometrically until at least `count` eigenvalues are
/// enumerated.
pub fn torus_spectrum_covering(moduli: &TorusModuli, count: u64) -> Result<TorusSpectrum> {
    let mut nu_max = moduli.b_sq().recip().min(int(1));
    loop {
        let ts = torus_spectrum(moduli, &nu_max)?;
        if ts.spectrum.total() >= count {
            return Ok(ts);
        }
        nu_max *= int(2);
    }
}

/// Grows the cutoff until at least `levels` distinct levels are enumerated.
pub fn torus_spectrum_with_levels(moduli: &TorusModuli, levels: usize) -> Result<TorusSpectrum> {
    let mut nu_max = moduli.b_sq().recip().min(int(1));
    loop {
        let ts = torus_spectrum(moduli, &nu_max)?;
        if ts.spectrum.levels().len() >= levels {
            return Ok(ts);
        }
        nu_max *= int(2);
    }
}

/// All dual vectors with `|p|² = nu`.
pub fn eigenspace_vectors(moduli: &TorusModuli, nu: &Rational) -> Result<Vec<DualVector>> {
    if nu.is_negative() {
        return Err(Error::UnsupportedParameter(format!(
            "nu must be nonnegative, got {nu}"
        )));
    }
    if nu.is_zero() {
        return Ok(vec![DualVector::ZERO]);
    }
    Ok(enumerate_dual_vectors(moduli, nu)
        .into_iter()
        .filter(|(v_nu, _)| v_nu == nu)
        .map(|(_, v)| v)
        .collect())
}
