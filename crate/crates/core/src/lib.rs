//! Exact spectra of compact rank-one symmetric spaces and flat 2-tori, with
//! machine-checked sum rules, quadratic eigenvalue inequalities, tight-frame
//! identities and Riesz-mean bounds.
//!
//! Every identity is certified in exact rational arithmetic. The only place
//! where an irrational number enters is the Weyl constant, and there π is
//! carried as a formal power and compared through a certified rational
//! enclosure.
//!
//! Module map:
//!
//! - [`exactnum`]: rationals, binomials, rising products, π enclosures.
//! - [`spectrum`]: the [`Spectrum`] model, CROSS and oscillator generators,
//!   file ingestion.
//! - [`torus`]: dual-lattice enumeration for flat 2-tori and moduli scans.
//! - [`sumrule`]: the polynomials P_N, Q_N and their identity/inequality checks,
//!   the gap condition and the counting recurrence.
//! - [`frames`]: tight-frame and addition-formula checks on torus shells, and
//!   the exact commutator sum rule.
//! - [`riesz`]: Riesz means, the R_2 monotonicity inequality, the Weyl bound.
//! - [`cli`]: the `spectral-sumrules` command-line front end.

pub mod cli;
pub mod error;
pub mod exactnum;
pub mod frames;
pub mod riesz;
pub mod spectrum;
pub mod sumrule;
pub mod torus;

pub use error::{Error, Result};
pub use exactnum::Rational;
pub use spectrum::{CrossFamily, CrossSpace, Level, Spectrum, Unit};
pub use sumrule::{CheckReport, QuadPoly};
pub use torus::{DualVector, TorusModuli};
