//! The `spectral-sumrules` command line.
//!
//! Exit codes: `0` success (for `verify`, every check held), `1` some check
//! of `verify` failed, `2` usage or input error.

mod scan;
mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{parse_rational, Rational};
use crate::spectrum::{cross_spectrum, oscillator_spectrum, CrossFamily, CrossSpace};
use crate::torus::{torus_spectrum, DualVector, TorusModuli};

pub use scan::ScanArgs;
pub use verify::{VerifyArgs, VerifyKind};

#[derive(Debug, Parser)]
#[command(
    name = "spectral-sumrules",
    version,
    about = "Exact spectra of CROSS and flat tori, and checks of quadratic sum rules"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a spectrum as JSON.
    Spectrum(SpectrumArgs),
    /// Run one family of checks; one JSON report per line.
    Verify(Box<VerifyArgs>),
    /// Check P_N <= Q_N over a grid of torus moduli.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(subcommand)]
    pub source: SpectrumSource,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SpectrumSource {
    /// Compact rank-one symmetric space: sphere, rp, cp, hp, cayley.
    Cross {
        family: String,
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 10)]
        lmax: u64,
    },
    /// Flat torus with lattice basis (1, 0), (a, b); eigenvalues in 4π² units.
    Torus {
        #[arg(long, default_value = "0")]
        a: String,
        #[arg(long)]
        bsq: String,
        #[arg(long, default_value = "10")]
        numax: String,
    },
    /// Levels l + 1/(a-1) with multiplicities C(l + 2/(a-1), l).
    Oscillator {
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 10)]
        lmax: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    PlotData,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&a).map(|_| 0),
        Command::Verify(a) => verify::cmd_verify(&a),
        Command::Scan(a) => scan::cmd_scan(&a).map(|_| 0),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<()> {
    let spectrum = match &args.source {
        SpectrumSource::Cross { family, dim, lmax } => {
            let family: CrossFamily = family.parse()?;
            cross_spectrum(&CrossSpace::new(family, *dim)?, *lmax)?
        }
        SpectrumSource::Torus { a, bsq, numax } => {
            let moduli = TorusModuli::new(parse_rational(a)?, parse_rational(bsq)?)?;
            warn_outside_tau(&moduli);
            torus_spectrum(&moduli, &parse_rational(numax)?)?.spectrum
        }
        SpectrumSource::Oscillator { a, lmax } => oscillator_spectrum(&parse_rational(a)?, *lmax)?,
    };
    let mut text = serde_json::to_string_pretty(&spectrum)
        .map_err(|e| Error::Parse(format!("serializing spectrum: {e}")))?;
    text.push('\n');
    write_output(args.out.as_ref(), &text)
}

pub(crate) fn warn_outside_tau(moduli: &TorusModuli) {
    if !moduli.in_tau() {
        eprintln!("warning: {moduli} lies outside the fundamental domain (a^2 + b^2 < 1)");
    }
}

pub(crate) fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("writing {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Parse(format!("writing stdout: {e}")))
        }
    }
}

/// One compact JSON line, with `generated_at` (unix seconds) unless
/// `timestamp` is false.
pub(crate) fn json_line<T: Serialize>(value: &T, timestamp: bool) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Parse(format!("serializing report: {e}")))?;
    if timestamp {
        if let serde_json::Value::Object(map) = &mut v {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            map.insert("generated_at".into(), secs.into());
        }
    }
    let mut line = v.to_string();
    line.push('\n');
    Ok(line)
}

/// `"a,b_sq"`.
pub fn parse_torus_arg(text: &str) -> Result<TorusModuli> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected a,b_sq but got {text:?}")))?;
    TorusModuli::new(parse_rational(a.trim())?, parse_rational(b.trim())?)
}

/// `"n,m"`.
pub fn parse_vector_arg(text: &str) -> Result<DualVector> {
    let (n, m) = text
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected n,m but got {text:?}")))?;
    let n = n.trim().parse().map_err(|_| Error::Parse(format!("bad integer {n:?}")))?;
    let m = m.trim().parse().map_err(|_| Error::Parse(format!("bad integer {m:?}")))?;
    Ok(DualVector::new(n, m))
}

/// `"n,m;n,m;..."`.
pub fn parse_vector_list(text: &str) -> Result<Vec<DualVector>> {
    text.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_vector_arg)
        .collect()
}

/// Comma-separated rationals.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_rational)
        .collect()
}

/// Comma-separated positive integers.
pub fn parse_u64_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn argument_parsers() {
        assert_eq!(parse_torus_arg("1/2, 3/4").unwrap(), TorusModuli::equilateral());
        assert!(parse_torus_arg("0").is_err());
        assert_eq!(parse_vector_arg("-1,2").unwrap(), DualVector::new(-1, 2));
        assert_eq!(
            parse_vector_list("1,0;0,1").unwrap(),
            vec![DualVector::new(1, 0), DualVector::new(0, 1)]
        );
        assert_eq!(parse_rational_list("1, 3/2").unwrap(), vec![int(1), rat(3, 2)]);
        assert_eq!(parse_u64_list("1,5").unwrap(), vec![1, 5]);
        assert!(parse_u64_list("x").is_err());
    }

    #[test]
    fn timestamp_field() {
        let v: serde_json::Value =
            serde_json::from_str(&json_line(&serde_json::json!({"k": 1}), true).unwrap()).unwrap();
        assert!(v["generated_at"].is_u64());
        let v: serde_json::Value =
            serde_json::from_str(&json_line(&serde_json::json!({"k": 1}), false).unwrap()).unwrap();
        assert!(v.get("generated_at").is_none());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["spectral-sumrules", "spectrum", "cross", "cayley", "--dim", "17"]), 2);
        assert_eq!(run(["spectral-sumrules", "bogus"]), 2);
    }
}
