use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Args;
use num_traits::Signed;

use super::{parse_rational_list, parse_torus_arg, warn_outside_tau, write_output, OutputFormat};
use crate::error::{Error, Result};
use crate::exactnum::{self, int, parse_rational, Rational};
use crate::torus::{scan_moduli, scan_to_csv, TorusModuli};

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Values of a: "start:end:step", a comma list, or one value.
    #[arg(long)]
    pub a: Option<String>,
    /// Values of b², same syntax as --a.
    #[arg(long, conflicts_with = "bsq_arc")]
    pub bsq: Option<String>,
    /// Use b² = 1 - a² for every a (the boundary arc of the fundamental domain).
    #[arg(long)]
    pub bsq_arc: bool,
    /// Explicit points "a,b_sq;a,b_sq;...", added after the product grid.
    #[arg(long)]
    pub points: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub nmax: u64,
    /// Fixed cutoff in 4π² units; by default it grows per point.
    #[arg(long)]
    pub numax: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_timestamp: bool,
}

/// Expands `start:end:step`, a comma list, or a single rational.
pub fn parse_grid_values(text: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [single] => parse_rational_list(single),
        [start, end, step] => {
            let (start, end, step) = (parse_rational(start)?, parse_rational(end)?, parse_rational(step)?);
            if !step.is_positive() {
                return Err(Error::Parse(format!("range step must be positive in {text:?}")));
            }
            let mut out = Vec::new();
            let mut v = start;
            while v <= end {
                out.push(v.clone());
                v += &step;
            }
            Ok(out)
        }
        _ => Err(Error::Parse(format!("expected start:end:step, got {text:?}"))),
    }
}

pub fn build_grid(args: &ScanArgs) -> Result<Vec<TorusModuli>> {
    let mut grid = Vec::new();
    if let Some(a_text) = &args.a {
        let avals = parse_grid_values(a_text)?;
        if args.bsq_arc {
            for a in avals {
                let b_sq = int(1) - &a * &a;
                grid.push(TorusModuli::new(a, b_sq)?);
            }
        } else {
            let bvals = parse_grid_values(args.bsq.as_deref().ok_or_else(|| {
                Error::UnsupportedParameter("--a needs --bsq or --bsq-arc".into())
            })?)?;
            for a in &avals {
                for b in &bvals {
                    grid.push(TorusModuli::new(a.clone(), b.clone())?);
                }
            }
        }
    } else if let Some(b_text) = &args.bsq {
        for b in parse_grid_values(b_text)? {
            grid.push(TorusModuli::new(int(0), b)?);
        }
    }
    if let Some(points) = &args.points {
        for p in points.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            grid.push(parse_torus_arg(p)?);
        }
    }
    if grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(grid)
}

pub(super) fn cmd_scan(args: &ScanArgs) -> Result<()> {
    let grid = build_grid(args)?;
    for m in &grid {
        warn_outside_tau(m);
    }
    let nu_max = args.numax.as_deref().map(parse_rational).transpose()?;
    let records = scan_moduli(&grid, nu_max.as_ref(), args.nmax)?;
    let text = match args.format {
        OutputFormat::Json => {
            let stamp = (!args.no_timestamp).then(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
            let mut values = Vec::with_capacity(records.len());
            for r in &records {
                let mut v = serde_json::to_value(r)
                    .map_err(|e| Error::Parse(format!("serializing scan: {e}")))?;
                if let (Some(t), serde_json::Value::Object(map)) = (stamp, &mut v) {
                    map.insert("generated_at".into(), t.into());
                }
                values.push(v);
            }
            let mut s = serde_json::to_string_pretty(&values)
                .map_err(|e| Error::Parse(format!("serializing scan: {e}")))?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => scan_to_csv(&records),
        OutputFormat::PlotData => {
            let mut s = String::from("a,b_sq\n");
            for r in records.iter().filter(|r| !r.violations.is_empty()) {
                s.push_str(&format!("{},{}\n", exactnum::to_f64(&r.a), exactnum::to_f64(&r.b_sq)));
            }
            s
        }
    };
    write_output(args.out.as_ref(), &text)
}
