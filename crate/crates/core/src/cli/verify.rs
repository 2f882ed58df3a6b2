use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use super::{
    json_line, parse_rational_list, parse_torus_arg, parse_u64_list, parse_vector_arg,
    parse_vector_list, warn_outside_tau, write_output, OutputFormat,
};
use crate::error::{Error, Result};
use crate::exactnum::{self, from_big, int, parse_rational, Rational};
use crate::frames::{addition_formula_check, frame_check, sign_bound_check, verify_sum_rule_identity, FrameReport};
use crate::riesz::{default_z_grid, r2_monotonicity_check, weyl_bound_check, RieszReport, Volume};
use crate::spectrum::{
    cross_counting, cross_eigenvalue, cross_parameters, cross_spectrum, cross_spectrum_covering,
    load_spectrum, oscillator_spectrum, CrossFamily, CrossSpace, LoadMode, Spectrum,
};
use crate::sumrule::{
    check_identity, check_identity_with_lambda1, check_inequality, check_inequality_with_lambda1,
    gap_condition_defect, gap_indices, recurrence_counts, shifted_sumrule_check, CheckReport,
    RecurrenceResult,
};
use crate::torus::{torus_spectrum, torus_spectrum_covering, TorusModuli};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    /// P_N = Q_N at every gap.
    Identity,
    /// P_N <= Q_N on every gap interval.
    Inequality,
    /// The gap condition N(λ_{N+1} + λ_N - h) = (a+1)Σλ.
    Condition,
    /// Counting functions from the first-order recurrence.
    Recurrence,
    /// Tight-frame test of a torus shell.
    Frame,
    /// Addition formulas of a torus shell.
    Addition,
    /// The commutator sum rule with G = e^{2πi⟨q,x⟩}.
    SumruleExact,
    /// Its upper bound on the gap after J.
    SignBound,
    /// The averaged torus inequality for a set of wave vectors.
    Shifted,
    /// 2R_1(z)(z + dΛ_1/4) >= (2 + d/2)R_2(z).
    RieszMono,
    /// R_2(z) <= L_{2,d}|Ω|(z + dΛ_1/4)^{2+d/2}.
    Weyl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub kind: VerifyKind,

    /// CROSS family (sphere, rp, cp, hp, cayley); needs --dim.
    #[arg(long)]
    pub cross: Option<String>,
    /// Manifold dimension; required with --cross and --input.
    #[arg(long)]
    pub dim: Option<u32>,
    /// Torus moduli as "a,b_sq".
    #[arg(long)]
    pub torus: Option<String>,
    /// Oscillator parameter a (recurrence only).
    #[arg(long)]
    pub oscillator: Option<String>,
    /// Spectrum file: Spectrum JSON or one eigenvalue per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Relative tolerance for merging float eigenvalues.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,

    /// Highest CROSS level l.
    #[arg(long)]
    pub lmax: Option<u64>,
    /// Torus enumeration cutoff in 4π² units.
    #[arg(long)]
    pub numax: Option<String>,
    /// Largest gap index N.
    #[arg(long)]
    pub nmax: Option<u64>,
    /// Explicit gap indices, comma separated.
    #[arg(long)]
    pub n: Option<String>,
    /// Ambient first positive level; defaults to the spectrum's second level.
    #[arg(long)]
    pub lambda1: Option<String>,
    /// Gap-condition / recurrence parameter a for --input.
    #[arg(long)]
    pub a: Option<String>,
    /// Gap-condition / recurrence shift h for --input.
    #[arg(long)]
    pub h: Option<String>,

    /// Wave vector q as "n,m".
    #[arg(long)]
    pub q: Option<String>,
    /// Numbers of levels in J, comma separated.
    #[arg(long)]
    pub levels: Option<String>,
    /// Wave vectors "n,m;n,m;...".
    #[arg(long)]
    pub p: Option<String>,
    /// Sample points, comma separated rationals (spectrum units).
    #[arg(long)]
    pub z: Option<String>,
    /// Largest sample point for the default Riesz grid.
    #[arg(long)]
    pub zmax: Option<String>,
    /// Shell norms |p|², comma separated.
    #[arg(long)]
    pub nu: Option<String>,
    /// |Ω| as c, c*pi^k or sqrt(c).
    #[arg(long)]
    pub volume: Option<String>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_timestamp: bool,
}

enum Source {
    Cross(CrossSpace),
    Torus(TorusModuli),
    Oscillator(Rational),
    Input(Spectrum),
}

enum Report {
    Check(CheckReport),
    Frame(Box<FrameReport>),
    Riesz(RieszReport),
    Other { holds: bool, value: serde_json::Value },
}

#[derive(Serialize)]
struct FrameLine<'a> {
    kind: &'static str,
    #[serde(flatten)]
    report: &'a FrameReport,
}

#[derive(Serialize)]
struct ConditionLine {
    kind: &'static str,
    #[serde(rename = "N")]
    n: u64,
    holds: bool,
    #[serde(with = "exactnum::serde_rational")]
    defect: Rational,
    #[serde(with = "exactnum::serde_rational")]
    a: Rational,
    #[serde(with = "exactnum::serde_rational")]
    h: Rational,
}

#[derive(Serialize)]
struct RecurrenceLine {
    kind: &'static str,
    holds: bool,
    matches_expected: bool,
    #[serde(flatten)]
    result: RecurrenceResult,
    expected: Vec<String>,
}

#[derive(Serialize)]
struct AdditionLine {
    kind: &'static str,
    #[serde(with = "exactnum::serde_rational")]
    nu: Rational,
    holds: bool,
}

impl Report {
    fn holds(&self) -> bool {
        match self {
            Report::Check(r) => r.holds,
            Report::Frame(r) => r.tight,
            Report::Riesz(r) => r.holds,
            Report::Other { holds, .. } => *holds,
        }
    }

    fn json(&self, timestamp: bool) -> Result<String> {
        match self {
            Report::Check(r) => json_line(r, timestamp),
            Report::Frame(r) => json_line(&FrameLine { kind: "frame", report: r }, timestamp),
            Report::Riesz(r) => json_line(r, timestamp),
            Report::Other { value, .. } => json_line(value, timestamp),
        }
    }

    fn plot_rows(&self) -> Result<String> {
        let mut out = String::new();
        match self {
            Report::Check(r) => {
                for (z, v) in &r.witnesses {
                    out.push_str(&format!("{},{}\n", exactnum::to_f64(z), exactnum::to_f64(v)));
                }
            }
            Report::Riesz(r) => {
                for s in &r.samples {
                    out.push_str(&format!("{},{}\n", exactnum::to_f64(&s.z), s.ratio));
                }
            }
            _ => {
                return Err(Error::UnsupportedParameter(
                    "plot-data is available for polynomial and Riesz checks only".into(),
                ))
            }
        }
        Ok(out)
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::Parse(format!("serializing report: {e}")))
}

pub(super) fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let source = resolve_source(args)?;
    let reports = run_kind(args, &source)?;
    if reports.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut text = String::new();
    match args.format {
        OutputFormat::Json => {
            for r in &reports {
                text.push_str(&r.json(!args.no_timestamp)?);
            }
        }
        OutputFormat::PlotData => {
            let header = match &reports[0] {
                Report::Riesz(_) => "z,ratio\n",
                _ => "z,residual\n",
            };
            text.push_str(header);
            for r in &reports {
                text.push_str(&r.plot_rows()?);
            }
        }
        OutputFormat::Csv => {
            return Err(Error::UnsupportedParameter(
                "verify emits json or plot-data".into(),
            ))
        }
    }
    write_output(args.out.as_ref(), &text)?;
    Ok(if reports.iter().all(Report::holds) { 0 } else { 1 })
}

fn resolve_source(args: &VerifyArgs) -> Result<Source> {
    let given = [
        args.cross.is_some(),
        args.torus.is_some(),
        args.oscillator.is_some(),
        args.input.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if given != 1 {
        return Err(Error::UnsupportedParameter(
            "give exactly one of --cross, --torus, --oscillator, --input".into(),
        ));
    }
    if let Some(f) = &args.cross {
        let family: CrossFamily = f.parse()?;
        let dim = args
            .dim
            .ok_or_else(|| Error::UnsupportedParameter("--cross needs --dim".into()))?;
        return Ok(Source::Cross(CrossSpace::new(family, dim)?));
    }
    if let Some(t) = &args.torus {
        let m = parse_torus_arg(t)?;
        warn_outside_tau(&m);
        return Ok(Source::Torus(m));
    }
    if let Some(a) = &args.oscillator {
        return Ok(Source::Oscillator(parse_rational(a)?));
    }
    let path = args.input.as_ref().expect("one source is present");
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?;
    let mode = match args.mode {
        ModeArg::Exact => LoadMode::Exact,
        ModeArg::Float => LoadMode::Float,
    };
    Ok(Source::Input(load_spectrum(&text, mode, args.tol)?))
}

fn opt_rational(v: &Option<String>) -> Result<Option<Rational>> {
    v.as_deref().map(parse_rational).transpose()
}

fn dimension(args: &VerifyArgs, source: &Source) -> Result<u32> {
    match source {
        Source::Cross(space) => Ok(space.dim()),
        Source::Torus(_) => Ok(2),
        _ => args
            .dim
            .ok_or_else(|| Error::UnsupportedParameter("this source needs --dim".into())),
    }
}

fn require_torus(source: &Source) -> Result<&TorusModuli> {
    match source {
        Source::Torus(m) => Ok(m),
        _ => Err(Error::UnsupportedParameter("this check needs --torus".into())),
    }
}

/// A spectrum with at least `nmax + 1` eigenvalues.
fn spectrum_for_gaps(args: &VerifyArgs, source: &Source, nmax: u64) -> Result<Spectrum> {
    match source {
        Source::Cross(space) => match args.lmax {
            Some(l) => cross_spectrum(space, l),
            None => cross_spectrum_covering(space, nmax),
        },
        Source::Torus(m) => match opt_rational(&args.numax)? {
            Some(nu) => Ok(torus_spectrum(m, &nu)?.spectrum),
            None => Ok(torus_spectrum_covering(m, nmax + 1)?.spectrum),
        },
        Source::Oscillator(a) => oscillator_spectrum(a, args.lmax.unwrap_or(20)),
        Source::Input(s) => Ok(s.clone()),
    }
}

fn default_nmax(source: &Source) -> u64 {
    match source {
        Source::Input(s) => s.total().saturating_sub(1).max(1),
        Source::Torus(_) => 20,
        _ => 50,
    }
}

fn gap_list(args: &VerifyArgs, s: &Spectrum, nmax: u64) -> Result<Vec<u64>> {
    match &args.n {
        Some(list) => parse_u64_list(list),
        None => gap_indices(s, nmax),
    }
}

fn run_kind(args: &VerifyArgs, source: &Source) -> Result<Vec<Report>> {
    let nmax = args.nmax.unwrap_or_else(|| default_nmax(source));
    match args.kind {
        VerifyKind::Identity | VerifyKind::Inequality => {
            if matches!(source, Source::Oscillator(_)) {
                return Err(Error::UnsupportedParameter(
                    "identity/inequality need a manifold spectrum".into(),
                ));
            }
            let d = dimension(args, source)?;
            let s = spectrum_for_gaps(args, source, nmax)?;
            let lambda1 = opt_rational(&args.lambda1)?;
            let identity = args.kind == VerifyKind::Identity;
            gap_list(args, &s, nmax)?
                .into_iter()
                .map(|n| {
                    let r = match (&lambda1, identity) {
                        (None, true) => check_identity(&s, d, n),
                        (None, false) => check_inequality(&s, d, n),
                        (Some(l), true) => check_identity_with_lambda1(&s, d, l, n),
                        (Some(l), false) => check_inequality_with_lambda1(&s, d, l, n),
                    };
                    r.map(Report::Check)
                })
                .collect()
        }
        VerifyKind::Condition => run_condition(args, source, nmax),
        VerifyKind::Recurrence => run_recurrence(args, source).map(|r| vec![r]),
        VerifyKind::Frame | VerifyKind::Addition => {
            let m = require_torus(source)?;
            let nus = match &args.nu {
                Some(list) => parse_rational_list(list)?,
                None => vec![torus_spectrum_covering(m, 2)?.spectrum.first_positive_level()?.clone()],
            };
            nus.into_iter()
                .map(|nu| {
                    if args.kind == VerifyKind::Frame {
                        frame_check(m, &nu).map(|r| Report::Frame(Box::new(r)))
                    } else {
                        let holds = addition_formula_check(m, &nu)?;
                        Ok(Report::Other {
                            holds,
                            value: to_value(&AdditionLine { kind: "addition", nu, holds })?,
                        })
                    }
                })
                .collect()
        }
        VerifyKind::SumruleExact | VerifyKind::SignBound => {
            let m = require_torus(source)?;
            let q = parse_vector_arg(
                args.q
                    .as_deref()
                    .ok_or_else(|| Error::UnsupportedParameter("--q is required".into()))?,
            )?;
            let default_levels = if args.kind == VerifyKind::SumruleExact { "1,2,3" } else { "1,2" };
            let levels = parse_u64_list(args.levels.as_deref().unwrap_or(default_levels))?;
            let nu_max = opt_rational(&args.numax)?;
            let z = parse_rational_list(args.z.as_deref().unwrap_or(""))?;
            levels
                .into_iter()
                .map(|l| {
                    let l = l as usize;
                    if args.kind == VerifyKind::SumruleExact {
                        verify_sum_rule_identity(m, q, l, nu_max.as_ref())
                    } else {
                        sign_bound_check(m, q, l, &z)
                    }
                    .map(Report::Check)
                })
                .collect()
        }
        VerifyKind::Shifted => {
            let m = require_torus(source)?;
            let p = parse_vector_list(
                args.p
                    .as_deref()
                    .ok_or_else(|| Error::UnsupportedParameter("--p is required".into()))?,
            )?;
            let z = parse_rational_list(args.z.as_deref().unwrap_or(""))?;
            let s = torus_spectrum_covering(m, nmax + 1)?.spectrum;
            gap_list(args, &s, nmax)?
                .into_iter()
                .map(|n| shifted_sumrule_check(m, &p, n, &z).map(Report::Check))
                .collect()
        }
        VerifyKind::RieszMono | VerifyKind::Weyl => run_riesz(args, source).map(|r| vec![r]),
    }
}

fn run_condition(args: &VerifyArgs, source: &Source, nmax: u64) -> Result<Vec<Report>> {
    let (a, h) = match source {
        Source::Cross(space) => {
            let (h, a) = cross_parameters(space);
            (a, h)
        }
        Source::Input(_) => {
            let a = opt_rational(&args.a)?
                .ok_or_else(|| Error::UnsupportedParameter("--input needs --a".into()))?;
            (a, opt_rational(&args.h)?.unwrap_or_else(|| int(0)))
        }
        _ => {
            return Err(Error::UnsupportedParameter(
                "condition needs --cross or --input".into(),
            ))
        }
    };
    let s = spectrum_for_gaps(args, source, nmax)?;
    let gaps = gap_list(args, &s, nmax)?;
    let top = gaps.iter().copied().max().unwrap_or(1);
    let lambdas = s.flatten(top + 1)?;
    gaps.into_iter()
        .map(|n| {
            let defect = gap_condition_defect(&lambdas, &a, &h, n as usize)?;
            let holds = num_traits::Zero::is_zero(&defect);
            Ok(Report::Other {
                holds,
                value: to_value(&ConditionLine {
                    kind: "condition",
                    n,
                    holds,
                    defect,
                    a: a.clone(),
                    h: h.clone(),
                })?,
            })
        })
        .collect()
}

fn run_recurrence(args: &VerifyArgs, source: &Source) -> Result<Report> {
    let (levels, a, h, n0, expected): (Vec<Rational>, Rational, Rational, u64, Vec<Rational>) =
        match source {
            Source::Cross(space) => {
                let l_max = args.lmax.unwrap_or(50);
                let (h, a) = cross_parameters(space);
                let levels = (0..=l_max + 1).map(|l| cross_eigenvalue(space, l)).collect();
                let expected = (0..=l_max)
                    .map(|l| cross_counting(space, l).map(from_big))
                    .collect::<Result<_>>()?;
                (levels, a, h, 1, expected)
            }
            Source::Oscillator(a) => {
                let l_max = args.lmax.unwrap_or(20);
                let s = oscillator_spectrum(a, l_max + 1)?;
                let levels = s.levels().iter().map(|l| l.value.clone()).collect();
                let expected = s.levels()[..=l_max as usize]
                    .iter()
                    .map(|l| int(l.mult as i64))
                    .collect();
                (levels, a.clone(), int(0), 1, expected)
            }
            Source::Input(s) => {
                let a = opt_rational(&args.a)?
                    .ok_or_else(|| Error::UnsupportedParameter("--input needs --a".into()))?;
                let h = opt_rational(&args.h)?.unwrap_or_else(|| int(0));
                let levels: Vec<Rational> = s.levels().iter().map(|l| l.value.clone()).collect();
                let mut expected: Vec<Rational> =
                    s.cumulative_counts().into_iter().map(|c| int(c as i64)).collect();
                expected.pop();
                (levels, a, h, s.levels()[0].mult, expected)
            }
            Source::Torus(_) => {
                return Err(Error::UnsupportedParameter(
                    "recurrence needs --cross, --oscillator or --input".into(),
                ))
            }
        };
    let result = recurrence_counts(&levels, &a, &h, n0)?;
    let matches_expected = result.counts == expected;
    let holds = matches_expected && result.all_integral() && result.strictly_increasing;
    Ok(Report::Other {
        holds,
        value: to_value(&RecurrenceLine {
            kind: "recurrence",
            holds,
            matches_expected,
            result,
            expected: expected.iter().map(ToString::to_string).collect(),
        })?,
    })
}

/// A spectrum whose top level reaches `z_max`.
fn spectrum_reaching(args: &VerifyArgs, source: &Source, z_max: Option<&Rational>) -> Result<Spectrum> {
    match source {
        Source::Cross(space) => {
            let mut l = args.lmax.unwrap_or(10);
            loop {
                let s = cross_spectrum(space, l)?;
                if z_max.is_none_or(|z| s.top() >= z) {
                    return Ok(s);
                }
                l *= 2;
            }
        }
        Source::Torus(m) => {
            let mut nu = opt_rational(&args.numax)?.unwrap_or_else(|| int(10));
            if let Some(z) = z_max {
                nu = nu.max(z + int(1));
            }
            loop {
                let s = torus_spectrum(m, &nu)?.spectrum;
                if z_max.is_none_or(|z| s.top() >= z) {
                    return Ok(s);
                }
                nu *= int(2);
            }
        }
        Source::Oscillator(a) => oscillator_spectrum(a, args.lmax.unwrap_or(20)),
        Source::Input(s) => Ok(s.clone()),
    }
}

fn run_riesz(args: &VerifyArgs, source: &Source) -> Result<Report> {
    let d = dimension(args, source)?;
    let z_given = parse_rational_list(args.z.as_deref().unwrap_or(""))?;
    let z_max = if z_given.is_empty() {
        opt_rational(&args.zmax)?
    } else {
        z_given.iter().max().cloned()
    };
    let s = spectrum_reaching(args, source, z_max.as_ref())?;
    let z = if z_given.is_empty() {
        default_z_grid(&s, z_max.as_ref())
    } else {
        z_given
    };
    let lambda1 = match opt_rational(&args.lambda1)? {
        Some(l) => l,
        None => s.first_positive_level()?.clone(),
    };
    let report = if args.kind == VerifyKind::RieszMono {
        r2_monotonicity_check(&s, d, &lambda1, &z)?
    } else {
        let volume = match (&args.volume, source) {
            (Some(v), _) => v.parse::<Volume>()?,
            (None, Source::Torus(m)) => {
                Volume::from_square(exactnum::PiScalar::rational(m.b_sq().clone()))?
            }
            (None, _) => {
                return Err(Error::UnsupportedParameter(
                    "weyl needs --volume for this source".into(),
                ))
            }
        };
        weyl_bound_check(&s, d, &lambda1, &volume, &z)?
    };
    Ok(Report::Riesz(report))
}
