//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical or certification failure.
//! Data goes to `--out` when given, otherwise to stdout; summaries of grid
//! and limit runs then go to stderr so stdout stays machine-readable.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigUint;
use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::{closed_form_roots, ClosedFormRoot};
use crate::error::Error;
use crate::format::{f17_vec, fmt_g17, F17};
use crate::hermite::{enumerate_extrema, format_rational, pn_exact, pn_from_hermite, pn_recursive, solve_extrema, ExtremePointSet};
use crate::limits::{
    convergence_csv, default_t_schedule, factorization_error_bound, minor_series_gn, ratio_limit, truncated_factorization,
    ConvergenceRow,
};
use crate::matrix::det_general;
use crate::optimizer::{best_converged, equi_residual, run_restarts, OptimizerConfig};
use crate::vandermonde::{build_generalized, ExponentVector, LogBranch, NodeVector};
use crate::viz::{grid_eval, DEFAULT_PHI_COUNT, DEFAULT_THETA_COUNT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

const FACTORIZE_TOL: f64 = 1e-10;
const MINORS_TOL: f64 = 1e-8;
const RATIO_REL_TOL: f64 = 1e-4;
const OPTIMIZE_REL_GAP: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "vandermonde", version, about = "Vandermonde determinant extrema on the unit sphere")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certified extreme points from the roots of the rescaled Hermite polynomial
    Extrema(ExtremaArgs),
    /// Projected gradient ascent of |v_n| on the unit sphere
    Optimize(OptimizeArgs),
    /// Evaluate v_n over a (theta, phi) lattice on an embedded 2-sphere
    Grid(GridArgs),
    /// Limits relating generalized and ordinary Vandermonde matrices
    Limits {
        #[command(subcommand)]
        case: LimitsCase,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtremaFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct ExtremaArgs {
    #[arg(value_parser = clap::value_parser!(u64).range(2..=50))]
    n: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: ExtremaFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(value_parser = clap::value_parser!(u64).range(2..))]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    restarts: u64,
    /// Directory receiving one trace CSV per restart
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(value_parser = clap::value_parser!(u64).range(3..=7))]
    n: u64,
    /// Lattice size as THETAxPHI
    #[arg(long, value_parser = parse_resolution)]
    res: Option<(usize, usize)>,
    /// Integer exponents for g_3, e.g. 0,2,3
    #[arg(long, value_delimiter = ',')]
    exponents: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value = "csv")]
    format: GridFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct NodesExponents {
    /// Comma-separated reals; accepts `e` and fractions such as 1/3
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_real, required = true)]
    nodes: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_real, required = true)]
    exponents: Vec<f64>,
    /// Convergence report CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum LimitsCase {
    /// Truncated factorization V(a)^T D_k V(log x) against G(x, a)
    Factorize {
        #[command(flatten)]
        io: NodesExponents,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..=200))]
        k: u64,
    },
    /// Cauchy-Binet minor series for det G(x, a)
    Minors {
        #[command(flatten)]
        io: NodesExponents,
        #[arg(long = "K", default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..=200))]
        big_k: u64,
    },
    /// g_n(x, a t) / v_n(a t) as t -> 0
    Ratio {
        #[command(flatten)]
        io: NodesExponents,
    },
}

/// Parses a real literal: a decimal, `e`, or a fraction `p/q`, optionally signed.
pub fn parse_real(token: &str) -> Result<f64, String> {
    let token = token.trim();
    let (sign, body) = match token.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, token.strip_prefix('+').unwrap_or(token)),
    };
    let atom = |s: &str| -> Result<f64, String> {
        if s == "e" {
            Ok(std::f64::consts::E)
        } else {
            s.parse::<f64>().map_err(|_| format!("cannot parse `{token}` as a number"))
        }
    };
    let value = match body.split_once('/') {
        Some((p, q)) => {
            let q = atom(q)?;
            if q == 0.0 {
                return Err(format!("zero denominator in `{token}`"));
            }
            atom(p)? / q
        }
        None => atom(body)?,
    };
    if !value.is_finite() {
        return Err(format!("`{token}` is not finite"));
    }
    Ok(sign * value)
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("resolution `{s}` is not of the form WxH"))?;
    let w: usize = w.parse().map_err(|_| format!("bad theta count in `{s}`"))?;
    let h: usize = h.parse().map_err(|_| format!("bad phi count in `{s}`"))?;
    if w < 2 || h < 2 {
        return Err(format!("resolution `{s}` is below 2x2"));
    }
    Ok((w, h))
}

/// Failure of a command: the message and the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RootFindingFailure { .. } | Error::MaxItersExceeded { .. } => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Streams a command writes to.
struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    /// Writes `data` to `path`, or to stdout when no path is given.
    fn emit(&mut self, path: Option<&Path>, data: &str) -> std::io::Result<()> {
        match path {
            Some(p) => std::fs::write(p, data),
            None => self.out.write_all(data.as_bytes()),
        }
    }

    /// Summary stream: stdout when the data went to a file, stderr otherwise.
    fn summary(&mut self, to_file: bool) -> &mut dyn Write {
        if to_file {
            &mut *self.out
        } else {
            &mut *self.err
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    let result = match cli.command {
        Command::Extrema(a) => cmd_extrema(a, &mut io),
        Command::Optimize(a) => cmd_optimize(a, &mut io),
        Command::Grid(a) => cmd_grid(a, &mut io),
        Command::Limits { case } => cmd_limits(case, &mut io),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message);
            f.code
        }
    }
}

#[derive(Serialize)]
struct ExtremaJson<'a> {
    coefficients_exact: Vec<String>,
    coefficients: Vec<F17>,
    coefficients_recursive: Vec<F17>,
    #[serde(flatten)]
    set: &'a ExtremePointSet,
    extreme_point_count: String,
    closed_forms: Vec<ClosedFormRoot>,
}

fn factorial_big(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

fn cmd_extrema(args: ExtremaArgs, io: &mut Io) -> CmdResult {
    let n = args.n as usize;
    let exact: Vec<String> = pn_exact(n)?.iter().map(format_rational).collect();
    let hermite = pn_from_hermite(n)?;
    let recursive = pn_recursive(n)?;
    let set = solve_extrema(n)?;
    let closed = if (3..=7).contains(&n) {
        closed_form_roots(n)?.roots
    } else {
        Vec::new()
    };
    let count = factorial_big(n);

    let doc = match args.format {
        ExtremaFormat::Json => {
            let doc = ExtremaJson {
                coefficients_exact: exact,
                coefficients: f17_vec(hermite.coeffs()),
                coefficients_recursive: f17_vec(recursive.coeffs()),
                set: &set,
                extreme_point_count: count.to_string(),
                closed_forms: closed,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("extrema serializes");
            s.push('\n');
            s
        }
        ExtremaFormat::Text => {
            let mut s = String::new();
            let list = |v: &[f64]| v.iter().map(|&c| fmt_g17(c)).collect::<Vec<_>>().join(", ");
            let _ = writeln!(s, "n: {n}");
            let _ = writeln!(s, "coefficients, ascending powers (exact): [{}]", exact.join(", "));
            let _ = writeln!(s, "coefficients from Hermite: [{}]", list(hermite.coeffs()));
            let _ = writeln!(s, "coefficients by recursion: [{}]", list(recursive.coeffs()));
            let roots: Vec<String> = set.roots.iter().map(|r| format!("{:.10}", r)).collect();
            let _ = writeln!(s, "roots: {}", roots.join(" "));
            let _ = writeln!(s, "extreme value: {:.10}", set.extreme_value);
            let _ = writeln!(s, "log10 extreme value: {:.10}", set.log10_extreme_value);
            if n <= 7 {
                let (mut maxima, mut minima) = (0usize, 0usize);
                for p in enumerate_extrema(&set, None)? {
                    if p.sign > 0 {
                        maxima += 1;
                    } else {
                        minima += 1;
                    }
                }
                let _ = writeln!(s, "extreme points: {count} ({maxima} maxima, {minima} minima)");
            } else {
                let _ = writeln!(s, "extreme points: {count}");
            }
            let _ = writeln!(s, "residuals:");
            for (name, r) in &set.residuals {
                let _ = writeln!(s, "  {name}: {}", fmt_g17(*r));
            }
            if !closed.is_empty() {
                let _ = writeln!(s, "closed forms:");
                for c in &closed {
                    let flag = if c.suspected_erratum { "SUSPECTED ERRATUM" } else { "ok" };
                    let _ = writeln!(
                        s,
                        "  {} printed {:.10} nearest root x{n}{} {:.10} deviation {:.3e} {flag}",
                        c.label, c.printed, c.nearest_index, c.certified, c.deviation
                    );
                }
            }
            s
        }
    };
    io.emit(args.out.as_deref(), &doc)?;
    Ok(EXIT_OK)
}

fn cmd_optimize(args: OptimizeArgs, io: &mut Io) -> CmdResult {
    let n = args.n as usize;
    let cfg = OptimizerConfig {
        seed: args.seed,
        restarts: args.restarts as usize,
        ..OptimizerConfig::new(n)
    };
    let traces = run_restarts(&cfg, false)?;
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        for t in &traces {
            std::fs::write(dir.join(format!("trace_seed_{}.csv", t.seed)), t.to_csv())?;
        }
    }
    let best = best_converged(traces)?;
    let analytic = solve_extrema(n)?.extreme_value;
    let gap = (best.final_value.abs() - analytic).abs() / analytic;
    let point: Vec<String> = best.final_point.iter().map(|&x| fmt_g17(x)).collect();
    let out = &mut *io.out;
    writeln!(out, "n: {n}")?;
    writeln!(out, "best seed: {}", best.seed)?;
    writeln!(out, "best point: [{}]", point.join(", "))?;
    writeln!(out, "best value: {}", fmt_g17(best.final_value))?;
    writeln!(out, "analytic value: {}", fmt_g17(analytic))?;
    writeln!(out, "relative gap: {}", fmt_g17(gap))?;
    writeln!(out, "equi residual: {}", fmt_g17(equi_residual(&best.final_point)?))?;
    Ok(if gap < OPTIMIZE_REL_GAP { EXIT_OK } else { EXIT_NUMERIC })
}

fn cmd_grid(args: GridArgs, io: &mut Io) -> CmdResult {
    let (w, h) = args.res.unwrap_or((DEFAULT_THETA_COUNT, DEFAULT_PHI_COUNT));
    let grid = grid_eval(args.n as usize, w, h, args.exponents)?;
    let data = match args.format {
        GridFormat::Csv => grid.to_csv(),
        GridFormat::Json => {
            let mut s = grid.to_json();
            s.push('\n');
            s
        }
    };
    io.emit(args.out.as_deref(), &data)?;
    let (max, min) = (grid.max(), grid.min());
    let s = io.summary(args.out.is_some());
    writeln!(s, "transform: {}", grid.transform.label)?;
    writeln!(s, "max {} at theta {} phi {}", fmt_g17(max.value), fmt_g17(max.theta), fmt_g17(max.phi))?;
    writeln!(s, "min {} at theta {} phi {}", fmt_g17(min.value), fmt_g17(min.theta), fmt_g17(min.phi))?;
    if grid.exponents.is_some() {
        for band in grid.extra_zero_bands() {
            writeln!(
                s,
                "zero-crossing band at sum x = {} (spread {}, {} edges)",
                fmt_g17(band.mean_sum),
                fmt_g17(band.spread),
                band.edges
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn complex_inputs(io: &NodesExponents) -> Result<(NodeVector<Complex64>, ExponentVector<Complex64>), Error> {
    let x = NodeVector::new(io.nodes.clone())?.to_complex();
    let a = ExponentVector::new(io.exponents.clone())?.to_complex();
    Ok((x, a))
}

fn cmd_limits(case: LimitsCase, io: &mut Io) -> CmdResult {
    let branch = LogBranch::PRINCIPAL;
    let (csv, final_error, threshold, path, note) = match case {
        LimitsCase::Factorize { io: inputs, k } => {
            let (x, a) = complex_inputs(&inputs)?;
            let exact = build_generalized(&x, &a, branch)?;
            let reference: Complex64 = exact.as_slice().iter().sum();
            let mut rows = Vec::new();
            for kk in 1..=k as usize {
                let approx = truncated_factorization(&x, &a, kk, branch)?;
                rows.push(ConvergenceRow {
                    key: kk as f64,
                    approximation: approx.as_slice().iter().sum(),
                    reference,
                    abs_error: approx.max_abs_diff(&exact)?,
                });
            }
            let bound = factorization_error_bound(&x, &a, k as usize, branch)?;
            let bound = bound.as_slice().iter().copied().fold(0.0, f64::max);
            let final_error = rows.last().map_or(f64::NAN, |r| r.abs_error);
            let note = format!("max entry error at k = {k}; tail bound {}", fmt_g17(bound));
            (convergence_csv("k", rows), final_error, FACTORIZE_TOL, inputs.out, note)
        }
        LimitsCase::Minors { io: inputs, big_k } => {
            let (x, a) = complex_inputs(&inputs)?;
            let reference = det_general(&build_generalized(&x, &a, branch)?)?;
            let sums = minor_series_gn(&x, &a, big_k as usize, branch)?;
            let n = x.len();
            let rows: Vec<ConvergenceRow> = sums
                .iter()
                .enumerate()
                .map(|(i, &s)| ConvergenceRow {
                    key: (n + i) as f64,
                    approximation: s,
                    reference,
                    abs_error: (s - reference).norm(),
                })
                .collect();
            let final_error = rows.last().map_or(f64::NAN, |r| r.abs_error);
            let note = format!("partial sum error at K = {big_k}");
            (convergence_csv("k", rows), final_error, MINORS_TOL, inputs.out, note)
        }
        LimitsCase::Ratio { io: inputs } => {
            let (x, a) = complex_inputs(&inputs)?;
            let report = ratio_limit(&x, &a, &default_t_schedule(), branch)?;
            let tail = report.error_ratios();
            let tail = &tail[tail.len().saturating_sub(10)..];
            let first_order = !tail.is_empty() && tail.iter().all(|r| (1.5..=2.5).contains(r));
            let note = format!(
                "relative error at smallest t; limit {}; first-order convergence {}",
                fmt_g17(report.rhs.re),
                if first_order { "confirmed" } else { "not confirmed" }
            );
            (report.to_csv(), report.final_relative_error(), RATIO_REL_TOL, inputs.out, note)
        }
    };
    io.emit(path.as_deref(), &csv)?;
    let s = io.summary(path.is_some());
    writeln!(s, "final error: {} ({note})", fmt_g17(final_error))?;
    writeln!(s, "threshold: {}", fmt_g17(threshold))?;
    Ok(if final_error < threshold { EXIT_OK } else { EXIT_NUMERIC })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_tokens() {
        assert_eq!(parse_real("e").unwrap(), std::f64::consts::E);
        assert_eq!(parse_real("-e").unwrap(), -std::f64::consts::E);
        assert_eq!(parse_real("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_real("-1/2").unwrap(), -0.5);
        assert_eq!(parse_real("e/2").unwrap(), std::f64::consts::E / 2.0);
        assert_eq!(parse_real("2.5").unwrap(), 2.5);
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("x").is_err());
        assert!(parse_real("inf").is_err());
    }

    #[test]
    fn resolution_tokens() {
        assert_eq!(parse_resolution("720x360").unwrap(), (720, 360));
        assert!(parse_resolution("1x5").is_err());
        assert!(parse_resolution("720").is_err());
    }

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("vandermonde").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn extrema_three_text() {
        let (code, out, _) = run_capture(&["extrema", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("roots: -0.7071067812 0.0000000000 0.7071067812"));
        assert!(out.contains("extreme value: 0.7071067812"));
        assert!(out.contains("6 (3 maxima, 3 minima)"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["extrema", "1"]).0, 1);
        assert_eq!(run_capture(&["grid", "8"]).0, 1);
        assert_eq!(run_capture(&["grid", "4", "--exponents", "0,1,2"]).0, 1);
        assert_eq!(run_capture(&["extrema", "3", "--bogus"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn zero_node_is_usage_error() {
        let (code, _, err) = run_capture(&["limits", "ratio", "--nodes", "0,2", "--exponents", "0,1"]);
        assert_eq!(code, 1);
        assert!(err.contains("zero"));
    }
}
