//! The `eorad` command line: compute radii, evaluate bounds, run verification suites.
//!
//! Exit codes: 0 when everything passes, 1 when any inequality record fails,
//! 2 on usage, parse or I/O errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundConfig, BoundReport};
use crate::error::{Error, Result};
use crate::matfun::{CMatrix, SpectralFunctionPair, C64};
use crate::radii::{
    euclidean_radius, numerical_radius, EuclideanRadiusConfig, NumericalRadiusConfig,
    OperatorTuple, RadiusEstimate,
};
use crate::seed::DEFAULT_SEED;
use crate::verify::{
    records_digest, run_named_suite, tightness_report, SuiteName, TightnessReport,
    VerificationRecord,
};

pub const SCHEMA_VERSION: u32 = 1;

/// A `d`-tuple on disk; complex entries are `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleFile {
    pub d: usize,
    pub dim: usize,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl TupleFile {
    pub fn from_tuple(a: &OperatorTuple) -> Self {
        let matrices = a
            .iter()
            .map(|m| m.rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect())
            .collect();
        Self { d: a.d(), dim: a.dim(), matrices }
    }

    pub fn to_tuple(&self) -> Result<OperatorTuple> {
        if self.matrices.len() != self.d {
            return Err(Error::Dimension(format!(
                "header says d = {} but {} matrices are given",
                self.d,
                self.matrices.len()
            )));
        }
        let mut mats = Vec::with_capacity(self.d);
        for (k, m) in self.matrices.iter().enumerate() {
            if m.len() != self.dim {
                return Err(Error::Dimension(format!(
                    "matrices[{k}] has {} rows, expected dim = {}",
                    m.len(),
                    self.dim
                )));
            }
            let mut rows = Vec::with_capacity(self.dim);
            for (i, row) in m.iter().enumerate() {
                if row.len() != self.dim {
                    return Err(Error::Dimension(format!(
                        "matrices[{k}][{i}] has {} entries, expected dim = {}",
                        row.len(),
                        self.dim
                    )));
                }
                for (j, [re, im]) in row.iter().enumerate() {
                    if !re.is_finite() || !im.is_finite() {
                        return Err(Error::Domain(format!("matrices[{k}][{i}][{j}] is not finite")));
                    }
                }
                rows.push(row.iter().map(|&[re, im]| C64::new(re, im)).collect());
            }
            mats.push(CMatrix::from_rows(&rows)?);
        }
        OperatorTuple::new(mats)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("invalid tuple file at line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn read(path: &Path) -> Result<OperatorTuple> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)?.to_tuple()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tuple file serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComputeResult {
    pub euclidean_radius: RadiusEstimate,
    pub tuple_norm: f64,
    pub sandwich_lower: f64,
    pub numerical_radii: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub suite: String,
    pub trials: usize,
    pub record_count: usize,
    pub failures: usize,
    pub records_digest: String,
    pub summary: TightnessReport,
    pub records: Vec<VerificationRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ReportBody {
    Compute(ComputeResult),
    Bounds { euclidean_radius: f64, reports: Vec<BoundReport> },
    Verify(VerifyResult),
}

/// Structured output of every command. Carries no timings so reruns are byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub tool: String,
    pub command: Vec<String>,
    pub seed: u64,
    pub body: ReportBody,
}

impl ReportFile {
    fn new(command: &[String], seed: u64, body: ReportBody) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: format!("eorad {}", env!("CARGO_PKG_VERSION")),
            command: command.to_vec(),
            seed,
            body,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid report file: {e}")))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Unsupported(format!("schema version {}", r.schema_version)));
        }
        Ok(r)
    }
}

#[derive(Parser, Debug)]
#[command(name = "eorad", version, about = "Euclidean operator radius of matrix tuples: radii, bounds, verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// w_e, tuple norm and per-entry numerical radii of a tuple file.
    Compute(ComputeArgs),
    /// Every single-tuple bound on w_e, with its ratio to the computed w_e.
    Bounds(BoundsArgs),
    /// Run a seeded verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Random restarts of the w_e optimizer.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
}

impl RadiusArgs {
    fn config(&self) -> EuclideanRadiusConfig {
        EuclideanRadiusConfig { restarts: self.restarts, ..EuclideanRadiusConfig::with_seed(self.seed) }
    }
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub radius: RadiusArgs,
    /// Print a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Function pair: `sqrt` or `power:<alpha>`.
    #[arg(long, default_value = "sqrt")]
    pub fg: String,
    /// Sweep t and α over {0, 0.1, …, 1}.
    #[arg(long)]
    pub all: bool,
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// lemmas, bounds, blockmat or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write records to a `.csv` file or a JSON report (any other extension).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// At least six significant digits.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || (1e-3..1e9).contains(&v.abs()) {
        format!("{v:.9}")
    } else {
        format!("{v:.8e}")
    }
}

fn compute(args: &ComputeArgs) -> Result<ComputeResult> {
    let a = TupleFile::read(&args.input)?;
    let we = euclidean_radius(&a, &args.radius.config())?;
    let numerical_radii = a
        .iter()
        .map(|m| numerical_radius(m, &NumericalRadiusConfig::default()).map(|r| r.value))
        .collect::<Result<_>>()?;
    let s = bounds::sandwich(&a);
    Ok(ComputeResult { euclidean_radius: we, tuple_norm: s.upper, sandwich_lower: s.lower, numerical_radii })
}

fn bound_reports(args: &BoundsArgs, a: &OperatorTuple) -> Result<Vec<BoundReport>> {
    let cfg = BoundConfig { radius: args.radius.config(), ..BoundConfig::default() };
    let fg = SpectralFunctionPair::parse(&args.fg)?;
    if !args.all {
        return bounds::all_tuple_bounds(a, args.t, args.alpha, &fg, &cfg);
    }
    let grid = bounds::default_parameter_grid();
    let mut out = bounds::sandwich_reports(a)?[..1].to_vec();
    out.push(bounds::abstract_bound(a)?);
    for &t in &grid {
        out.extend(bounds::polar_power_bounds(a, t, &cfg)?);
        out.extend(bounds::imaginary_combo_bound(a, t, &cfg)?);
        out.extend(bounds::fg_polar_bounds(a, t, &fg, &cfg)?);
        out.push(bounds::quarter_polar_bound(a, t, &cfg)?);
        for &alpha in &grid {
            out.extend(bounds::remark_bound(a, alpha, t, &cfg)?);
        }
    }
    Ok(out)
}

fn print_compute(out: &mut dyn Write, r: &ComputeResult) -> std::io::Result<()> {
    let we = &r.euclidean_radius;
    writeln!(out, "w_e          {}  (certified lower bound, attained at the reported unit vector)", fmt_num(we.value))?;
    writeln!(out, "  method     {}, {} restarts, {} iterations", we.method, we.restarts, we.iterations)?;
    writeln!(out, "tuple norm   {}", fmt_num(r.tuple_norm))?;
    writeln!(out, "lower bound  {}  (norm / (2 sqrt d))", fmt_num(r.sandwich_lower))?;
    for (k, w) in r.numerical_radii.iter().enumerate() {
        writeln!(out, "w(A_{})       {}", k + 1, fmt_num(*w))?;
    }
    Ok(())
}

fn param_label(r: &BoundReport) -> String {
    let mut parts: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    if let Some(fg) = &r.function_pair {
        parts.push(format!("fg={fg}"));
    }
    parts.join(",")
}

fn print_bounds(out: &mut dyn Write, we: f64, reports: &[BoundReport]) -> std::io::Result<()> {
    writeln!(out, "w_e = {}", fmt_num(we))?;
    writeln!(out, "{:<24} {:<28} {:>18} {:>14}", "bound_id", "params", "value", "w_e/value")?;
    for r in reports {
        let ratio = if r.value > 0.0 { we / r.value } else { 1.0 };
        writeln!(out, "{:<24} {:<28} {:>18} {:>14}", r.bound_id.name(), param_label(r), fmt_num(r.value), fmt_num(ratio))?;
    }
    Ok(())
}

/// Writes records as CSV with columns bound_id, trial_seed, lhs, rhs, slack, pass.
pub fn write_records_csv(path: &Path, records: &[VerificationRecord]) -> Result<()> {
    let io = |e: csv::Error| Error::Config(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["bound_id", "trial_seed", "lhs", "rhs", "slack", "pass"]).map_err(io)?;
    for r in records {
        w.write_record([
            r.bound_id.name().to_string(),
            r.trial_seed.to_string(),
            format!("{:e}", r.lhs),
            format!("{:e}", r.rhs),
            format!("{:e}", r.slack),
            r.pass.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn verify(args: &VerifyArgs) -> Result<VerifyResult> {
    let suite: SuiteName = args.suite.parse()?;
    if args.trials < 1 {
        return Err(Error::Config("--trials must be >= 1".into()));
    }
    let records = run_named_suite(suite, args.trials, args.seed)?;
    Ok(VerifyResult {
        suite: suite.to_string(),
        trials: args.trials,
        record_count: records.len(),
        failures: records.iter().filter(|r| !r.pass).count(),
        records_digest: records_digest(&records),
        summary: tightness_report(&records)?,
        records,
    })
}

fn print_verify(out: &mut dyn Write, v: &VerifyResult) -> std::io::Result<()> {
    writeln!(out, "suite {} · {} trials · {} records · {} failures", v.suite, v.trials, v.record_count, v.failures)?;
    writeln!(out, "{}", v.summary.policy)?;
    writeln!(out, "{:<24} {:>7} {:>6} {:>12} {:>12} {:>12} {:>9}", "bound_id", "count", "fail", "mean ratio", "median", "min", "equality")?;
    for (id, s) in &v.summary.per_bound {
        writeln!(
            out,
            "{:<24} {:>7} {:>6} {:>12.6} {:>12.6} {:>12.6} {:>9}",
            id, s.count, s.failures, s.mean_ratio, s.median_ratio, s.min_ratio, s.equality_count
        )?;
    }
    for r in v.records.iter().filter(|r| !r.pass) {
        writeln!(
            out,
            "FAIL {} trial {} seed {} lhs {} rhs {} slack {}",
            r.bound_id,
            r.trial,
            r.trial_seed,
            fmt_num(r.lhs),
            fmt_num(r.rhs),
            fmt_num(r.slack)
        )?;
    }
    writeln!(out, "records digest {}", v.records_digest)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

/// Runs the CLI on `argv` (program name first), writing to `out`/`err`; returns the exit code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let command = argv.to_vec();
    let started = Instant::now();
    let res: Result<i32> = (|| match &cli.command {
        Command::Compute(args) => {
            let r = compute(args)?;
            if args.json {
                let rep = ReportFile::new(&command, args.radius.seed, ReportBody::Compute(r));
                writeln!(out, "{}", rep.to_json()).ok();
            } else {
                print_compute(out, &r).ok();
            }
            Ok(0)
        }
        Command::Bounds(args) => {
            let a = TupleFile::read(&args.input)?;
            let reports = bound_reports(args, &a)?;
            let we = euclidean_radius(&a, &args.radius.config().boosted(4))?.value;
            if args.json {
                let body = ReportBody::Bounds { euclidean_radius: we, reports };
                writeln!(out, "{}", ReportFile::new(&command, args.radius.seed, body).to_json()).ok();
            } else {
                print_bounds(out, we, &reports).ok();
            }
            Ok(0)
        }
        Command::Verify(args) => {
            let v = verify(args)?;
            print_verify(out, &v).ok();
            let code = if v.failures == 0 { 0 } else { 1 };
            if let Some(path) = &args.out {
                if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
                    write_records_csv(path, &v.records)?;
                } else {
                    write_file(path, &ReportFile::new(&command, args.seed, ReportBody::Verify(v)).to_json())?;
                }
            }
            writeln!(err, "elapsed {:.2?}", started.elapsed()).ok();
            Ok(code)
        }
    })();
    match res {
        Ok(code) => code,
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            2
        }
    }
}
