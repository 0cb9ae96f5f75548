//! Command-line front end for the `ecc` binary.
//!
//! Exit codes: 0 success, 2 usage, 3 parse, 4 validation, 5 resource budget.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::collection::{Field, Normalization, UnitVectorCollection, Vectors};
use crate::energy::{self, DiscreteMeasure, EnergyKind, EnergyResult, PhaseConfig};
use crate::error::{Error, Result};
use crate::optimize::{self, OptimizeConfig};
use crate::series;
use crate::sphere::RngSeed;
use crate::welch;

#[derive(Debug, Parser)]
#[command(
    name = "ecc",
    version,
    about = "Welch bounds, frame potentials and sphere energies"
)]
pub struct Cli {
    /// Output format (default: json, except `series` which defaults to csv).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "ECC_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Welch and improved bounds for m vectors in dimension n.
    Bounds(BoundsArgs),
    /// Coherence, frame potentials and gaps of a collection file.
    Eval(EvalArgs),
    /// Minimize the 2k-frame potential over m unit vectors in R^n.
    Optimize(OptimizeArgs),
    /// Geodesic or Euclidean energy of a measure on the sphere.
    Energy(EnergyArgs),
    /// Taylor coefficients at 0 as CSV.
    Series(SeriesArgs),
    /// Uniform vs antipodal energies across exponents.
    Phase(PhaseArgs),
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "k-max", default_value_t = 1)]
    pub k_max: usize,
    #[arg(long, value_enum, default_value = "real")]
    pub field: FieldArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// CSV or JSON collection file, `-` for stdin.
    #[arg(long)]
    pub input: String,
    #[arg(long = "k-max", default_value_t = 1)]
    pub k_max: usize,
    /// Rescale non-unit vectors instead of rejecting them.
    #[arg(long)]
    pub renormalize: bool,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "max-iters", default_value_t = 20_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    #[arg(long = "tol-grad", default_value_t = 1e-10)]
    pub tol_grad: f64,
    /// Collection file used as the first restart.
    #[arg(long = "warm-start")]
    pub warm_start: Option<String>,
    #[arg(long)]
    pub renormalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Uniform,
    Antipodal,
    File,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[arg(long, value_enum)]
    pub kind: EnergyKind,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    pub measure: MeasureArg,
    /// Collection file for `--measure file`.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub renormalize: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesFunction {
    /// arccos(t)
    Arccos,
    /// arccos(t)^delta
    ArccosPow,
    /// (2 - 2t)^(delta/2)
    EuclidPow,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, value_enum)]
    pub function: SeriesFunction,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 10)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[arg(long, value_enum)]
    pub kind: EnergyKind,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Comma-separated exponents in (0, 4].
    #[arg(long, value_delimiter = ',', required = true)]
    pub deltas: Vec<f64>,
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 8)]
    pub candidates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut input = Vec::new();
    if reads_stdin(&cli.command) {
        if let Err(e) = stdin.read_to_end(&mut input) {
            let _ = writeln!(stderr, "error: {e}");
            return 3;
        }
    }
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cli, &mut input.as_slice())),
            Err(e) => Err(Error::invalid(format!("cannot build thread pool: {e}"))),
        },
        None => execute(&cli, &mut input.as_slice()),
    };
    match result.and_then(|out| stdout.write_all(out.as_bytes()).map_err(Error::from)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point used by the binary.
pub fn run_from_env() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdin(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}

fn reads_stdin(command: &Command) -> bool {
    match command {
        Command::Eval(a) => a.input == "-",
        Command::Optimize(a) => a.warm_start.as_deref() == Some("-"),
        Command::Energy(a) => a.input.as_deref() == Some("-"),
        _ => false,
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<String> {
    let format = cli.format;
    match &cli.command {
        Command::Bounds(a) => cmd_bounds(a, format.unwrap_or(Format::Json)),
        Command::Eval(a) => cmd_eval(a, format.unwrap_or(Format::Json), stdin),
        Command::Optimize(a) => cmd_optimize(a, format.unwrap_or(Format::Json), stdin),
        Command::Energy(a) => cmd_energy(a, format.unwrap_or(Format::Json), stdin),
        Command::Series(a) => cmd_series(a, format.unwrap_or(Format::Csv)),
        Command::Phase(a) => cmd_phase(a, format.unwrap_or(Format::Json)),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::invalid(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn cmd_bounds(a: &BoundsArgs, format: Format) -> Result<String> {
    let rows = welch::bounds_table(a.m, a.n, a.k_max, a.field.into())?;
    match format {
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(
            &[
                "k",
                "classical_bound",
                "improved_bound",
                "scaled_bound",
                "classical_cmax_power",
                "classical_cmax",
                "improved_cmax_power",
                "improved_cmax",
            ],
            rows.iter().map(|r| {
                vec![
                    r.k.to_string(),
                    r.classical_bound.to_string(),
                    opt(r.improved_bound),
                    r.scaled_bound.to_string(),
                    opt(r.classical_cmax.map(|c| c.power)),
                    opt(r.classical_cmax.map(|c| c.cmax)),
                    opt(r.improved_cmax.map(|c| c.power)),
                    opt(r.improved_cmax.map(|c| c.cmax)),
                ]
            }),
        ),
    }
}

pub fn cmd_eval(a: &EvalArgs, format: Format, stdin: &mut dyn Read) -> Result<String> {
    let z = load_collection(&a.input, normalization(a.renormalize), stdin)?;
    let reports = welch::evaluate(&z, a.k_max)?;
    match format {
        Format::Json => to_json(&reports),
        Format::Csv => to_csv(
            &[
                "k",
                "potential",
                "scaled_potential",
                "coherence",
                "classical_bound",
                "improved_bound",
                "potential_gap",
                "coherence_gap",
            ],
            reports.iter().map(|r| {
                vec![
                    r.bounds.k.to_string(),
                    r.potential.to_string(),
                    r.scaled_potential.to_string(),
                    r.coherence.to_string(),
                    r.bounds.classical_bound.to_string(),
                    opt(r.bounds.improved_bound),
                    r.potential_gap.to_string(),
                    r.coherence_gap.to_string(),
                ]
            }),
        ),
    }
}

pub fn cmd_optimize(a: &OptimizeArgs, format: Format, stdin: &mut dyn Read) -> Result<String> {
    let config = OptimizeConfig {
        m: a.m,
        n: a.n,
        k: a.k,
        restarts: a.restarts,
        max_iters: a.max_iters,
        step: a.step,
        tol_grad: a.tol_grad,
        seed: RngSeed::new(a.seed),
    };
    let result = match &a.warm_start {
        Some(path) => {
            let start = load_collection(path, normalization(a.renormalize), stdin)?;
            optimize::minimize_from(&config, &start)?
        }
        None => optimize::minimize_potential(&config)?,
    };
    match format {
        Format::Json => to_json(&result),
        Format::Csv => to_csv(
            &[
                "m",
                "n",
                "k",
                "potential",
                "scaled_potential",
                "bound",
                "gap",
                "iterations",
                "converged",
            ],
            [vec![
                result.m.to_string(),
                result.n.to_string(),
                result.k.to_string(),
                result.potential.to_string(),
                result.scaled_potential.to_string(),
                result.bound.to_string(),
                result.gap.to_string(),
                result.iterations.to_string(),
                result.converged.to_string(),
            ]],
        ),
    }
}

#[derive(Debug, Serialize)]
struct EnergyReport {
    kind: EnergyKind,
    delta: f64,
    n: usize,
    measure: &'static str,
    #[serde(flatten)]
    result: EnergyResult,
}

pub fn cmd_energy(a: &EnergyArgs, format: Format, stdin: &mut dyn Read) -> Result<String> {
    let (n, measure, result) = match a.measure {
        MeasureArg::Uniform => (
            a.n,
            "uniform",
            energy::uniform_energy(a.n, a.kind, a.delta, a.samples, RngSeed::new(a.seed))?,
        ),
        MeasureArg::Antipodal => {
            let mu = DiscreteMeasure::antipodal_axis(a.n)?;
            (a.n, "antipodal", energy::energy(&mu, a.kind, a.delta)?)
        }
        MeasureArg::File => {
            let path = a
                .input
                .as_deref()
                .ok_or_else(|| Error::invalid("--measure file requires --input"))?;
            let mu = DiscreteMeasure::from_collection(load_collection(
                path,
                normalization(a.renormalize),
                stdin,
            )?)?;
            (mu.dim(), "file", energy::energy(&mu, a.kind, a.delta)?)
        }
    };
    let report = EnergyReport {
        kind: a.kind,
        delta: a.delta,
        n,
        measure,
        result,
    };
    match format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv(
            &[
                "kind",
                "delta",
                "n",
                "measure",
                "value",
                "method",
                "error_bound",
            ],
            [vec![
                format!("{:?}", a.kind).to_lowercase(),
                a.delta.to_string(),
                n.to_string(),
                measure.to_string(),
                result.value.to_string(),
                serde_json::to_value(result.method)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
                result.error_bound.to_string(),
            ]],
        ),
    }
}

pub fn cmd_series(a: &SeriesArgs, format: Format) -> Result<String> {
    let s = match a.function {
        SeriesFunction::Arccos => series::series_arccos(a.order),
        SeriesFunction::ArccosPow => series::series_compose_pow_arccos(a.delta, a.order)?,
        SeriesFunction::EuclidPow => series::series_chord_pow(a.delta, a.order)?,
    };
    match format {
        Format::Csv => to_csv(
            &["k", "coefficient"],
            s.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| vec![k.to_string(), c.to_string()]),
        ),
        Format::Json => {
            to_json(&serde_json::json!({ "order": a.order, "coefficients": s.coeffs() }))
        }
    }
}

pub fn cmd_phase(a: &PhaseArgs, format: Format) -> Result<String> {
    let config = PhaseConfig {
        samples: a.samples,
        candidates: a.candidates,
        seed: RngSeed::new(a.seed),
        ..PhaseConfig::default()
    };
    let rows = energy::phase_transition_experiment(a.kind, a.n, &a.deltas, config)?;
    match format {
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(
            &[
                "delta",
                "uniform",
                "uniform_stderr",
                "antipodal",
                "best_candidate",
                "symmetric_spread",
                "winner",
            ],
            rows.iter().map(|r| {
                vec![
                    r.delta.to_string(),
                    r.uniform.to_string(),
                    r.uniform_stderr.to_string(),
                    r.antipodal.to_string(),
                    r.best_candidate.to_string(),
                    r.symmetric_spread.to_string(),
                    format!("{:?}", r.winner).to_lowercase(),
                ]
            }),
        ),
    }
}

fn normalization(renormalize: bool) -> Normalization {
    if renormalize {
        Normalization::Renormalize
    } else {
        Normalization::Strict
    }
}

/// Reads a collection from a path (or `-` for stdin).
pub fn load_collection(
    path: &str,
    normalization: Normalization,
    stdin: &mut dyn Read,
) -> Result<UnitVectorCollection> {
    let text = if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    let is_json = Path::new(path)
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('{');
    if is_json {
        parse_json_collection(&text, normalization)
    } else {
        parse_csv_collection(&text, normalization)
    }
}

/// One real vector per row; a non-numeric first row is taken as a header.
pub fn parse_csv_collection(
    text: &str,
    normalization: Normalization,
) -> Result<UnitVectorCollection> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        let row = match parsed {
            Ok(r) => r,
            Err(_) if i == 0 => continue, // header
            Err(e) => {
                return Err(Error::Parse {
                    line,
                    message: format!("non-numeric entry: {e}"),
                })
            }
        };
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {w} columns, found {}", row.len()),
                })
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "no vectors found".into(),
        });
    }
    UnitVectorCollection::new(Vectors::Real(rows), None, normalization)
}

/// `{"field": "real"|"complex", "vectors": [[...]], "weights": [...]}`;
/// complex entries are `[re, im]` pairs.
pub fn parse_json_collection(
    text: &str,
    normalization: Normalization,
) -> Result<UnitVectorCollection> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let bad = |message: String| Error::Parse { line: 0, message };
    let field = match v.get("field").and_then(Value::as_str) {
        None | Some("real") => Field::Real,
        Some("complex") => Field::Complex,
        Some(other) => return Err(bad(format!("unknown field {other:?}"))),
    };
    let rows = v
        .get("vectors")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"vectors\" array".into()))?;
    let number = |x: &Value, at: String| {
        x.as_f64()
            .ok_or_else(|| bad(format!("{at}: expected a number")))
    };
    let vectors = match field {
        Field::Real => Vectors::Real(
            rows.iter()
                .enumerate()
                .map(|(i, r)| {
                    let r = r
                        .as_array()
                        .ok_or_else(|| bad(format!("vectors[{i}] is not an array")))?;
                    r.iter()
                        .enumerate()
                        .map(|(j, x)| number(x, format!("vectors[{i}][{j}]")))
                        .collect()
                })
                .collect::<Result<_>>()?,
        ),
        Field::Complex => Vectors::Complex(
            rows.iter()
                .enumerate()
                .map(|(i, r)| {
                    let r = r
                        .as_array()
                        .ok_or_else(|| bad(format!("vectors[{i}] is not an array")))?;
                    r.iter()
                        .enumerate()
                        .map(|(j, c)| match c.as_array().map(Vec::as_slice) {
                            Some([re, im]) => Ok(Complex64::new(
                                number(re, format!("vectors[{i}][{j}][0]"))?,
                                number(im, format!("vectors[{i}][{j}][1]"))?,
                            )),
                            _ => Err(bad(format!("vectors[{i}][{j}]: expected [re, im]"))),
                        })
                        .collect()
                })
                .collect::<Result<_>>()?,
        ),
    };
    if let Some(i) = match &vectors {
        Vectors::Real(r) => first_ragged(r.iter().map(Vec::len)),
        Vectors::Complex(r) => first_ragged(r.iter().map(Vec::len)),
    } {
        return Err(bad(format!(
            "vectors[{i}] has a different length from vectors[0]"
        )));
    }
    let weights = match v.get("weights") {
        None | Some(Value::Null) => None,
        Some(Value::Array(w)) => Some(
            w.iter()
                .enumerate()
                .map(|(i, x)| number(x, format!("weights[{i}]")))
                .collect::<Result<Vec<_>>>()?,
        ),
        Some(_) => return Err(bad("\"weights\" must be an array".into())),
    };
    UnitVectorCollection::new(vectors, weights, normalization)
}

fn first_ragged(mut lens: impl Iterator<Item = usize>) -> Option<usize> {
    let first = lens.next()?;
    lens.position(|l| l != first).map(|p| p + 1)
}
