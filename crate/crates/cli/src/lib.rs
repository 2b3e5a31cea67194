//! Command-line front end for the `qmbead` multiplier.
//!
//! [`run`] takes an argument list and returns captured output plus an exit
//! code, so the binary and the tests share one code path.

pub mod record;
pub mod table;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qmbead::adder::{build_adder, estimate_resources, AdderVersion};
use qmbead::cases::REFERENCE_CASES;
use qmbead::codec::ScaleBase;
use qmbead::pipeline::{
    plan_shots, prepare, run_prepared, Anchor, Mode, MultiplyConfig, Prepared, ReconstructionResult,
    DEFAULT_C0,
};
use qmbead::PipelineError;

use record::{histogram_entries, RunRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qmbead", version, about = "Multiply integers and decimals with a simulated exponent-state adder")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply two numbers and print the product.
    Multiply(MultiplyArgs),
    /// Emit the sum-register histogram with reconstructed coefficients.
    Distribution(DistributionArgs),
    /// Qubit and depth tables, qubit scatter data, or the shot curve.
    Resources(ResourcesArgs),
    /// Re-run the sixteen reference multiplications.
    #[command(name = "reproduce-table2")]
    ReproduceTable2(ReproduceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(allow_hyphen_values = true)]
    pub u: String,
    #[arg(allow_hyphen_values = true)]
    pub v: String,
    #[arg(long, default_value = "v1")]
    pub adder: AdderVersion,
    /// Reconstruct from exact probabilities instead of sampled counts.
    #[arg(long, conflicts_with_all = ["shots", "c0"])]
    pub exact: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_C0, value_parser = clap::value_parser!(u64).range(1..))]
    pub c0: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "10")]
    pub scale_base: ScaleBase,
    /// Check the product classically; exit 2 on mismatch.
    #[arg(long)]
    pub verify: bool,
    /// Unit-coefficient estimate: `min` uses the rarest count as is.
    #[arg(long, default_value = "refined")]
    pub anchor: Anchor,
    /// Write the adder circuit in text form to PATH.
    #[arg(long, value_name = "PATH")]
    pub dump_circuit: Option<PathBuf>,
}

impl RunArgs {
    pub fn config(&self) -> MultiplyConfig {
        MultiplyConfig {
            adder_version: self.adder,
            mode: if self.exact { Mode::Exact } else { Mode::Sampled },
            shots: self.shots,
            c0: self.c0,
            seed: self.seed,
            scale_base: self.scale_base,
            verify: self.verify,
            anchor: self.anchor,
            allow_negative: true,
        }
    }
}

#[derive(Debug, Args)]
pub struct MultiplyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ResourcesArgs {
    #[arg(long, conflicts_with = "k_range")]
    pub k: Option<u64>,
    /// Inclusive range such as `1..8`.
    #[arg(long, value_parser = parse_range)]
    pub k_range: Option<RangeInclusive<u64>>,
    /// Restrict to one adder; both by default.
    #[arg(long)]
    pub adder: Option<AdderVersion>,
    /// Report serial depth instead of overlapping rotations.
    #[arg(long)]
    pub serial: bool,
    /// Product bit length against qubit count for the reference cases.
    #[arg(long, conflicts_with_all = ["k", "k_range", "shots_curve"])]
    pub scatter: bool,
    /// Planned shots over a range of operand bit lengths.
    #[arg(long, requires = "nm", conflicts_with_all = ["k", "k_range"])]
    pub shots_curve: bool,
    #[arg(long, value_parser = parse_range)]
    pub nm: Option<RangeInclusive<u64>>,
    #[arg(long, default_value_t = DEFAULT_C0)]
    pub c0: u64,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Comma-separated ids or ranges, e.g. `1-6,13,16`.
    #[arg(long, value_parser = table::parse_rows)]
    pub rows: Option<table::RowSelection>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value = "refined")]
    pub anchor: Anchor,
}

pub fn parse_range(text: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = text
        .split_once("..=")
        .or_else(|| text.split_once(".."))
        .ok_or_else(|| format!("expected A..B, got {text:?}"))?;
    let a: u64 = a.trim().parse().map_err(|_| format!("bad range start in {text:?}"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("bad range end in {text:?}"))?;
    if a == 0 || a > b {
        return Err(format!("range {text:?} must satisfy 1 <= A <= B"));
    }
    Ok(a..=b)
}

/// Captured result of one invocation.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn usage(message: impl std::fmt::Display) -> Self {
        Output {
            stderr: format!("error: {message}\n"),
            code: EXIT_USAGE,
            ..Default::default()
        }
    }
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    stderr: text,
                    code: EXIT_USAGE,
                    ..Default::default()
                }
            } else {
                Output {
                    stdout: text,
                    ..Default::default()
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Multiply(a) => cmd_multiply(a),
        Command::Distribution(a) => cmd_distribution(a),
        Command::Resources(a) => cmd_resources(a),
        Command::ReproduceTable2(a) => table::cmd_reproduce(a),
    };
    result.unwrap_or_else(|e| Output::usage(format!("{e:#}")))
}

/// A finished run, whether or not verification passed.
pub struct Executed {
    pub prepared: Prepared,
    pub config: MultiplyConfig,
    pub result: ReconstructionResult,
    pub mismatch: Option<String>,
    pub wall_ms: f64,
}

impl Executed {
    pub fn record(&self) -> RunRecord {
        RunRecord::new(&self.prepared, &self.config, &self.result, self.wall_ms)
    }

    fn code(&self) -> i32 {
        if self.mismatch.is_some() {
            EXIT_MISMATCH
        } else {
            EXIT_OK
        }
    }
}

pub fn execute(args: &RunArgs) -> anyhow::Result<Executed> {
    let config = args.config();
    let prepared = prepare(&args.u, &args.v, &config)?;
    if let Some(path) = &args.dump_circuit {
        let plan = prepared
            .plan
            .as_ref()
            .context("a zero operand short-circuits, so there is no circuit to dump")?;
        std::fs::write(path, plan.circuit.dump())
            .with_context(|| format!("writing circuit to {}", path.display()))?;
    }
    let start = Instant::now();
    let outcome = run_prepared(&prepared, &config);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let (result, mismatch) = match outcome {
        Ok(r) => (r, None),
        Err(e @ PipelineError::ReconstructionMismatch { .. }) => {
            let message = e.to_string();
            let PipelineError::ReconstructionMismatch { result, .. } = e else {
                unreachable!()
            };
            (*result, Some(message))
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Executed {
        prepared,
        config,
        result,
        mismatch,
        wall_ms,
    })
}

fn finish(run: &Executed, stdout: String) -> Output {
    Output {
        stdout,
        stderr: run
            .mismatch
            .as_ref()
            .map(|m| format!("verification failed: {m}\n"))
            .unwrap_or_default(),
        code: run.code(),
    }
}

pub fn cmd_multiply(args: &MultiplyArgs) -> anyhow::Result<Output> {
    let run = execute(&args.run)?;
    let mut out = if args.json {
        run.record().to_json()
    } else {
        run.result.final_value.clone()
    };
    out.push('\n');
    if run.result.low_confidence && !args.json {
        return Ok(Output {
            stderr: "warning: coefficient ratios are far from integers; add shots\n".into(),
            ..finish(&run, out)
        });
    }
    Ok(finish(&run, out))
}

#[derive(Debug, Serialize)]
struct DistributionRow {
    state_bits: String,
    gamma: u64,
    count: u64,
    probability: f64,
    coefficient: u64,
}

pub fn cmd_distribution(args: &DistributionArgs) -> anyhow::Result<Output> {
    let run = execute(&args.run)?;
    let (_, entries) = histogram_entries(&run.prepared, &run.config, &run.result);
    let rows: Vec<DistributionRow> = entries
        .into_iter()
        .map(|h| DistributionRow {
            coefficient: run.result.coefficients.get(&h.gamma).copied().unwrap_or(0),
            state_bits: h.gamma_bits,
            gamma: h.gamma,
            count: h.count,
            probability: h.probability,
        })
        .collect();
    let out = match args.format {
        Format::Csv => to_csv(&rows)?,
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
    };
    Ok(finish(&run, out))
}

fn to_csv<T: Serialize>(rows: &[T]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Debug, Serialize)]
struct ResourceRow {
    k: u64,
    adder: String,
    qubits: u64,
    depth: u64,
    depth_parallel: u64,
    gate_count_serial: u64,
    built_gates: usize,
}

#[derive(Debug, Serialize)]
struct ScatterRow {
    id: u32,
    product_bits: u64,
    qubits: usize,
    reference_bits: u64,
    reference_qubits: usize,
}

#[derive(Debug, Serialize)]
struct ShotRow {
    n_m: u64,
    shots: u64,
}

pub fn cmd_resources(args: &ResourcesArgs) -> anyhow::Result<Output> {
    let stdout = if args.scatter {
        let mut rows = Vec::new();
        for case in &REFERENCE_CASES {
            let prepared = prepare(case.u, case.v, &MultiplyConfig::default())?;
            let plan = prepared.plan.as_ref().context("reference operands are nonzero")?;
            rows.push(ScatterRow {
                id: case.id,
                product_bits: (&prepared.u.mantissa * &prepared.v.mantissa).bits(),
                qubits: plan.qubits(),
                reference_bits: case.bits,
                reference_qubits: case.qubits,
            });
        }
        to_csv(&rows)?
    } else if args.shots_curve {
        let nm = args.nm.clone().context("--shots-curve needs --nm")?;
        let rows: Vec<ShotRow> = nm
            .map(|n_m| ShotRow {
                n_m,
                shots: plan_shots(n_m, n_m, args.c0),
            })
            .collect();
        to_csv(&rows)?
    } else {
        let ks = match (args.k, &args.k_range) {
            (Some(k), _) => k..=k,
            (None, Some(r)) => r.clone(),
            (None, None) => 1..=8,
        };
        if *ks.start() == 0 {
            bail!("k must be at least 1");
        }
        let versions = match args.adder {
            Some(v) => vec![v],
            None => vec![AdderVersion::V1, AdderVersion::V2],
        };
        let mut rows = Vec::new();
        for k in ks {
            for &version in &versions {
                let est = estimate_resources(version, k, !args.serial);
                let width = usize::try_from(k)?;
                rows.push(ResourceRow {
                    k,
                    adder: version.to_string(),
                    qubits: est.qubits,
                    depth: est.depth,
                    depth_parallel: est.depth_parallel,
                    gate_count_serial: est.gate_count_serial,
                    built_gates: build_adder(version, width, width)?.counted_gates(),
                });
            }
        }
        to_csv(&rows)?
    };
    Ok(Output {
        stdout,
        ..Default::default()
    })
}

pub(crate) fn push_line(buf: &mut String, line: std::fmt::Arguments<'_>) {
    buf.write_fmt(line).expect("writing to a String");
    buf.push('\n');
}
