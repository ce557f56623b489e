//! Command-line surface for the ordstat toolkit.
//!
//! Machine-readable JSON goes to the primary stream (stdout or `--output`);
//! human-readable summaries go to stderr. Exit codes: 0 success (or all
//! checks passed), 1 usage error, 2 data or verification failure, 3 normality
//! rejected (`test-normality` only). Seeds are flags only and are echoed in
//! every randomized report, so any printed configuration reruns byte-for-byte.

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ordstat::verify::{self, SuiteOptions};
use ordstat::{independence_test, tstar_table, BaseFunction};

const DEFAULT_SEED: u64 = 20250810;

#[derive(Parser)]
#[command(
    name = "ordstat",
    version,
    about = "Scale statistics on ordered samples: compute, verify, simulate, test"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute statistic values for a sample read from a CSV file.
    Stats(StatsArgs),
    /// Run a named verification suite and emit a report array.
    Verify(VerifyArgs),
    /// Monte Carlo simulations.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Test data for normality via independence of block means and scale.
    TestNormality(TestArgs),
}

#[derive(Args)]
struct StatsArgs {
    /// Input CSV: one numeric value per line, optional header line.
    #[arg(long)]
    input: PathBuf,
    /// Named preset (range | gini | variance); repeatable. Defaults to all three.
    #[arg(long = "preset")]
    presets: Vec<String>,
    /// Path to a base-function descriptor JSON file.
    #[arg(long)]
    statistic: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run: inequalities | transform | density | anosov | all.
    #[arg(long)]
    suite: String,
    /// Sample size for the density and anosov suites (3..=5).
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Random trials per check in the randomized suites.
    #[arg(long, default_value_t = 20_000)]
    trials: usize,
    /// Quadrature cells per axis.
    #[arg(long, default_value_t = 2_000)]
    cells: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SimulateCommand {
    /// Tabulate quantiles of T* = (mean - mu) / Z_n under normal sampling.
    Tstar(TstarArgs),
}

#[derive(Args)]
struct TstarArgs {
    /// Named preset for the studentizing statistic (degree 1).
    #[arg(long, default_value = "range")]
    preset: String,
    /// Path to a base-function descriptor JSON file (overrides --preset).
    #[arg(long)]
    statistic: Option<PathBuf>,
    /// Sample size.
    #[arg(long)]
    n: usize,
    /// Monte Carlo replications (>= 10000).
    #[arg(long, default_value_t = 100_000)]
    reps: usize,
    /// Comma-separated probability levels in (0, 1).
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.025, 0.05, 0.5, 0.95, 0.975])]
    levels: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TestArgs {
    /// Input CSV: one numeric value per line, optional header line.
    #[arg(long)]
    input: PathBuf,
    /// Named preset for the scale statistic.
    #[arg(long, default_value = "gini")]
    preset: String,
    /// Path to a base-function descriptor JSON file (overrides --preset).
    #[arg(long)]
    statistic: Option<PathBuf>,
    /// Block size (>= 3); data splits into disjoint blocks in input order.
    #[arg(long, default_value_t = 5)]
    block: usize,
    /// Permutations (>= 99).
    #[arg(long, default_value_t = 999)]
    permutations: usize,
    /// Rejection level in (0, 1).
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Data(String),
}

impl From<ordstat::Error> for CliError {
    fn from(e: ordstat::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn data_err(msg: impl Into<String>) -> CliError {
    CliError::Data(msg.into())
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Stats(args) => cmd_stats(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Simulate(SimulateCommand::Tstar(args)) => cmd_tstar(args),
        Command::TestNormality(args) => cmd_test_normality(args),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            1
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

// ---------------------------------------------------------------------------
// Input and output plumbing
// ---------------------------------------------------------------------------

/// One numeric value per line; a single non-numeric first line is treated as
/// a header. UTF-8, decimal point only.
fn read_csv(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| data_err(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim_start_matches('\u{feff}').trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if idx == 0 => continue, // header
            Err(_) => {
                return Err(data_err(format!(
                    "{}:{}: not a number: '{line}'",
                    path.display(),
                    idx + 1
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(data_err(format!("{}: no numeric values", path.display())));
    }
    Ok(values)
}

fn emit(value: &serde_json::Value, output: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| data_err(e.to_string()))?;
    match output {
        Some(path) => {
            fs::write(path, format!("{text}\n"))
                .map_err(|e| data_err(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("report written to {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

/// Resolves a statistic: a descriptor file if given, otherwise a preset name.
fn resolve_statistic(
    preset: &str,
    descriptor_path: Option<&Path>,
    n: usize,
) -> Result<BaseFunction, CliError> {
    if let Some(path) = descriptor_path {
        let text = fs::read_to_string(path)
            .map_err(|e| data_err(format!("cannot read {}: {e}", path.display())))?;
        let u = BaseFunction::from_json(&text).map_err(|e| data_err(e.to_string()))?;
        if u.arity() != n {
            return Err(data_err(format!(
                "descriptor arity {} does not match required sample size {n}",
                u.arity()
            )));
        }
        return Ok(u);
    }
    match preset {
        "range" | "gini" | "variance" => {
            BaseFunction::preset(preset, n).map_err(|e| data_err(e.to_string()))
        }
        other => Err(usage(format!(
            "unknown preset '{other}' (expected range | gini | variance)"
        ))),
    }
}

/// Expanded, self-describing echo of a statistic for reports.
fn statistic_echo(u: &BaseFunction) -> serde_json::Value {
    let descriptor = u
        .descriptor()
        .map(|d| serde_json::to_value(&d).unwrap_or(serde_json::Value::Null))
        .unwrap_or(serde_json::Value::Null);
    json!({ "name": u.name(), "descriptor": descriptor })
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_stats(args: StatsArgs) -> Result<i32, CliError> {
    let values = read_csv(&args.input)?;
    let n = values.len();
    let sample = ordstat::OrderedSample::new(&values)?;

    let mut statistics = Vec::new();
    if let Some(path) = &args.statistic {
        statistics.push(resolve_statistic("", Some(path), n)?);
    }
    let presets: Vec<String> = if args.presets.is_empty() && args.statistic.is_none() {
        vec!["range".into(), "gini".into(), "variance".into()]
    } else {
        args.presets.clone()
    };
    for p in &presets {
        statistics.push(resolve_statistic(p, None, n)?);
    }

    let mut echoes = Vec::new();
    let mut value_map = serde_json::Map::new();
    for u in &statistics {
        let value = u.statistic(&sample)?;
        echoes.push(statistic_echo(u));
        value_map.insert(u.name().to_string(), json!(value));
        eprintln!("{} = {value}", u.name());
    }

    let report = json!({
        "command": "stats",
        "input": args.input.display().to_string(),
        "n": n,
        "statistics": echoes,
        "values": serde_json::Value::Object(value_map),
    });
    emit(&report, args.output.as_deref())?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, CliError> {
    let opts = SuiteOptions {
        seed: args.seed,
        trials: args.trials.max(1),
        cells: args.cells,
    };
    if !(3..=5).contains(&args.n) {
        return Err(usage(format!(
            "--n must lie in 3..=5 for the density/anosov suites, got {}",
            args.n
        )));
    }
    let reports = match args.suite.as_str() {
        "inequalities" => verify::inequality_suite(&opts),
        "transform" => verify::transform_suite(&opts),
        "density" => verify::density_suite(args.n, opts.cells)?,
        "anosov" => verify::anosov_suite(args.n, opts.cells)?,
        "all" => {
            let mut all = verify::inequality_suite(&opts);
            all.extend(verify::transform_suite(&opts));
            all.extend(verify::density_suite(args.n, opts.cells)?);
            all.extend(verify::anosov_suite(args.n, opts.cells)?);
            all
        }
        other => {
            return Err(usage(format!(
                "unknown suite '{other}' (expected inequalities | transform | density | anosov | all)"
            )))
        }
    };

    let mut all_passed = true;
    for r in &reports {
        all_passed &= r.passed;
        eprintln!(
            "{:<40} {}  measured {:.3e}  tolerance {:.3e}",
            r.check_name,
            if r.passed { "PASS" } else { "FAIL" },
            r.measured,
            r.tolerance
        );
    }
    let mut array = Vec::new();
    for r in reports {
        let mut v = serde_json::to_value(&r).map_err(|e| data_err(e.to_string()))?;
        if let Some(meta) = v
            .as_object_mut()
            .and_then(|map| map.get_mut("metadata"))
            .and_then(|m| m.as_object_mut())
        {
            meta.insert("suite".into(), json!(args.suite));
            meta.insert("suite_seed".into(), json!(args.seed));
        }
        array.push(v);
    }
    emit(&serde_json::Value::Array(array), args.output.as_deref())?;
    Ok(if all_passed { 0 } else { 2 })
}

fn cmd_tstar(args: TstarArgs) -> Result<i32, CliError> {
    if args.n < 3 {
        return Err(usage("--n must be at least 3"));
    }
    if args.reps < 10_000 {
        return Err(usage("--reps must be at least 10000"));
    }
    if args.levels.iter().any(|p| !(0.0 < *p && *p < 1.0)) {
        return Err(usage("--levels must lie strictly inside (0, 1)"));
    }
    let u = resolve_statistic(&args.preset, args.statistic.as_deref(), args.n)?;
    let u = if (u.degree() - 1.0).abs() > 1e-12 {
        eprintln!(
            "note: '{}' has degree {}; using its degree-1 normalization",
            u.name(),
            u.degree()
        );
        u.unit_degree()
    } else {
        u
    };
    let table = tstar_table(&u, args.n, args.reps, &args.levels, args.seed)?;
    for q in &table.quantiles {
        eprintln!("q[{:.4}] = {}", q.level, q.value);
    }
    let report = json!({
        "command": "simulate-tstar",
        "statistic": statistic_echo(&u),
        "table": serde_json::to_value(&table).map_err(|e| data_err(e.to_string()))?,
    });
    emit(&report, args.output.as_deref())?;
    Ok(0)
}

fn cmd_test_normality(args: TestArgs) -> Result<i32, CliError> {
    if args.block < 3 {
        return Err(usage("--block must be at least 3"));
    }
    if args.permutations < 99 {
        return Err(usage("--permutations must be at least 99"));
    }
    if !(0.0 < args.alpha && args.alpha < 1.0) {
        return Err(usage("--alpha must lie in (0, 1)"));
    }
    let values = read_csv(&args.input)?;
    let u = resolve_statistic(&args.preset, args.statistic.as_deref(), args.block)?;
    let report = independence_test(
        &values,
        &u,
        args.block,
        args.permutations,
        args.alpha,
        args.seed,
    )?;

    eprintln!(
        "{} blocks of {}; dcov {:.6e}; p = {:.4}; {} at alpha = {}",
        report.n_blocks,
        report.n_block,
        report.dcov,
        report.p_value,
        if report.reject {
            "normality REJECTED"
        } else {
            "no rejection"
        },
        report.alpha
    );
    let envelope = json!({
        "command": "test-normality",
        "input": args.input.display().to_string(),
        "statistic": statistic_echo(&u),
        "report": serde_json::to_value(&report).map_err(|e| data_err(e.to_string()))?,
    });
    emit(&envelope, args.output.as_deref())?;
    Ok(if report.reject { 3 } else { 0 })
}
