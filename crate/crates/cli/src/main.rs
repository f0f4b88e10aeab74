//! `radial`: synthetic benchmark, theory experiments, backtests and
//! single-query estimates, all emitting CSV.
//!
//! Exit codes: 0 success, 1 runtime error, 2 usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use radial_core::backtest::{
    accuracy_report, ingest_csv, label_months, resolve_test_window, segment_months,
    walk_forward_predict, BacktestMethod, MonthId, NoObserver, WalkForwardConfig,
};
use radial_core::synth::{default_suite, run_benchmark, run_trial, write_predictions_csv, SyntheticConfig};
use radial_core::theory::{default_eta, rate_experiment, zeta_concentration, RateConfig, ZetaBasis};
use radial_core::Error;

mod estimate;

#[derive(Parser)]
#[command(name = "radial", version, about = "Local radial regression experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthetic bimodal benchmark: concordance with test labels and with the Bayes rule.
    BenchSynthetic(BenchArgs),
    /// Monte-Carlo risk of theory-mode radial regression against n.
    Rate(RateArgs),
    /// Mean and spread of ζ/N for points uniform in a ball.
    Zeta(ZetaArgs),
    /// Walk-forward monthly direction forecasts on a daily close series.
    Backtest(BacktestArgs),
    /// Label-probability estimate at one query.
    Estimate(estimate::EstimateArgs),
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    n_train: u64,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    n_test: u64,
    /// Summary CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-query decisions of the first trial.
    #[arg(long)]
    predictions: Option<PathBuf>,
}

#[derive(Args)]
struct RateArgs {
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    d: u64,
    /// Comma-separated, strictly increasing sample sizes (at least 3).
    #[arg(long, value_delimiter = ',', default_value = "200,400,800,1600,3200,6400,12800")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Event threshold φ (default 1 − 1/(2(d+1)²)).
    #[arg(long)]
    phi: Option<f64>,
    /// Polynomial order ω (default max(1, strict floor of β/2)).
    #[arg(long)]
    omega: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ZetaArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    d: u64,
    #[arg(long, default_value_t = 1.0)]
    r_tilde: f64,
    /// Comma-separated point counts N.
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000,2000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Radial column: `linear` (r) or `even` (r²).
    #[arg(long, default_value = "linear")]
    basis: ZetaBasis,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BacktestArgs {
    /// CSV of date,close rows (header optional).
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    method: BacktestMethod,
    /// First test month, YYYY-MM.
    #[arg(long)]
    test_start: Option<MonthId>,
    /// Last test month, YYYY-MM.
    #[arg(long)]
    test_end: Option<MonthId>,
    #[arg(long, default_value_t = 192)]
    train_months: usize,
    #[arg(long, default_value_t = 24)]
    validation_months: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ledger CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parameter(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// CSV sink plus a stream for human-readable summaries that does not
/// collide with it.
fn open_out(path: Option<&Path>) -> io::Result<(Box<dyn Write>, Box<dyn Write>)> {
    Ok(match path {
        Some(p) => (
            Box::new(BufWriter::new(File::create(p)?)),
            Box::new(io::stdout()),
        ),
        None => (Box::new(io::stdout().lock()), Box::new(io::stderr())),
    })
}

fn bench_synthetic(args: BenchArgs) -> CmdResult {
    let config = SyntheticConfig {
        n_train: args.n_train as usize,
        n_test: args.n_test as usize,
        reps: args.reps as usize,
        seed: args.seed,
        ..SyntheticConfig::default()
    };
    let suite = default_suite();
    let table = run_benchmark(&config, &suite)?;
    let (out, _) = open_out(args.out.as_deref())?;
    table.write_csv(out)?;
    if let Some(p) = args.predictions {
        let (trial, preds) = run_trial(&config, &suite, 0)?;
        write_predictions_csv(&trial, &suite, &preds, BufWriter::new(File::create(p)?))?;
    }
    Ok(())
}

fn rate(args: RateArgs) -> CmdResult {
    if args.sizes.len() < 3 {
        return Err(Failure::usage("--sizes needs at least 3 values"));
    }
    let mut cfg = RateConfig::new(args.beta, args.d as usize, args.sizes, args.seed);
    cfg.reps = args.reps;
    if let Some(phi) = args.phi {
        cfg.phi = phi;
    }
    if let Some(omega) = args.omega {
        cfg.omega = omega;
    }
    let report = rate_experiment(&cfg, default_eta)?;
    let (out, mut summary) = open_out(args.out.as_deref())?;
    report.write_csv(out)?;
    writeln!(
        summary,
        "fitted_slope={} theoretical_slope={}",
        report.fitted_slope, report.theoretical_slope
    )?;
    for (n, f) in report.sample_sizes.iter().zip(&report.event_failures) {
        if *f > 0 {
            writeln!(summary, "n={n}: event failed in {f} of {} replicates", report.reps)?;
        }
    }
    Ok(())
}

fn zeta(args: ZetaArgs) -> CmdResult {
    let table = zeta_concentration(
        args.d as usize,
        args.r_tilde,
        &args.sizes,
        args.reps as usize,
        args.seed,
        args.basis,
    )?;
    let (out, _) = open_out(args.out.as_deref())?;
    table.write_csv(out)?;
    Ok(())
}

fn backtest(args: BacktestArgs) -> CmdResult {
    let config = WalkForwardConfig {
        n_train: args.train_months,
        validation_window: args.validation_months,
        seed: args.seed,
        ..WalkForwardConfig::default()
    };
    config.validate()?;
    let series = ingest_csv(&args.input)?;
    let months = label_months(segment_months(&series)?)?;
    let (start, end) = resolve_test_window(&months, args.test_start, args.test_end, &config)?;
    let ledger = walk_forward_predict(&months, start, end, args.method, &config, &NoObserver)?;
    let (out, mut summary) = open_out(args.out.as_deref())?;
    ledger.write_csv(out)?;
    writeln!(
        summary,
        "method={} months={} accuracy={} cumulative_return={}",
        args.method,
        ledger.rows.len(),
        accuracy_report(&ledger)?,
        ledger.final_cumulative().unwrap_or(1.0)
    )?;
    Ok(())
}

fn configure_threads() -> CmdResult {
    let Ok(v) = std::env::var("RADIAL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("RADIAL_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::BenchSynthetic(a) => bench_synthetic(a),
        Command::Rate(a) => rate(a),
        Command::Zeta(a) => zeta(a),
        Command::Backtest(a) => backtest(a),
        Command::Estimate(a) => estimate::run(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
