use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stein_md::Execution;
use stein_md_cli::commands::conjecture::ConjectureConfig;
use stein_md_cli::commands::example2::{Example2Config, DEFAULT_EXAMPLE2_GRID};
use stein_md_cli::commands::figure5::Figure5Config;
use stein_md_cli::commands::records::{RecordsConfig, DEFAULT_RECORDS_GRID};
use stein_md_cli::commands::validate::{App, ValidateConfig, DEFAULT_MC_SAMPLES};
use stein_md_cli::commands::{conjecture, example2, factors, figure5, records, validate};
use stein_md_cli::grid::GridSpec;
use stein_md_cli::{CliError, CliResult, Outcome, DEFAULT_SEED};

/// Stein factors and moderate-deviation bounds for Poisson approximation.
///
/// Output is CSV (to stdout unless --out is given). Exit codes: 0 ok,
/// 1 validation failure, 2 configuration error, 3 accuracy error.
#[derive(Debug, Parser)]
#[command(name = "stein-md", version)]
struct Cli {
    /// Write the CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for Monte Carlo runs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = DEFAULT_MC_SAMPLES)]
    samples: u64,
    /// Grid spec, `key=values;...` with values as `a,b,c` or `lo..hi`.
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Records tail ratios against four comparators (grid key: n).
    RecordsFigures {
        #[arg(long, default_value_t = 3.0)]
        x: f64,
    },
    /// C1 and C2 relative to the naive factor (grid key: k).
    Figure5 {
        #[arg(long, default_value_t = 10.0)]
        lambda: f64,
    },
    /// Binomial tails against plain and adjusted Poisson tails (grid key: n).
    Example2 {
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 2.0)]
        x: f64,
    },
    /// Bound-validity sweep for one application.
    Validate {
        /// matching, occupancy, birthday, triangles, two-runs or poisson-binomial
        app: String,
    },
    /// Scan of C1- minus C1+ (grid key: lambda).
    Conjecture {
        #[arg(long, default_value_t = 30)]
        k_max_offset: u64,
    },
    /// Stein factors at one (lambda, k), with the solution cross-checks.
    SteinFactors {
        #[arg(allow_negative_numbers = true)]
        lambda: f64,
        #[arg(allow_negative_numbers = true)]
        k: i64,
    },
}

fn grid(cli: &Cli, allowed: &[&str]) -> CliResult<GridSpec> {
    let g = match &cli.grid {
        Some(s) => GridSpec::parse(s)?,
        None => GridSpec::default(),
    };
    g.restrict(allowed)?;
    Ok(g)
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    match &cli.cmd {
        Command::RecordsFigures { x } => {
            let g = grid(cli, &["n"])?;
            let cfg = RecordsConfig { n_grid: g.counts("n", &DEFAULT_RECORDS_GRID)?, x: *x };
            records::run(&cfg, exec)
        }
        Command::Figure5 { lambda } => {
            let g = grid(cli, &["k"])?;
            let default: Vec<i64> = Figure5Config::default().k_range;
            let cfg = Figure5Config { lambda: *lambda, k_range: g.integers("k", &default)? };
            figure5::run(&cfg, exec)
        }
        Command::Example2 { p, x } => {
            let g = grid(cli, &["n"])?;
            let cfg = Example2Config { n_grid: g.counts("n", &DEFAULT_EXAMPLE2_GRID)?, p: *p, x: *x };
            example2::run(&cfg, exec)
        }
        Command::Validate { app } => {
            let app = App::parse(app)?;
            let cfg = ValidateConfig { app, grid: grid(cli, app.grid_keys())?, seed: cli.seed, samples: cli.samples };
            validate::run(&cfg, exec)
        }
        Command::Conjecture { k_max_offset } => {
            let g = grid(cli, &["lambda"])?;
            let cfg = ConjectureConfig { lambdas: g.reals("lambda", &ConjectureConfig::default().lambdas), k_max_offset: *k_max_offset };
            conjecture::run(&cfg, exec)
        }
        Command::SteinFactors { lambda, k } => factors::run(*lambda, *k),
    }
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Config(format!("cannot write output: {e}"));
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(io)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("stein-md: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Err(e) = emit(&cli, &outcome.report.render()) {
        eprintln!("stein-md: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    if let Some(f) = &outcome.failure {
        eprintln!("stein-md: {f}");
    }
    ExitCode::from(outcome.exit_code() as u8)
}
