mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Settings;

#[derive(Parser)]
#[command(name = "thermal-jcm", version, about = "Thermal multiphoton Jaynes-Cummings dynamics and its near-zero S_z times")]
struct Cli {
    /// TOML file with run settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// More log output (-v, -vv).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Worker threads (default: one per core).
    #[cfg(feature = "parallel")]
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample S(t) at t_n = n dt (or uniformly on [0, t_max]).
    Simulate(Settings),
    /// Frames with |S_z| < eps(beta) over a log-spaced beta grid.
    Scan(Settings),
    /// Exponential sums of the sampling phases.
    Weyl(Settings),
    /// Cloud at dt vs. cloud at s dt, plus control and reflection checks.
    ScaleCheck(Settings),
    /// Continued fraction and convergents of sqrt(m) / k.
    Cf(commands::CfArgs),
    /// Candidate denominators for the published index windows.
    Candidates(Settings),
    /// Candidates that pass the low-temperature filter.
    Filter(Settings),
    /// S_x(q pi / r) over the beta grid for the filtered candidates.
    Curves(Settings),
    /// Closed forms against the density-matrix oracle.
    OracleVerify(Settings),
    /// Fast composite self-check; non-zero exit if any check fails.
    Verify(Settings),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let file = match &cli.config {
        Some(p) => Settings::load(p)?,
        None => Settings::default(),
    };
    let ctx = |flags: Settings| -> anyhow::Result<commands::Context> {
        commands::Context::new(flags.over(file.clone()).resolve()?, cli.out.clone())
    };
    match cli.command {
        Command::Simulate(f) => commands::simulate(&ctx(f)?),
        Command::Scan(f) => commands::scan(&ctx(f)?),
        Command::Weyl(f) => commands::weyl(&ctx(f)?),
        Command::ScaleCheck(f) => commands::scale_check(&ctx(f)?),
        Command::Cf(args) => commands::cf(&args),
        Command::Candidates(f) => commands::candidates(&ctx(f)?),
        Command::Filter(f) => commands::filter(&ctx(f)?),
        Command::Curves(f) => commands::curves(&ctx(f)?),
        Command::OracleVerify(f) => commands::oracle_verify(&ctx(f)?),
        Command::Verify(f) => commands::verify(&ctx(f)?),
    }
}
