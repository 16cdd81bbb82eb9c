//! Command line driver. Builds the configured coefficient ring, runs the
//! selected check suites and prints one JSON report. Exit code 0 means no
//! check failed; "reported" entries are informational.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::Parser;

mod cache;
mod config;
mod report;
mod suites;

use config::{ExperimentConfig, Suite};
use report::Status;

#[derive(Parser)]
#[command(name = "hensel", version, about = "exact experiments over truncated polynomial rings")]
struct Args {
    /// Characteristic of the coefficient field
    #[arg(long = "char", default_value_t = 5)]
    characteristic: u32,
    /// Extension degree of the coefficient field over its prime field
    #[arg(long, default_value_t = 1)]
    ext: u32,
    /// Number of polynomial variables
    #[arg(long, default_value_t = 1)]
    vars: usize,
    /// Truncation degree: monomials of this total degree and above vanish
    #[arg(long, default_value_t = 2)]
    trunc: usize,
    /// Working prime for the homological checks, coprime to the characteristic
    #[arg(long, default_value_t = 3)]
    prime: u32,
    /// Optional second working prime for cross-checks
    #[arg(long)]
    second_prime: Option<u32>,
    /// Matrix size for the congruence suite
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Largest simplex degree built in the complexes
    #[arg(long, default_value_t = 2)]
    dmax: usize,
    /// Master seed; each suite derives its own stream from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check battery to run
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for enumeration caches; HENSEL_CACHE_DIR overrides the
    /// default, this flag overrides both
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Record per-suite wall times in the report. Off by default so that
    /// equal configurations render byte-identical reports
    #[arg(long)]
    emit_timings: bool,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let args = Args::parse();
    let config = ExperimentConfig {
        characteristic: args.characteristic,
        ext: args.ext,
        vars: args.vars,
        trunc: args.trunc,
        prime: args.prime,
        second_prime: args.second_prime,
        n: args.n,
        dmax: args.dmax,
        seed: args.seed,
        suite: args.suite,
    };
    config.validate()?;
    let ring = config.build_ring()?;
    let cache_dir = args
        .cache_dir
        .or_else(|| std::env::var_os("HENSEL_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("cache"));

    let mut checks = Vec::new();
    let mut timings = Vec::new();
    for suite in config.suite.expand() {
        let start = Instant::now();
        checks.extend(suites::run(suite, &config, &ring, &cache_dir));
        timings.push((suite.name().to_string(), start.elapsed().as_micros() as u64));
    }

    let report = report::assemble(
        &config,
        &checks,
        args.emit_timings.then_some(timings.as_slice()),
    );
    let rendered = report::render(&report);
    match &args.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }

    let failed = checks.iter().any(|c| c.status == Status::Fail);
    Ok(if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}
