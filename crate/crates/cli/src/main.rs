use std::path::PathBuf;
use std::process::ExitCode;

use alexpand_cli::commands::{cmd_expand, cmd_kelvin, cmd_verify, write_kelvin};
use alexpand_cli::config::parse_config;
use alexpand_cli::selfcheck::selfcheck;
use anyhow::Result;
use clap::{Parser, Subcommand};

/// Exact asymptotic expansions of Ricci-flat ALE metrics in harmonic
/// coordinates.
#[derive(Parser)]
#[command(name = "alexpand", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the bootstrap and write expansion.json and report.json.
    Expand {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Record wall-clock time per stage (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Sample the numeric residual of an expansion and check its decay.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        expansion: PathBuf,
        /// Directory for samples.csv and verify.json (default: next to the expansion).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kelvin-transform an expansion and test whether the image is polynomial.
    Kelvin {
        #[arg(long)]
        expansion: PathBuf,
        #[arg(long)]
        n: usize,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized consistency checks of the engine.
    Selfcheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "seed-rng", default_value_t = 0)]
        seed_rng: u64,
    },
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Expand { config, out, timing } => {
            let config = parse_config(&config)?;
            let outcome = cmd_expand(&config, &out, timing)?;
            let r = &outcome.report;
            for s in &r.stages {
                match s.wall_ms {
                    Some(ms) => println!("stage {:>2}  q_N = {:>3}  terms = {:>6}  {ms} ms", s.index, s.order, s.term_count),
                    None => println!("stage {:>2}  q_N = {:>3}  terms = {:>6}", s.index, s.order, s.term_count),
                }
            }
            for l in &r.log_terms {
                println!("log terms: sigma = {} logpow = {} count = {}", l.sigma, l.logpow, l.count);
            }
            for c in &r.invariants {
                println!("{:<24} {}", c.name, if c.passed { "ok" } else { "FAILED" });
            }
            println!("wrote {} and {}", outcome.expansion_path.display(), outcome.report_path.display());
            if !outcome.success() {
                eprintln!("invariant failure: {}", r.failed().join(", "));
            }
            Ok(outcome.success())
        }
        Command::Verify { config, expansion, out } => {
            let config = parse_config(&config)?;
            let outcome = cmd_verify(&config, &expansion, out.as_deref())?;
            let s = &outcome.summary;
            match s.slope {
                Some(slope) => println!("residual slope {slope:.3} (bound {:.3}): {}", s.bound, s.status),
                None => println!("slopes: {}", s.status),
            }
            let fd = &s.fd_check;
            println!(
                "finite differences: first {:.2e}, second {:.2e}, tolerance {:.2e}: {}",
                fd.first,
                fd.second,
                fd.tolerance,
                if fd.passed { "ok" } else { "FAILED" }
            );
            if let Some(w) = s.worst.as_ref().filter(|_| s.status == "violation") {
                eprintln!(
                    "slope violation: worst entry ({}, {}) along direction {} at r = {}: {:e}",
                    w.i, w.j, w.direction, w.r, w.value
                );
            }
            println!("wrote {} and {}", outcome.samples_path.display(), outcome.summary_path.display());
            Ok(outcome.summary.success())
        }
        Command::Kelvin { expansion, n, out } => {
            let output = cmd_kelvin(&expansion, n)?;
            write_kelvin(&output, out.as_deref())?;
            if !output.polynomial {
                eprintln!("Kelvin image is not polynomial");
            }
            Ok(output.polynomial)
        }
        Command::Selfcheck { trials, seed_rng } => {
            let results = selfcheck(trials, seed_rng)?;
            for r in &results {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                println!("{verdict} {:<24} {} trials, {} failures", r.name, r.trials, r.failures);
            }
            Ok(results.iter().all(|r| r.passed()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
