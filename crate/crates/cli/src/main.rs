use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use vu_core::frontend::{cmd_get_variants, cmd_unify, exit_code, load_module, load_suite, run_bench, CmdOutput};
use vu_core::varunify::Algo;
use vu_core::Error;

#[derive(Parser)]
#[command(name = "vu", version, about = "Variant-based unification modulo XOR-like theories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the most general variants of a term.
    GetVariants {
        #[arg(long)]
        module: PathBuf,
        /// Print at most this many variants.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        timeout: Option<f64>,
        /// Dump the rewrite steps normalizing the input.
        #[arg(long)]
        trace: bool,
        term: String,
    },
    /// Solve `T1 =? T2 [/\ ...]` modulo the module's equations.
    Unify {
        #[arg(long)]
        module: PathBuf,
        /// maude, fast, cr or cr-fast.
        #[arg(long, default_value = "maude")]
        algo: Algo,
        #[arg(long)]
        bound: Option<usize>,
        /// Seconds before giving up (exit code 4).
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        trace: bool,
        problem: String,
    },
    /// Run a benchmark suite with all four algorithms.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Per-row timeout in seconds.
        #[arg(long, default_value_t = 300.0)]
        timeout: f64,
    },
}

fn secs(s: Option<f64>) -> Option<Duration> {
    s.map(|s| Duration::from_secs_f64(s.max(0.0)))
}

fn emit(r: Result<CmdOutput, Error>) -> ExitCode {
    match r {
        Ok(out) => {
            eprint!("{}", out.stderr);
            print!("{}", out.stdout);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::GetVariants { module, bound, timeout, trace, term } => {
            emit(load_module(&module).and_then(|th| {
                for w in &th.warnings {
                    eprintln!("warning: {w}");
                }
                cmd_get_variants(&th, &term, bound, secs(timeout), trace)
            }))
        }
        Cmd::Unify { module, algo, bound, timeout, trace, problem } => emit(load_module(&module).and_then(|th| {
            for w in &th.warnings {
                eprintln!("warning: {w}");
            }
            cmd_unify(&th, &problem, algo, bound, secs(timeout), trace)
        })),
        Cmd::Bench { suite, out, jobs, timeout } => {
            let problems = match load_suite(&suite) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(exit_code(&e) as u8);
                }
            };
            let report = run_bench(&problems, &Algo::ALL, secs(Some(timeout)), jobs);
            if let Err(e) = std::fs::write(&out, report.to_csv()) {
                eprintln!("error: {}: {e}", out.display());
                return ExitCode::from(1);
            }
            print!("{}", report.summary());
            ExitCode::SUCCESS
        }
    }
}
