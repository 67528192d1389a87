use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hessfree_bench::config::{BenchConfig, Overrides};
use hessfree_bench::runner::{run_benchmark, BenchError};
use hessfree_bench::summary::{fit_rows, read_summary};
use hessfree_bench::verify::{Battery, Mode};

const EXIT_FAILED_RUN: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "bench", about = "Run, fit and verify the hessfree solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags for the remaining config entries.
#[derive(Args)]
struct ExtraFlags {
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    dense_check: Option<bool>,
    #[arg(long)]
    alpha: Option<f64>,
    /// `lanczos` or `power`.
    #[arg(long)]
    eig_backend: Option<String>,
    #[arg(long)]
    budget_constant: Option<f64>,
    /// `l1` or `l1_plus_2gamma`.
    #[arg(long)]
    inner_smoothness: Option<String>,
    #[arg(long)]
    outer_cap: Option<f64>,
    #[arg(long)]
    inner_cap: Option<f64>,
    #[arg(long)]
    gd_trace_full: Option<bool>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a problem x solver x eps x seed matrix and write traces and a summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        problems: Option<Vec<String>>,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        solvers: Option<Vec<String>>,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        extra: ExtraFlags,
    },
    /// Fit log(median calls) against log(1/eps) from a summary file.
    Fit {
        #[arg(long)]
        summary: PathBuf,
    },
    /// Run the acceptance battery.
    Verify {
        /// Smaller workloads; not the stated acceptance sizes.
        #[arg(long)]
        quick: bool,
        /// Only these criteria (1-10).
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        only: Option<Vec<u8>>,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            problems,
            solvers,
            eps,
            seeds,
            out,
            format,
            extra,
        } => {
            let overrides = Overrides {
                problems,
                solvers,
                eps,
                seeds,
                out,
                format,
                delta: extra.delta,
                dense_check: extra.dense_check,
                alpha: extra.alpha,
                eig_backend: extra.eig_backend,
                budget_constant: extra.budget_constant,
                inner_smoothness: extra.inner_smoothness,
                outer_cap: extra.outer_cap,
                inner_cap: extra.inner_cap,
                gd_trace_full: extra.gd_trace_full,
            };
            run(config, overrides)
        }
        Command::Fit { summary } => fit(summary),
        Command::Verify { quick, only } => verify(quick, only),
    }
}

fn run(path: PathBuf, overrides: Overrides) -> ExitCode {
    let cfg = BenchConfig::load(&path).and_then(|mut c| c.apply(overrides).map(|_| c));
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match run_benchmark(&cfg) {
        Ok(out) => {
            for o in out.outcomes.iter().filter(|o| !o.succeeded()) {
                let why = o.report.as_ref().err().cloned().unwrap_or_else(|| "not converged".into());
                eprintln!("failed: {}: {why}", o.spec.run_id());
            }
            println!(
                "{} runs, {} failed; traces in {}, summary {}",
                out.outcomes.len(),
                out.failures(),
                out.trace_dir.display(),
                out.summary_path.display()
            );
            if out.failures() > 0 {
                ExitCode::from(EXIT_FAILED_RUN)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(BenchError::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_FAILED_RUN)
        }
    }
}

fn fit(path: PathBuf) -> ExitCode {
    let rows = match read_summary(&path) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("cannot read summary `{}`: {e}", path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut code = ExitCode::SUCCESS;
    println!("problem,solver,slope,intercept,r_squared,slope_ci_low,slope_ci_high,n");
    for (problem, solver, fit) in fit_rows(&rows) {
        match fit {
            Ok(f) => println!(
                "{problem},{solver},{:.4},{:.4},{:.4},{:.4},{:.4},{}",
                f.slope, f.intercept, f.r_squared, f.slope_ci.0, f.slope_ci.1, f.n
            ),
            Err(e) => {
                eprintln!("{problem} / {solver}: {e}");
                code = ExitCode::from(EXIT_FAILED_RUN);
            }
        }
    }
    code
}

fn verify(quick: bool, only: Option<Vec<u8>>) -> ExitCode {
    let battery = Battery::new(if quick { Mode::Quick } else { Mode::Full });
    let mut all_passed = true;
    for id in 1..=10u8 {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let result = battery.criterion(id);
        all_passed &= result.passed;
        println!("{result}");
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED_RUN)
    }
}
