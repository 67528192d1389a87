//! Execution of the run matrix `problems x solvers x eps x seeds`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use hessfree::driver::{
    acagd_only, accelerated_nonconvex, gradient_descent_baseline, ncd_only, strict_saddle,
    RunReport, SolverConfig,
};
use hessfree::eigen::dense_min_eigenvalue;
use hessfree::oracle::{problem_from_id, TestProblem};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{BenchConfig, ConfigError, SolverKind};
use crate::summary::{summarize, write_summary, SummaryRow};
use crate::trace::{RunKey, Trace, TraceError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write `{path}`: {source}")]
    Output {
        path: PathBuf,
        source: TraceError,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub problem: String,
    pub solver: SolverKind,
    pub eps: f64,
    pub seed: u64,
}

impl RunSpec {
    /// File-name-safe identifier, unique within a matrix.
    pub fn run_id(&self) -> String {
        let problem: String = self
            .problem
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
            .collect();
        format!("{}__{}__eps{:e}__seed{}", self.solver, problem, self.eps, self.seed)
    }

    pub fn key(&self) -> RunKey {
        RunKey {
            run_id: self.run_id(),
            solver: self.solver.to_string(),
            problem: self.problem.clone(),
            eps: self.eps,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub spec: RunSpec,
    pub report: Result<RunReport, String>,
    /// `2 sqrt(eps L2)`, the curvature tolerance of the second-order certificate.
    pub curvature_tolerance: f64,
}

impl RunOutcome {
    pub fn succeeded(&self) -> bool {
        match &self.report {
            Ok(r) => match self.spec.solver {
                // A single curvature pass certifies curvature, not stationarity.
                SolverKind::NcdOnly => r.ncd_certified,
                _ => r.grad_norm <= self.spec.eps,
            },
            Err(_) => false,
        }
    }

    /// Dense `lambda_min >= -2 sqrt(eps L2) - 1e-8`, when a dense check ran.
    pub fn second_order_ok(&self) -> Option<bool> {
        let r = self.report.as_ref().ok()?;
        r.min_hessian_eig
            .map(|l| l >= -self.curvature_tolerance - 1e-8)
    }

    pub fn wallclock(&self) -> Duration {
        self.report.as_ref().map(|r| r.wallclock).unwrap_or_default()
    }

    pub fn trace(&self) -> Trace {
        match &self.report {
            Ok(r) => Trace::from_report(&self.spec.key(), r),
            Err(_) => Trace {
                rng: crate::trace::RNG_NAME.into(),
                seed: self.spec.seed,
                rows: Vec::new(),
            },
        }
    }
}

/// Run one solver on one problem instance.
pub fn solve(
    kind: SolverKind,
    problem: &TestProblem,
    cfg: &SolverConfig,
) -> hessfree::Result<RunReport> {
    let mut f = problem.oracle();
    let x1 = &problem.start;
    let params = &problem.params;
    match kind {
        SolverKind::Accnc => accelerated_nonconvex(&mut f, x1, params, cfg),
        SolverKind::Gd => gradient_descent_baseline(&mut f, x1, params, cfg),
        SolverKind::NcdOnly => ncd_only(&mut f, x1, params, cfg),
        SolverKind::AcagdOnly => acagd_only(&mut f, x1, params, cfg),
        SolverKind::StrictSaddle => {
            let sigma = problem.strict_saddle_sigma.ok_or_else(|| {
                hessfree::Error::InvalidArgument(format!(
                    "`{}` has no strict-saddle constant",
                    problem.id
                ))
            })?;
            strict_saddle(&mut f, x1, params, sigma, cfg)
        }
    }
}

/// Run one matrix entry. The problem instance and the solver share `seed`.
pub fn run_one(spec: &RunSpec, cfg: &BenchConfig) -> RunOutcome {
    let problem = match problem_from_id(&spec.problem, spec.seed) {
        Ok(p) => p,
        Err(e) => {
            return RunOutcome {
                spec: spec.clone(),
                report: Err(e.to_string()),
                curvature_tolerance: f64::NAN,
            }
        }
    };
    let solver_cfg = cfg.solver_config(spec.eps, spec.seed);
    let report = solve(spec.solver, &problem, &solver_cfg).map(|mut r| {
        if cfg.run.dense_check {
            r.min_hessian_eig = Some(dense_min_eigenvalue(problem.dense_hessian(&r.x)));
        }
        r
    });
    RunOutcome {
        spec: spec.clone(),
        report: report.map_err(|e| e.to_string()),
        curvature_tolerance: 2.0 * (spec.eps * problem.params.l2).sqrt(),
    }
}

/// Entries in a fixed order: problem, solver, eps, seed.
pub fn matrix(cfg: &BenchConfig) -> Vec<RunSpec> {
    let mut specs = Vec::new();
    for problem in &cfg.run.problems {
        for &solver in &cfg.run.solvers {
            for &eps in &cfg.run.eps {
                for &seed in &cfg.run.seeds {
                    specs.push(RunSpec {
                        problem: problem.clone(),
                        solver,
                        eps,
                        seed,
                    });
                }
            }
        }
    }
    specs
}

/// Execute the matrix in parallel; results come back in matrix order.
pub fn run_matrix(cfg: &BenchConfig) -> Result<Vec<RunOutcome>, ConfigError> {
    cfg.validate()?;
    Ok(matrix(cfg).par_iter().map(|s| run_one(s, cfg)).collect())
}

#[derive(Debug)]
pub struct BenchOutput {
    pub outcomes: Vec<RunOutcome>,
    pub summary: Vec<SummaryRow>,
    pub trace_dir: PathBuf,
    pub summary_path: PathBuf,
}

impl BenchOutput {
    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.succeeded()).count()
    }
}

/// Run the matrix and write one trace per run plus the summary table.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchOutput, BenchError> {
    let outcomes = run_matrix(cfg)?;
    let out = &cfg.run.out;
    let trace_dir = out.join("traces");
    fs::create_dir_all(&trace_dir).map_err(|e| output_err(&trace_dir, e.into()))?;
    let ext = cfg.run.format.extension();
    for o in &outcomes {
        let path = trace_dir.join(format!("{}.{ext}", o.spec.run_id()));
        o.trace()
            .write(&path, cfg.run.format)
            .map_err(|e| output_err(&path, e))?;
    }
    let summary = summarize(&outcomes);
    let summary_path = out.join(format!("summary.{ext}"));
    write_summary(&summary, &summary_path, cfg.run.format).map_err(|e| output_err(&summary_path, e))?;
    Ok(BenchOutput {
        outcomes,
        summary,
        trace_dir,
        summary_path,
    })
}

fn output_err(path: &Path, source: TraceError) -> BenchError {
    BenchError::Output {
        path: path.to_path_buf(),
        source,
    }
}
