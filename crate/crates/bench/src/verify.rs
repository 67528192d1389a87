//! Executable acceptance battery. Each criterion runs its workload, checks its
//! properties at the stated tolerance and reports one pass/fail line.
//!
//! Solver runs are memoized in a [`Battery`], so criteria that inspect the same
//! runs (stationarity, curvature progress, inner-loop bounds) share them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use hessfree::agd::{accelerated_gradient_descent, iteration_bound, AgdOptions};
use hessfree::almost_convex::{almost_convex_agd, AlmostConvexOptions};
use hessfree::curvature::{min_step_decrease, step_bound};
use hessfree::driver::{
    rho_alpha, rho_alpha_hessian_action, RunReport, SolverConfig,
};
use hessfree::eigen::{dense_min_eigenvalue, min_eigvec_lanczos, min_eigvec_power, DEFAULT_BUDGET_CONSTANT};
use hessfree::oracle::{
    problem_from_id, CountingOracle, Domain, Objective, Quadratic, TestProblem, SUITE_IDS,
};
use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::config::{BenchConfig, RunSection, SolverKind, SolverSection};
use crate::fit::{fit_log_linear, fit_scaling, median};
use crate::runner::{run_matrix, solve};
use crate::summary::summarize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Workloads as stated in the acceptance criteria.
    Full,
    /// Reduced seeds and sweeps, for a fast smoke check.
    Quick,
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {:<28} {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

type Key = (String, SolverKind, u64, u64);

/// Shared state for one battery: memoized solver runs.
pub struct Battery {
    pub mode: Mode,
    runs: Mutex<HashMap<Key, Arc<Run>>>,
}

/// A memoized run with the problem instance it was run on.
pub struct Run {
    pub problem: TestProblem,
    pub eps: f64,
    pub seed: u64,
    pub report: Result<RunReport, String>,
}

impl Battery {
    pub fn new(mode: Mode) -> Self {
        Battery {
            mode,
            runs: Mutex::new(HashMap::new()),
        }
    }

    fn quick(&self) -> bool {
        self.mode == Mode::Quick
    }

    /// Run (or fetch) one solver on `problem_from_id(id, seed)` at `eps`.
    pub fn run(&self, id: &str, solver: SolverKind, eps: f64, seed: u64) -> Arc<Run> {
        let key = (id.to_string(), solver, eps.to_bits(), seed);
        if let Some(r) = self.runs.lock().unwrap().get(&key) {
            return Arc::clone(r);
        }
        let problem = problem_from_id(id, seed).expect("battery uses valid problem ids");
        let cfg = SolverConfig {
            seed,
            record_points: true,
            ..SolverConfig::new(eps)
        };
        let report = solve(solver, &problem, &cfg)
            .map(|mut r| {
                r.min_hessian_eig = Some(dense_min_eigenvalue(problem.dense_hessian(&r.x)));
                r
            })
            .map_err(|e| e.to_string());
        let run = Arc::new(Run {
            problem,
            eps,
            seed,
            report,
        });
        self.runs.lock().unwrap().insert(key, Arc::clone(&run));
        run
    }

    /// All memoized runs of one solver, in a stable order.
    fn runs_of(&self, solver: SolverKind) -> Vec<Arc<Run>> {
        let map = self.runs.lock().unwrap();
        let mut keys: Vec<&Key> = map.keys().filter(|k| k.1 == solver).collect();
        keys.sort();
        keys.into_iter().map(|k| Arc::clone(&map[k])).collect()
    }

    fn stationarity_runs(&self) -> Vec<(String, f64)> {
        let eps: &[f64] = if self.quick() { &[1e-2, 1e-3] } else { &[1e-2, 1e-3, 1e-4] };
        SUITE_IDS
            .iter()
            .flat_map(|id| eps.iter().map(move |&e| (id.to_string(), e)))
            .collect()
    }

    fn certificate_seeds(&self) -> u64 {
        if self.quick() { 5 } else { 50 }
    }

    pub fn run_all(&self) -> Vec<CriterionResult> {
        (1..=10).map(|id| self.criterion(id)).collect()
    }

    /// Criterion `id` in 1..=10.
    pub fn criterion(&self, id: u8) -> CriterionResult {
        match id {
            1 => self.criterion_1(),
            2 => self.criterion_2(),
            3 => self.criterion_3(),
            4 => self.criterion_4(),
            5 => self.criterion_5(),
            6 => self.criterion_6(),
            7 => self.criterion_7(),
            8 => self.criterion_8(),
            9 => self.criterion_9(),
            10 => self.criterion_10(),
            _ => panic!("no criterion {id}"),
        }
    }

    /// Every suite problem and every eps: `|grad f(x)| <= eps`, under a minute per run.
    pub fn criterion_1(&self) -> CriterionResult {
        timed(1, "stationarity", || {
            let mut failures = Vec::new();
            let mut slowest = Duration::ZERO;
            let cases = self.stationarity_runs();
            for (id, eps) in &cases {
                let run = self.run(id, SolverKind::Accnc, *eps, 0);
                match &run.report {
                    Ok(r) => {
                        slowest = slowest.max(r.wallclock);
                        if r.grad_norm > *eps {
                            failures.push(format!("{id} eps={eps:e}: |grad|={:.3e}", r.grad_norm));
                        }
                        if r.wallclock > Duration::from_secs(60) {
                            failures.push(format!("{id} eps={eps:e}: took {:.1?}", r.wallclock));
                        }
                    }
                    Err(e) => failures.push(format!("{id} eps={eps:e}: {e}")),
                }
            }
            verdict(
                failures,
                format!("{} runs, slowest {:.1}s", cases.len(), slowest.as_secs_f64()),
            )
        })
    }

    /// Dense `lambda_min >= -2 sqrt(eps L2) - 1e-8` in at least 90% of seeded
    /// runs per problem; double-well runs never return a saddle.
    pub fn criterion_2(&self) -> CriterionResult {
        timed(2, "second-order certificate", || {
            let eps = 1e-3;
            let seeds = self.certificate_seeds();
            let mut failures = Vec::new();
            let mut worst_rate: f64 = 1.0;
            for id in SUITE_IDS {
                let mut ok = 0;
                for seed in 0..seeds {
                    let run = self.run(id, SolverKind::Accnc, eps, seed);
                    let Ok(r) = &run.report else {
                        failures.push(format!("{id} seed {seed}: run failed"));
                        continue;
                    };
                    let lmin = r.min_hessian_eig.unwrap_or(f64::NAN);
                    let tol = 2.0 * (eps * run.problem.params.l2).sqrt();
                    if lmin >= -tol - 1e-8 {
                        ok += 1;
                    }
                    if id.starts_with("doublewell") && !(lmin > 0.0) {
                        failures.push(format!("{id} seed {seed}: saddle returned (lambda_min={lmin:.3e})"));
                    }
                }
                let rate = ok as f64 / seeds as f64;
                worst_rate = worst_rate.min(rate);
                if rate < 0.9 {
                    failures.push(format!("{id}: certificate rate {rate:.2}"));
                }
            }
            verdict(
                failures,
                format!("{seeds} seeds x {} problems, worst rate {worst_rate:.2}", SUITE_IDS.len()),
            )
        })
    }

    /// Each accepted NCD step lowers f by `alpha^3 / (12 L2^2)`; the number of
    /// steps per run stays within `1 + 12 L2^2 delta_f / alpha^3`.
    pub fn criterion_3(&self) -> CriterionResult {
        timed(3, "curvature-step progress", || {
            // Make sure the runs of criteria 1 and 2 exist.
            for (id, eps) in self.stationarity_runs() {
                self.run(&id, SolverKind::Accnc, eps, 0);
            }
            for id in SUITE_IDS {
                for seed in 0..self.certificate_seeds() {
                    self.run(id, SolverKind::Accnc, 1e-3, seed);
                }
            }
            let mut failures = Vec::new();
            let mut steps = 0usize;
            let mut min_margin = f64::INFINITY;
            for run in self.runs_of(SolverKind::Accnc) {
                let Ok(r) = &run.report else { continue };
                let alpha = r.alpha.expect("accnc reports alpha");
                let p = &run.problem.params;
                let floor = min_step_decrease(alpha, p.l2);
                for s in &r.ncd_steps {
                    steps += 1;
                    let drop = s.value_before - s.value_after;
                    min_margin = min_margin.min(drop / floor);
                    if drop < floor - 1e-10 {
                        failures.push(format!(
                            "{} seed {}: step decrease {drop:.3e} < {floor:.3e}",
                            run.problem.id, run.seed
                        ));
                    }
                    if s.eta_dot_grad < 0.0 {
                        failures.push(format!("{} seed {}: ascent direction", run.problem.id, run.seed));
                    }
                }
                let bound = step_bound(p.l2, p.delta_f, alpha);
                if r.ncd_steps.len() as f64 > bound {
                    failures.push(format!(
                        "{} seed {}: {} steps > bound {bound:.1}",
                        run.problem.id,
                        run.seed,
                        r.ncd_steps.len()
                    ));
                }
            }
            verdict(
                failures,
                format!("{steps} steps checked, min decrease/floor {min_margin:.2}"),
            )
        })
    }

    /// Outer iterations of the almost-convex method within `1 + 5 gamma delta_f / eps^2`
    /// and `f(z_{j+1}) <= f(z_j) - gamma |z_{j+1} - z_j|^2 + 1e-10`.
    pub fn criterion_4(&self) -> CriterionResult {
        timed(4, "almost-convex outer bound", || {
            let mut failures = Vec::new();
            let mut runs = 0;
            let mut steps = 0;
            let mut check = |label: &str, gamma: f64, eps: f64, delta_f: f64, iters: usize,
                             values: &[f64], disp: &[f64]| {
                runs += 1;
                steps += disp.len();
                acagd_violations(label, gamma, eps, delta_f, iters, values, disp)
            };

            // A function with lambda_min(H) >= -1/2 everywhere.
            let problem = tilted_quartic();
            let sweep: &[f64] = if self.quick() { &[1e-2, 1e-3] } else { &[1e-2, 1e-3, 1e-4] };
            let starts = [[1.0, 1.0], [-1.5, 0.2], [0.3, -2.0], [0.0, 0.0]];
            for start in starts {
                let x1 = DVector::from_row_slice(&start);
                let delta_f = problem.objective.value(&x1) - problem.known_minimum.unwrap_or(0.0);
                for &eps in sweep {
                    let mut f = problem.oracle();
                    let opts = AlmostConvexOptions {
                        delta_f: Some(delta_f.max(1e-12)),
                        ..AlmostConvexOptions::default()
                    };
                    let gamma = 0.5;
                    match almost_convex_agd(&mut f, &x1, eps, gamma, problem.params.l1, &opts) {
                        Ok(r) => failures.extend(check(
                            &format!("tilted quartic from {start:?} eps={eps:e}"),
                            gamma,
                            eps,
                            delta_f,
                            r.outer_iterations,
                            &r.values,
                            &r.displacements,
                        )),
                        Err(e) => failures.push(format!("tilted quartic from {start:?}: {e}")),
                    }
                }
            }

            // gamma = L1 on the convex and confined problems.
            for id in ["quadratic:d=10:kappa=100", "nonconvex-quadratic:d=10"] {
                for &eps in sweep {
                    let run = self.run(id, SolverKind::AcagdOnly, eps, 0);
                    match &run.report {
                        Ok(r) => {
                            let a = &r.acagd_runs[0];
                            failures.extend(check(
                                &format!("{id} eps={eps:e}"),
                                a.gamma,
                                a.eps,
                                a.delta_f,
                                a.iterations,
                                &a.values,
                                &a.displacements,
                            ));
                        }
                        Err(e) => failures.push(format!("{id}: {e}")),
                    }
                }
            }

            // Penalized models inside the accelerated method (gamma = 3 alpha).
            for (id, eps) in self.stationarity_runs() {
                let run = self.run(&id, SolverKind::Accnc, eps, 0);
                let Ok(r) = &run.report else { continue };
                for a in &r.acagd_runs {
                    failures.extend(check(
                        &format!("{id} eps={eps:e} outer {}", a.outer_iteration),
                        a.gamma,
                        a.eps,
                        a.delta_f,
                        a.iterations,
                        &a.values,
                        &a.displacements,
                    ));
                }
            }
            verdict(failures, format!("{runs} runs, {steps} steps"))
        })
    }

    /// AGD on strongly convex quadratics: iteration bound and geometric decay.
    pub fn criterion_5(&self) -> CriterionResult {
        timed(5, "AGD iteration bound", || {
            let mut failures = Vec::new();
            let mut worst_ratio: f64 = 0.0;
            let mut worst_iters: f64 = 0.0;
            let seeds = if self.quick() { 2 } else { 10 };
            for kappa in [10.0, 100.0, 1000.0] {
                for seed in 0..seeds {
                    let id = format!("quadratic:d=10:kappa={kappa}");
                    let p = problem_from_id(&id, seed).unwrap();
                    let (l1, sigma) = (p.params.l1, p.params.l1 / kappa);
                    let y1 = &p.start;
                    let gap0 = p.objective.value(y1);
                    let dist0 = y1.norm_squared();
                    for eps in [1e-3, 1e-6, 1e-9] {
                        let mut f = p.oracle();
                        let opts = AgdOptions {
                            gap: Some(gap0),
                            record_iterates: true,
                            ..AgdOptions::default()
                        };
                        let r = match accelerated_gradient_descent(&mut f, y1, eps, l1, sigma, &opts) {
                            Ok(r) => r,
                            Err(e) => {
                                failures.push(format!("{id} seed {seed} eps={eps:e}: {e}"));
                                continue;
                            }
                        };
                        let bound = iteration_bound(l1, sigma, gap0, eps).max(1.0);
                        worst_iters = worst_iters.max(r.iterations as f64 / bound);
                        if r.iterations as f64 > bound {
                            failures.push(format!(
                                "{id} seed {seed} eps={eps:e}: {} iterations > {bound:.1}",
                                r.iterations
                            ));
                        }
                        // Envelope L1 (1 - 1/sqrt(kappa))^(j-1) |y1 - y*|^2 at window starts.
                        let rate = 1.0 - (1.0 / kappa).sqrt();
                        for (j, y) in r.iterates.iter().enumerate().step_by(10) {
                            let gap = p.objective.value(y);
                            let envelope = l1 * rate.powi(j as i32) * dist0;
                            if envelope > 0.0 {
                                worst_ratio = worst_ratio.max(gap / envelope);
                            }
                            if gap > 1.1 * envelope {
                                failures.push(format!(
                                    "{id} seed {seed}: gap {gap:.3e} at j={} above envelope {envelope:.3e}",
                                    j + 1
                                ));
                            }
                        }
                    }
                }
            }
            verdict(
                failures,
                format!("max iterations/bound {worst_iters:.2}, max gap/envelope {worst_ratio:.2}"),
            )
        })
    }

    /// Lanczos accuracy on 200 random symmetric operators, and cheaper than the
    /// power method at `eps_add = 0.01 L1` on every one.
    pub fn criterion_6(&self) -> CriterionResult {
        timed(6, "eigenvector accuracy", || {
            let (d, trials, delta) = (20, 200u64, 0.1);
            let mut failures = Vec::new();
            let mut accurate = 0;
            let mut max_lanczos = 0;
            let mut min_power = usize::MAX;
            for seed in 0..trials {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let h = random_symmetric(d, &mut rng);
                let lmin = dense_min_eigenvalue(h.clone());
                let l1 = h.clone().symmetric_eigen().eigenvalues.amax();
                let q = Quadratic::new(h).expect("symmetric");
                let mut o = CountingOracle::new(Arc::new(q));
                let x = DVector::zeros(d);
                let eps_add = 0.01 * l1;
                let lz = min_eigvec_lanczos(&mut o, &x, eps_add, delta, l1, DEFAULT_BUDGET_CONSTANT, &mut rng);
                let pw = min_eigvec_power(&mut o, &x, eps_add, delta, l1, DEFAULT_BUDGET_CONSTANT, &mut rng);
                match (lz, pw) {
                    (Ok(lz), Ok(pw)) => {
                        if lz.rayleigh - lmin <= eps_add {
                            accurate += 1;
                        }
                        max_lanczos = max_lanczos.max(lz.hvp_cost);
                        min_power = min_power.min(pw.hvp_cost);
                        if lz.hvp_cost >= pw.hvp_cost {
                            failures.push(format!(
                                "seed {seed}: lanczos {} HVPs >= power {}",
                                lz.hvp_cost, pw.hvp_cost
                            ));
                        }
                    }
                    (a, b) => failures.push(format!("seed {seed}: {:?} {:?}", a.err(), b.err())),
                }
            }
            let need = ((1.0 - delta) * trials as f64).ceil() as usize;
            if accurate < need {
                failures.push(format!("only {accurate}/{trials} accurate, need {need}"));
            }
            verdict(
                failures,
                format!(
                    "{accurate}/{trials} within eps_add; HVPs lanczos <= {max_lanczos}, power >= {min_power}"
                ),
            )
        })
    }

    /// Fitted exponents on the random non-convex suite: accnc <= 1.9,
    /// gradient descent >= 1.8, and accnc below gradient descent.
    pub fn criterion_7(&self) -> CriterionResult {
        timed(7, "scaling exponent", || {
            let id = "random-nonconvex:d=50";
            let (sweep, seeds): (&[f64], u64) = if self.quick() {
                (&[1e-2, 3e-3, 1e-3, 3e-4], 1)
            } else {
                (&[1e-2, 3e-3, 1e-3, 3e-4, 1e-4], 5)
            };
            let mut failures = Vec::new();
            let mut slopes = Vec::new();
            for solver in [SolverKind::Accnc, SolverKind::Gd] {
                let mut points = Vec::new();
                for &eps in sweep {
                    let mut calls = Vec::new();
                    for seed in 0..seeds {
                        let run = self.run(id, solver, eps, seed);
                        match &run.report {
                            Ok(r) if r.grad_norm <= eps => calls.push(r.totals.oracle_calls() as f64),
                            Ok(r) => failures.push(format!("{solver} eps={eps:e} seed {seed}: |grad|={:.3e}", r.grad_norm)),
                            Err(e) => failures.push(format!("{solver} eps={eps:e} seed {seed}: {e}")),
                        }
                    }
                    if let Some(m) = median(&mut calls) {
                        points.push((eps, m));
                    }
                }
                match fit_scaling(&points) {
                    Ok(fit) => slopes.push(fit.slope),
                    Err(e) => {
                        failures.push(format!("{solver}: {e}"));
                        slopes.push(f64::NAN);
                    }
                }
            }
            let (acc, gd) = (slopes[0], slopes[1]);
            if !(acc <= 1.9) {
                failures.push(format!("accnc slope {acc:.3} > 1.9"));
            }
            if !(gd >= 1.8) {
                failures.push(format!("gd slope {gd:.3} < 1.8"));
            }
            if !(acc < gd) {
                failures.push(format!("accnc slope {acc:.3} not below gd slope {gd:.3}"));
            }
            verdict(failures, format!("slopes: accnc {acc:.3}, gd {gd:.3}"))
        })
    }

    /// Strict-saddle method on uncoupled double wells: distance and gap to the
    /// nearest minimizer, and phase-2 calls linear in `log(1/eps)`.
    pub fn criterion_8(&self) -> CriterionResult {
        timed(8, "strict-saddle guarantees", || {
            let sweep: Vec<f64> = if self.quick() {
                (3..=7).map(|k| 10f64.powi(-k)).collect()
            } else {
                (3..=12).map(|k| 10f64.powi(-k)).collect()
            };
            let mut failures = Vec::new();
            let mut min_r2: f64 = 1.0;
            for id in ["doublewell:d=1", "doublewell:d=20:coupling=0"] {
                let mut points = Vec::new();
                for &eps in &sweep {
                    let run = self.run(id, SolverKind::StrictSaddle, eps, 0);
                    let r = match &run.report {
                        Ok(r) => r,
                        Err(e) => {
                            failures.push(format!("{id} eps={eps:e}: {e}"));
                            continue;
                        }
                    };
                    let p = &run.problem;
                    let sigma = p.strict_saddle_sigma.expect("strict-saddle problem");
                    // Minimizers of uncoupled wells are the sign vectors.
                    let nearest = r.x.map(|v| if v < 0.0 { -1.0 } else { 1.0 });
                    let dist = (&r.x - &nearest).norm();
                    let gap = r.value - p.objective.value(&nearest);
                    if r.grad_norm > eps {
                        failures.push(format!("{id} eps={eps:e}: |grad|={:.3e}", r.grad_norm));
                    }
                    if dist > 2.0 * eps / sigma {
                        failures.push(format!("{id} eps={eps:e}: distance {dist:.3e} > {:.3e}", 2.0 * eps / sigma));
                    }
                    let gap_bound = 2.0 * p.params.l1 * eps * eps / (sigma * sigma);
                    if gap > gap_bound {
                        failures.push(format!("{id} eps={eps:e}: gap {gap:.3e} > {gap_bound:.3e}"));
                    }
                    match r.phase2_calls {
                        Some(c) => points.push((eps, c.oracle_calls() as f64)),
                        None => failures.push(format!("{id} eps={eps:e}: no phase 2")),
                    }
                }
                match fit_log_linear(&points) {
                    Ok(fit) => {
                        min_r2 = min_r2.min(fit.r_squared);
                        if fit.r_squared < 0.9 {
                            failures.push(format!("{id}: phase-2 fit R^2 {:.3} < 0.9", fit.r_squared));
                        }
                    }
                    Err(e) => failures.push(format!("{id}: {e}")),
                }
            }
            verdict(
                failures,
                format!("{} eps values, min phase-2 R^2 {min_r2:.3}", sweep.len()),
            )
        })
    }

    /// Hinge penalty: convexity, gradient against finite differences, and
    /// Hessian action in `[0, 4 L1]` off the hinge radius.
    pub fn criterion_9(&self) -> CriterionResult {
        timed(9, "penalty correctness", || {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let mut failures = Vec::new();
            let mut worst_fd: f64 = 0.0;
            for trial in 0..1000 {
                let d = rng.random_range(1..8usize);
                let alpha: f64 = rng.random_range(0.0..2.0);
                let l1: f64 = rng.random_range(0.1..10.0);
                let l2: f64 = rng.random_range(0.1..10.0);
                let r = alpha / l2;
                let scale = rng.random_range(0.0..3.0) * r.max(0.1);
                let x = gaussian(d, &mut rng) * scale;
                let y = gaussian(d, &mut rng) * scale;
                let t: f64 = rng.random();
                let mid = &x * t + &y * (1.0 - t);
                let lhs = rho_alpha(&mid, alpha, l1, l2).0;
                let rhs = t * rho_alpha(&x, alpha, l1, l2).0 + (1.0 - t) * rho_alpha(&y, alpha, l1, l2).0;
                if lhs > rhs + 1e-10 {
                    failures.push(format!("trial {trial}: convexity {lhs:e} > {rhs:e}"));
                }

                // Gradient check at a point off the hinge radius.
                let (_, g) = rho_alpha(&x, alpha, l1, l2);
                let h = 1e-6 * (1.0 + x.norm());
                let fd = DVector::from_fn(d, |i, _| {
                    let mut e = DVector::zeros(d);
                    e[i] = h;
                    (rho_alpha(&(&x + &e), alpha, l1, l2).0 - rho_alpha(&(&x - &e), alpha, l1, l2).0) / (2.0 * h)
                });
                let near_hinge = (x.norm() - r).abs() < 1e-4 * (1.0 + r);
                if !near_hinge {
                    let err = (&fd - &g).norm() / g.norm().max(1e-3);
                    worst_fd = worst_fd.max(err);
                    if err > 1e-6 {
                        failures.push(format!("trial {trial}: gradient relative error {err:.2e}"));
                    }
                    let u = gaussian(d, &mut rng);
                    let q = u.dot(&rho_alpha_hessian_action(&x, &u, alpha, l1, l2));
                    let cap = 4.0 * l1 * u.norm_squared();
                    if q < -1e-10 * cap || q > cap * (1.0 + 1e-12) {
                        failures.push(format!("trial {trial}: u^T H u = {q:e} outside [0, {cap:e}]"));
                    }
                }
            }
            verdict(failures, format!("1000 trials, worst gradient error {worst_fd:.1e}"))
        })
    }

    /// Identical configuration and seeds give identical traces and summaries.
    pub fn criterion_10(&self) -> CriterionResult {
        timed(10, "determinism", || {
            let cfg = BenchConfig {
                run: RunSection {
                    problems: vec![
                        "doublewell:d=20:coupling=0.1".into(),
                        "nonconvex-quadratic:d=10".into(),
                        "random-nonconvex:d=50".into(),
                    ],
                    solvers: vec![
                        SolverKind::Accnc,
                        SolverKind::Gd,
                        SolverKind::NcdOnly,
                        SolverKind::AcagdOnly,
                    ],
                    eps: vec![1e-2, 1e-3],
                    delta: 0.1,
                    seeds: vec![0, 1],
                    out: std::env::temp_dir(),
                    format: crate::config::Format::Csv,
                    dense_check: true,
                },
                solver: SolverSection::default(),
            };
            let a = run_matrix(&cfg);
            let b = run_matrix(&cfg);
            let (a, b) = match (a, b) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return verdict(vec![e.to_string()], String::new()),
            };
            let mut failures = Vec::new();
            let mut rows = 0;
            for (x, y) in a.iter().zip(&b) {
                let (tx, ty) = (x.trace(), y.trace());
                rows += tx.rows.len();
                let (mut bx, mut by) = (Vec::new(), Vec::new());
                let _ = tx.write_csv(&mut bx);
                let _ = ty.write_csv(&mut by);
                if bx != by {
                    failures.push(format!("{}: traces differ", x.spec.run_id()));
                }
            }
            let sa: Vec<_> = summarize(&a).iter().map(|r| r.without_wallclock()).collect();
            let sb: Vec<_> = summarize(&b).iter().map(|r| r.without_wallclock()).collect();
            if sa != sb {
                failures.push("summaries differ".into());
            }
            verdict(failures, format!("{} runs, {rows} trace rows compared byte for byte", a.len()))
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn acagd_violations(
    label: &str,
    gamma: f64,
    eps: f64,
    delta_f: f64,
    iters: usize,
    values: &[f64],
    disp: &[f64],
) -> Vec<String> {
    let mut out = Vec::new();
    let bound = 1.0 + 5.0 * gamma * delta_f / (eps * eps);
    if iters as f64 > bound {
        out.push(format!("{label}: {iters} outer iterations > {bound:.1}"));
    }
    for (j, d) in disp.iter().enumerate() {
        if values[j + 1] > values[j] - gamma * d * d + 1e-10 {
            out.push(format!(
                "{label}: step {j} descent {:.3e} < gamma |dz|^2 = {:.3e}",
                values[j] - values[j + 1],
                gamma * d * d
            ));
        }
    }
    out
}

fn timed(id: u8, name: &'static str, body: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = body();
    CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn verdict(failures: Vec<String>, summary: String) -> (bool, String) {
    if failures.is_empty() {
        return (true, summary);
    }
    let shown: Vec<_> = failures.iter().take(5).cloned().collect();
    let more = failures.len().saturating_sub(shown.len());
    let mut detail = format!("{summary}; {} violation(s): {}", failures.len(), shown.join("; "));
    if more > 0 {
        detail.push_str(&format!("; ... {more} more"));
    }
    (false, detail)
}

fn gaussian(d: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::<f64>::from_fn(d, |_, _| StandardNormal.sample(rng))
}

/// Symmetric matrix with a random orthogonal eigenbasis and eigenvalues
/// uniform in `[-1, 1]`.
fn random_symmetric(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let spectrum: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    Quadratic::with_spectrum(&spectrum, rng).matrix().clone()
}

/// `f(x, y) = x^2 - y^2/4 + y^4/16`: `lambda_min(H) = -1/2` at `y = 0`, so `f`
/// is 1/2-almost convex; minima `-1/4` at `(0, +-sqrt 2)`.
struct TiltedQuartic;

impl Objective for TiltedQuartic {
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        x[0] * x[0] - 0.25 * x[1] * x[1] + x[1].powi(4) / 16.0
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![2.0 * x[0], -0.5 * x[1] + 0.25 * x[1].powi(3)])
    }
    fn hvp(&self, x: &DVector<f64>, v: &DVector<f64>) -> Option<DVector<f64>> {
        Some(DVector::from_vec(vec![
            2.0 * v[0],
            (-0.5 + 0.75 * x[1] * x[1]) * v[1],
        ]))
    }
    fn hessian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        Some(DMatrix::from_diagonal(&DVector::from_vec(vec![
            2.0,
            -0.5 + 0.75 * x[1] * x[1],
        ])))
    }
}

fn tilted_quartic() -> TestProblem {
    const RADIUS: f64 = 3.0;
    TestProblem {
        id: "tilted-quartic".into(),
        objective: Arc::new(TiltedQuartic),
        // On the ball: Hessian in [-1/2, max(2, -1/2 + 3 R^2 / 4)], third derivative 3R/2.
        params: hessfree::oracle::SmoothnessParams::new(
            2f64.max(-0.5 + 0.75 * RADIUS * RADIUS),
            1.5 * RADIUS,
            1.0,
        )
        .expect("positive constants"),
        start: DVector::from_vec(vec![1.0, 1.0]),
        domain: Some(Domain::Ball { radius: RADIUS }),
        known_minimum: Some(-0.25),
        known_minimizers: vec![
            DVector::from_vec(vec![0.0, 2f64.sqrt()]),
            DVector::from_vec(vec![0.0, -(2f64.sqrt())]),
        ],
        strict_saddle_sigma: None,
        tags: vec![hessfree::oracle::Tag::Nonconvex],
    }
}
