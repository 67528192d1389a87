//! End-to-end checks of the solvers against dense linear algebra and the
//! guarantees they are built on.

use approx::assert_abs_diff_eq;
use hessfree::agd::{accelerated_gradient_descent, AgdOptions};
use hessfree::curvature::{negative_curvature_descent, NcdOptions};
use hessfree::driver::{
    accelerated_nonconvex, gradient_descent_baseline, rho_alpha, rho_alpha_hessian_action,
    strict_saddle, SolverConfig,
};
use hessfree::eigen::dense_min_eigenvalue;
use hessfree::oracle::{problem_from_id, Oracle, TestProblem, SUITE_IDS};
use hessfree::Phase;
use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense_min(p: &TestProblem, x: &DVector<f64>) -> f64 {
    dense_min_eigenvalue(p.dense_hessian(x))
}

fn ncd(p: &TestProblem, alpha: f64, delta: f64, seed: u64) -> hessfree::curvature::NcdResult {
    let mut f = p.oracle();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    negative_curvature_descent(
        &mut f,
        &p.start,
        p.params.l2,
        alpha,
        p.params.delta_f,
        delta,
        p.params.l1,
        &NcdOptions::default(),
        &mut rng,
    )
    .unwrap()
}

#[test]
fn ncd_escapes_the_double_well_saddle() {
    let p = problem_from_id("doublewell:d=5", 0).unwrap();
    let alpha = 1.0;
    let r = ncd(&p, alpha, 0.1, 3);
    assert!(r.certified);
    assert!(r.steps_taken >= 1);
    assert!(r.end_value < r.start_value);
    assert!(dense_min(&p, &r.z) >= -alpha, "lambda_min {}", dense_min(&p, &r.z));
    for s in &r.steps {
        assert_abs_diff_eq!(s.eta.abs(), 2.0 * s.rayleigh.abs() / p.params.l2, epsilon = 1e-15);
        assert!(s.eta_dot_grad >= 0.0);
        assert!(s.value_before - s.value_after >= s.rayleigh.abs().powi(3) / (3.0 * p.params.l2.powi(2)) * (1.0 - 1e-9));
    }
}

#[test]
fn false_certificates_are_rare() {
    let p = problem_from_id("nonconvex-quadratic:d=12", 7).unwrap();
    let (alpha, delta, trials) = (0.5, 0.1, 200);
    let mut false_certs = 0;
    for seed in 0..trials {
        let r = ncd(&p, alpha, delta, seed);
        assert!(r.certified);
        if dense_min(&p, &r.z) < -alpha {
            false_certs += 1;
        }
    }
    assert!(false_certs as f64 <= delta * trials as f64, "{false_certs} false certificates");
}

/// Dense Hessian of `f + rho_alpha(. - center)`.
fn penalized_hessian(p: &TestProblem, y: &DVector<f64>, center: &DVector<f64>, alpha: f64) -> DMatrix<f64> {
    let d = p.dim();
    let shift = y - center;
    let mut h = p.dense_hessian(y);
    for j in 0..d {
        let e = DVector::from_fn(d, |i, _| if i == j { 1.0 } else { 0.0 });
        let col = rho_alpha_hessian_action(&shift, &e, alpha, p.params.l1, p.params.l2);
        let mut c = h.column_mut(j);
        c += col;
    }
    h
}

#[test]
fn penalized_model_is_almost_convex_and_smooth_at_a_certified_point() {
    let p = problem_from_id("doublewell:d=4:coupling=0.5", 1).unwrap();
    let alpha = 2.0;
    let r = ncd(&p, alpha, 0.05, 11);
    let x_hat = r.z;
    assert!(dense_min(&p, &x_hat) >= -alpha);
    let (l1, l2) = (p.params.l1, p.params.l2);
    let fk = |y: &DVector<f64>| -> (f64, DVector<f64>) {
        let (pv, pg) = rho_alpha(&(y - &x_hat), alpha, l1, l2);
        (p.objective.value(y) + pv, p.objective.gradient(y) + pg)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut sample = |scale: f64| {
        DVector::<f64>::from_fn(4, |i, _| (x_hat[i] + scale * rng.random_range(-1.0..1.0)).clamp(-2.0, 2.0))
    };
    for k in 0..300 {
        let scale = [0.02, 0.1, 0.5][k % 3];
        let x = sample(scale);
        let y = sample(scale);
        let (fx, gx) = fk(&x);
        let (fy, gy) = fk(&y);
        let dist = (&y - &x).norm();
        assert!(fy >= fx + gx.dot(&(&y - &x)) - 1.5 * alpha * dist * dist - 1e-10);
        assert!((gy - gx).norm() <= 5.0 * l1 * dist + 1e-10);
        let h = penalized_hessian(&p, &y, &x_hat, alpha);
        assert!(dense_min_eigenvalue(h) >= -3.0 * alpha - 1e-9);
    }
}

fn suite_runs(eps: f64) -> Vec<(TestProblem, hessfree::driver::RunReport)> {
    SUITE_IDS
        .iter()
        .filter(|id| !id.starts_with("random-nonconvex"))
        .map(|id| {
            let p = problem_from_id(id, 0).unwrap();
            let mut cfg = SolverConfig::new(eps);
            cfg.record_points = true;
            let r = accelerated_nonconvex(&mut p.oracle(), &p.start, &p.params, &cfg).unwrap();
            (p, r)
        })
        .collect()
}

#[test]
fn accelerated_runs_keep_their_invariants() {
    let eps = 1e-3;
    for (p, r) in suite_runs(eps) {
        assert!(r.grad_norm <= eps, "{}", p.id);
        assert_eq!(r.trace_totals(), r.totals, "{}", p.id);
        let alpha = r.alpha.unwrap();
        assert!(dense_min(&p, &r.x) >= -2.0 * alpha - 1e-9, "{}", p.id);
        if alpha >= p.params.l1 {
            assert!(r.phase_trace.iter().all(|row| row.phase != Phase::Ncd));
            assert_eq!(r.totals.hvp, 0);
        }
        // ACAGD never increases f.
        for run in &r.acagd_runs {
            assert!(run.f_end <= run.f_start + 1e-12 * (1.0 + run.f_start.abs()), "{}", p.id);
        }
        // Every non-terminal iterate that NCD left alone moved at least this far.
        let floor = alpha / p.params.l2 + eps / (4.0 * p.params.l1);
        for w in r.outer_points.windows(2) {
            let (prev, cur) = (&w[0], &w[1]);
            if cur.iteration < r.outer_iterations && !cur.ncd_moved {
                let dist = (&cur.x_hat - &prev.x_hat).norm();
                assert!(dist >= floor * (1.0 - 1e-9), "{}: {dist} < {floor}", p.id);
            }
        }
    }
}

#[test]
fn double_well_reaches_a_second_order_point() {
    let p = problem_from_id("doublewell:d=20", 0).unwrap();
    let eps = 1e-4;
    let r = accelerated_nonconvex(&mut p.oracle(), &p.start, &p.params, &SolverConfig::new(eps)).unwrap();
    assert!(r.grad_norm <= eps);
    assert!(dense_min(&p, &r.x) >= -2.0 * (eps * p.params.l2).sqrt());
}

#[test]
fn gradient_descent_obeys_the_descent_lemma() {
    let p = problem_from_id("rosenbrock:d=2:a=10", 0).unwrap();
    let mut cfg = SolverConfig::new(1e-3);
    cfg.gd_trace_full = true;
    let r = gradient_descent_baseline(&mut p.oracle(), &p.start, &p.params, &cfg).unwrap();
    assert!(r.grad_norm <= 1e-3);
    for w in r.phase_trace.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let bound = a.f - a.grad_norm * a.grad_norm / (2.0 * p.params.l1);
        assert!(b.f <= bound + 1e-12 * (1.0 + a.f.abs()));
    }
}

#[test]
fn agd_converges_on_an_ill_conditioned_quadratic() {
    let p = problem_from_id("quadratic:d=30:kappa=1000", 4).unwrap();
    let mut f = p.oracle();
    let l1 = p.params.l1;
    let r = accelerated_gradient_descent(&mut f, &p.start, 1e-8, l1, l1 / 1000.0, &AgdOptions::default()).unwrap();
    assert_eq!(r.grad_cost, f.counts().grad);
    assert!(f.eval_grad(&r.y).unwrap().norm() <= 1e-8);
}

#[test]
fn strict_saddle_on_a_strongly_convex_quadratic() {
    let p = problem_from_id("quadratic:d=8:kappa=10", 2).unwrap();
    let sigma = p.params.l1 / 10.0;
    for eps in [1e-4, 1e-8] {
        let r = strict_saddle(&mut p.oracle(), &p.start, &p.params, sigma, &SolverConfig::new(eps)).unwrap();
        assert!(r.grad_norm <= eps);
        // The only minimizer is the origin.
        assert!(r.x.norm() <= 2.0 * eps / sigma);
    }
}
