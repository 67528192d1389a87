//! Top-level solvers: the accelerated non-convex method, its strict-saddle
//! variant, plain gradient descent, and single-component runs used as
//! benchmark baselines.
//!
//! Every solver returns a [`RunReport`] whose `phase_trace` attributes each
//! oracle call to exactly one row, so the totals are the sum of the rows.

mod penalty;

use std::time::{Duration, Instant};

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use penalty::{
    hinge, hinge_hessian_action, rho_alpha, rho_alpha_hessian_action, Penalized,
};

use crate::agd::{accelerated_gradient_descent, AgdOptions};
use crate::almost_convex::{almost_convex_agd, AlmostConvexOptions, InnerSmoothness};
use crate::curvature::{negative_curvature_descent, NcdOptions, NcdStep};
use crate::eigen::EigenConfig;
use crate::error::{Error, Phase, Result, Routine};
use crate::oracle::{CallCounts, Oracle, SmoothnessParams};

/// Safety multipliers on the worst-case iteration bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Caps {
    pub outer: f64,
    pub inner: f64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            outer: 2.0,
            inner: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub eps: f64,
    pub delta: f64,
    /// Curvature tolerance; `choose_alpha` when absent.
    pub alpha: Option<f64>,
    pub seed: u64,
    pub caps: Caps,
    pub eigen: EigenConfig,
    pub inner_smoothness: InnerSmoothness,
    /// Record every gradient-descent iteration instead of powers of two.
    pub gd_trace_full: bool,
    /// Keep the outer iterates `x_hat_k` in the report.
    pub record_points: bool,
}

impl SolverConfig {
    pub fn new(eps: f64) -> Self {
        SolverConfig {
            eps,
            delta: 0.1,
            alpha: None,
            seed: 0,
            caps: Caps::default(),
            eigen: EigenConfig::default(),
            inner_smoothness: InnerSmoothness::default(),
            gd_trace_full: false,
            record_points: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if !(self.caps.outer >= 1.0 && self.caps.inner >= 1.0) {
            return Err(Error::InvalidArgument("cap multipliers must be >= 1".into()));
        }
        Ok(())
    }
}

/// One trace row. `calls` are the calls spent since the previous row.
///
/// `f` and `grad_norm` describe the point the row is about: for NCD steps the
/// point before the step, for ACAGD rows the point it returned (with the
/// gradient norm of the penalized model), and for checkpoint rows the outer
/// iterate at which the stopping test ran.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRecord {
    pub phase: Phase,
    pub iteration: usize,
    pub calls: CallCounts,
    pub f: f64,
    pub grad_norm: f64,
}

/// One inner almost-convex run inside the accelerated method.
#[derive(Debug, Clone, PartialEq)]
pub struct AcagdRecord {
    pub outer_iteration: usize,
    pub gamma: f64,
    pub eps: f64,
    pub delta_f: f64,
    pub iterations: usize,
    /// Penalized-model values `f_k(z_1), ..., f_k(z_{j_*})`.
    pub values: Vec<f64>,
    pub displacements: Vec<f64>,
    /// `f(x_hat_k)` and `f(x_{k+1})` on the original function.
    pub f_start: f64,
    pub f_end: f64,
}

/// An outer iterate of the accelerated method.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterPoint {
    pub iteration: usize,
    pub x_hat: DVector<f64>,
    /// NCD moved away from `x_k` (so `x_hat_k != x_k`).
    pub ncd_moved: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub x: DVector<f64>,
    pub value: f64,
    pub grad_norm: f64,
    /// Smallest Hessian eigenvalue at `x`, filled in by verification code.
    pub min_hessian_eig: Option<f64>,
    pub phase_trace: Vec<PhaseRecord>,
    pub totals: CallCounts,
    pub wallclock: Duration,
    pub outer_iterations: usize,
    pub alpha: Option<f64>,
    pub ncd_steps: Vec<NcdStep>,
    pub ncd_calls: usize,
    /// Every NCD call ended on a passed eigenvector test.
    pub ncd_certified: bool,
    pub acagd_runs: Vec<AcagdRecord>,
    pub outer_points: Vec<OuterPoint>,
    pub phase2_calls: Option<CallCounts>,
    /// Some eigenvector estimate ran out of budget.
    pub degraded: bool,
}

impl RunReport {
    fn empty(x: DVector<f64>) -> Self {
        RunReport {
            x,
            value: f64::NAN,
            grad_norm: f64::NAN,
            min_hessian_eig: None,
            phase_trace: Vec::new(),
            totals: CallCounts::default(),
            wallclock: Duration::ZERO,
            outer_iterations: 0,
            alpha: None,
            ncd_steps: Vec::new(),
            ncd_calls: 0,
            ncd_certified: true,
            acagd_runs: Vec::new(),
            outer_points: Vec::new(),
            phase2_calls: None,
            degraded: false,
        }
    }

    /// Sum of the per-row call counts.
    pub fn trace_totals(&self) -> CallCounts {
        self.phase_trace
            .iter()
            .fold(CallCounts::default(), |acc, r| acc + r.calls)
    }

    pub fn is_stationary(&self, eps: f64) -> bool {
        self.grad_norm <= eps
    }
}

/// `min{L1, max{eps^2 / delta_f, sqrt(eps L2)}}`.
pub fn choose_alpha(eps: f64, l1: f64, l2: f64, delta_f: f64) -> f64 {
    l1.min((eps * eps / delta_f).max((eps * l2).sqrt()))
}

/// `K = ceil(1 + delta_f (12 L2^2 / alpha^3 + sqrt(10) L2 / (alpha eps)))`.
pub fn outer_round_count(params: &SmoothnessParams, alpha: f64, eps: f64) -> f64 {
    (1.0 + params.delta_f
        * (12.0 * params.l2 * params.l2 / alpha.powi(3)
            + 10f64.sqrt() * params.l2 / (alpha * eps)))
        .ceil()
}

/// Worst-case outer iteration count of the accelerated method.
pub fn outer_iteration_bound(params: &SmoothnessParams, alpha: f64, eps: f64) -> f64 {
    if alpha < params.l1 {
        2.0 + params.delta_f
            * (12.0 * params.l2 * params.l2 / alpha.powi(3)
                + 10f64.sqrt() * params.l2 / (alpha * eps))
    } else {
        2.0 + 16.0 * params.delta_f * params.l1 / (3.0 * eps * eps)
    }
}

/// `1 + 2 L1 delta_f / eps^2`.
pub fn gd_iteration_bound(l1: f64, delta_f: f64, eps: f64) -> f64 {
    1.0 + 2.0 * l1 * delta_f / (eps * eps)
}

fn to_cap(x: f64) -> usize {
    if x.is_finite() && x < usize::MAX as f64 {
        x.ceil() as usize
    } else {
        usize::MAX
    }
}

fn resolve_alpha(params: &SmoothnessParams, cfg: &SolverConfig, eps: f64) -> Result<f64> {
    let alpha = cfg
        .alpha
        .unwrap_or_else(|| choose_alpha(eps, params.l1, params.l2, params.delta_f));
    if !(alpha > 0.0 && alpha <= params.l1) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, L1 = {}], got {alpha}",
            params.l1
        )));
    }
    Ok(alpha)
}

/// Keep a bounded history of gradient norms for error reports.
fn push_history(h: &mut Vec<f64>, v: f64) {
    const MAX: usize = 4096;
    if h.len() == MAX {
        h.drain(..MAX / 2);
    }
    h.push(v);
}

/// Find `x` with `|grad f(x)| <= eps` and, with probability `1 - delta`,
/// `lambda_min(hess f(x)) >= -2 alpha`.
pub fn accelerated_nonconvex<O: Oracle + ?Sized>(
    f: &mut O,
    x1: &DVector<f64>,
    params: &SmoothnessParams,
    cfg: &SolverConfig,
) -> Result<RunReport> {
    params.validate()?;
    cfg.validate()?;
    let clock = Instant::now();
    let start = f.counts();
    let eps = cfg.eps;
    let alpha = resolve_alpha(params, cfg, eps)?;
    let (l1, l2, delta_f) = (params.l1, params.l2, params.delta_f);
    let delta_k = cfg.delta / outer_round_count(params, alpha, eps);
    let cap = to_cap(cfg.caps.outer * outer_iteration_bound(params, alpha, eps));
    let use_ncd = alpha < l1;
    let ncd_opts = NcdOptions {
        eigen: cfg.eigen,
        step_cap_factor: cfg.caps.outer,
    };
    let acagd_opts = AlmostConvexOptions {
        inner_smoothness: cfg.inner_smoothness,
        outer_cap_factor: cfg.caps.inner,
        inner_cap_factor: cfg.caps.inner,
        delta_f: Some(delta_f),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = RunReport::empty(x1.clone());
    report.alpha = Some(alpha);
    let mut history = Vec::new();
    let mut x = x1.clone();
    let mut mark = f.counts();

    for k in 1.. {
        if k > cap {
            return Err(Error::NonConvergence {
                routine: Routine::AcceleratedNonconvex,
                cap,
                last_grad_norm: history.last().copied().unwrap_or(f64::NAN),
                grad_norms: history,
            });
        }
        let (x_hat, f_hat, moved) = if use_ncd {
            let ncd = negative_curvature_descent(
                f, &x, l2, alpha, delta_f, delta_k, l1, &ncd_opts, &mut rng,
            )
            .map_err(|e| e.in_phase(Phase::Ncd))?;
            for s in &ncd.steps {
                report.phase_trace.push(PhaseRecord {
                    phase: Phase::Ncd,
                    iteration: k,
                    calls: s.calls,
                    f: s.value_before,
                    grad_norm: s.grad_norm,
                });
            }
            // Step rows cover everything but the start value and the final test.
            mark = mark + ncd.steps.iter().fold(CallCounts::default(), |a, s| a + s.calls);
            report.ncd_calls += 1;
            report.ncd_certified &= ncd.certified;
            report.degraded |= ncd.degraded;
            let moved = ncd.steps_taken > 0;
            report.ncd_steps.extend(ncd.steps);
            (ncd.z, ncd.end_value, moved)
        } else {
            let v = f.eval_value(&x)?;
            (x, v, false)
        };
        if cfg.record_points {
            report.outer_points.push(OuterPoint {
                iteration: k,
                x_hat: x_hat.clone(),
                ncd_moved: moved,
            });
        }
        let grad_norm = f.eval_grad(&x_hat)?.norm();
        push_history(&mut history, grad_norm);
        report.outer_iterations = k;
        if grad_norm <= eps {
            let now = f.counts();
            report.phase_trace.push(PhaseRecord {
                phase: if use_ncd { Phase::Ncd } else { Phase::Acagd },
                iteration: k,
                calls: now - mark,
                f: f_hat,
                grad_norm,
            });
            report.x = x_hat;
            report.value = f_hat;
            report.grad_norm = grad_norm;
            report.totals = now - start;
            report.wallclock = clock.elapsed();
            return Ok(report);
        }
        if use_ncd {
            let now = f.counts();
            report.phase_trace.push(PhaseRecord {
                phase: Phase::Ncd,
                iteration: k,
                calls: now - mark,
                f: f_hat,
                grad_norm,
            });
            mark = now;
        }
        let inner = {
            let mut fk = Penalized::new(&mut *f, x_hat.clone(), alpha / l2, l1);
            almost_convex_agd(&mut fk, &x_hat, eps / 2.0, 3.0 * alpha, 5.0 * l1, &acagd_opts)
                .map_err(|e| e.in_phase(Phase::Acagd))?
        };
        let f_next = f.eval_value(&inner.z)?;
        let now = f.counts();
        report.phase_trace.push(PhaseRecord {
            phase: Phase::Acagd,
            iteration: k,
            calls: now - mark,
            f: f_next,
            grad_norm: *inner.grad_norms.last().unwrap_or(&f64::NAN),
        });
        mark = now;
        report.acagd_runs.push(AcagdRecord {
            outer_iteration: k,
            gamma: 3.0 * alpha,
            eps: eps / 2.0,
            delta_f,
            iterations: inner.outer_iterations,
            values: inner.values,
            displacements: inner.displacements,
            f_start: f_hat,
            f_end: f_next,
        });
        x = inner.z;
    }
    unreachable!()
}

/// Gradient descent with step `1 / L1`, stopped on the gradient norm.
pub fn gradient_descent_baseline<O: Oracle + ?Sized>(
    f: &mut O,
    x1: &DVector<f64>,
    params: &SmoothnessParams,
    cfg: &SolverConfig,
) -> Result<RunReport> {
    params.validate()?;
    cfg.validate()?;
    let clock = Instant::now();
    let start = f.counts();
    let eps = cfg.eps;
    let l1 = params.l1;
    let cap = to_cap(cfg.caps.outer * gd_iteration_bound(l1, params.delta_f, eps));
    let mut report = RunReport::empty(x1.clone());
    let mut history = Vec::new();
    let mut x = x1.clone();
    let mut mark = start;
    let mut next_record = 1;

    for k in 1.. {
        let g = f.eval_grad(&x)?;
        let norm = g.norm();
        push_history(&mut history, norm);
        let done = norm <= eps;
        if done || cfg.gd_trace_full || k == next_record {
            let value = f.eval_value(&x)?;
            let now = f.counts();
            report.phase_trace.push(PhaseRecord {
                phase: Phase::Gd,
                iteration: k,
                calls: now - mark,
                f: value,
                grad_norm: norm,
            });
            mark = now;
            if k == next_record {
                next_record *= 2;
            }
            if done {
                report.x = x;
                report.value = value;
                report.grad_norm = norm;
                report.outer_iterations = k;
                report.totals = now - start;
                report.wallclock = clock.elapsed();
                return Ok(report);
            }
        }
        if k >= cap {
            return Err(Error::NonConvergence {
                routine: Routine::GradientDescent,
                cap,
                last_grad_norm: norm,
                grad_norms: history,
            });
        }
        x.axpy(-1.0 / l1, &g, 1.0);
    }
    unreachable!()
}

/// Two-phase method for strict-saddle functions: the accelerated method at
/// accuracy `max{eps, sigma1^2 / (16 L2)}`, then AGD on a locally strongly
/// convex penalized model around the point it found.
pub fn strict_saddle<O: Oracle + ?Sized>(
    f: &mut O,
    x1: &DVector<f64>,
    params: &SmoothnessParams,
    sigma1: f64,
    cfg: &SolverConfig,
) -> Result<RunReport> {
    if !(sigma1 > 0.0 && sigma1.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sigma1 must be positive, got {sigma1}"
        )));
    }
    cfg.validate()?;
    let clock = Instant::now();
    let eps = cfg.eps;
    let eps_bar = eps.max(sigma1 * sigma1 / (16.0 * params.l2));
    let phase1_cfg = SolverConfig {
        eps: eps_bar,
        alpha: Some(resolve_alpha(params, cfg, eps_bar)?),
        ..*cfg
    };
    let mut report = accelerated_nonconvex(f, x1, params, &phase1_cfg)?;
    if eps < eps_bar {
        let before = f.counts();
        let x_plus = report.x.clone();
        let agd_opts = AgdOptions {
            cap_factor: cfg.caps.inner,
            gap: None,
            record_iterates: false,
        };
        let agd = {
            let mut fp = Penalized::new(
                &mut *f,
                x_plus.clone(),
                sigma1 / (4.0 * params.l2),
                params.l1,
            );
            accelerated_gradient_descent(&mut fp, &x_plus, eps, 5.0 * params.l1, sigma1 / 2.0, &agd_opts)
                .map_err(|e| e.in_phase(Phase::AgdPhase2))?
        };
        // The model agrees with f only inside the hinge radius; check f itself.
        let grad_norm = f.eval_grad(&agd.y)?.norm();
        let value = f.eval_value(&agd.y)?;
        let calls = f.counts() - before;
        if grad_norm > eps {
            return Err(Error::NonConvergence {
                routine: Routine::Agd,
                cap: agd.iterations,
                last_grad_norm: grad_norm,
                grad_norms: vec![grad_norm],
            }
            .in_phase(Phase::AgdPhase2));
        }
        report.phase_trace.push(PhaseRecord {
            phase: Phase::AgdPhase2,
            iteration: agd.iterations,
            calls,
            f: value,
            grad_norm,
        });
        report.phase2_calls = Some(calls);
        report.totals = report.totals + calls;
        report.x = agd.y;
        report.value = value;
        report.grad_norm = grad_norm;
    }
    report.wallclock = clock.elapsed();
    Ok(report)
}

/// A single negative-curvature-descent call at `choose_alpha(eps)`. The
/// returned point is second-order certified but not necessarily stationary.
pub fn ncd_only<O: Oracle + ?Sized>(
    f: &mut O,
    x1: &DVector<f64>,
    params: &SmoothnessParams,
    cfg: &SolverConfig,
) -> Result<RunReport> {
    params.validate()?;
    cfg.validate()?;
    let clock = Instant::now();
    let start = f.counts();
    let alpha = resolve_alpha(params, cfg, cfg.eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let opts = NcdOptions {
        eigen: cfg.eigen,
        step_cap_factor: cfg.caps.outer,
    };
    let ncd = negative_curvature_descent(
        f,
        x1,
        params.l2,
        alpha,
        params.delta_f,
        cfg.delta,
        params.l1,
        &opts,
        &mut rng,
    )
    .map_err(|e| e.in_phase(Phase::Ncd))?;
    let mut report = RunReport::empty(x1.clone());
    report.alpha = Some(alpha);
    let mut mark = start;
    for s in &ncd.steps {
        report.phase_trace.push(PhaseRecord {
            phase: Phase::Ncd,
            iteration: 1,
            calls: s.calls,
            f: s.value_before,
            grad_norm: s.grad_norm,
        });
        mark = mark + s.calls;
    }
    let grad_norm = f.eval_grad(&ncd.z)?.norm();
    let now = f.counts();
    report.phase_trace.push(PhaseRecord {
        phase: Phase::Ncd,
        iteration: 1,
        calls: now - mark,
        f: ncd.end_value,
        grad_norm,
    });
    report.x = ncd.z;
    report.value = ncd.end_value;
    report.grad_norm = grad_norm;
    report.outer_iterations = 1;
    report.ncd_calls = 1;
    report.ncd_certified = ncd.certified;
    report.degraded = ncd.degraded;
    report.ncd_steps = ncd.steps;
    report.totals = now - start;
    report.wallclock = clock.elapsed();
    Ok(report)
}

/// The almost-convex method with `gamma = L1`, valid for any `L1`-smooth `f`.
pub fn acagd_only<O: Oracle + ?Sized>(
    f: &mut O,
    x1: &DVector<f64>,
    params: &SmoothnessParams,
    cfg: &SolverConfig,
) -> Result<RunReport> {
    params.validate()?;
    cfg.validate()?;
    let clock = Instant::now();
    let start = f.counts();
    let opts = AlmostConvexOptions {
        inner_smoothness: cfg.inner_smoothness,
        outer_cap_factor: cfg.caps.inner,
        inner_cap_factor: cfg.caps.inner,
        delta_f: Some(params.delta_f),
    };
    let res = almost_convex_agd(f, x1, cfg.eps, params.l1, params.l1, &opts)
        .map_err(|e| e.in_phase(Phase::Acagd))?;
    let now = f.counts();
    let grad_norm = *res.grad_norms.last().unwrap_or(&f64::NAN);
    let mut report = RunReport::empty(x1.clone());
    report.phase_trace.push(PhaseRecord {
        phase: Phase::Acagd,
        iteration: res.outer_iterations,
        calls: now - start,
        f: res.end_value,
        grad_norm,
    });
    report.acagd_runs.push(AcagdRecord {
        outer_iteration: 1,
        gamma: params.l1,
        eps: cfg.eps,
        delta_f: params.delta_f,
        iterations: res.outer_iterations,
        values: res.values,
        displacements: res.displacements,
        f_start: res.start_value,
        f_end: res.end_value,
    });
    report.x = res.z;
    report.value = res.end_value;
    report.grad_norm = grad_norm;
    report.outer_iterations = res.outer_iterations;
    report.totals = now - start;
    report.wallclock = clock.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::oracle::{CountingOracle, Quadratic};

    #[test]
    fn choose_alpha_examples() {
        assert_eq!(choose_alpha(1e3, 2.0, 1.0, 1.0), 2.0);
        assert_eq!(choose_alpha(1e-4, 10.0, 1.0, 1.0), 1e-2);
    }

    #[test]
    fn stationary_start_is_a_single_certification() {
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0, 2.0])));
        let params = SmoothnessParams::new(2.0, 1.0, 1.0).unwrap();
        let x1 = DVector::from_vec(vec![1e-5, 0.0]);
        let r = accelerated_nonconvex(&mut o, &x1, &params, &SolverConfig::new(1e-3)).unwrap();
        assert_eq!(r.outer_iterations, 1);
        assert_eq!(r.ncd_calls, 1);
        assert!(r.acagd_runs.is_empty());
        assert_eq!(r.trace_totals(), r.totals);
        assert_eq!(r.x, x1);
    }

    #[test]
    fn gd_stops_immediately_when_stationary() {
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0])));
        let params = SmoothnessParams::new(1.0, 1.0, 1.0).unwrap();
        let x1 = DVector::from_vec(vec![1e-4]);
        let r = gradient_descent_baseline(&mut o, &x1, &params, &SolverConfig::new(1e-3)).unwrap();
        assert_eq!(r.totals.grad, 1);
        assert_eq!(r.outer_iterations, 1);
    }

    #[test]
    fn gd_contracts_on_a_scalar_quadratic() {
        // f = x^2 / 2 with L1 = 4: x_{k+1} = (1 - 1/4) x_k.
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0])));
        let params = SmoothnessParams::new(4.0, 1.0, 1.0).unwrap();
        let cfg = SolverConfig {
            gd_trace_full: true,
            ..SolverConfig::new(1e-6)
        };
        let r = gradient_descent_baseline(&mut o, &DVector::from_vec(vec![1.0]), &params, &cfg)
            .unwrap();
        for (k, row) in r.phase_trace.iter().enumerate() {
            let expected = 0.75f64.powi(k as i32);
            assert!((row.grad_norm - expected).abs() < 1e-12);
        }
        assert_eq!(r.trace_totals(), r.totals);
    }

    #[test]
    fn alpha_equal_to_l1_skips_curvature() {
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0, 0.5])));
        let params = SmoothnessParams::new(1.0, 1.0, 1.0).unwrap();
        let cfg = SolverConfig {
            alpha: Some(1.0),
            ..SolverConfig::new(1e-4)
        };
        let r = accelerated_nonconvex(&mut o, &DVector::from_vec(vec![1.0, 1.0]), &params, &cfg)
            .unwrap();
        assert!(r.phase_trace.iter().all(|p| p.phase != Phase::Ncd));
        assert_eq!(r.totals.hvp, 0);
        assert!(r.grad_norm <= 1e-4);
        assert_eq!(r.trace_totals(), r.totals);
    }

    #[test]
    fn rejects_alpha_above_l1() {
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0])));
        let params = SmoothnessParams::new(1.0, 1.0, 1.0).unwrap();
        let cfg = SolverConfig {
            alpha: Some(2.0),
            ..SolverConfig::new(1e-3)
        };
        assert!(accelerated_nonconvex(&mut o, &DVector::from_vec(vec![1.0]), &params, &cfg).is_err());
    }
}
