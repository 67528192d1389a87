//! Negative-curvature descent.
//!
//! At each iterate, estimate the smallest Hessian eigenvector to additive
//! accuracy `alpha / 2`. If its curvature is at most `-alpha / 2`, step along
//! it with length `2 |v^T H v| / L2`, signed against the gradient; each such
//! step lowers `f` by at least `alpha^3 / (12 L2^2)`. Otherwise stop: with high
//! probability `lambda_min(H) >= -alpha` there.

use nalgebra::DVector;
use rand::Rng;

use crate::eigen::{min_eigvec, EigenConfig};
use crate::error::{Error, Result};
use crate::oracle::{CallCounts, Oracle};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcdOptions {
    pub eigen: EigenConfig,
    /// Multiple of the worst-case step count at which the routine gives up.
    pub step_cap_factor: f64,
}

impl Default for NcdOptions {
    fn default() -> Self {
        NcdOptions {
            eigen: EigenConfig::default(),
            step_cap_factor: 2.0,
        }
    }
}

/// One accepted step `z_{k+1} = z_k - eta_k v_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct NcdStep {
    pub value_before: f64,
    pub value_after: f64,
    /// `|grad f(z_k)|`.
    pub grad_norm: f64,
    /// Recomputed `v_k^T H(z_k) v_k`.
    pub rayleigh: f64,
    /// Signed step size `eta_k`.
    pub eta: f64,
    /// `eta_k v_k^T grad f(z_k)`; non-negative by construction.
    pub eta_dot_grad: f64,
    /// Oracle calls spent on this step, eigenvector estimate included.
    pub calls: CallCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NcdResult {
    pub z: DVector<f64>,
    pub steps_taken: usize,
    pub eig_calls: usize,
    /// `f(z_1) - f(z)`.
    pub total_decrease: f64,
    /// The final eigenvector test passed (`v^T H v > -alpha / 2`).
    pub certified: bool,
    /// Some eigenvector estimate stopped on its budget rather than on an
    /// invariant subspace.
    pub degraded: bool,
    pub final_rayleigh: f64,
    pub start_value: f64,
    pub end_value: f64,
    pub steps: Vec<NcdStep>,
    /// Calls spent on the terminating eigenvector test.
    pub final_calls: CallCounts,
    /// Failure probability used for each eigenvector call.
    pub per_call_delta: f64,
}

/// `delta' = delta / (1 + 12 L2^2 delta_f / alpha^3)`.
pub fn per_call_failure_prob(delta: f64, l2: f64, delta_f: f64, alpha: f64) -> f64 {
    delta / (1.0 + 12.0 * l2 * l2 * delta_f / alpha.powi(3))
}

/// Guaranteed decrease per accepted step, `alpha^3 / (12 L2^2)`.
pub fn min_step_decrease(alpha: f64, l2: f64) -> f64 {
    alpha.powi(3) / (12.0 * l2 * l2)
}

/// Worst-case number of accepted steps, `1 + 12 L2^2 delta_f / alpha^3`.
pub fn step_bound(l2: f64, delta_f: f64, alpha: f64) -> f64 {
    1.0 + 12.0 * l2 * l2 * delta_f / alpha.powi(3)
}

#[allow(clippy::too_many_arguments)]
pub fn negative_curvature_descent<O, R>(
    f: &mut O,
    z1: &DVector<f64>,
    l2: f64,
    alpha: f64,
    delta_f: f64,
    delta: f64,
    l1: f64,
    opts: &NcdOptions,
    rng: &mut R,
) -> Result<NcdResult>
where
    O: Oracle + ?Sized,
    R: Rng + ?Sized,
{
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if !(l2 > 0.0 && delta_f > 0.0 && l1 > 0.0) {
        return Err(Error::InvalidArgument(
            "L1, L2 and delta_f must be positive".into(),
        ));
    }
    let per_call_delta = per_call_failure_prob(delta, l2, delta_f, alpha);
    let cap_f = (opts.step_cap_factor * step_bound(l2, delta_f, alpha)).ceil();
    let cap = if cap_f < usize::MAX as f64 { cap_f as usize } else { usize::MAX };

    let mut z = z1.clone();
    let start_value = f.eval_value(&z)?;
    let mut value = start_value;
    let mut steps = Vec::new();
    let mut eig_calls = 0;
    let mut degraded = false;

    loop {
        let before = f.counts();
        let est = min_eigvec(f, &z, alpha / 2.0, per_call_delta, l1, &opts.eigen, rng)?;
        eig_calls += 1;
        degraded |= est.degraded;
        let v = est.v;
        let rayleigh = v.dot(&f.eval_hvp(&z, &v)?);
        if rayleigh > -alpha / 2.0 {
            return Ok(NcdResult {
                z,
                steps_taken: steps.len(),
                eig_calls,
                total_decrease: start_value - value,
                certified: true,
                degraded,
                final_rayleigh: rayleigh,
                start_value,
                end_value: value,
                steps,
                final_calls: f.counts() - before,
                per_call_delta,
            });
        }
        if steps.len() >= cap {
            return Err(Error::CurvatureStepCap {
                cap,
                decrease: start_value - value,
            });
        }
        let grad = f.eval_grad(&z)?;
        let slope = v.dot(&grad);
        let sign = if slope < 0.0 { -1.0 } else { 1.0 };
        let eta = 2.0 * rayleigh.abs() / l2 * sign;
        let next = &z - &v * eta;
        let next_value = f.eval_value(&next)?;
        steps.push(NcdStep {
            value_before: value,
            value_after: next_value,
            grad_norm: grad.norm(),
            rayleigh,
            eta,
            eta_dot_grad: eta * slope,
            calls: f.counts() - before,
        });
        z = next;
        value = next_value;
    }
}
