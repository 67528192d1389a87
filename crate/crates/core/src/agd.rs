//! Nesterov's accelerated gradient descent for strongly convex functions,
//! stopped on the gradient norm.

use nalgebra::DVector;

use crate::error::{Error, Result, Routine};
use crate::oracle::Oracle;

#[derive(Debug, Clone, PartialEq)]
pub struct AgdResult {
    pub y: DVector<f64>,
    /// Index `j` of the returned iterate `y_j` (1 when `y1` already qualifies).
    pub iterations: usize,
    pub grad_cost: u64,
    /// `y_1, ..., y_j` when recording was requested.
    pub iterates: Vec<DVector<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgdOptions {
    /// The iteration cap is this multiple of the worst-case bound.
    pub cap_factor: f64,
    /// Bound on `g(y1) - inf g`. When absent, `|grad g(y1)|^2 / (2 sigma1)` is
    /// used, which is valid for any `sigma1`-strongly convex `g`.
    pub gap: Option<f64>,
    pub record_iterates: bool,
}

impl Default for AgdOptions {
    fn default() -> Self {
        AgdOptions {
            cap_factor: 4.0,
            gap: None,
            record_iterates: false,
        }
    }
}

/// `(sqrt(kappa) - 1) / (sqrt(kappa) + 1)` with `kappa = L1 / sigma1`.
pub fn momentum(l1: f64, sigma1: f64) -> f64 {
    let sk = (l1 / sigma1).sqrt();
    (sk - 1.0) / (sk + 1.0)
}

/// `1 + sqrt(L1/sigma1) log(4 L1^2 gap / (sigma1 eps^2))`: after this many
/// iterations the gradient norm is at most `eps`.
pub fn iteration_bound(l1: f64, sigma1: f64, gap: f64, eps: f64) -> f64 {
    1.0 + (l1 / sigma1).sqrt() * (4.0 * l1 * l1 * gap / (sigma1 * eps * eps)).ln()
}

/// Minimize a `sigma1`-strongly convex, `L1`-smooth `g` from `y1` until
/// `|grad g(y_j)| <= eps`.
///
/// Each iteration evaluates the gradient at `y_j` for the stopping test and
/// at `z_j` for the step, both charged to `g`.
pub fn accelerated_gradient_descent<O: Oracle + ?Sized>(
    g: &mut O,
    y1: &DVector<f64>,
    eps: f64,
    l1: f64,
    sigma1: f64,
    opts: &AgdOptions,
) -> Result<AgdResult> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if !(sigma1 > 0.0 && l1 >= sigma1 && l1.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < sigma1 <= L1, got sigma1 = {sigma1}, L1 = {l1}"
        )));
    }
    let start = g.counts();
    let beta = momentum(l1, sigma1);
    let mut y = y1.clone();
    let mut z = y1.clone();
    let mut iterates = Vec::new();
    let mut grad_norms = Vec::new();
    let mut cap = usize::MAX;

    for j in 1.. {
        if opts.record_iterates {
            iterates.push(y.clone());
        }
        let grad_y = g.eval_grad(&y)?;
        let norm = grad_y.norm();
        grad_norms.push(norm);
        if norm <= eps {
            return Ok(AgdResult {
                y,
                iterations: j,
                grad_cost: (g.counts() - start).grad,
                iterates,
            });
        }
        if j == 1 {
            let gap = opts
                .gap
                .unwrap_or(norm * norm / (2.0 * sigma1))
                .max(f64::MIN_POSITIVE);
            let bound = iteration_bound(l1, sigma1, gap, eps).max(1.0);
            cap = (opts.cap_factor * bound).ceil() as usize;
        }
        if j >= cap {
            return Err(Error::NonConvergence {
                routine: Routine::Agd,
                cap,
                last_grad_norm: norm,
                grad_norms,
            });
        }
        let grad_z = g.eval_grad(&z)?;
        let y_next = &z - grad_z / l1;
        z = &y_next * (1.0 + beta) - &y * beta;
        y = y_next;
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::oracle::{CountingOracle, Quadratic};

    #[test]
    fn early_exit_costs_one_gradient() {
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0, 1.0])));
        let y1 = DVector::from_vec(vec![3e-4, -4e-4]);
        let r = accelerated_gradient_descent(&mut o, &y1, 1e-3, 1.0, 1.0, &AgdOptions::default())
            .unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.y, y1);
        assert_eq!(o.counts().grad, 1);
        assert_eq!(r.grad_cost, 1);
    }

    #[test]
    fn one_symbolic_step() {
        // Diagonal (1, 9): kappa = 9, momentum (3 - 1)/(3 + 1) = 1/2.
        assert_eq!(momentum(9.0, 1.0), 0.5);
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0, 9.0])));
        let y1 = DVector::from_vec(vec![1.0, 1.0]);
        let opts = AgdOptions {
            record_iterates: true,
            ..AgdOptions::default()
        };
        let r = accelerated_gradient_descent(&mut o, &y1, 1e-8, 9.0, 1.0, &opts).unwrap();
        // y2 = z1 - grad(z1)/9 = (8/9, 0); z2 = 1.5 y2 - 0.5 y1 = (5/6, -1/2);
        // y3 = z2 - grad(z2)/9 = (5/6 - 5/54, 0).
        let y2 = &r.iterates[1];
        assert!((y2[0] - 8.0 / 9.0).abs() < 1e-15 && y2[1].abs() < 1e-15);
        let y3 = &r.iterates[2];
        assert!((y3[0] - (5.0 / 6.0 - 5.0 / 54.0)).abs() < 1e-15);
        assert!((y3[1] - (-0.5 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn violated_convexity_hits_the_cap() {
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0, -0.5])));
        let y1 = DVector::from_vec(vec![1.0, 1.0]);
        let err = accelerated_gradient_descent(&mut o, &y1, 1e-6, 1.0, 0.5, &AgdOptions::default())
            .unwrap_err();
        match err {
            Error::NonConvergence {
                routine, grad_norms, ..
            } => {
                assert_eq!(routine, Routine::Agd);
                assert!(!grad_norms.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0])));
        let y1 = DVector::from_vec(vec![1.0]);
        let opts = AgdOptions::default();
        assert!(accelerated_gradient_descent(&mut o, &y1, 0.0, 1.0, 1.0, &opts).is_err());
        assert!(accelerated_gradient_descent(&mut o, &y1, 1e-3, 1.0, 2.0, &opts).is_err());
        assert!(accelerated_gradient_descent(&mut o, &y1, 1e-3, 1.0, 0.0, &opts).is_err());
    }
}
