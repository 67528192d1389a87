//! Stationary points of `gamma`-almost-convex functions by a sequence of
//! proximal subproblems `g_j(z) = f(z) + gamma |z - z_j|^2`, each solved with
//! accelerated gradient descent.

use nalgebra::DVector;

use crate::agd::{accelerated_gradient_descent, AgdOptions};
use crate::error::{Error, Result, Routine};
use crate::oracle::{CallCounts, Oracle};

/// Smoothness constant handed to the inner AGD call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InnerSmoothness {
    /// `L1`, as in the pseudo-code.
    L1,
    /// `L1 + 2 gamma`, the actual smoothness of `g_j`.
    #[default]
    L1Plus2Gamma,
}

impl InnerSmoothness {
    pub fn as_str(self) -> &'static str {
        match self {
            InnerSmoothness::L1 => "l1",
            InnerSmoothness::L1Plus2Gamma => "l1_plus_2gamma",
        }
    }

    pub fn constant(self, l1: f64, gamma: f64) -> f64 {
        match self {
            InnerSmoothness::L1 => l1,
            InnerSmoothness::L1Plus2Gamma => l1 + 2.0 * gamma,
        }
    }
}

impl std::str::FromStr for InnerSmoothness {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(InnerSmoothness::L1),
            "l1_plus_2gamma" => Ok(InnerSmoothness::L1Plus2Gamma),
            other => Err(Error::InvalidArgument(format!(
                "unknown inner smoothness `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlmostConvexOptions {
    pub inner_smoothness: InnerSmoothness,
    pub outer_cap_factor: f64,
    pub inner_cap_factor: f64,
    /// Bound on `f(z1) - inf f`; sets the outer cap. `None` disables the cap.
    pub delta_f: Option<f64>,
}

impl Default for AlmostConvexOptions {
    fn default() -> Self {
        AlmostConvexOptions {
            inner_smoothness: InnerSmoothness::default(),
            outer_cap_factor: 4.0,
            inner_cap_factor: 4.0,
            delta_f: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlmostConvexResult {
    pub z: DVector<f64>,
    /// `j_*`: index of the returned iterate.
    pub outer_iterations: usize,
    pub inner_grad_cost: u64,
    pub start_value: f64,
    pub end_value: f64,
    /// `f(z_1), ..., f(z_{j_*})`.
    pub values: Vec<f64>,
    /// `|z_{j+1} - z_j|` for `j < j_*`.
    pub displacements: Vec<f64>,
    /// `|grad f(z_j)|` for every tested iterate.
    pub grad_norms: Vec<f64>,
    /// Accuracy passed to every inner AGD call.
    pub inner_eps: f64,
}

/// `eps' = eps sqrt(gamma / (50 (L1 + 2 gamma)))`.
pub fn inner_accuracy(eps: f64, gamma: f64, l1: f64) -> f64 {
    eps * (gamma / (50.0 * (l1 + 2.0 * gamma))).sqrt()
}

/// `1 + 5 gamma delta_f / eps^2`.
pub fn outer_iteration_bound(gamma: f64, delta_f: f64, eps: f64) -> f64 {
    1.0 + 5.0 * gamma * delta_f / (eps * eps)
}

/// `g(z) = f(z) + gamma |z - center|^2`, charging every call to `f`.
pub struct Proximal<'a, O: Oracle + ?Sized> {
    base: &'a mut O,
    center: DVector<f64>,
    gamma: f64,
}

impl<'a, O: Oracle + ?Sized> Proximal<'a, O> {
    pub fn new(base: &'a mut O, center: DVector<f64>, gamma: f64) -> Self {
        Proximal {
            base,
            center,
            gamma,
        }
    }
}

impl<O: Oracle + ?Sized> Oracle for Proximal<'_, O> {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn eval_value(&mut self, x: &DVector<f64>) -> Result<f64> {
        let f = self.base.eval_value(x)?;
        Ok(f + self.gamma * (x - &self.center).norm_squared())
    }
    fn eval_grad(&mut self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let mut g = self.base.eval_grad(x)?;
        g += (x - &self.center) * (2.0 * self.gamma);
        Ok(g)
    }
    fn eval_hvp(&mut self, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        let mut p = self.base.eval_hvp(x, v)?;
        p.axpy(2.0 * self.gamma, v, 1.0);
        Ok(p)
    }
    fn counts(&self) -> CallCounts {
        self.base.counts()
    }
}

/// Find `z` with `|grad f(z)| <= eps` for a `gamma`-almost-convex, `L1`-smooth `f`.
pub fn almost_convex_agd<O: Oracle + ?Sized>(
    f: &mut O,
    z1: &DVector<f64>,
    eps: f64,
    gamma: f64,
    l1: f64,
    opts: &AlmostConvexOptions,
) -> Result<AlmostConvexResult> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if !(gamma > 0.0 && gamma <= l1) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < gamma <= L1, got gamma = {gamma}, L1 = {l1}"
        )));
    }
    let inner_eps = inner_accuracy(eps, gamma, l1);
    let inner_l = opts.inner_smoothness.constant(l1, gamma);
    let inner_opts = AgdOptions {
        cap_factor: opts.inner_cap_factor,
        gap: None,
        record_iterates: false,
    };
    let cap = opts
        .delta_f
        .map(|d| (opts.outer_cap_factor * outer_iteration_bound(gamma, d, eps)).ceil())
        .filter(|c| c.is_finite() && *c < usize::MAX as f64)
        .map_or(usize::MAX, |c| c as usize);

    let mut z = z1.clone();
    let start_value = f.eval_value(&z)?;
    let mut values = vec![start_value];
    let mut displacements = Vec::new();
    let mut grad_norms = Vec::new();
    let mut inner_grad_cost = 0;

    for j in 1.. {
        let norm = f.eval_grad(&z)?.norm();
        grad_norms.push(norm);
        if norm <= eps {
            return Ok(AlmostConvexResult {
                z,
                outer_iterations: j,
                inner_grad_cost,
                start_value,
                end_value: *values.last().unwrap(),
                values,
                displacements,
                grad_norms,
                inner_eps,
            });
        }
        if j >= cap {
            return Err(Error::NonConvergence {
                routine: Routine::AlmostConvexAgd,
                cap,
                last_grad_norm: norm,
                grad_norms,
            });
        }
        let inner = {
            let mut g = Proximal::new(&mut *f, z.clone(), gamma);
            accelerated_gradient_descent(&mut g, &z, inner_eps, inner_l, gamma, &inner_opts)?
        };
        inner_grad_cost += inner.grad_cost;
        displacements.push((&inner.y - &z).norm());
        z = inner.y;
        values.push(f.eval_value(&z)?);
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::oracle::{CountingOracle, Quadratic};

    #[test]
    fn inner_accuracy_wiring() {
        let e = inner_accuracy(1e-3, 0.5, 2.0);
        assert_eq!(e, 1e-3 * (0.5f64 / (50.0 * 3.0)).sqrt());
        assert!(e <= 1e-3 / 10.0);
    }

    #[test]
    fn immediate_termination() {
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0, 2.0])));
        let z1 = DVector::from_vec(vec![1e-4, 1e-4]);
        let r = almost_convex_agd(&mut o, &z1, 1e-3, 0.5, 2.0, &AlmostConvexOptions::default())
            .unwrap();
        assert_eq!(r.outer_iterations, 1);
        assert_eq!(r.inner_grad_cost, 0);
        assert_eq!(r.z, z1);
        assert_eq!(o.counts().grad, 1);
    }

    #[test]
    fn proximal_gradient_adds_the_regularizer() {
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0, -1.0])));
        let center = DVector::from_vec(vec![1.0, 1.0]);
        let mut g = Proximal::new(&mut o, center, 2.0);
        let x = DVector::from_vec(vec![0.0, 2.0]);
        let grad = g.eval_grad(&x).unwrap();
        assert_eq!(grad, DVector::from_vec(vec![-4.0, 2.0]));
        let p = g.eval_hvp(&x, &DVector::from_vec(vec![1.0, 1.0])).unwrap();
        assert_eq!(p, DVector::from_vec(vec![5.0, 3.0]));
        assert_eq!(g.counts().grad, 1);
    }

    #[test]
    fn rejects_bad_gamma() {
        let mut o = CountingOracle::new(Arc::new(Quadratic::diagonal(&[1.0])));
        let z1 = DVector::from_vec(vec![1.0]);
        let opts = AlmostConvexOptions::default();
        assert!(almost_convex_agd(&mut o, &z1, 1e-3, 0.0, 1.0, &opts).is_err());
        assert!(almost_convex_agd(&mut o, &z1, 1e-3, 2.0, 1.0, &opts).is_err());
    }
}
