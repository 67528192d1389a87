//! Hinge penalty `w ([|x| - r]_+)^2` and the oracle that adds it to a base function.

use nalgebra::DVector;

use crate::error::Result;
use crate::oracle::{CallCounts, Oracle};

/// Value and gradient of `weight ([|x| - radius]_+)^2`.
pub fn hinge(x: &DVector<f64>, radius: f64, weight: f64) -> (f64, DVector<f64>) {
    let n = x.norm();
    let excess = n - radius;
    if excess <= 0.0 || n == 0.0 {
        return (0.0, DVector::zeros(x.len()));
    }
    (weight * excess * excess, x * (2.0 * weight * excess / n))
}

/// Hessian action of the hinge penalty. Zero on the inner ball (including
/// the radius itself, where the second derivative jumps).
pub fn hinge_hessian_action(
    x: &DVector<f64>,
    u: &DVector<f64>,
    radius: f64,
    weight: f64,
) -> DVector<f64> {
    let n = x.norm();
    if n <= radius || n == 0.0 {
        return DVector::zeros(x.len());
    }
    // 2w [(1 - r/|x|) u + r (x^T u) x / |x|^3]
    let mut out = u * (2.0 * weight * (1.0 - radius / n));
    out.axpy(2.0 * weight * radius * x.dot(u) / n.powi(3), x, 1.0);
    out
}

/// `rho_alpha(x) = L1 ([|x| - alpha/L2]_+)^2` and its gradient.
pub fn rho_alpha(x: &DVector<f64>, alpha: f64, l1: f64, l2: f64) -> (f64, DVector<f64>) {
    hinge(x, alpha / l2, l1)
}

/// Hessian action of `rho_alpha`.
pub fn rho_alpha_hessian_action(
    x: &DVector<f64>,
    u: &DVector<f64>,
    alpha: f64,
    l1: f64,
    l2: f64,
) -> DVector<f64> {
    hinge_hessian_action(x, u, alpha / l2, l1)
}

/// `f(x) + weight ([|x - center| - radius]_+)^2`. Every call is charged once
/// to the base oracle; the penalty terms are computed in closed form.
pub struct Penalized<'a, O: Oracle + ?Sized> {
    base: &'a mut O,
    center: DVector<f64>,
    radius: f64,
    weight: f64,
}

impl<'a, O: Oracle + ?Sized> Penalized<'a, O> {
    pub fn new(base: &'a mut O, center: DVector<f64>, radius: f64, weight: f64) -> Self {
        Penalized {
            base,
            center,
            radius,
            weight,
        }
    }

    /// Access to the unpenalized oracle, still charging the same counters.
    pub fn base(&mut self) -> &mut O {
        self.base
    }
}

impl<O: Oracle + ?Sized> Oracle for Penalized<'_, O> {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn eval_value(&mut self, x: &DVector<f64>) -> Result<f64> {
        let f = self.base.eval_value(x)?;
        Ok(f + hinge(&(x - &self.center), self.radius, self.weight).0)
    }
    fn eval_grad(&mut self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let g = self.base.eval_grad(x)?;
        Ok(g + hinge(&(x - &self.center), self.radius, self.weight).1)
    }
    fn eval_hvp(&mut self, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        let p = self.base.eval_hvp(x, v)?;
        Ok(p + hinge_hessian_action(&(x - &self.center), v, self.radius, self.weight))
    }
    fn counts(&self) -> CallCounts {
        self.base.counts()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inactive_inside_the_radius() {
        let x = DVector::from_vec(vec![0.3, 0.4]);
        let (v, g) = rho_alpha(&x, 1.0, 2.0, 1.0);
        assert_eq!(v, 0.0);
        assert_eq!(g, DVector::zeros(2));
        assert_eq!(rho_alpha(&DVector::zeros(3), 0.0, 1.0, 1.0).0, 0.0);
    }

    #[test]
    fn zero_alpha_is_a_quadratic() {
        let x = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let (v, g) = rho_alpha(&x, 0.0, 3.0, 7.0);
        assert!((v - 3.0 * x.norm_squared()).abs() < 1e-12);
        assert!((g - &x * 6.0).norm() < 1e-12);
        let u = DVector::from_vec(vec![0.2, 0.1, -1.0]);
        let h = rho_alpha_hessian_action(&x, &u, 0.0, 3.0, 7.0);
        assert!((h - u * 6.0).norm() < 1e-12);
    }

    #[test]
    fn value_at_twice_the_radius() {
        let (alpha, l1, l2) = (0.3, 2.0, 5.0);
        let x = DVector::from_vec(vec![0.6, 0.8]) * (2.0 * alpha / l2);
        let (v, _) = rho_alpha(&x, alpha, l1, l2);
        assert!((v - l1 * (alpha / l2).powi(2)).abs() < 1e-15);
    }
}
