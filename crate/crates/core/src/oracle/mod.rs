//! Objective-function abstraction with call accounting.
//!
//! An [`Objective`] is a pure description of a smooth function: value,
//! gradient and (optionally) an analytic Hessian-vector product. The solvers
//! never talk to an objective directly; they go through the [`Oracle`] trait,
//! whose implementations count every call. [`CountingOracle`] is the base
//! implementation; the solvers build composite oracles (proximal and hinge
//! penalized models) on top of it that forward the accounting to the base.
//!
//! Cost model: one gradient or one Hessian-vector product is one unit. A
//! finite-difference product is charged as two gradient calls and no HVP call.

mod problems;

use std::ops::{Add, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub use problems::{
    make_test_suite, problem_from_id, ConfinedQuadratic, DoubleWell, IllConditionedCosine,
    Quadratic, Rosenbrock, Tag, TestProblem, SUITE_IDS,
};

/// A smooth objective `f : R^d -> R`.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &DVector<f64>) -> f64;
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64>;

    /// Analytic Hessian-vector product, if the objective has one.
    fn hvp(&self, _x: &DVector<f64>, _v: &DVector<f64>) -> Option<DVector<f64>> {
        None
    }

    /// Dense Hessian. Verification only; never charged to an algorithm.
    fn hessian(&self, _x: &DVector<f64>) -> Option<DMatrix<f64>> {
        None
    }
}

/// Number of oracle calls of each kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CallCounts {
    pub value: u64,
    pub grad: u64,
    pub hvp: u64,
}

impl CallCounts {
    /// Gradient plus Hessian-vector calls: the unit of algorithmic cost.
    pub fn oracle_calls(&self) -> u64 {
        self.grad + self.hvp
    }
}

impl Add for CallCounts {
    type Output = CallCounts;
    fn add(self, rhs: CallCounts) -> CallCounts {
        CallCounts {
            value: self.value + rhs.value,
            grad: self.grad + rhs.grad,
            hvp: self.hvp + rhs.hvp,
        }
    }
}

impl Sub for CallCounts {
    type Output = CallCounts;
    fn sub(self, rhs: CallCounts) -> CallCounts {
        CallCounts {
            value: self.value - rhs.value,
            grad: self.grad - rhs.grad,
            hvp: self.hvp - rhs.hvp,
        }
    }
}

/// First- and second-order access to a function, with call accounting.
pub trait Oracle {
    fn dim(&self) -> usize;
    fn eval_value(&mut self, x: &DVector<f64>) -> Result<f64>;
    fn eval_grad(&mut self, x: &DVector<f64>) -> Result<DVector<f64>>;
    fn eval_hvp(&mut self, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>>;
    fn counts(&self) -> CallCounts;
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval_value(&mut self, x: &DVector<f64>) -> Result<f64> {
        (**self).eval_value(x)
    }
    fn eval_grad(&mut self, x: &DVector<f64>) -> Result<DVector<f64>> {
        (**self).eval_grad(x)
    }
    fn eval_hvp(&mut self, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        (**self).eval_hvp(x, v)
    }
    fn counts(&self) -> CallCounts {
        (**self).counts()
    }
}

/// Region on which a problem's smoothness constants are certified.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Every coordinate in `[lo, hi]`.
    Box { lo: f64, hi: f64 },
    /// Euclidean ball around the origin.
    Ball { radius: f64 },
}

impl Domain {
    pub fn contains(&self, x: &DVector<f64>) -> bool {
        match *self {
            Domain::Box { lo, hi } => x.iter().all(|&xi| (lo..=hi).contains(&xi)),
            Domain::Ball { radius } => x.norm() <= radius,
        }
    }
}

/// Smoothness constants consumed by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessParams {
    /// Lipschitz constant of the gradient.
    pub l1: f64,
    /// Lipschitz constant of the Hessian.
    pub l2: f64,
    /// Upper bound on `f(x1) - inf f`.
    pub delta_f: f64,
}

impl SmoothnessParams {
    pub fn new(l1: f64, l2: f64, delta_f: f64) -> Result<Self> {
        let p = SmoothnessParams { l1, l2, delta_f };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("L1", self.l1), ("L2", self.l2), ("delta_f", self.delta_f)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Default finite-difference step: `sqrt(eps_mach) * (1 + |x|) / max(|v|, tiny)`.
pub fn default_fd_step(x: &DVector<f64>, v: &DVector<f64>) -> f64 {
    f64::EPSILON.sqrt() * (1.0 + x.norm()) / v.norm().max(f64::MIN_POSITIVE)
}

/// Forward-difference Hessian-vector product `(grad f(x + h v) - grad f(x)) / h`.
///
/// Costs two gradient calls on `oracle`. The error against the exact product
/// is at most `h * L2 * |v|^2 / 2`.
pub fn hvp_finite_diff<O: Oracle + ?Sized>(
    oracle: &mut O,
    x: &DVector<f64>,
    v: &DVector<f64>,
    h: f64,
) -> Result<DVector<f64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    if v.norm() == 0.0 {
        return Err(Error::InvalidArgument(
            "finite-difference direction must be non-zero".into(),
        ));
    }
    let shifted = x + v * h;
    let g_shift = oracle.eval_grad(&shifted)?;
    let g = oracle.eval_grad(x)?;
    Ok((g_shift - g) / h)
}

fn check_finite_vec(v: &DVector<f64>, at: &DVector<f64>) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteOracle {
            point: at.iter().copied().collect(),
        })
    }
}

/// Oracle over a shared [`Objective`], counting every call.
///
/// When a domain is attached, any evaluation outside it fails with
/// [`Error::OutsideDomain`] instead of silently returning values for which the
/// smoothness constants are not certified.
#[derive(Clone)]
pub struct CountingOracle {
    objective: Arc<dyn Objective>,
    domain: Option<Domain>,
    counts: CallCounts,
}

impl CountingOracle {
    pub fn new(objective: Arc<dyn Objective>) -> Self {
        CountingOracle {
            objective,
            domain: None,
            counts: CallCounts::default(),
        }
    }

    pub fn with_domain(mut self, domain: Option<Domain>) -> Self {
        self.domain = domain;
        self
    }

    pub fn objective(&self) -> &Arc<dyn Objective> {
        &self.objective
    }

    pub fn has_analytic_hvp(&self) -> bool {
        let n = self.objective.dim();
        let z = DVector::zeros(n);
        self.objective.hvp(&z, &z).is_some()
    }

    fn check_domain(&self, x: &DVector<f64>) -> Result<()> {
        match &self.domain {
            Some(d) if !d.contains(x) => Err(Error::OutsideDomain {
                point: x.iter().copied().collect(),
            }),
            _ => Ok(()),
        }
    }
}

impl Oracle for CountingOracle {
    fn dim(&self) -> usize {
        self.objective.dim()
    }

    fn eval_value(&mut self, x: &DVector<f64>) -> Result<f64> {
        self.check_domain(x)?;
        self.counts.value += 1;
        let v = self.objective.value(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteOracle {
                point: x.iter().copied().collect(),
            })
        }
    }

    fn eval_grad(&mut self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_domain(x)?;
        self.counts.grad += 1;
        let g = self.objective.gradient(x);
        check_finite_vec(&g, x)?;
        Ok(g)
    }

    fn eval_hvp(&mut self, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_domain(x)?;
        if let Some(p) = self.objective.hvp(x, v) {
            self.counts.hvp += 1;
            check_finite_vec(&p, x)?;
            return Ok(p);
        }
        if v.norm() == 0.0 {
            return Ok(DVector::zeros(v.len()));
        }
        let h = default_fd_step(x, v);
        // The shifted point may sit marginally outside the domain; only the
        // base point is checked.
        let shifted = x + v * h;
        self.counts.grad += 2;
        let g_shift = self.objective.gradient(&shifted);
        let g = self.objective.gradient(x);
        check_finite_vec(&g_shift, &shifted)?;
        check_finite_vec(&g, x)?;
        Ok((g_shift - g) / h)
    }

    fn counts(&self) -> CallCounts {
        self.counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct QuarticNorm;

    // f(x) = |x|^4 / 4, gradient |x|^2 x, Hessian |x|^2 I + 2 x x^T.
    impl Objective for QuarticNorm {
        fn dim(&self) -> usize {
            3
        }
        fn value(&self, x: &DVector<f64>) -> f64 {
            x.norm_squared().powi(2) / 4.0
        }
        fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
            x * x.norm_squared()
        }
    }

    fn quartic_hessian(x: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::identity(x.len(), x.len()) * x.norm_squared() + x * x.transpose() * 2.0
    }

    struct Poisoned;

    impl Objective for Poisoned {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, _x: &DVector<f64>) -> f64 {
            f64::NAN
        }
        fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
            if x[0] > 0.5 {
                DVector::from_element(2, f64::INFINITY)
            } else {
                x.clone()
            }
        }
    }

    #[test]
    fn quartic_fd_error_within_remark_bound() {
        let mut o = CountingOracle::new(Arc::new(QuarticNorm));
        let x = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let v = x.clone();
        let h = 1e-4;
        let p = hvp_finite_diff(&mut o, &x, &v, h).unwrap();
        let exact = quartic_hessian(&x) * &v;
        assert!((exact[0] - 3.0).abs() < 1e-15);
        // Third derivative of |x|^4/4 along e1 near e1 is 6|x|; L2 = 6.2 covers
        // the segment [x, x + h v].
        let l2 = 6.0 * (1.0 + h) + 1e-12;
        assert!((p - exact).norm() <= h * l2 / 2.0);
        assert_eq!(o.counts().grad, 2);
        assert_eq!(o.counts().hvp, 0);
    }

    #[test]
    fn fd_rejects_bad_inputs() {
        let mut o = CountingOracle::new(Arc::new(QuarticNorm));
        let x = DVector::from_element(3, 1.0);
        let zero = DVector::zeros(3);
        assert!(matches!(
            hvp_finite_diff(&mut o, &x, &zero, 1e-3),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            hvp_finite_diff(&mut o, &x, &x, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert_eq!(o.counts(), CallCounts::default());
    }

    #[test]
    fn fallback_hvp_charges_two_gradients() {
        let mut o = CountingOracle::new(Arc::new(QuarticNorm));
        let x = DVector::from_vec(vec![0.3, -0.2, 0.5]);
        let v = DVector::from_vec(vec![1.0, 2.0, -1.0]);
        let p = o.eval_hvp(&x, &v).unwrap();
        let exact = quartic_hessian(&x) * &v;
        assert!((p - exact).norm() < 1e-6);
        assert_eq!(
            o.counts(),
            CallCounts {
                value: 0,
                grad: 2,
                hvp: 0
            }
        );
        assert!(!o.has_analytic_hvp());
    }

    #[test]
    fn non_finite_values_carry_the_point() {
        let mut o = CountingOracle::new(Arc::new(Poisoned));
        let x = DVector::from_vec(vec![1.0, 2.0]);
        match o.eval_grad(&x) {
            Err(Error::NonFiniteOracle { point }) => assert_eq!(point, vec![1.0, 2.0]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            o.eval_value(&x),
            Err(Error::NonFiniteOracle { .. })
        ));
        let y = DVector::from_vec(vec![0.0, 0.0]);
        let v = DVector::from_vec(vec![1.0, 0.0]);
        match hvp_finite_diff(&mut o, &y, &v, 1.0) {
            Err(Error::NonFiniteOracle { point }) => assert_eq!(point, vec![1.0, 0.0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn domain_violations_are_reported() {
        let mut o =
            CountingOracle::new(Arc::new(QuarticNorm)).with_domain(Some(Domain::Ball { radius: 1.0 }));
        let inside = DVector::from_vec(vec![0.5, 0.5, 0.5]);
        let outside = DVector::from_vec(vec![1.0, 1.0, 0.0]);
        assert!(o.eval_grad(&inside).is_ok());
        assert!(matches!(
            o.eval_grad(&outside),
            Err(Error::OutsideDomain { .. })
        ));
        let b = Domain::Box { lo: -1.0, hi: 2.0 };
        assert!(b.contains(&DVector::from_vec(vec![-1.0, 2.0])));
        assert!(!b.contains(&DVector::from_vec(vec![-1.5, 0.0])));
    }

    #[test]
    fn smoothness_params_validate() {
        assert!(SmoothnessParams::new(1.0, 1.0, 1.0).is_ok());
        assert!(SmoothnessParams::new(0.0, 1.0, 1.0).is_err());
        assert!(SmoothnessParams::new(1.0, f64::INFINITY, 1.0).is_err());
        assert!(SmoothnessParams::new(1.0, 1.0, -2.0).is_err());
    }
}
