//! Matrix-free smallest-eigenvector estimates of the Hessian.
//!
//! Both methods iterate on the shifted operator `M v = L1 v - H v`, which is
//! PSD when `f` is `L1`-smooth, so the top eigenvector of `M` is the bottom
//! eigenvector of `H`. The start vector is drawn uniformly from the unit
//! sphere; the iteration budgets grow with `log(d / delta)` to cover unlucky
//! starts.
//!
//! Lanczos keeps the whole Krylov basis and reorthogonalizes every new vector
//! against it (twice), so at most `d` products are ever needed: once the
//! basis spans the space the recurrence breaks down and the estimate is exact.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::oracle::Oracle;

/// Default constant in the iteration budgets.
pub const DEFAULT_BUDGET_CONSTANT: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenBackend {
    #[default]
    Lanczos,
    Power,
}

impl EigenBackend {
    pub fn as_str(self) -> &'static str {
        match self {
            EigenBackend::Lanczos => "lanczos",
            EigenBackend::Power => "power",
        }
    }
}

impl std::str::FromStr for EigenBackend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lanczos" => Ok(EigenBackend::Lanczos),
            "power" => Ok(EigenBackend::Power),
            other => Err(Error::InvalidArgument(format!(
                "unknown eigen backend `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenConfig {
    pub backend: EigenBackend,
    /// `C` in the budgets `C sqrt(L1/eps) log(d/delta)` and `C (L1/eps) log(d/delta)`.
    pub budget_constant: f64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            backend: EigenBackend::Lanczos,
            budget_constant: DEFAULT_BUDGET_CONSTANT,
        }
    }
}

/// Approximate smallest eigenvector of `H = hess f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenEstimate {
    /// Unit vector, sign fixed so the largest-magnitude entry is positive.
    pub v: DVector<f64>,
    /// `v^T H v`.
    pub rayleigh: f64,
    /// Hessian-vector products consumed.
    pub hvp_cost: usize,
    pub target_accuracy: f64,
    pub failure_prob: f64,
    /// The iteration budget ran out before the Krylov space became invariant,
    /// so the accuracy only holds with probability `1 - failure_prob`.
    pub degraded: bool,
}

fn check_args(dim: usize, eps_add: f64, delta: f64, l1: f64) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !(eps_add > 0.0 && eps_add.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "eigen accuracy must be positive, got {eps_add}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "failure probability must lie in (0, 1), got {delta}"
        )));
    }
    if !(l1 > 0.0 && l1.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "L1 must be positive, got {l1}"
        )));
    }
    Ok(())
}

/// Lanczos iteration budget `ceil(C sqrt(L1/eps) log(d/delta)) + 1`.
///
/// Returns 1 when `eps_add > 2 L1`, where any unit vector already qualifies.
pub fn lanczos_budget(l1: f64, eps_add: f64, dim: usize, delta: f64, constant: f64) -> usize {
    if eps_add > 2.0 * l1 {
        return 1;
    }
    let raw = constant * (l1 / eps_add).sqrt() * (dim as f64 / delta).ln();
    raw.max(0.0).ceil() as usize + 1
}

/// Power-method budget `ceil(C (L1/eps) log(d/delta))`, at least 1.
pub fn power_budget(l1: f64, eps_add: f64, dim: usize, delta: f64, constant: f64) -> usize {
    if eps_add > 2.0 * l1 {
        return 1;
    }
    let raw = constant * (l1 / eps_add) * (dim as f64 / delta).ln();
    (raw.max(0.0).ceil() as usize).max(1)
}

/// Uniform sample from the unit sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let g = DVector::<f64>::from_fn(dim, |_, _| StandardNormal.sample(&mut *rng));
        let n = g.norm();
        if n > 0.0 {
            return g / n;
        }
    }
}

/// Flip `v` so that its largest-magnitude entry (first on ties) is positive.
pub fn canonical_sign(mut v: DVector<f64>) -> DVector<f64> {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.neg_mut();
    }
    v
}

fn apply_shifted<O: Oracle + ?Sized>(
    oracle: &mut O,
    x: &DVector<f64>,
    l1: f64,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    let hv = oracle.eval_hvp(x, v)?;
    Ok(v * l1 - hv)
}

/// Output of the Lanczos recurrence on `M = L1 I - H`.
#[derive(Debug, Clone)]
pub struct LanczosDecomposition {
    pub basis: Vec<DVector<f64>>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// The recurrence stopped because the Krylov space became invariant.
    pub breakdown: bool,
}

impl LanczosDecomposition {
    pub fn steps(&self) -> usize {
        self.alphas.len()
    }

    /// Largest Ritz value of the leading `k x k` tridiagonal block and its
    /// coefficient vector in the basis.
    pub fn top_ritz(&self, k: usize) -> (f64, DVector<f64>) {
        assert!(k >= 1 && k <= self.steps());
        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                self.alphas[i]
            } else if i + 1 == j {
                self.betas[i]
            } else if j + 1 == i {
                self.betas[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let mut idx = 0;
        for i in 1..k {
            if eig.eigenvalues[i] > eig.eigenvalues[idx] {
                idx = i;
            }
        }
        (eig.eigenvalues[idx], eig.eigenvectors.column(idx).into_owned())
    }
}

/// Run up to `max_steps` Lanczos steps on `L1 I - hess f(x)` from `start`.
pub fn lanczos_shifted<O: Oracle + ?Sized>(
    oracle: &mut O,
    x: &DVector<f64>,
    l1: f64,
    start: &DVector<f64>,
    max_steps: usize,
) -> Result<LanczosDecomposition> {
    let dim = oracle.dim();
    let max_steps = max_steps.clamp(1, dim);
    let mut q = start / start.norm();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(max_steps);
    let mut alphas = Vec::with_capacity(max_steps);
    let mut betas: Vec<f64> = Vec::with_capacity(max_steps);
    let tol = 1e-12 * l1;
    let mut breakdown = false;

    for k in 0..max_steps {
        let mut w = apply_shifted(oracle, x, l1, &q)?;
        let alpha = q.dot(&w);
        w.axpy(-alpha, &q, 1.0);
        if let (Some(prev), Some(&beta)) = (basis.last(), betas.last()) {
            w.axpy(-beta, prev, 1.0);
        }
        basis.push(q);
        alphas.push(alpha);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let beta = w.norm();
        if k + 1 == dim || beta <= tol {
            breakdown = true;
            break;
        }
        if k + 1 == max_steps {
            break;
        }
        betas.push(beta);
        q = w / beta;
    }
    Ok(LanczosDecomposition {
        basis,
        alphas,
        betas,
        breakdown,
    })
}

/// Additive `eps_add`-approximate smallest eigenvector of `hess f(x)` by Lanczos.
pub fn min_eigvec_lanczos<O, R>(
    oracle: &mut O,
    x: &DVector<f64>,
    eps_add: f64,
    delta: f64,
    l1: f64,
    constant: f64,
    rng: &mut R,
) -> Result<EigenEstimate>
where
    O: Oracle + ?Sized,
    R: Rng + ?Sized,
{
    let dim = oracle.dim();
    check_args(dim, eps_add, delta, l1)?;
    let budget = lanczos_budget(l1, eps_add, dim, delta, constant);
    let start = random_unit_vector(dim, rng);
    let dec = lanczos_shifted(oracle, x, l1, &start, budget)?;
    let k = dec.steps();
    let (theta, coeffs) = dec.top_ritz(k);
    let mut v = DVector::zeros(dim);
    for (b, c) in dec.basis.iter().zip(coeffs.iter()) {
        v.axpy(*c, b, 1.0);
    }
    let v = canonical_sign(v.normalize());
    Ok(EigenEstimate {
        v,
        rayleigh: l1 - theta,
        hvp_cost: k,
        target_accuracy: eps_add,
        failure_prob: delta,
        degraded: !dec.breakdown,
    })
}

/// Additive `eps_add`-approximate smallest eigenvector by the power method on
/// `L1 I - H`. Returns the best iterate seen.
pub fn min_eigvec_power<O, R>(
    oracle: &mut O,
    x: &DVector<f64>,
    eps_add: f64,
    delta: f64,
    l1: f64,
    constant: f64,
    rng: &mut R,
) -> Result<EigenEstimate>
where
    O: Oracle + ?Sized,
    R: Rng + ?Sized,
{
    let dim = oracle.dim();
    check_args(dim, eps_add, delta, l1)?;
    let budget = power_budget(l1, eps_add, dim, delta, constant);
    let mut v = random_unit_vector(dim, rng);
    let mut best_v = v.clone();
    let mut best_rayleigh = f64::INFINITY;
    let mut cost = 0;
    let mut exact = false;
    for _ in 0..budget {
        let w = apply_shifted(oracle, x, l1, &v)?;
        cost += 1;
        let theta = v.dot(&w);
        if l1 - theta < best_rayleigh {
            best_rayleigh = l1 - theta;
            best_v = v.clone();
        }
        let residual = (&w - &v * theta).norm();
        let n = w.norm();
        if residual <= 1e-12 * l1 || n == 0.0 {
            exact = true;
            break;
        }
        v = w / n;
    }
    Ok(EigenEstimate {
        v: canonical_sign(best_v),
        rayleigh: best_rayleigh,
        hvp_cost: cost,
        target_accuracy: eps_add,
        failure_prob: delta,
        degraded: !exact,
    })
}

/// Smallest eigenvalue of a dense symmetric matrix. Verification only.
pub fn dense_min_eigenvalue(h: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(h).eigenvalues.min()
}

/// Dispatch on the configured backend.
pub fn min_eigvec<O, R>(
    oracle: &mut O,
    x: &DVector<f64>,
    eps_add: f64,
    delta: f64,
    l1: f64,
    cfg: &EigenConfig,
    rng: &mut R,
) -> Result<EigenEstimate>
where
    O: Oracle + ?Sized,
    R: Rng + ?Sized,
{
    match cfg.backend {
        EigenBackend::Lanczos => {
            min_eigvec_lanczos(oracle, x, eps_add, delta, l1, cfg.budget_constant, rng)
        }
        EigenBackend::Power => {
            min_eigvec_power(oracle, x, eps_add, delta, l1, cfg.budget_constant, rng)
        }
    }
}
