//! Built-in test problems with certified smoothness constants.
//!
//! Every problem carries `L1`, `L2` valid on its [`Domain`] (or globally when
//! the domain is `None`), a start point, and `delta_f` computed from a known
//! minimum or a certified lower bound.
//!
//! Problem ids have the form `name[:key=value]*`, for example
//! `quadratic:d=50:kappa=100` or `doublewell:d=20:coupling=0.1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{CountingOracle, Domain, Objective, SmoothnessParams};
use crate::error::{Error, Result};

/// `f(x) = x^T A x / 2` for symmetric `A`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    a: DMatrix<f64>,
}

impl Quadratic {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidArgument("quadratic matrix must be square".into()));
        }
        if (&a - a.transpose()).amax() > 1e-12 * (1.0 + a.amax()) {
            return Err(Error::InvalidArgument("quadratic matrix must be symmetric".into()));
        }
        Ok(Quadratic { a })
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Quadratic {
            a: DMatrix::from_diagonal(&DVector::from_column_slice(diag)),
        }
    }

    /// `Q diag(spectrum) Q^T` with `Q` a seeded random rotation.
    pub fn with_spectrum(spectrum: &[f64], rng: &mut ChaCha8Rng) -> Self {
        let q = random_orthogonal(spectrum.len(), rng);
        Quadratic {
            a: rotate(&q, spectrum),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }
}

impl Objective for Quadratic {
    fn dim(&self) -> usize {
        self.a.nrows()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.a * x))
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x
    }
    fn hvp(&self, _x: &DVector<f64>, v: &DVector<f64>) -> Option<DVector<f64>> {
        Some(&self.a * v)
    }
    fn hessian(&self, _x: &DVector<f64>) -> Option<DMatrix<f64>> {
        Some(self.a.clone())
    }
}

/// Non-convex quadratic confined along its negative-curvature direction:
/// `f(x) = x^T A x / 2 + (c/4) (u^T x)^4`, where `u` is the unit eigenvector of
/// the single negative eigenvalue of `A`.
#[derive(Debug, Clone)]
pub struct ConfinedQuadratic {
    a: DMatrix<f64>,
    u: DVector<f64>,
    c: f64,
}

impl ConfinedQuadratic {
    pub fn negative_direction(&self) -> &DVector<f64> {
        &self.u
    }
}

impl Objective for ConfinedQuadratic {
    fn dim(&self) -> usize {
        self.u.len()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        let t = self.u.dot(x);
        0.5 * x.dot(&(&self.a * x)) + 0.25 * self.c * t.powi(4)
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let t = self.u.dot(x);
        &self.a * x + &self.u * (self.c * t.powi(3))
    }
    fn hvp(&self, x: &DVector<f64>, v: &DVector<f64>) -> Option<DVector<f64>> {
        let t = self.u.dot(x);
        Some(&self.a * v + &self.u * (3.0 * self.c * t * t * self.u.dot(v)))
    }
    fn hessian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        let t = self.u.dot(x);
        Some(&self.a + &self.u * self.u.transpose() * (3.0 * self.c * t * t))
    }
}

/// `f(x) = sum_i (x_i^2 - 1)^2 + coupling * sum_i (x_i - x_{i+1})^2`.
#[derive(Debug, Clone)]
pub struct DoubleWell {
    d: usize,
    coupling: f64,
}

impl DoubleWell {
    pub fn new(d: usize, coupling: f64) -> Self {
        DoubleWell { d, coupling }
    }
}

impl Objective for DoubleWell {
    fn dim(&self) -> usize {
        self.d
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        let wells: f64 = x.iter().map(|&xi| (xi * xi - 1.0).powi(2)).sum();
        let chain: f64 = x
            .as_slice()
            .windows(2)
            .map(|w| (w[0] - w[1]).powi(2))
            .sum();
        wells + self.coupling * chain
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut g = x.map(|xi| 4.0 * xi * (xi * xi - 1.0));
        for i in 0..self.d.saturating_sub(1) {
            let diff = 2.0 * self.coupling * (x[i] - x[i + 1]);
            g[i] += diff;
            g[i + 1] -= diff;
        }
        g
    }
    fn hvp(&self, x: &DVector<f64>, v: &DVector<f64>) -> Option<DVector<f64>> {
        let mut p = DVector::from_fn(self.d, |i, _| (12.0 * x[i] * x[i] - 4.0) * v[i]);
        for i in 0..self.d.saturating_sub(1) {
            let diff = 2.0 * self.coupling * (v[i] - v[i + 1]);
            p[i] += diff;
            p[i + 1] -= diff;
        }
        Some(p)
    }
    fn hessian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        let mut h = DMatrix::from_diagonal(&x.map(|xi| 12.0 * xi * xi - 4.0));
        for i in 0..self.d.saturating_sub(1) {
            let c = 2.0 * self.coupling;
            h[(i, i)] += c;
            h[(i + 1, i + 1)] += c;
            h[(i, i + 1)] -= c;
            h[(i + 1, i)] -= c;
        }
        Some(h)
    }
}

/// Chained Rosenbrock: `sum_i a (x_{i+1} - x_i^2)^2 + (1 - x_i)^2`.
#[derive(Debug, Clone)]
pub struct Rosenbrock {
    d: usize,
    a: f64,
}

impl Rosenbrock {
    pub fn new(d: usize, a: f64) -> Self {
        Rosenbrock { d, a }
    }
}

impl Objective for Rosenbrock {
    fn dim(&self) -> usize {
        self.d
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        x.as_slice()
            .windows(2)
            .map(|w| self.a * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum()
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut g = DVector::zeros(self.d);
        for i in 0..self.d - 1 {
            let r = x[i + 1] - x[i] * x[i];
            g[i] += -4.0 * self.a * x[i] * r - 2.0 * (1.0 - x[i]);
            g[i + 1] += 2.0 * self.a * r;
        }
        g
    }
    fn hvp(&self, x: &DVector<f64>, v: &DVector<f64>) -> Option<DVector<f64>> {
        self.hessian(x).map(|h| h * v)
    }
    fn hessian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        let mut h = DMatrix::zeros(self.d, self.d);
        for i in 0..self.d - 1 {
            let a = self.a;
            h[(i, i)] += a * (12.0 * x[i] * x[i] - 4.0 * x[i + 1]) + 2.0;
            h[(i + 1, i + 1)] += 2.0 * a;
            h[(i, i + 1)] -= 4.0 * a * x[i];
            h[(i + 1, i)] -= 4.0 * a * x[i];
        }
        Some(h)
    }
}

/// Ill-conditioned diagonal quadratic plus a sum of cosine ridges acting on the
/// stiffest coordinates:
/// `f(x) = sum_i lambda_i x_i^2 / 2 + sum_k c_k cos(w_k^T x + phi_k)`.
///
/// The spectrum is log-uniform over several decades. The ridges make the
/// stiff block non-convex (saddles and several local minima); the soft block
/// stays a pure quadratic and carries most of the optimality gap.
#[derive(Debug, Clone)]
pub struct IllConditionedCosine {
    lambda: DVector<f64>,
    weights: Vec<DVector<f64>>,
    amplitudes: Vec<f64>,
    phases: Vec<f64>,
}

impl IllConditionedCosine {
    fn ridge_bounds(&self) -> (f64, f64, f64) {
        let mut curv = 0.0;
        let mut third = 0.0;
        let mut amp = 0.0;
        for (w, c) in self.weights.iter().zip(&self.amplitudes) {
            let n = w.norm();
            curv += c.abs() * n * n;
            third += c.abs() * n * n * n;
            amp += c.abs();
        }
        (amp, curv, third)
    }
}

impl Objective for IllConditionedCosine {
    fn dim(&self) -> usize {
        self.lambda.len()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        let quad = 0.5 * x.iter().zip(self.lambda.iter()).map(|(xi, l)| l * xi * xi).sum::<f64>();
        let ridges: f64 = self
            .weights
            .iter()
            .zip(&self.amplitudes)
            .zip(&self.phases)
            .map(|((w, c), p)| c * (w.dot(x) + p).cos())
            .sum();
        quad + ridges
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut g = x.component_mul(&self.lambda);
        for ((w, c), p) in self.weights.iter().zip(&self.amplitudes).zip(&self.phases) {
            let s = -c * (w.dot(x) + p).sin();
            g.axpy(s, w, 1.0);
        }
        g
    }
    fn hvp(&self, x: &DVector<f64>, v: &DVector<f64>) -> Option<DVector<f64>> {
        let mut out = v.component_mul(&self.lambda);
        for ((w, c), p) in self.weights.iter().zip(&self.amplitudes).zip(&self.phases) {
            let s = -c * (w.dot(x) + p).cos() * w.dot(v);
            out.axpy(s, w, 1.0);
        }
        Some(out)
    }
    fn hessian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        let mut h = DMatrix::from_diagonal(&self.lambda);
        for ((w, c), p) in self.weights.iter().zip(&self.amplitudes).zip(&self.phases) {
            h -= w * w.transpose() * (c * (w.dot(x) + p).cos());
        }
        Some(h)
    }
}

/// Structural tag of a test problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    Convex,
    Nonconvex,
    StrictSaddle,
}

/// A problem instance with everything a solver run and its verification need.
#[derive(Clone)]
pub struct TestProblem {
    pub id: String,
    pub objective: Arc<dyn Objective>,
    pub params: SmoothnessParams,
    pub start: DVector<f64>,
    /// Region where `params` are certified; `None` means globally.
    pub domain: Option<Domain>,
    pub known_minimum: Option<f64>,
    pub known_minimizers: Vec<DVector<f64>>,
    /// Valid `sigma_1` for the strict-saddle property, when the problem has it.
    pub strict_saddle_sigma: Option<f64>,
    pub tags: Vec<Tag>,
}

impl std::fmt::Debug for TestProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestProblem")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("domain", &self.domain)
            .field("tags", &self.tags)
            .finish_non_exhaustive()
    }
}

impl TestProblem {
    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    /// Fresh oracle with zeroed counters, guarded by the problem's domain.
    pub fn oracle(&self) -> CountingOracle {
        CountingOracle::new(Arc::clone(&self.objective)).with_domain(self.domain.clone())
    }

    /// Dense Hessian for verification.
    pub fn dense_hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.objective
            .hessian(x)
            .expect("built-in problems provide dense Hessians")
    }

    pub fn has_tag(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }

    /// Replace the start point, recomputing `delta_f` when the gap is known.
    pub fn with_start(mut self, start: DVector<f64>) -> Self {
        if let Some(fmin) = self.known_minimum {
            let gap = self.objective.value(&start) - fmin;
            self.params.delta_f = gap.max(1e-12);
        }
        self.start = start;
        self
    }
}

fn random_orthogonal(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(rng));
    g.qr().q()
}

fn rotate(q: &DMatrix<f64>, spectrum: &[f64]) -> DMatrix<f64> {
    let d = DMatrix::from_diagonal(&DVector::from_column_slice(spectrum));
    let a = q * d * q.transpose();
    (&a + a.transpose()) * 0.5
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

struct ProblemId {
    name: String,
    args: BTreeMap<String, String>,
}

impl ProblemId {
    fn parse(id: &str) -> Result<Self> {
        let mut parts = id.split(':');
        let name = parts.next().unwrap_or_default().trim().to_string();
        let mut args = BTreeMap::new();
        for part in parts {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::UnknownProblem(id.to_string()))?;
            args.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(ProblemId { name, args })
    }

    fn get<T: std::str::FromStr>(&self, id: &str, key: &str, default: T) -> Result<T> {
        match self.args.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| {
                Error::InvalidArgument(format!("bad value `{v}` for `{key}` in problem `{id}`"))
            }),
        }
    }

    fn check_keys(&self, id: &str, allowed: &[&str]) -> Result<()> {
        match self.args.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidArgument(format!(
                "unknown key `{k}` in problem `{id}`"
            ))),
            None => Ok(()),
        }
    }
}

/// Build a problem from its string id. `seed` drives every random choice.
pub fn problem_from_id(id: &str, seed: u64) -> Result<TestProblem> {
    let pid = ProblemId::parse(id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problem = match pid.name.as_str() {
        "quadratic" => {
            pid.check_keys(id, &["d", "kappa", "l"])?;
            let d: usize = pid.get(id, "d", 10)?;
            let kappa: f64 = pid.get(id, "kappa", 100.0)?;
            let l: f64 = pid.get(id, "l", 1.0)?;
            convex_quadratic(id, d, kappa, l, &mut rng)?
        }
        "nonconvex-quadratic" => {
            pid.check_keys(id, &["d"])?;
            let d: usize = pid.get(id, "d", 10)?;
            confined_quadratic(id, d, &mut rng)?
        }
        "doublewell" => {
            pid.check_keys(id, &["d", "coupling"])?;
            let d: usize = pid.get(id, "d", 20)?;
            let coupling: f64 = pid.get(id, "coupling", 0.0)?;
            double_well(id, d, coupling)?
        }
        "rosenbrock" => {
            pid.check_keys(id, &["d", "a"])?;
            let d: usize = pid.get(id, "d", 2)?;
            let a: f64 = pid.get(id, "a", 100.0)?;
            rosenbrock(id, d, a)?
        }
        "random-nonconvex" => {
            pid.check_keys(id, &["d", "decades", "ridges"])?;
            let d: usize = pid.get(id, "d", 50)?;
            let decades: f64 = pid.get(id, "decades", 10.0)?;
            let ridges: usize = pid.get(id, "ridges", 6)?;
            ill_conditioned_cosine(id, d, decades, ridges, &mut rng)?
        }
        _ => return Err(Error::UnknownProblem(id.to_string())),
    };
    problem.params.validate()?;
    Ok(problem)
}

fn require_dim(id: &str, d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(Error::InvalidArgument(format!(
            "problem `{id}` needs d >= {min}, got {d}"
        )));
    }
    Ok(())
}

fn convex_quadratic(id: &str, d: usize, kappa: f64, l: f64, rng: &mut ChaCha8Rng) -> Result<TestProblem> {
    require_dim(id, d, 1)?;
    if !(kappa >= 1.0 && l > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "problem `{id}` needs kappa >= 1 and l > 0"
        )));
    }
    let mu = l / kappa;
    let spectrum = linspace(mu, l, d);
    let q = Quadratic::with_spectrum(&spectrum, rng);
    let start = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
    let gap = q.value(&start);
    Ok(TestProblem {
        id: id.to_string(),
        objective: Arc::new(q),
        // The Hessian is constant; any positive L2 is valid.
        params: SmoothnessParams::new(l, 1.0, gap.max(1e-12))?,
        start,
        domain: None,
        known_minimum: Some(0.0),
        known_minimizers: vec![DVector::zeros(d)],
        strict_saddle_sigma: None,
        tags: vec![Tag::Convex],
    })
}

fn confined_quadratic(id: &str, d: usize, rng: &mut ChaCha8Rng) -> Result<TestProblem> {
    require_dim(id, d, 2)?;
    const C: f64 = 0.5;
    const RADIUS: f64 = 3.0;
    let mut spectrum = vec![-1.0];
    spectrum.extend(linspace(0.5, 5.0, d - 1));
    let q = random_orthogonal(d, rng);
    let a = rotate(&q, &spectrum);
    let u = q.column(0).into_owned();
    // Hessian eigenvalues on the ball: [-1, 5] off u, -1 + 3 c t^2 along u with |t| <= R.
    let l1 = 5.0_f64.max(-1.0 + 3.0 * C * RADIUS * RADIUS);
    let l2 = 6.0 * C * RADIUS;
    let fmin = -1.0 / (4.0 * C);
    let arm = &u * (1.0 / C.sqrt());
    let mut start = DVector::from_fn(d, |_, _| StandardNormal.sample(rng));
    let r: f64 = rng.random_range(0.25..1.0);
    start *= r / start.norm();
    let objective = ConfinedQuadratic { a, u, c: C };
    let gap = objective.value(&start) - fmin;
    Ok(TestProblem {
        id: id.to_string(),
        objective: Arc::new(objective),
        params: SmoothnessParams::new(l1, l2, gap.max(1e-12))?,
        start,
        domain: Some(Domain::Ball { radius: RADIUS }),
        known_minimum: Some(fmin),
        known_minimizers: vec![arm.clone(), -arm],
        strict_saddle_sigma: None,
        tags: vec![Tag::Nonconvex],
    })
}

fn double_well(id: &str, d: usize, coupling: f64) -> Result<TestProblem> {
    require_dim(id, d, 1)?;
    if !(coupling >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "problem `{id}` needs coupling >= 0"
        )));
    }
    const R: f64 = 2.0;
    // 12 x^2 - 4 in [-4, 44] on the box; the chain Laplacian adds at most 8 c.
    let l1 = (12.0 * R * R - 4.0) + 8.0 * coupling;
    let l2 = 24.0 * R;
    let start = DVector::zeros(d);
    let objective = DoubleWell::new(d, coupling);
    let gap = objective.value(&start);
    let mut tags = vec![Tag::Nonconvex];
    // Uncoupled wells: near-critical points (|grad| <= sigma^2 / L2) have every
    // coordinate within 0.07 of a critical value, so lambda_min is either
    // below -3.9 or above 7.2; sigma = 3.5 is certified.
    let sigma = if coupling == 0.0 {
        tags.push(Tag::StrictSaddle);
        Some(3.5)
    } else {
        None
    };
    Ok(TestProblem {
        id: id.to_string(),
        objective: Arc::new(objective),
        params: SmoothnessParams::new(l1, l2, gap.max(1e-12))?,
        start,
        domain: Some(Domain::Box { lo: -R, hi: R }),
        known_minimum: Some(0.0),
        known_minimizers: vec![DVector::from_element(d, 1.0), DVector::from_element(d, -1.0)],
        strict_saddle_sigma: sigma,
        tags,
    })
}

fn rosenbrock(id: &str, d: usize, a: f64) -> Result<TestProblem> {
    require_dim(id, d, 2)?;
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("problem `{id}` needs a > 0")));
    }
    const R: f64 = 2.0;
    // Gershgorin bounds on the box for the Hessian and its directional derivative.
    let l1 = a * (12.0 * R * R + 12.0 * R + 2.0) + 2.0;
    let l2 = a * (24.0 * R + 12.0);
    let start = DVector::from_fn(d, |i, _| if i % 2 == 0 { -1.2 } else { 1.0 });
    let objective = Rosenbrock::new(d, a);
    let gap = objective.value(&start);
    Ok(TestProblem {
        id: id.to_string(),
        objective: Arc::new(objective),
        params: SmoothnessParams::new(l1, l2, gap.max(1e-12))?,
        start,
        domain: Some(Domain::Box { lo: -R, hi: R }),
        known_minimum: Some(0.0),
        known_minimizers: vec![DVector::from_element(d, 1.0)],
        strict_saddle_sigma: None,
        tags: vec![Tag::Nonconvex],
    })
}

fn ill_conditioned_cosine(
    id: &str,
    d: usize,
    decades: f64,
    ridges: usize,
    rng: &mut ChaCha8Rng,
) -> Result<TestProblem> {
    require_dim(id, d, 2)?;
    if !(decades > 0.0) || ridges == 0 {
        return Err(Error::InvalidArgument(format!(
            "problem `{id}` needs decades > 0 and ridges >= 1"
        )));
    }
    const STIFF: usize = 8;
    const AMPLITUDE: f64 = 0.05;
    const FREQUENCY: f64 = 2.0;
    const SCALE: f64 = 0.1;
    let stiff = STIFF.min(d);
    let lambda = DVector::from_fn(d, |i, _| 10f64.powf(-decades * i as f64 / (d - 1) as f64));
    let mut weights = Vec::with_capacity(ridges);
    let mut phases = Vec::with_capacity(ridges);
    for _ in 0..ridges {
        let mut w = DVector::zeros(d);
        for i in 0..stiff {
            w[i] = StandardNormal.sample(rng);
        }
        w *= FREQUENCY / w.norm();
        weights.push(w);
        phases.push(rng.random_range(0.0..std::f64::consts::TAU));
    }
    let amplitudes = vec![AMPLITUDE; ridges];
    let start = DVector::from_fn(d, |i, _| {
        if i < stiff {
            rng.random_range(-2.0..2.0)
        } else {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            sign * SCALE / lambda[i].sqrt()
        }
    });
    let objective = IllConditionedCosine {
        lambda,
        weights,
        amplitudes,
        phases,
    };
    let (amp, curv, third) = objective.ridge_bounds();
    // Hessian = diag(lambda) - sum c_k cos(.) w_k w_k^T, lambda in (0, 1].
    let l1 = 1.0 + curv;
    let l2 = third;
    // f >= -sum |c_k| because the quadratic part is non-negative.
    let gap = objective.value(&start) + amp;
    Ok(TestProblem {
        id: id.to_string(),
        objective: Arc::new(objective),
        params: SmoothnessParams::new(l1, l2, gap)?,
        start,
        domain: None,
        known_minimum: None,
        known_minimizers: Vec::new(),
        strict_saddle_sigma: None,
        tags: vec![Tag::Nonconvex],
    })
}

/// Problem ids in the default suite.
pub const SUITE_IDS: &[&str] = &[
    "quadratic:d=10:kappa=100",
    "nonconvex-quadratic:d=10",
    "doublewell:d=20:coupling=0.1",
    "doublewell:d=1",
    "rosenbrock:d=2",
    "random-nonconvex:d=50",
];

/// The default problem suite, deterministic in `seed`.
pub fn make_test_suite(seed: u64) -> Vec<TestProblem> {
    SUITE_IDS
        .iter()
        .map(|id| problem_from_id(id, seed).expect("suite ids are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn lambda_min(h: DMatrix<f64>) -> f64 {
        SymmetricEigen::new(h).eigenvalues.min()
    }

    #[test]
    fn suite_is_deterministic() {
        let a = make_test_suite(0);
        let b = make_test_suite(0);
        assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.id, q.id);
            assert_eq!(p.params, q.params);
            assert_eq!(p.start, q.start);
            assert_eq!(p.dense_hessian(&p.start), q.dense_hessian(&q.start));
            assert_eq!(
                p.objective.value(&p.start).to_bits(),
                q.objective.value(&q.start).to_bits()
            );
        }
        let c = make_test_suite(1);
        assert_ne!(a[0].start, c[0].start);
    }

    #[test]
    fn suite_covers_required_families() {
        let suite = make_test_suite(3);
        assert!(suite.iter().any(|p| p.has_tag(Tag::Convex)));
        assert!(suite.iter().any(|p| p.has_tag(Tag::StrictSaddle)));
        for p in &suite {
            p.params.validate().unwrap();
            if let Some(dom) = &p.domain {
                assert!(dom.contains(&p.start), "{} starts outside its domain", p.id);
            }
        }
    }

    #[test]
    fn convex_quadratic_spectrum() {
        let p = problem_from_id("quadratic:d=6:kappa=50:l=2", 9).unwrap();
        assert_eq!(p.params.l1, 2.0);
        let lmin = lambda_min(p.dense_hessian(&p.start));
        assert!((lmin - 2.0 / 50.0).abs() < 1e-12);
    }

    #[test]
    fn confined_quadratic_has_one_negative_eigenvalue_at_origin() {
        let p = problem_from_id("nonconvex-quadratic:d=5", 2).unwrap();
        let eig = SymmetricEigen::new(p.dense_hessian(&DVector::zeros(5))).eigenvalues;
        assert_eq!(eig.iter().filter(|&&l| l < 0.0).count(), 1);
        assert!((eig.min() + 1.0).abs() < 1e-12);
        for m in &p.known_minimizers {
            assert!(p.objective.gradient(m).norm() < 1e-12);
            assert!((p.objective.value(m) - p.known_minimum.unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn one_dimensional_double_well() {
        let p = problem_from_id("doublewell:d=1", 0).unwrap();
        for x in [-1.0, 0.0, 1.0] {
            let g = p.objective.gradient(&DVector::from_element(1, x));
            assert_eq!(g[0], 0.0);
        }
        let h0 = p.dense_hessian(&DVector::zeros(1))[(0, 0)];
        assert_eq!(h0, -4.0);
        // f'' at 0 by central differences of the value.
        let f = |x: f64| p.objective.value(&DVector::from_element(1, x));
        let h = 1e-4;
        let fd = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        assert!((fd + 4.0).abs() < 1e-6);
    }

    #[test]
    fn ids_are_validated() {
        assert!(matches!(
            problem_from_id("banana", 0),
            Err(Error::UnknownProblem(_))
        ));
        assert!(problem_from_id("quadratic:d=3:wobble=2", 0).is_err());
        assert!(problem_from_id("quadratic:d=x", 0).is_err());
        assert!(problem_from_id("rosenbrock:d=1", 0).is_err());
    }
}
