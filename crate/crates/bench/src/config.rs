//! Benchmark configuration: a TOML file with `[run]` and `[solver]` tables,
//! plus command-line overrides.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hessfree::almost_convex::InnerSmoothness;
use hessfree::driver::{Caps, SolverConfig};
use hessfree::eigen::{EigenBackend, EigenConfig, DEFAULT_BUDGET_CONSTANT};
use hessfree::oracle::{problem_from_id, Tag};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Accnc,
    Gd,
    NcdOnly,
    AcagdOnly,
    StrictSaddle,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::Accnc,
        SolverKind::Gd,
        SolverKind::NcdOnly,
        SolverKind::AcagdOnly,
        SolverKind::StrictSaddle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Accnc => "accnc",
            SolverKind::Gd => "gd",
            SolverKind::NcdOnly => "ncd-only",
            SolverKind::AcagdOnly => "acagd-only",
            SolverKind::StrictSaddle => "strict-saddle",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown solver `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(ConfigError::Invalid(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub problems: Vec<String>,
    pub solvers: Vec<SolverKind>,
    pub eps: Vec<f64>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub format: Format,
    /// Compute the dense Hessian at every returned point.
    #[serde(default = "default_true")]
    pub dense_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default = "default_backend")]
    pub eig_backend: String,
    #[serde(default = "default_budget_constant")]
    pub budget_constant: f64,
    #[serde(default = "default_inner_smoothness")]
    pub inner_smoothness: String,
    #[serde(default = "default_outer_cap")]
    pub outer_cap: f64,
    #[serde(default = "default_inner_cap")]
    pub inner_cap: f64,
    #[serde(default)]
    pub gd_trace_full: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            alpha: None,
            eig_backend: default_backend(),
            budget_constant: default_budget_constant(),
            inner_smoothness: default_inner_smoothness(),
            outer_cap: default_outer_cap(),
            inner_cap: default_inner_cap(),
            gd_trace_full: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub run: RunSection,
    #[serde(default)]
    pub solver: SolverSection,
}

fn default_delta() -> f64 {
    0.1
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}
fn default_out() -> PathBuf {
    PathBuf::from("bench-out")
}
fn default_true() -> bool {
    true
}
fn default_backend() -> String {
    EigenBackend::Lanczos.as_str().to_string()
}
fn default_budget_constant() -> f64 {
    DEFAULT_BUDGET_CONSTANT
}
fn default_inner_smoothness() -> String {
    InnerSmoothness::default().as_str().to_string()
}
fn default_outer_cap() -> f64 {
    Caps::default().outer
}
fn default_inner_cap() -> f64 {
    Caps::default().inner
}

/// Command-line values that replace the corresponding config entries.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub problems: Option<Vec<String>>,
    pub solvers: Option<Vec<String>>,
    pub eps: Option<Vec<f64>>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub delta: Option<f64>,
    pub dense_check: Option<bool>,
    pub alpha: Option<f64>,
    pub eig_backend: Option<String>,
    pub budget_constant: Option<f64>,
    pub inner_smoothness: Option<String>,
    pub outer_cap: Option<f64>,
    pub inner_cap: Option<f64>,
    pub gd_trace_full: Option<bool>,
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: Overrides) -> Result<(), ConfigError> {
        if let Some(p) = o.problems {
            self.run.problems = p;
        }
        if let Some(s) = o.solvers {
            self.run.solvers = s.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        }
        if let Some(e) = o.eps {
            self.run.eps = e;
        }
        if let Some(s) = o.seeds {
            self.run.seeds = s;
        }
        if let Some(out) = o.out {
            self.run.out = out;
        }
        if let Some(f) = o.format {
            self.run.format = f.parse()?;
        }
        if let Some(d) = o.delta {
            self.run.delta = d;
        }
        if let Some(d) = o.dense_check {
            self.run.dense_check = d;
        }
        let s = &mut self.solver;
        if o.alpha.is_some() {
            s.alpha = o.alpha;
        }
        if let Some(b) = o.eig_backend {
            s.eig_backend = b;
        }
        if let Some(c) = o.budget_constant {
            s.budget_constant = c;
        }
        if let Some(i) = o.inner_smoothness {
            s.inner_smoothness = i;
        }
        if let Some(c) = o.outer_cap {
            s.outer_cap = c;
        }
        if let Some(c) = o.inner_cap {
            s.inner_cap = c;
        }
        if let Some(g) = o.gd_trace_full {
            s.gd_trace_full = g;
        }
        Ok(())
    }

    /// Check everything that can be checked before any run starts.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let run = &self.run;
        if run.problems.is_empty() {
            return Err(ConfigError::Invalid("no problems configured".into()));
        }
        if run.solvers.is_empty() {
            return Err(ConfigError::Invalid("no solvers configured".into()));
        }
        if run.eps.is_empty() {
            return Err(ConfigError::Invalid("empty eps sweep".into()));
        }
        if let Some(e) = run.eps.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(ConfigError::Invalid(format!("eps must be positive, got {e}")));
        }
        if run.seeds.is_empty() {
            return Err(ConfigError::Invalid("no seeds configured".into()));
        }
        if run.seeds.iter().collect::<BTreeSet<_>>().len() != run.seeds.len() {
            return Err(ConfigError::Invalid("seeds must be distinct".into()));
        }
        if !(run.delta > 0.0 && run.delta < 1.0) {
            return Err(ConfigError::Invalid(format!(
                "delta must lie in (0, 1), got {}",
                run.delta
            )));
        }
        self.eigen_config()?;
        self.inner_smoothness()?;
        if !(self.solver.outer_cap >= 1.0 && self.solver.inner_cap >= 1.0) {
            return Err(ConfigError::Invalid("cap multipliers must be >= 1".into()));
        }
        if let Some(a) = self.solver.alpha {
            if !(a > 0.0) {
                return Err(ConfigError::Invalid(format!("alpha must be positive, got {a}")));
            }
        }
        for id in &run.problems {
            let p = problem_from_id(id, run.seeds[0])
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            if let Some(a) = self.solver.alpha {
                if a > p.params.l1 {
                    return Err(ConfigError::Invalid(format!(
                        "alpha = {a} exceeds L1 = {} of `{id}`",
                        p.params.l1
                    )));
                }
            }
            if run.solvers.contains(&SolverKind::StrictSaddle) && !p.has_tag(Tag::StrictSaddle) {
                return Err(ConfigError::Invalid(format!(
                    "strict-saddle solver needs a strict-saddle problem, `{id}` is not one"
                )));
            }
        }
        Ok(())
    }

    pub fn eigen_config(&self) -> Result<EigenConfig, ConfigError> {
        let backend = self
            .solver
            .eig_backend
            .parse()
            .map_err(|e: hessfree::Error| ConfigError::Invalid(e.to_string()))?;
        if !(self.solver.budget_constant > 0.0) {
            return Err(ConfigError::Invalid("budget_constant must be positive".into()));
        }
        Ok(EigenConfig {
            backend,
            budget_constant: self.solver.budget_constant,
        })
    }

    pub fn inner_smoothness(&self) -> Result<InnerSmoothness, ConfigError> {
        self.solver
            .inner_smoothness
            .parse()
            .map_err(|e: hessfree::Error| ConfigError::Invalid(e.to_string()))
    }

    /// Solver settings for one entry of the run matrix. Call after `validate`.
    pub fn solver_config(&self, eps: f64, seed: u64) -> SolverConfig {
        SolverConfig {
            eps,
            delta: self.run.delta,
            alpha: self.solver.alpha,
            seed,
            caps: Caps {
                outer: self.solver.outer_cap,
                inner: self.solver.inner_cap,
            },
            eigen: self.eigen_config().unwrap_or_default(),
            inner_smoothness: self.inner_smoothness().unwrap_or_default(),
            gd_trace_full: self.solver.gd_trace_full,
            record_points: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[run]
problems = ["quadratic:d=5"]
solvers = ["gd", "accnc"]
eps = [1e-2, 1e-3]
"#;

    #[test]
    fn defaults_fill_in() {
        let cfg = BenchConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.run.delta, 0.1);
        assert_eq!(cfg.run.seeds, vec![0]);
        assert_eq!(cfg.run.format, Format::Csv);
        assert_eq!(cfg.solver.eig_backend, "lanczos");
        cfg.validate().unwrap();
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut cfg = BenchConfig::from_toml(MINIMAL).unwrap();
        cfg.apply(Overrides {
            solvers: Some(vec!["ncd-only".into()]),
            seeds: Some(vec![3, 4]),
            format: Some("json".into()),
            ..Overrides::default()
        })
        .unwrap();
        assert_eq!(cfg.run.solvers, vec![SolverKind::NcdOnly]);
        assert_eq!(cfg.run.seeds, vec![3, 4]);
        assert_eq!(cfg.run.format, Format::Json);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(BenchConfig::from_toml("[run]\nproblems = []\nsolvers = [\"gd\"]\neps = [0.1]\nbogus = 1").is_err());
        assert!(BenchConfig::from_toml("[run]\nproblems = [\"x\"]\nsolvers = [\"newton\"]\neps = [0.1]").is_err());
        let bad = [
            "[run]\nproblems = []\nsolvers = [\"gd\"]\neps = [0.1]",
            "[run]\nproblems = [\"nope\"]\nsolvers = [\"gd\"]\neps = [0.1]",
            "[run]\nproblems = [\"quadratic\"]\nsolvers = [\"gd\"]\neps = []",
            "[run]\nproblems = [\"quadratic\"]\nsolvers = [\"gd\"]\neps = [0.1]\nseeds = [1, 1]",
            "[run]\nproblems = [\"quadratic\"]\nsolvers = [\"strict-saddle\"]\neps = [0.1]",
            "[run]\nproblems = [\"quadratic\"]\nsolvers = [\"gd\"]\neps = [0.1]\n[solver]\neig_backend = \"qr\"",
        ];
        for text in bad {
            let cfg = BenchConfig::from_toml(text).unwrap();
            assert!(cfg.validate().is_err(), "{text}");
        }
    }
}
