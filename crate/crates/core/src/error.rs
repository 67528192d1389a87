use std::fmt;

use thiserror::Error;

/// Routine that hit its iteration cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Routine {
    Agd,
    AlmostConvexAgd,
    NegativeCurvatureDescent,
    AcceleratedNonconvex,
    GradientDescent,
}

impl fmt::Display for Routine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Routine::Agd => "accelerated gradient descent",
            Routine::AlmostConvexAgd => "almost-convex AGD",
            Routine::NegativeCurvatureDescent => "negative-curvature descent",
            Routine::AcceleratedNonconvex => "accelerated non-convex method",
            Routine::GradientDescent => "gradient descent",
        };
        f.write_str(name)
    }
}

/// Solver phase, used both for error context and for trace rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Ncd,
    Acagd,
    AgdPhase2,
    Gd,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Ncd => "ncd",
            Phase::Acagd => "acagd",
            Phase::AgdPhase2 => "agd-phase2",
            Phase::Gd => "gd",
        }
    }

    pub fn parse(s: &str) -> Option<Phase> {
        match s {
            "ncd" => Some(Phase::Ncd),
            "acagd" => Some(Phase::Acagd),
            "agd-phase2" => Some(Phase::AgdPhase2),
            "gd" => Some(Phase::Gd),
            _ => None,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("oracle produced a non-finite value at {point:?}")]
    NonFiniteOracle { point: Vec<f64> },

    #[error("iterate left the certified domain at {point:?}")]
    OutsideDomain { point: Vec<f64> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The iteration cap was hit. `grad_norms` holds the gradient-norm history
    /// observed by the routine (possibly thinned for long runs).
    #[error("{routine} did not converge within {cap} iterations (last gradient norm {last_grad_norm:e})")]
    NonConvergence {
        routine: Routine,
        cap: usize,
        last_grad_norm: f64,
        grad_norms: Vec<f64>,
    },

    #[error(
        "negative-curvature descent took more than {cap} steps; L2 or the optimality gap is misestimated"
    )]
    CurvatureStepCap { cap: usize, decrease: f64 },

    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),

    #[error("{phase} phase failed: {source}")]
    InPhase {
        phase: Phase,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_phase(self, phase: Phase) -> Error {
        match self {
            e @ Error::InPhase { .. } => e,
            e => Error::InPhase {
                phase,
                source: Box::new(e),
            },
        }
    }

    /// Innermost error, skipping phase context.
    pub fn root(&self) -> &Error {
        match self {
            Error::InPhase { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
