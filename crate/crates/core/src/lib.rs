//! Hessian-free accelerated methods for finding approximate local minima of
//! smooth non-convex functions.
//!
//! The solvers only touch the objective through gradients and Hessian-vector
//! products (see [`oracle::Oracle`]), and every such call is counted.
//!
//! ```
//! use hessfree::driver::{accelerated_nonconvex, SolverConfig};
//! use hessfree::oracle::problem_from_id;
//!
//! let p = problem_from_id("doublewell:d=1", 0).unwrap();
//! let mut f = p.oracle();
//! let report = accelerated_nonconvex(&mut f, &p.start, &p.params, &SolverConfig::new(1e-3)).unwrap();
//! assert!(report.grad_norm <= 1e-3);
//! ```

pub mod agd;
pub mod almost_convex;
pub mod curvature;
pub mod driver;
pub mod eigen;
pub mod error;
pub mod oracle;

pub use error::{Error, Phase, Result, Routine};
