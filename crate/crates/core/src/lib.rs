//! Bicriteria approximation algorithms for submodular maximization.
//!
//! Solvers trade a bounded violation of the constraint for a better value
//! guarantee. Every solver reports the value it reached together with the
//! infeasibility ratio it actually used, so results can be checked against
//! the exhaustive engines in [`exhaustive`].

pub mod constraints;
pub mod continuous;
pub mod discrete;
pub mod error;
pub mod exhaustive;
pub mod functions;
pub mod instance;
pub mod multilinear;
pub mod oracle;
pub mod rng;
pub mod rounding;
pub mod set;
pub mod vector;

pub use constraints::{Constraint, KnapsackConstraint, Matroid, Region};
pub use error::{Error, Result};
pub use instance::{BicriteriaOutcome, Instance, Solution};
pub use multilinear::{EvalMode, MultilinearEvaluator};
pub use oracle::{FnSetFunction, SetFunction, SetFunctionOracle};
pub use set::{ElementSet, GroundSet, MAX_ELEMENTS};
pub use vector::DenseVector;

/// Tolerance used by invariant checks.
pub const TOL: f64 = 1e-9;
