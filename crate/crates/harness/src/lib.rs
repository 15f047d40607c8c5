//! Instance files, solver runs, sweeps and the acceptance suite for the
//! `bicriteria` solvers.

pub mod accept;
pub mod corpus;
pub mod record;
pub mod solvers;
pub mod spec;
pub mod sweep;

pub use accept::{accept, CriterionReport, Report};
pub use record::{Certificate, RunRecord};
pub use solvers::{run, RunParams, SolverId};
pub use spec::{ConstraintSpec, Decimal, InstanceSpec, MatroidSpec};
pub use sweep::{sweep_curve, SweepPoint};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("unknown solver `{0}`")]
    UnknownSolver(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("bad instance: {0}")]
    Spec(String),
    #[error(transparent)]
    Solver(#[from] bicriteria::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
