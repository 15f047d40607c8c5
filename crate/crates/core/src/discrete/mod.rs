//! Combinatorial solvers.
//!
//! Greedy choices break ties toward the lowest element index.

mod combinatorial;
mod double_greedy;
mod greedy;
mod symmetric;

pub use combinatorial::{combinatorial_general, warmup_cardinality};
pub use double_greedy::{
    double_greedy_exhaustive, double_greedy_unconstrained, DoubleGreedyMode, EXHAUSTIVE_LIMIT,
};
pub use greedy::{density_greedy_monotone, iterative_matroid_greedy};
pub use symmetric::density_greedy_symmetric;

use crate::instance::BicriteriaOutcome;
use crate::set::ElementSet;

#[derive(Clone, Debug, PartialEq)]
pub struct Pick {
    pub element: usize,
    /// Marginal of the element with respect to the set it joined.
    pub marginal: f64,
    /// Size of the set right after the pick.
    pub size: usize,
    /// Cost of the set right after the pick.
    pub cost: f64,
}

/// One `(A_i, D_i)` pair of the two-phase combinatorial algorithms.
#[derive(Clone, Debug, PartialEq)]
pub struct Round {
    pub a: ElementSet,
    pub d: ElementSet,
    pub value_a: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GreedyTrace {
    pub picks: Vec<Pick>,
    pub rounds: Vec<Round>,
    /// Independent sets built by the iterative matroid greedy.
    pub layers: Vec<ElementSet>,
    pub removals: usize,
    pub early_return: bool,
}

#[derive(Clone, Debug)]
pub struct DiscreteRun {
    pub outcome: BicriteriaOutcome,
    pub trace: GreedyTrace,
}

fn check_eps(eps: f64, hi: f64) -> crate::Result<()> {
    if eps > 0.0 && eps < hi {
        Ok(())
    } else {
        Err(crate::error::invalid(format!("ε must lie in (0, {hi}), got {eps}")))
    }
}
