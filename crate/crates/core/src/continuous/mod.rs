//! Solvers over the multilinear extension, discretized in time by Euler steps.

mod double_greedy;
mod general;
mod mcg;
mod postprocess;

pub use double_greedy::{continuous_double_greedy_knapsack, dr_double_greedy};
pub use general::{general_bicriteria, GuidedObjective};
pub use mcg::{guided_mcg, mcg_multi_opt, mcg_non_downclosed, measured_continuous_greedy, more_mcg};
pub use postprocess::symmetric_equality_postprocess;

use crate::constraints::Region;
use crate::error::{invalid, Result};
use crate::instance::{BicriteriaOutcome, Solution};
use crate::multilinear::{EvalMode, MultilinearEvaluator};
use crate::vector::DenseVector;

/// Number of checkpoints kept per run, besides `t = 0`.
pub const CHECKPOINTS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub t: f64,
    pub y: DenseVector,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// `⟨x(t), w(t)⟩` of every LP solved, in time order.
    pub lp_values: Vec<f64>,
    /// A point of the region below the output (non-down-closed variant).
    pub lower: Option<DenseVector>,
    /// The sum `Σ δt·x^{(i)}` above the output (non-down-closed variant).
    pub upper: Option<DenseVector>,
    /// `‖Σ g^{(i)}‖_∞` of the guided runs.
    pub guide_sum_max: Option<f64>,
    /// Index of the guided run that produced the output.
    pub chosen: Option<usize>,
    /// Price multiplier `ℓ` picked at every step of the continuous double greedy.
    pub multipliers: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ContinuousRun {
    pub outcome: BicriteriaOutcome,
    pub dt: f64,
    pub horizon: f64,
    pub checkpoints: Vec<Checkpoint>,
    pub mode: EvalMode,
    pub diagnostics: Diagnostics,
}

impl ContinuousRun {
    pub fn point(&self) -> &DenseVector {
        self.outcome.solution.as_vector().expect("continuous runs return vectors")
    }
}

/// `T/δt`, which must be a whole number.
fn steps_for(horizon: f64, dt: f64) -> Result<usize> {
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(invalid(format!("horizon must be finite and non-negative, got {horizon}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("step must be positive, got {dt}")));
    }
    let k = (horizon / dt).round();
    if (k * dt - horizon).abs() > 1e-9 * horizon.max(1.0) {
        return Err(invalid(format!("step {dt} does not divide horizon {horizon}")));
    }
    Ok(k as usize)
}

fn checkpoint_due(step: usize, steps: usize) -> bool {
    step == steps || step.is_multiple_of((steps / CHECKPOINTS).max(1))
}

fn seed_of(mode: EvalMode) -> u64 {
    match mode {
        EvalMode::Exact => 0,
        EvalMode::Sampled { seed, .. } => seed,
    }
}

fn finish(
    ev: &MultilinearEvaluator,
    region: &Region,
    y: DenseVector,
    q0: u64,
    dt: f64,
    horizon: f64,
    checkpoints: Vec<Checkpoint>,
    diagnostics: Diagnostics,
) -> Result<ContinuousRun> {
    let value = ev.eval(&y)?;
    let infeasibility = region.infeasibility_ratio(&y).ok();
    let outcome = BicriteriaOutcome {
        solution: Solution::Vector(y),
        value,
        infeasibility,
        queries: ev.oracle().queries() - q0,
        seed: seed_of(ev.mode()),
    };
    Ok(ContinuousRun { outcome, dt, horizon, checkpoints, mode: ev.mode(), diagnostics })
}
