//! Measured continuous greedy and its variants.
//!
//! Every variant moves along `dy/dt = s·x(t)∘m(y)` where `x(t)` maximizes
//! `⟨x, m(y)∘∇F(y)⟩` over the LP region.

use super::{checkpoint_due, finish, steps_for, Checkpoint, ContinuousRun, Diagnostics};
use crate::constraints::Region;
use crate::error::{invalid, precondition, Error, Result};
use crate::multilinear::MultilinearEvaluator;
use crate::vector::DenseVector;

struct Flow {
    y: DenseVector,
    directions: Vec<DenseVector>,
    checkpoints: Vec<Checkpoint>,
    lp_values: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
fn flow(
    ev: &MultilinearEvaluator,
    lp: &Region,
    steps: usize,
    dt: f64,
    speed: f64,
    step_offset: u64,
    keep_directions: bool,
    measure: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<Flow> {
    let n = ev.n();
    if lp.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: lp.n() });
    }
    let mut y = DenseVector::zeros(n);
    let mut out = Flow {
        y: DenseVector::zeros(n),
        directions: Vec::new(),
        checkpoints: vec![Checkpoint { t: 0.0, y: y.clone(), value: ev.eval_at_step(&y, step_offset)? }],
        lp_values: Vec::with_capacity(steps),
    };
    for k in 0..steps {
        let step = step_offset + k as u64;
        let m = measure(&y);
        let grad = ev.gradient_at_step(&y, step)?;
        let w: Vec<f64> = m.iter().zip(&grad).map(|(a, b)| a * b).collect();
        let x = lp.lp_maximize(&w)?;
        out.lp_values.push(x.dot(&w));
        for u in 0..n {
            y[u] = (y[u] + speed * dt * x[u] * m[u]).clamp(0.0, 1.0);
        }
        if keep_directions {
            out.directions.push(x);
        }
        if checkpoint_due(k + 1, steps) {
            let value = ev.eval_at_step(&y, step + 1)?;
            out.checkpoints.push(Checkpoint { t: (k + 1) as f64 * dt, y: y.clone(), value });
        }
    }
    out.y = y;
    Ok(out)
}

fn require_down_closed(region: &Region, solver: &str) -> Result<()> {
    if region.is_down_closed() {
        Ok(())
    } else {
        Err(precondition(format!("{solver} needs a down-closed region")))
    }
}

fn run(
    ev: &MultilinearEvaluator,
    region: &Region,
    lp: &Region,
    horizon: f64,
    dt: f64,
    speed: f64,
    measure: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<ContinuousRun> {
    let steps = steps_for(horizon, dt)?;
    let q0 = ev.oracle().queries();
    let fl = flow(ev, lp, steps, dt, speed, 0, false, measure)?;
    let diag = Diagnostics { lp_values: fl.lp_values, ..Diagnostics::default() };
    finish(ev, region, fl.y, q0, dt, horizon, fl.checkpoints, diag)
}

/// `dy/dt = x(t)∘(1 − y)`. The output `y(T)` satisfies `y(T)/T ∈ P`.
pub fn measured_continuous_greedy(
    ev: &MultilinearEvaluator,
    region: &Region,
    horizon: f64,
    dt: f64,
) -> Result<ContinuousRun> {
    require_down_closed(region, "measured_continuous_greedy")?;
    run(ev, region, region, horizon, dt, 1.0, |y| y.iter().map(|v| 1.0 - v).collect())
}

/// Measured continuous greedy for regions that need not be down-closed.
///
/// Returns `y ∨ x′` where `x′` averages the first unit of time's LP vertices.
/// `T` is rounded up to a whole number of steps.
pub fn mcg_non_downclosed(
    ev: &MultilinearEvaluator,
    region: &Region,
    horizon: f64,
    dt: f64,
) -> Result<ContinuousRun> {
    ev.oracle().require_monotone("mcg_non_downclosed")?;
    if !(horizon >= 1.0 && horizon.is_finite()) {
        return Err(invalid(format!("horizon must be at least 1, got {horizon}")));
    }
    if !(dt > 0.0 && dt < 1.0) {
        return Err(invalid(format!("step must lie in (0,1), got {dt}")));
    }
    let steps = (horizon / dt - 1e-9).ceil() as usize;
    let horizon = steps as f64 * dt;
    let q0 = ev.oracle().queries();
    let fl = flow(ev, region, steps, dt, 1.0, 0, true, |y| y.iter().map(|v| 1.0 - v).collect())?;
    let n = ev.n();
    let m = (1.0 / dt - 1e-9).ceil() as usize;
    let mut lower = DenseVector::zeros(n);
    for (i, x) in fl.directions.iter().take(m).enumerate() {
        let w = if i + 1 < m { dt } else { 1.0 - dt * (m - 1) as f64 };
        for u in 0..n {
            lower[u] += w * x[u];
        }
    }
    let mut upper = DenseVector::zeros(n);
    for x in &fl.directions {
        for u in 0..n {
            upper[u] += dt * x[u];
        }
    }
    let out = fl.y.join(&lower)?;
    let diag = Diagnostics { lp_values: fl.lp_values, lower: Some(lower), upper: Some(upper), ..Diagnostics::default() };
    finish(ev, region, out, q0, dt, horizon, fl.checkpoints, diag)
}

/// `dy/dt = x(t)∘(1 − a⊕y)`, stepping with `δt`.
pub fn guided_mcg(
    ev: &MultilinearEvaluator,
    horizon: f64,
    dt: f64,
    guide: &DenseVector,
    region: &Region,
) -> Result<ContinuousRun> {
    guided_from(ev, horizon, dt, guide, region, 0)
}

pub(crate) fn guided_from(
    ev: &MultilinearEvaluator,
    horizon: f64,
    dt: f64,
    guide: &DenseVector,
    region: &Region,
    step_offset: u64,
) -> Result<ContinuousRun> {
    require_down_closed(region, "guided_mcg")?;
    if guide.len() != ev.n() {
        return Err(Error::DimensionMismatch { expected: ev.n(), got: guide.len() });
    }
    if !guide.in_unit_box() {
        return Err(invalid("guide must lie in [0,1]^N"));
    }
    let steps = steps_for(horizon, dt)?;
    let q0 = ev.oracle().queries();
    // 1 − a⊕y = (1 − a)(1 − y)
    let fl = flow(ev, region, steps, dt, 1.0, step_offset, false, |y| {
        y.iter().zip(guide.iter()).map(|(v, a)| (1.0 - a) * (1.0 - v)).collect()
    })?;
    let diag = Diagnostics { lp_values: fl.lp_values, ..Diagnostics::default() };
    finish(ev, region, fl.y, q0, dt, horizon, fl.checkpoints, diag)
}

/// `dy/dt = x(t)∘(1 − 2y)` for symmetric objectives. Every coordinate stays below 1/2.
pub fn more_mcg(ev: &MultilinearEvaluator, region: &Region, horizon: f64, dt: f64) -> Result<ContinuousRun> {
    ev.oracle().require_symmetric("more_mcg")?;
    require_down_closed(region, "more_mcg")?;
    if dt > 0.5 {
        return Err(invalid(format!("step must be at most 1/2, got {dt}")));
    }
    run(ev, region, region, horizon, dt, 1.0, |y| y.iter().map(|v| 1.0 - 2.0 * v).collect())
}

/// `dy/dt = (1/ℓ)·x(t)∘(1 − y)` with `x(t)` ranging over `{x : x/ℓ ∈ P}`.
pub fn mcg_multi_opt(
    ev: &MultilinearEvaluator,
    region: &Region,
    horizon: f64,
    dt: f64,
    ell: usize,
) -> Result<ContinuousRun> {
    if ell < 2 {
        return Err(invalid(format!("ℓ must be at least 2, got {ell}")));
    }
    require_down_closed(region, "mcg_multi_opt")?;
    let lp = region.scaled(ell)?;
    run(ev, region, &lp, horizon, dt, 1.0 / ell as f64, |y| y.iter().map(|v| 1.0 - v).collect())
}
