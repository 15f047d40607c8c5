use super::greedy::outcome;
use super::{check_eps, DiscreteRun, GreedyTrace, Pick};
use crate::constraints::{Constraint, KnapsackConstraint};
use crate::error::{invalid, Error, Result};
use crate::oracle::SetFunctionOracle;
use crate::set::ElementSet;

/// Density greedy for symmetric objectives under a knapsack constraint.
///
/// Runs while the cost stays below `(B/2) ln(1/(2ε))`. Before every pick,
/// elements whose removal gains more than `δm/n` are dropped, where `m` is the
/// best singleton (or empty) value. Zero-cost elements with a positive
/// marginal go first. The run stops early once no element has a positive marginal.
pub fn density_greedy_symmetric(
    f: &SetFunctionOracle,
    k: &KnapsackConstraint,
    eps: f64,
    delta: f64,
) -> Result<DiscreteRun> {
    f.require_symmetric("density_greedy_symmetric")?;
    check_eps(eps, 1.0)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(invalid(format!("δ must be positive, got {delta}")));
    }
    let n = f.n();
    if k.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: k.n() });
    }
    let q0 = f.queries();
    let p = k.prices();
    let m = f.ground().full().iter().map(|u| f.value(ElementSet::singleton(u))).fold(f.value(ElementSet::EMPTY), f64::max);
    let drop_below = -delta * m / n.max(1) as f64;
    let threshold = 0.5 * k.budget() * (1.0 / (2.0 * eps)).ln();
    let mut trace = GreedyTrace::default();
    let mut s = ElementSet::EMPTY;
    while k.cost(s) < threshold {
        loop {
            let fs = f.value(s);
            let Some(u) = s.iter().find(|&u| fs - f.value(s.without(u)) < drop_below) else { break };
            s.remove(u);
            trace.removals += 1;
        }
        let fs = f.value(s);
        let rest = f.ground().full().difference(s);
        let gains: Vec<(usize, f64)> = rest.iter().map(|u| (u, f.value(s.with(u)) - fs)).collect();
        if let Some(&(u, g)) = gains.iter().find(|&&(u, g)| p[u] == 0.0 && g > 0.0) {
            s.insert(u);
            trace.picks.push(Pick { element: u, marginal: g, size: s.len(), cost: k.cost(s) });
            continue;
        }
        if !gains.iter().any(|&(_, g)| g > 0.0) {
            trace.early_return = true;
            break;
        }
        let mut best: Option<(usize, f64, f64)> = None;
        for &(u, g) in gains.iter().filter(|&&(u, _)| p[u] > 0.0) {
            let d = g / p[u];
            if best.is_none_or(|(_, bd, _)| d > bd) {
                best = Some((u, d, g));
            }
        }
        let Some((u, _, g)) = best else { break };
        s.insert(u);
        trace.picks.push(Pick { element: u, marginal: g, size: s.len(), cost: k.cost(s) });
    }
    let c = Constraint::Knapsack(k.clone());
    Ok(DiscreteRun { outcome: outcome(f, s, &c, q0, 0), trace })
}
