use super::{check_eps, DiscreteRun, GreedyTrace, Pick};
use crate::constraints::{Constraint, KnapsackConstraint, Matroid};
use crate::error::{Error, Result};
use crate::instance::{BicriteriaOutcome, Solution};
use crate::oracle::SetFunctionOracle;
use crate::set::ElementSet;

/// Density greedy over `allowed` until the cost reaches `threshold`.
///
/// Returns `allowed` outright when it costs at most `threshold`.
pub(crate) fn density_greedy_core(
    f: &SetFunctionOracle,
    prices: &[f64],
    allowed: ElementSet,
    threshold: f64,
    trace: &mut GreedyTrace,
) -> ElementSet {
    let total: f64 = allowed.iter().map(|u| prices[u]).sum();
    if total <= threshold {
        return allowed;
    }
    let mut s: ElementSet = allowed.iter().filter(|&u| prices[u] == 0.0).collect();
    let mut cost = 0.0;
    let mut fs = f.value(s);
    while cost < threshold {
        let mut best: Option<(usize, f64, f64)> = None;
        for u in allowed.difference(s) {
            let m = f.value(s.with(u)) - fs;
            let d = m / prices[u];
            if best.is_none_or(|(_, bd, _)| d > bd) {
                best = Some((u, d, m));
            }
        }
        let Some((u, _, m)) = best else { break };
        s.insert(u);
        cost += prices[u];
        fs = f.value(s);
        trace.picks.push(Pick { element: u, marginal: m, size: s.len(), cost });
    }
    s
}

/// `rounds` greedy passes, each building one independent set disjoint from
/// everything picked before.
pub(crate) fn matroid_greedy_core(
    f: &SetFunctionOracle,
    m: &Matroid,
    allowed: ElementSet,
    rounds: usize,
    trace: &mut GreedyTrace,
) -> ElementSet {
    let mut s = ElementSet::EMPTY;
    for _ in 0..rounds {
        let mut t = ElementSet::EMPTY;
        loop {
            let base = s.union(t);
            let fb = f.value(base);
            let mut best: Option<(usize, f64)> = None;
            for u in allowed.difference(base) {
                if !m.is_independent(t.with(u)) {
                    continue;
                }
                let g = f.value(base.with(u)) - fb;
                if best.is_none_or(|(_, bg)| g > bg) {
                    best = Some((u, g));
                }
            }
            let Some((u, g)) = best else { break };
            t.insert(u);
            trace.picks.push(Pick { element: u, marginal: g, size: s.len() + t.len(), cost: (s.len() + t.len()) as f64 });
        }
        trace.layers.push(t);
        s = s.union(t);
    }
    s
}

pub(crate) fn outcome(
    f: &SetFunctionOracle,
    s: ElementSet,
    c: &Constraint,
    queries_before: u64,
    seed: u64,
) -> BicriteriaOutcome {
    BicriteriaOutcome {
        solution: Solution::Set(s),
        value: f.value(s),
        infeasibility: c.infeasibility_ratio(s).ok(),
        queries: f.queries() - queries_before,
        seed,
    }
}

fn check_size(f: &SetFunctionOracle, n: usize) -> Result<()> {
    if f.n() != n {
        return Err(Error::DimensionMismatch { expected: f.n(), got: n });
    }
    Ok(())
}

/// Density greedy for monotone objectives under a knapsack constraint.
///
/// Keeps adding the best value-per-price element until the cost reaches
/// `B ln(1/ε)`. The result costs less than `(1 + ln(1/ε))B`.
pub fn density_greedy_monotone(f: &SetFunctionOracle, k: &KnapsackConstraint, eps: f64) -> Result<DiscreteRun> {
    f.require_monotone("density_greedy_monotone")?;
    check_eps(eps, 1.0)?;
    check_size(f, k.n())?;
    let q0 = f.queries();
    let mut trace = GreedyTrace::default();
    let threshold = k.budget() * (1.0 / eps).ln();
    let s = density_greedy_core(f, k.prices(), f.ground().full(), threshold, &mut trace);
    let c = Constraint::Knapsack(k.clone());
    Ok(DiscreteRun { outcome: outcome(f, s, &c, q0, 0), trace })
}

/// `⌈log₂(1/ε)⌉` rounds of matroid greedy; the output is the union of the rounds.
pub fn iterative_matroid_greedy(f: &SetFunctionOracle, m: &Matroid, eps: f64) -> Result<DiscreteRun> {
    f.require_monotone("iterative_matroid_greedy")?;
    check_eps(eps, 1.0)?;
    check_size(f, m.n())?;
    let q0 = f.queries();
    let rounds = (1.0 / eps).log2().ceil().max(1.0) as usize;
    let mut trace = GreedyTrace::default();
    let s = matroid_greedy_core(f, m, f.ground().full(), rounds, &mut trace);
    let c = Constraint::Matroid(m.clone());
    Ok(DiscreteRun { outcome: outcome(f, s, &c, q0, 0), trace })
}
