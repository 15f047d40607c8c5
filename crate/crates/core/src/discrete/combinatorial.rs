//! Two-phase combinatorial algorithms for non-monotone objectives.
//!
//! Phase one builds `ℓ = ⌈1/(2ε)⌉` disjoint greedy sets `A_1..A_ℓ` over a
//! ground set padded with valueless dummies. Phase two completes each `A_i`
//! with the best subset `D_i` of `A = ∪ A_j` it can find and keeps the best
//! `A_i ∪ D_i`, dummies stripped.

use super::double_greedy::{double_greedy_over, exhaustive_over};
use super::greedy::{density_greedy_core, matroid_greedy_core, outcome};
use super::{check_eps, DiscreteRun, DoubleGreedyMode, GreedyTrace, Pick, Round, EXHAUSTIVE_LIMIT};
use crate::constraints::{Constraint, KnapsackConstraint, Matroid};
use crate::error::{invalid, precondition, Error, Result};
use crate::instance::{pad_oracle, strip};
use crate::oracle::SetFunctionOracle;
use crate::rng::substream;
use crate::set::ElementSet;

fn ell(eps: f64) -> usize {
    (1.0 / (2.0 * eps)).ceil() as usize
}

fn complete(
    g: &SetFunctionOracle,
    parts: &[ElementSet],
    original_n: usize,
    seed: u64,
    label: &str,
    mode: DoubleGreedyMode,
    trace: &mut GreedyTrace,
) -> Result<ElementSet> {
    let all: ElementSet = parts.iter().fold(ElementSet::EMPTY, |a, &p| a.union(p));
    let real = ElementSet::full(original_n);
    let func = g.function();
    let mut best: Option<(ElementSet, f64)> = None;
    for (i, &a_i) in parts.iter().enumerate() {
        // Dummies and A_i itself never change g_i, so the exact search skips them.
        let pool = all.difference(a_i).intersection(real);
        let exhaustive = match mode {
            DoubleGreedyMode::Exhaustive if pool.len() > EXHAUSTIVE_LIMIT => {
                return Err(Error::TooLarge { n: pool.len(), max: EXHAUSTIVE_LIMIT })
            }
            DoubleGreedyMode::Exhaustive => true,
            DoubleGreedyMode::Randomized => false,
            DoubleGreedyMode::Auto => pool.len() <= EXHAUSTIVE_LIMIT,
        };
        let d = if exhaustive {
            g.add_queries(1 << pool.len());
            exhaustive_over(|d| func.eval(a_i.union(d)), pool)
        } else {
            let mut rng = substream(seed, label, i as u64, 0);
            double_greedy_over(|d| g.value(a_i.union(d)), all, &mut rng)
        };
        let cand = a_i.union(d);
        let value = g.value(cand);
        trace.rounds.push(Round { a: a_i, d, value_a: g.value(a_i), value });
        if best.is_none_or(|(_, bv)| value > bv) {
            best = Some((cand, value));
        }
    }
    Ok(strip(best.map_or(ElementSet::EMPTY, |b| b.0), original_n))
}

/// Cardinality-constrained version with `2ℓB` dummies and greedy blocks of `2B` picks.
///
/// The output has at most `2ℓB` elements.
pub fn warmup_cardinality(
    f: &SetFunctionOracle,
    budget: usize,
    eps: f64,
    seed: u64,
    mode: DoubleGreedyMode,
) -> Result<DiscreteRun> {
    check_eps(eps, 0.5)?;
    let n = f.n();
    let l = ell(eps);
    let g = pad_oracle(f, 2 * l * budget)?;
    let q0 = f.queries();
    let mut trace = GreedyTrace::default();
    let mut used = ElementSet::EMPTY;
    let mut parts = Vec::with_capacity(l);
    for _ in 0..l {
        let mut a_i = ElementSet::EMPTY;
        for _ in 0..2 * budget {
            let fa = g.value(a_i);
            let mut best: Option<(usize, f64)> = None;
            for u in g.ground().full().difference(used) {
                let m = g.value(a_i.with(u)) - fa;
                if best.is_none_or(|(_, bm)| m > bm) {
                    best = Some((u, m));
                }
            }
            let Some((u, m)) = best else { break };
            a_i.insert(u);
            used.insert(u);
            trace.picks.push(Pick { element: u, marginal: m, size: a_i.len(), cost: a_i.len() as f64 });
        }
        parts.push(a_i);
    }
    let s = complete(&g, &parts, n, seed, "warmup", mode, &mut trace)?;
    let c = Constraint::Cardinality { n, budget };
    let mut out = outcome(f, s, &c, q0, seed);
    out.queries += g.queries();
    Ok(DiscreteRun { outcome: out, trace })
}

/// Knapsack or matroid version.
///
/// Knapsack mode pads `2ℓ` dummies priced at `B` and builds each `A_i` by
/// density greedy with threshold `2B`. Matroid mode pads `2ℓk` dummies, `k`
/// the rank, and builds each `A_i` from two greedy independent sets.
/// Cardinality constraints run in knapsack mode with unit prices.
pub fn combinatorial_general(
    f: &SetFunctionOracle,
    c: &Constraint,
    eps: f64,
    seed: u64,
    mode: DoubleGreedyMode,
) -> Result<DiscreteRun> {
    check_eps(eps, 0.5)?;
    let n = f.n();
    if c.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: c.n() });
    }
    match c {
        Constraint::Knapsack(k) => knapsack_mode(f, k, c, eps, seed, mode),
        Constraint::Cardinality { budget, .. } => {
            knapsack_mode(f, &KnapsackConstraint::cardinality(n, *budget), c, eps, seed, mode)
        }
        Constraint::Matroid(m) => matroid_mode(f, m, c, eps, seed, mode),
        _ => Err(invalid("combinatorial_general handles knapsack, cardinality and matroid constraints")),
    }
}

fn knapsack_mode(
    f: &SetFunctionOracle,
    k: &KnapsackConstraint,
    c: &Constraint,
    eps: f64,
    seed: u64,
    mode: DoubleGreedyMode,
) -> Result<DiscreteRun> {
    let n = f.n();
    if k.prices().iter().any(|&p| p <= 0.0) || k.budget() <= 0.0 {
        return Err(precondition("knapsack mode needs strictly positive prices and budget"));
    }
    if k.prices().iter().any(|&p| p > k.budget()) {
        return Err(precondition("every price must fit in the budget"));
    }
    let l = ell(eps);
    let padded = k.with_dummies(2 * l);
    let g = pad_oracle(f, 2 * l)?;
    let q0 = f.queries();
    let mut trace = GreedyTrace::default();
    let mut used = ElementSet::EMPTY;
    let mut parts = Vec::with_capacity(l);
    for _ in 0..l {
        let allowed = g.ground().full().difference(used);
        let a_i = density_greedy_core(&g, padded.prices(), allowed, 2.0 * k.budget(), &mut trace);
        used = used.union(a_i);
        parts.push(a_i);
    }
    let s = complete(&g, &parts, n, seed, "combinatorial_knapsack", mode, &mut trace)?;
    let mut out = outcome(f, s, c, q0, seed);
    out.queries += g.queries();
    Ok(DiscreteRun { outcome: out, trace })
}

fn matroid_mode(
    f: &SetFunctionOracle,
    m: &Matroid,
    c: &Constraint,
    eps: f64,
    seed: u64,
    mode: DoubleGreedyMode,
) -> Result<DiscreteRun> {
    let n = f.n();
    let l = ell(eps);
    let extra = 2 * l * m.rank();
    let padded = Matroid::Padded { inner: Box::new(m.clone()), extra };
    let g = pad_oracle(f, extra)?;
    let q0 = f.queries();
    let mut trace = GreedyTrace::default();
    let mut used = ElementSet::EMPTY;
    let mut parts = Vec::with_capacity(l);
    for _ in 0..l {
        let allowed = g.ground().full().difference(used);
        let a_i = matroid_greedy_core(&g, &padded, allowed, 2, &mut trace);
        used = used.union(a_i);
        parts.push(a_i);
    }
    let s = complete(&g, &parts, n, seed, "combinatorial_matroid", mode, &mut trace)?;
    let mut out = outcome(f, s, c, q0, seed);
    out.queries += g.queries();
    Ok(DiscreteRun { outcome: out, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exhaustive::brute_opt;
    use crate::functions::{random_directed_cut, Modular};
    use crate::oracle::FnSetFunction;

    fn modular(w: &[f64]) -> SetFunctionOracle {
        SetFunctionOracle::new(Modular { weights: w.to_vec() }).unwrap()
    }

    #[test]
    fn warmup_modular() {
        let f = modular(&[5.0, 4.0, 3.0, 2.0]);
        for mode in [DoubleGreedyMode::Auto, DoubleGreedyMode::Randomized] {
            let run = warmup_cardinality(&f, 1, 0.25, 7, mode).unwrap();
            assert!(run.outcome.value >= 0.25 * 5.0);
            let s = run.outcome.solution.as_set().unwrap();
            assert!(s.len() <= 2 * 2);
        }
    }

    #[test]
    fn blocks_are_disjoint() {
        let (f, _) = random_directed_cut(8, 0.4, 5).instantiate(0).unwrap();
        let run = warmup_cardinality(&f, 2, 0.125, 3, DoubleGreedyMode::Auto).unwrap();
        let parts: Vec<ElementSet> = run.trace.rounds.iter().map(|r| r.a).collect();
        assert_eq!(parts.len(), 4);
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let union = parts.iter().fold(ElementSet::EMPTY, |a, &p| a.union(p));
        assert_eq!(union.len(), total);
        for r in &run.trace.rounds {
            let best = r.a.union(r.d);
            assert!(r.value >= 0.25 * r.value_a - 1e-12);
            assert!(best.is_subset(union));
        }
        let (_, opt) = brute_opt(&f, &Constraint::Cardinality { n: 8, budget: 2 }).unwrap();
        assert!(run.outcome.value >= (0.5 - 0.125) * opt);
    }

    #[test]
    fn general_knapsack_and_matroid() {
        let f = modular(&[5.0, 4.0, 3.0, 2.0]);
        let k = Constraint::Knapsack(KnapsackConstraint::cardinality(4, 1));
        let run = combinatorial_general(&f, &k, 0.25, 1, DoubleGreedyMode::Auto).unwrap();
        assert!(run.outcome.value >= 0.25 * 5.0);
        assert!(run.outcome.infeasibility.unwrap() <= 3.0 * 2.0);

        let m = Constraint::Matroid(Matroid::uniform(4, 1));
        let run = combinatorial_general(&f, &m, 0.25, 1, DoubleGreedyMode::Auto).unwrap();
        assert!(run.outcome.infeasibility.unwrap() <= 4.0);
        assert!(run.outcome.value >= 0.25 * 5.0);
    }

    #[test]
    fn zero_function_and_bad_input() {
        let z = SetFunctionOracle::new(FnSetFunction::new(4, |_| 0.0)).unwrap();
        let run = warmup_cardinality(&z, 1, 0.25, 0, DoubleGreedyMode::Auto).unwrap();
        assert_eq!(run.outcome.value, 0.0);
        let c = Constraint::Matroid(Matroid::uniform(4, 2));
        assert_eq!(combinatorial_general(&z, &c, 0.25, 0, DoubleGreedyMode::Auto).unwrap().outcome.value, 0.0);
        assert!(warmup_cardinality(&z, 1, 0.5, 0, DoubleGreedyMode::Auto).is_err());
        let k = Constraint::Knapsack(KnapsackConstraint::new(vec![0.0, 1.0, 1.0, 1.0], 1.0).unwrap());
        assert!(matches!(
            combinatorial_general(&z, &k, 0.25, 0, DoubleGreedyMode::Auto),
            Err(Error::Precondition(_))
        ));
    }
}
