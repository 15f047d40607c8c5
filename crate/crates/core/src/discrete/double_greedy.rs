use std::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::SetFunctionOracle;
use crate::rng::substream;
use crate::set::ElementSet;

/// Largest candidate pool searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DoubleGreedyMode {
    Randomized,
    Exhaustive,
    /// Exhaustive when the candidate pool has at most [`EXHAUSTIVE_LIMIT`] elements.
    #[default]
    Auto,
}

/// Randomized double greedy of `value` over the elements of `pool`, in index order.
pub(crate) fn double_greedy_over<R: Rng>(
    value: impl Fn(ElementSet) -> f64,
    pool: ElementSet,
    rng: &mut R,
) -> ElementSet {
    let mut x = ElementSet::EMPTY;
    let mut y = pool;
    let (mut fx, mut fy) = (value(x), value(y));
    for u in pool {
        let (xu, yu) = (x.with(u), y.without(u));
        let (fxu, fyu) = (value(xu), value(yu));
        let a = (fxu - fx).max(0.0);
        let b = (fyu - fy).max(0.0);
        let p = if a + b == 0.0 { 1.0 } else { a / (a + b) };
        if rng.gen::<f64>() < p {
            x = xu;
            fx = fxu;
        } else {
            y = yu;
            fy = fyu;
        }
    }
    x
}

/// Best subset of `pool`; ties go to the lexicographically smallest set.
pub(crate) fn exhaustive_over(value: impl Fn(ElementSet) -> f64, pool: ElementSet) -> ElementSet {
    let mut best = (ElementSet::EMPTY, value(ElementSet::EMPTY));
    for s in pool.subsets().skip(1) {
        let v = value(s);
        if v > best.1 || (v == best.1 && s.lex_cmp(best.0) == Ordering::Less) {
            best = (s, v);
        }
    }
    best.0
}

/// Randomized double greedy over the whole ground set.
///
/// In expectation the value is at least half the maximum plus a quarter of `f(∅)`.
pub fn double_greedy_unconstrained(f: &SetFunctionOracle, seed: u64) -> (ElementSet, f64) {
    let mut rng = substream(seed, "double_greedy", 0, 0);
    let s = double_greedy_over(|s| f.value(s), f.ground().full(), &mut rng);
    (s, f.value(s))
}

/// Exact maximizer for ground sets of at most [`EXHAUSTIVE_LIMIT`] elements.
pub fn double_greedy_exhaustive(f: &SetFunctionOracle) -> Result<(ElementSet, f64)> {
    if f.n() > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { n: f.n(), max: EXHAUSTIVE_LIMIT });
    }
    let func = f.function();
    let s = exhaustive_over(|s| func.eval(s), f.ground().full());
    Ok((s, f.value(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{arcs_symmetry_gap, Modular};
    use crate::oracle::FnSetFunction;

    #[test]
    fn arc_mean_is_at_least_half() {
        let f = SetFunctionOracle::new(arcs_symmetry_gap(1)).unwrap();
        let vals: Vec<f64> = (0..200).map(|seed| double_greedy_unconstrained(&f, seed).1).collect();
        let mean = vals.iter().sum::<f64>() / 200.0;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 199.0).sqrt();
        assert!(mean >= 0.5 - 3.0 * sd / 200f64.sqrt(), "mean {mean}");
        assert_eq!(double_greedy_exhaustive(&f).unwrap(), (ElementSet::singleton(0), 1.0));
    }

    #[test]
    fn modular_takes_everything() {
        let f = SetFunctionOracle::new(Modular { weights: vec![1.0, 0.5, 2.0] }).unwrap();
        for seed in 0..20 {
            assert_eq!(double_greedy_unconstrained(&f, seed).0, ElementSet::full(3));
        }
        let z = SetFunctionOracle::new(FnSetFunction::new(3, |_| 0.0)).unwrap();
        assert_eq!(double_greedy_unconstrained(&z, 1).1, 0.0);
    }
}
