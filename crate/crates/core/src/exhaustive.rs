//! Exhaustive ground truth: optima, function-class checks, bicriteria frontiers.
//!
//! These bypass the oracle's memo and counter; they are test engines, not solvers.

use std::cmp::Ordering;

use crate::constraints::{Constraint, Matroid};
use crate::error::{Error, Result};
use crate::oracle::SetFunctionOracle;
use crate::set::ElementSet;
use crate::TOL;

pub const BRUTE_OPT_LIMIT: usize = 22;
pub const VERIFY_LIMIT: usize = 12;
pub const MATROID_VERIFY_LIMIT: usize = 10;
pub const FRONTIER_LIMIT: usize = 18;

/// A witness that a claimed property fails.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub sets: Vec<ElementSet>,
    pub element: Option<usize>,
    pub detail: String,
}

fn limit(n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::TooLarge { n, max })
    } else {
        Ok(())
    }
}

fn table(f: &SetFunctionOracle) -> Vec<f64> {
    let func = f.function();
    (0..1u64 << f.n()).map(|b| func.eval(ElementSet::from_bits(b))).collect()
}

/// Best feasible set; ties go to the lexicographically smallest set.
///
/// Subsets are visited in Gray-code order.
pub fn brute_opt(f: &SetFunctionOracle, c: &Constraint) -> Result<(ElementSet, f64)> {
    let n = f.n();
    limit(n, BRUTE_OPT_LIMIT)?;
    if c.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: c.n() });
    }
    let func = f.function();
    let mut best: Option<(ElementSet, f64)> = None;
    for i in 0..1u64 << n {
        let s = ElementSet::from_bits(i ^ (i >> 1));
        if !c.is_feasible(s) {
            continue;
        }
        let v = func.eval(s);
        let better = match best {
            None => true,
            Some((bs, bv)) => v > bv || (v == bv && s.lex_cmp(bs) == Ordering::Less),
        };
        if better {
            best = Some((s, v));
        }
    }
    best.ok_or_else(|| Error::Precondition("no feasible set".into()))
}

/// Checks `f(S+u) - f(S) ≥ f(S+v+u) - f(S+v)` for all `S`, `u`, `v`.
pub fn verify_submodular(f: &SetFunctionOracle) -> Result<Option<Counterexample>> {
    let n = f.n();
    limit(n, VERIFY_LIMIT)?;
    let t = table(f);
    for s in 0..1usize << n {
        for u in (0..n).filter(|&u| s >> u & 1 == 0) {
            let base = t[s | 1 << u] - t[s];
            for v in (0..n).filter(|&v| v != u && s >> v & 1 == 0) {
                let sv = s | 1 << v;
                let later = t[sv | 1 << u] - t[sv];
                if later > base + TOL {
                    return Ok(Some(Counterexample {
                        sets: vec![ElementSet::from_bits(s as u64), ElementSet::from_bits(sv as u64)],
                        element: Some(u),
                        detail: format!("marginal grows from {base} to {later}"),
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn verify_monotone(f: &SetFunctionOracle) -> Result<Option<Counterexample>> {
    let n = f.n();
    limit(n, VERIFY_LIMIT)?;
    let t = table(f);
    for s in 0..1usize << n {
        for u in (0..n).filter(|&u| s >> u & 1 == 0) {
            if t[s | 1 << u] < t[s] - TOL {
                return Ok(Some(Counterexample {
                    sets: vec![ElementSet::from_bits(s as u64)],
                    element: Some(u),
                    detail: format!("adding the element drops the value by {}", t[s] - t[s | 1 << u]),
                }));
            }
        }
    }
    Ok(None)
}

pub fn verify_symmetric(f: &SetFunctionOracle) -> Result<Option<Counterexample>> {
    let n = f.n();
    limit(n, VERIFY_LIMIT)?;
    let t = table(f);
    let full = (1usize << n) - 1;
    for s in 0..1usize << n {
        if (t[s] - t[full ^ s]).abs() > TOL {
            return Ok(Some(Counterexample {
                sets: vec![ElementSet::from_bits(s as u64)],
                element: None,
                detail: format!("f(S) = {} but f(N∖S) = {}", t[s], t[full ^ s]),
            }));
        }
    }
    Ok(None)
}

pub fn verify_nonnegative(f: &SetFunctionOracle) -> Result<Option<Counterexample>> {
    limit(f.n(), VERIFY_LIMIT)?;
    Ok(table(f).iter().enumerate().find(|(_, &v)| v < 0.0).map(|(s, &v)| Counterexample {
        sets: vec![ElementSet::from_bits(s as u64)],
        element: None,
        detail: format!("negative value {v}"),
    }))
}

/// Checks the three matroid axioms exhaustively.
pub fn verify_matroid(m: &Matroid) -> Result<Option<Counterexample>> {
    let n = m.n();
    limit(n, MATROID_VERIFY_LIMIT)?;
    let indep: Vec<bool> = (0..1u64 << n).map(|b| m.is_independent(ElementSet::from_bits(b))).collect();
    let fail = |sets: Vec<ElementSet>, element, detail: &str| {
        Ok(Some(Counterexample { sets, element, detail: detail.to_string() }))
    };
    if !indep[0] {
        return fail(vec![ElementSet::EMPTY], None, "empty set is dependent");
    }
    for a in 0..1u64 << n {
        if !indep[a as usize] {
            continue;
        }
        let sa = ElementSet::from_bits(a);
        for u in sa {
            if !indep[sa.without(u).bits() as usize] {
                return fail(vec![sa], Some(u), "not down-closed");
            }
        }
        for b in 0..1u64 << n {
            let sb = ElementSet::from_bits(b);
            if !indep[b as usize] || sb.len() <= sa.len() {
                continue;
            }
            if !sb.difference(sa).iter().any(|u| indep[sa.with(u).bits() as usize]) {
                return fail(vec![sa, sb], None, "exchange axiom fails");
            }
        }
    }
    Ok(None)
}

/// For each `β`, the best value over sets with infeasibility at most `β`.
pub fn brute_bicriteria_frontier(
    f: &SetFunctionOracle,
    c: &Constraint,
    betas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let n = f.n();
    limit(n, FRONTIER_LIMIT)?;
    let func = f.function();
    let mut scored = Vec::with_capacity(1 << n);
    for b in 0..1u64 << n {
        let s = ElementSet::from_bits(b);
        match c.infeasibility_ratio(s) {
            Ok(r) => scored.push((r, func.eval(s))),
            Err(Error::Unbounded) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(betas
        .iter()
        .map(|&beta| {
            let best = scored
                .iter()
                .filter(|(r, _)| *r <= beta + TOL)
                .map(|&(_, v)| v)
                .fold(f64::NEG_INFINITY, f64::max);
            (beta, best)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{arcs_symmetry_gap, Modular, UndirectedCut};
    use crate::oracle::FnSetFunction;

    fn modular(w: &[f64]) -> SetFunctionOracle {
        SetFunctionOracle::new(Modular { weights: w.to_vec() }).unwrap()
    }

    #[test]
    fn brute_opt_examples() {
        let f = modular(&[3.0, 2.0, 1.0]);
        let (s, v) = brute_opt(&f, &Constraint::Cardinality { n: 3, budget: 2 }).unwrap();
        assert_eq!((s.to_vec(), v), (vec![0, 1], 5.0));
        let arc = SetFunctionOracle::new(arcs_symmetry_gap(1)).unwrap();
        let (s, v) = brute_opt(&arc, &Constraint::Unconstrained { n: 2 }).unwrap();
        assert_eq!((s.to_vec(), v), (vec![0], 1.0));
        let zero = modular(&[0.0; 4]);
        let (s, v) = brute_opt(&zero, &Constraint::Unconstrained { n: 4 }).unwrap();
        assert_eq!((s, v), (ElementSet::EMPTY, 0.0));
        let big = modular(&[1.0; 23]);
        assert!(brute_opt(&big, &Constraint::Unconstrained { n: 23 }).is_err());
    }

    #[test]
    fn verify_examples() {
        assert_eq!(verify_submodular(&modular(&[1.0; 5])).unwrap(), None);
        let sq = SetFunctionOracle::new(FnSetFunction::new(3, |s| (s.len() * s.len()) as f64)).unwrap();
        let w = verify_submodular(&sq).unwrap().expect("|S|² is supermodular");
        assert_eq!(w.sets[0], ElementSet::EMPTY);
        let cut = SetFunctionOracle::new(UndirectedCut { n: 4, edges: vec![(0, 1, 1.0), (1, 2, 2.0), (3, 0, 0.5)] })
            .unwrap();
        assert_eq!(verify_symmetric(&cut).unwrap(), None);
        assert!(verify_monotone(&cut).unwrap().is_some());
    }

    #[test]
    fn builtin_matroids_satisfy_axioms() {
        let ms = [
            Matroid::uniform(5, 2),
            Matroid::partition(vec![0, 0, 1, 1, 1], vec![1, 2]).unwrap(),
            Matroid::graphic(4, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 0)]).unwrap(),
            Matroid::Padded { inner: Box::new(Matroid::partition(vec![0, 1, 1], vec![1, 1]).unwrap()), extra: 3 },
        ];
        for m in ms {
            assert_eq!(verify_matroid(&m).unwrap(), None, "{m:?}");
        }
        let bad = Matroid::from_oracle(3, |s| s.len() != 1 || s.contains(0));
        assert!(verify_matroid(&bad).unwrap().is_some());
    }

    #[test]
    fn frontier_examples() {
        let f = modular(&[3.0, 2.0, 1.0, 1.0]);
        let c = Constraint::Cardinality { n: 4, budget: 2 };
        let fr = brute_bicriteria_frontier(&f, &c, &[0.5, 1.0, 1.5, 2.0]).unwrap();
        assert_eq!(fr[1].1, brute_opt(&f, &c).unwrap().1);
        assert_eq!(fr[3].1, 7.0);
        assert!(fr.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}
