//! Convex regions of `[0,1]^N` with linear-maximization oracles.

use std::fmt;
use std::sync::Arc;

use super::{KnapsackConstraint, Matroid};
use crate::error::{invalid, Error, Result};
use crate::set::ElementSet;
use crate::vector::{DenseVector, BOX_TOL};

/// Largest support for which generic matroid membership is checked by enumeration.
pub const MEMBERSHIP_ENUM_LIMIT: usize = 20;

/// A user-supplied region.
pub trait LinearOracle: Send + Sync {
    fn n(&self) -> usize;
    fn maximize(&self, w: &[f64]) -> DenseVector;
    fn down_closed(&self) -> bool;
    fn contains(&self, _x: &[f64], _tol: f64) -> Option<bool> {
        None
    }
}

#[derive(Clone)]
pub enum Region {
    Box { n: usize },
    /// `Σ x_u ≤ budget`.
    Cardinality { n: usize, budget: f64 },
    Knapsack(KnapsackConstraint),
    Matroid(Matroid),
    /// Convex hull of the bases. Not down-closed.
    MatroidBase(Matroid),
    /// Polytope of the `k`-fold union, i.e. `{x ∈ [0,1]^N : x/k ∈ P(M)}`.
    MatroidUnion { matroid: Matroid, k: usize },
    Custom(Arc<dyn LinearOracle>),
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Box { n } => write!(f, "Box({n})"),
            Region::Cardinality { n, budget } => write!(f, "Cardinality(n={n}, B={budget})"),
            Region::Knapsack(k) => write!(f, "Knapsack({k:?})"),
            Region::Matroid(m) => write!(f, "MatroidPolytope({m:?})"),
            Region::MatroidBase(m) => write!(f, "BasePolytope({m:?})"),
            Region::MatroidUnion { matroid, k } => write!(f, "UnionPolytope({matroid:?}, k={k})"),
            Region::Custom(o) => write!(f, "Custom(n={})", o.n()),
        }
    }
}

/// Indices sorted by decreasing key, ties toward the lowest index.
fn by_decreasing(keys: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]));
    idx
}

fn fill_fractional(order: &[usize], cost: impl Fn(usize) -> f64, budget: f64, n: usize) -> DenseVector {
    let mut x = DenseVector::zeros(n);
    let mut left = budget;
    for &u in order {
        let c = cost(u);
        if c <= 0.0 {
            x[u] = 1.0;
            continue;
        }
        if left <= 0.0 {
            continue;
        }
        let take = (left / c).min(1.0);
        x[u] = take;
        left -= take * c;
    }
    x
}

impl Region {
    pub fn n(&self) -> usize {
        match self {
            Region::Box { n } | Region::Cardinality { n, .. } => *n,
            Region::Knapsack(k) => k.n(),
            Region::Matroid(m) | Region::MatroidBase(m) | Region::MatroidUnion { matroid: m, .. } => m.n(),
            Region::Custom(o) => o.n(),
        }
    }

    pub fn is_down_closed(&self) -> bool {
        match self {
            Region::MatroidBase(_) => false,
            Region::Custom(o) => o.down_closed(),
            _ => true,
        }
    }

    pub fn has_membership(&self) -> bool {
        match self {
            Region::Custom(o) => o.contains(&vec![0.0; o.n()], 0.0).is_some(),
            _ => true,
        }
    }

    /// A maximizer of `⟨w, x⟩` over the region. Ties go to the lowest index.
    pub fn lp_maximize(&self, w: &[f64]) -> Result<DenseVector> {
        let n = self.n();
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.len() });
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(invalid("LP weights must be finite"));
        }
        let positive: Vec<usize> = by_decreasing(w).into_iter().filter(|&u| w[u] > 0.0).collect();
        let x = match self {
            Region::Box { .. } => {
                let mut x = DenseVector::zeros(n);
                for &u in &positive {
                    x[u] = 1.0;
                }
                x
            }
            Region::Cardinality { budget, .. } => fill_fractional(&positive, |_| 1.0, *budget, n),
            Region::Knapsack(k) => {
                let p = k.prices();
                let ratio: Vec<f64> = (0..n)
                    .map(|u| if p[u] > 0.0 { w[u] / p[u] } else { f64::INFINITY })
                    .collect();
                let order: Vec<usize> = by_decreasing(&ratio).into_iter().filter(|&u| w[u] > 0.0).collect();
                fill_fractional(&order, |u| p[u], k.budget(), n)
            }
            Region::Matroid(m) => greedy_vertex(n, &positive, |s| m.is_independent(s)),
            Region::MatroidUnion { matroid, k } => {
                greedy_vertex(n, &positive, |s| matroid.union_independent(*k, s))
            }
            Region::MatroidBase(m) => greedy_vertex(n, &by_decreasing(w), |s| m.is_independent(s)),
            Region::Custom(o) => {
                let x = o.maximize(w);
                if x.len() != n || !x.in_unit_box() {
                    return Err(invalid("custom LP oracle returned a point outside [0,1]^N"));
                }
                x
            }
        };
        Ok(x)
    }

    /// Membership with absolute tolerance `tol`; `None` when no check exists.
    pub fn contains(&self, x: &[f64], tol: f64) -> Option<bool> {
        if x.len() != self.n() {
            return Some(false);
        }
        if let Region::Custom(o) = self {
            return o.contains(x, tol);
        }
        if x.iter().any(|&v| v < -tol || v > 1.0 + tol) {
            return Some(false);
        }
        let sum: f64 = x.iter().sum();
        match self {
            Region::Box { .. } => Some(true),
            Region::Cardinality { budget, .. } => Some(sum <= budget + tol),
            Region::Knapsack(k) => Some(k.dot(x) <= k.budget() + tol),
            Region::Matroid(m) => matroid_polytope_contains(m, 1, x, tol),
            Region::MatroidUnion { matroid, k } => matroid_polytope_contains(matroid, *k, x, tol),
            Region::MatroidBase(m) => {
                let inside = matroid_polytope_contains(m, 1, x, tol)?;
                Some(inside && (sum - m.rank() as f64).abs() <= tol)
            }
            Region::Custom(_) => unreachable!(),
        }
    }

    /// The region `{x ∈ [0,1]^N : x/k ∈ self}`.
    pub fn scaled(&self, k: usize) -> Result<Region> {
        if k == 0 {
            return Err(invalid("scale must be positive"));
        }
        let kf = k as f64;
        Ok(match self {
            Region::Box { n } => Region::Box { n: *n },
            Region::Cardinality { n, budget } => Region::Cardinality { n: *n, budget: budget * kf },
            Region::Knapsack(kn) => Region::Knapsack(KnapsackConstraint::allow_oversized(
                kn.prices().to_vec(),
                kn.budget() * kf,
            )?),
            Region::Matroid(m) => Region::MatroidUnion { matroid: m.clone(), k },
            Region::MatroidUnion { matroid, k: j } => Region::MatroidUnion { matroid: matroid.clone(), k: j * k },
            Region::MatroidBase(_) | Region::Custom(_) => {
                return Err(invalid("scaling is only supported for down-closed builtin regions"))
            }
        })
    }

    /// Smallest `t ≥ 0` with `x/t` in the region, by bisection to 1e-6.
    ///
    /// Non-down-closed regions are measured against their down-closure.
    pub fn infeasibility_ratio(&self, x: &[f64]) -> Result<f64> {
        let member = |t: f64| -> Result<bool> {
            let scaled: Vec<f64> = x.iter().map(|v| v / t).collect();
            let tol = 1e-9 / t.max(1.0);
            let r = match self {
                Region::MatroidBase(m) => Region::Matroid(m.clone()).contains(&scaled, tol),
                _ => self.contains(&scaled, tol),
            };
            r.ok_or(Error::CertificateUnavailable)
        };
        if x.iter().all(|&v| v <= 0.0) {
            return Ok(0.0);
        }
        let mut hi = 1.0;
        while !member(hi)? {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::Unbounded);
            }
        }
        let mut lo = 0.0;
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if member(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

fn greedy_vertex(n: usize, order: &[usize], independent: impl Fn(ElementSet) -> bool) -> DenseVector {
    let mut s = ElementSet::EMPTY;
    for &u in order {
        if independent(s.with(u)) {
            s.insert(u);
        }
    }
    DenseVector::indicator(n, s)
}

/// Checks `x(S) ≤ rank_k(S)` for all `S`.
fn matroid_polytope_contains(m: &Matroid, k: usize, x: &[f64], tol: f64) -> Option<bool> {
    let kf = k as f64;
    match m {
        Matroid::Uniform { rank, .. } => Some(x.iter().sum::<f64>() <= kf * *rank as f64 + tol),
        Matroid::Partition { part_of, limits } => {
            let mut load = vec![0.0; limits.len()];
            for (u, &p) in part_of.iter().enumerate() {
                load[p] += x[u];
            }
            Some(load.iter().zip(limits).all(|(&l, &c)| l <= kf * c as f64 + tol))
        }
        _ => {
            let support: ElementSet = (0..x.len()).filter(|&u| x[u] > BOX_TOL).collect();
            if support.len() > MEMBERSHIP_ENUM_LIMIT {
                return None;
            }
            Some(support.subsets().all(|s| {
                let mass: f64 = s.iter().map(|u| x[u]).sum();
                mass <= m.union_rank(k, s) as f64 + tol
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_examples() {
        let k = Region::Knapsack(KnapsackConstraint::new(vec![1.0, 1.0], 1.0).unwrap());
        assert_eq!(&*k.lp_maximize(&[3.0, 2.0]).unwrap(), &[1.0, 0.0]);
        let u = Region::Matroid(Matroid::uniform(2, 1));
        assert_eq!(&*u.lp_maximize(&[2.0, 5.0]).unwrap(), &[0.0, 1.0]);
        for r in [k, u, Region::Box { n: 2 }, Region::Cardinality { n: 2, budget: 1.5 }] {
            assert_eq!(&*r.lp_maximize(&[-1.0, 0.0]).unwrap(), &[0.0, 0.0]);
        }
    }

    #[test]
    fn knapsack_lp_is_fractional_on_the_last_item() {
        let k = Region::Knapsack(KnapsackConstraint::new(vec![2.0, 1.0, 2.0], 2.0).unwrap());
        let x = k.lp_maximize(&[3.0, 2.0, 1.0]).unwrap();
        assert_eq!(&*x, &[0.5, 1.0, 0.0]);
    }

    #[test]
    fn base_polytope_lp_returns_a_base() {
        let r = Region::MatroidBase(Matroid::partition(vec![0, 0, 1, 1], vec![1, 1]).unwrap());
        let x = r.lp_maximize(&[-1.0, -2.0, -3.0, 0.0]).unwrap();
        assert_eq!(&*x, &[1.0, 0.0, 0.0, 1.0]);
        assert!(!r.is_down_closed());
        assert_eq!(r.contains(&x, 1e-9), Some(true));
        assert_eq!(r.contains(&[0.5, 0.0, 0.0, 1.0], 1e-9), Some(false));
    }

    #[test]
    fn infeasibility_by_bisection() {
        let r = Region::Cardinality { n: 3, budget: 1.0 };
        let t = r.infeasibility_ratio(&[1.0, 1.0, 0.5]).unwrap();
        assert!((t - 2.5).abs() <= 1e-6);
        let m = Region::Matroid(Matroid::uniform(3, 0));
        assert_eq!(m.infeasibility_ratio(&[0.5, 0.0, 0.0]), Err(Error::Unbounded));
    }

    #[test]
    fn generic_matroid_membership_matches_closed_form() {
        let p = Matroid::partition(vec![0, 0, 1, 1], vec![1, 1]).unwrap();
        let pc = p.clone();
        let opaque = Matroid::from_oracle(4, move |s| pc.is_independent(s));
        let pts = [[0.5, 0.5, 0.5, 0.5], [0.6, 0.5, 0.0, 0.1], [1.0, 0.0, 0.3, 0.7]];
        for x in pts {
            assert_eq!(
                Region::Matroid(opaque.clone()).contains(&x, 1e-9),
                Region::Matroid(p.clone()).contains(&x, 1e-9)
            );
        }
    }
}
