//! Constraints, feasibility measurement and the closed-form guarantee curves.

mod knapsack;
mod matroid;
mod region;

pub use knapsack::KnapsackConstraint;
pub use matroid::{IndependenceFn, Matroid};
pub use region::{LinearOracle, Region, MEMBERSHIP_ENUM_LIMIT};

use crate::error::{invalid, Error, Result};
use crate::set::ElementSet;

#[derive(Clone, Debug)]
pub enum Constraint {
    Unconstrained { n: usize },
    /// At most `budget` elements.
    Cardinality { n: usize, budget: usize },
    Knapsack(KnapsackConstraint),
    /// Independent sets of the matroid.
    Matroid(Matroid),
    /// Bases of the matroid only.
    MatroidBase(Matroid),
}

impl Constraint {
    pub fn n(&self) -> usize {
        match self {
            Constraint::Unconstrained { n } | Constraint::Cardinality { n, .. } => *n,
            Constraint::Knapsack(k) => k.n(),
            Constraint::Matroid(m) | Constraint::MatroidBase(m) => m.n(),
        }
    }

    pub fn is_feasible(&self, s: ElementSet) -> bool {
        match self {
            Constraint::Unconstrained { .. } => true,
            Constraint::Cardinality { budget, .. } => s.len() <= *budget,
            Constraint::Knapsack(k) => k.cost(s) <= k.budget() + crate::TOL,
            Constraint::Matroid(m) => m.is_independent(s),
            Constraint::MatroidBase(m) => m.is_independent(s) && s.len() == m.rank(),
        }
    }

    /// Achieved infeasibility of an integral solution.
    ///
    /// Knapsack: cost over budget. Cardinality: size over budget. Matroid:
    /// least number of independent sets covering `s`.
    pub fn infeasibility_ratio(&self, s: ElementSet) -> Result<f64> {
        let ratio = |num: f64, den: f64| {
            if num <= 0.0 {
                Ok(0.0)
            } else if den <= 0.0 {
                Err(Error::Unbounded)
            } else {
                Ok(num / den)
            }
        };
        match self {
            Constraint::Unconstrained { .. } => Ok(if s.is_empty() { 0.0 } else { 1.0 }),
            Constraint::Cardinality { budget, .. } => ratio(s.len() as f64, *budget as f64),
            Constraint::Knapsack(k) => ratio(k.cost(s), k.budget()),
            Constraint::Matroid(m) | Constraint::MatroidBase(m) => {
                matroid_cover_number(m, s).map(|k| k as f64)
            }
        }
    }

    /// The polytope relaxing this constraint.
    pub fn region(&self) -> Region {
        match self {
            Constraint::Unconstrained { n } => Region::Box { n: *n },
            Constraint::Cardinality { n, budget } => Region::Cardinality { n: *n, budget: *budget as f64 },
            Constraint::Knapsack(k) => Region::Knapsack(k.clone()),
            Constraint::Matroid(m) => Region::Matroid(m.clone()),
            Constraint::MatroidBase(m) => Region::MatroidBase(m.clone()),
        }
    }
}

/// Least `k` such that `s` splits into `k` independent sets, by binary search.
pub fn matroid_cover_number(m: &Matroid, s: ElementSet) -> Result<usize> {
    if s.is_empty() {
        return Ok(0);
    }
    if !s.iter().all(|u| m.is_independent(ElementSet::singleton(u))) {
        return Err(Error::Unbounded);
    }
    let (mut lo, mut hi) = (1, s.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if m.union_independent(mid, s) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

pub fn matroid_union_independent(m: &Matroid, k: usize, s: ElementSet) -> Result<bool> {
    if k == 0 {
        return Err(invalid("union needs k ≥ 1"));
    }
    Ok(m.union_independent(k, s))
}

pub fn density(k: &KnapsackConstraint) -> Result<f64> {
    k.density()
}

/// Price cap of the knapsack continuous double greedy, relative to `B`.
pub fn rho(c: f64, eps: f64) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(invalid(format!("density must lie in (0,1), got {c}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(format!("epsilon must lie in (0,1], got {eps}")));
    }
    Ok(if c <= 0.5 {
        (1.0 - eps.powf(c)) / c
    } else {
        (1.0 - 2.0 * (1.0 - c) * eps.sqrt() - eps * (2.0 * c - 1.0)) / c
    })
}

/// Best ratio achievable with infeasibility `β` on general constraints.
pub fn nu(beta: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(invalid(format!("beta must be non-negative, got {beta}")));
    }
    Ok(if beta <= 2.0 * std::f64::consts::LN_2 {
        let e = (-beta / 2.0).exp();
        2.0 * e * (1.0 - e)
    } else {
        0.5
    })
}

/// `ℓ(e^{-β/ℓ} - e^{-β})/(ℓ-1)`, the value curve with `ℓ` disjoint optima.
pub fn multi_opt_bound(ell: usize, beta: f64) -> Result<f64> {
    if ell < 2 {
        return Err(invalid("the multi-optimum curve needs ℓ ≥ 2"));
    }
    if !(beta >= 0.0) {
        return Err(invalid(format!("beta must be non-negative, got {beta}")));
    }
    let l = ell as f64;
    Ok(l * ((-beta / l).exp() - (-beta).exp()) / (l - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn rho_values() {
        assert!((rho(0.5, 0.25).unwrap() - 1.0).abs() < 1e-12);
        assert!((rho(0.25, 0.25).unwrap() - 1.171573).abs() < 1e-6);
        assert!((rho(0.75, 0.25).unwrap() - 0.833333).abs() < 1e-6);
        assert!(rho(0.0, 0.5).is_err() && rho(0.5, 0.0).is_err() && rho(0.5, 1.5).is_err());
        assert!(rho(0.75, 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn rho_branches_meet_at_half() {
        for i in 1..=19 {
            let eps = 0.05 * i as f64;
            let low = (1.0 - eps.powf(0.5)) / 0.5;
            let high = (1.0 - 2.0 * 0.5 * eps.sqrt() - eps * 0.0) / 0.5;
            assert!((low - high).abs() <= 1e-12);
            assert!((rho(0.5, eps).unwrap() - 2.0 * (1.0 - eps.sqrt())).abs() <= 1e-12);
        }
    }

    #[test]
    fn nu_values() {
        assert_eq!(nu(0.0).unwrap(), 0.0);
        assert!((nu(2.0 * LN_2).unwrap() - 0.5).abs() < 1e-12);
        assert!((nu(1.0).unwrap() - 0.477302).abs() < 1e-6);
        assert!(nu(-0.1).is_err());
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = nu(2.0 * LN_2 * i as f64 / 100.0).unwrap();
            assert!(v + 1e-15 >= prev);
            prev = v;
        }
    }

    #[test]
    fn multi_opt_curve() {
        assert!((multi_opt_bound(2, 2.0 * LN_2).unwrap() - 0.5).abs() < 1e-12);
        assert!((multi_opt_bound(3, 1.0).unwrap() - 0.522978).abs() < 1e-6);
        assert_eq!(multi_opt_bound(4, 0.0).unwrap(), 0.0);
        assert!(multi_opt_bound(1, 1.0).is_err());
        for i in 0..50 {
            let b = 2.0 * LN_2 * i as f64 / 49.0;
            assert!((multi_opt_bound(2, b).unwrap() - nu(b).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn set_infeasibility() {
        let c = Constraint::Cardinality { n: 6, budget: 2 };
        assert_eq!(c.infeasibility_ratio(ElementSet::full(5)).unwrap(), 2.5);
        let m = Constraint::Matroid(Matroid::uniform(6, 2));
        assert_eq!(m.infeasibility_ratio(ElementSet::full(5)).unwrap(), 3.0);
        assert!(m.infeasibility_ratio(ElementSet::from_elements([0, 1])).unwrap() <= 1.0);
        assert!(matroid_union_independent(&Matroid::uniform(2, 1), 0, ElementSet::EMPTY).is_err());
    }
}
