use super::double_greedy::dr_double_greedy;
use super::mcg::guided_from;
use super::{finish, steps_for, ContinuousRun, Diagnostics};
use crate::constraints::Region;
use crate::error::{invalid, Result};
use crate::multilinear::{DrObjective, MultilinearEvaluator};
use crate::vector::DenseVector;

/// `G(x) = F(base ⊕ (guide ∘ x))`.
pub struct GuidedObjective<'a, 'b> {
    pub ev: &'a MultilinearEvaluator<'b>,
    pub base: DenseVector,
    pub guide: DenseVector,
}

impl GuidedObjective<'_, '_> {
    pub fn point(&self, x: &[f64]) -> DenseVector {
        let z: Vec<f64> = (0..x.len())
            .map(|u| 1.0 - (1.0 - self.base[u]) * (1.0 - self.guide[u] * x[u]))
            .collect();
        DenseVector::new(z)
    }
}

impl DrObjective for GuidedObjective<'_, '_> {
    fn dim(&self) -> usize {
        self.base.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.ev.eval(&self.point(x)).expect("dimension checked by caller")
    }
    fn partial(&self, x: &[f64], u: usize) -> f64 {
        let d = self.ev.partial(&self.point(x), u).expect("dimension checked by caller");
        d * self.guide[u] * (1.0 - self.base[u])
    }
}

/// `⌈1/ε⌉` guided greedy runs of length 2, each steered away from the mass
/// collected so far, then a DR double greedy around each run's output.
///
/// Returns the best `g^{(i)} ⊕ (g ∘ d^{(i)})`. Dividing the output by
/// `2(1/ε + 2)` lands in the region.
pub fn general_bicriteria(ev: &MultilinearEvaluator, region: &Region, eps: f64, dt: f64) -> Result<ContinuousRun> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(invalid(format!("ε must lie in (0, 1/2), got {eps}")));
    }
    let horizon = 2.0;
    let steps = steps_for(horizon, dt)?;
    let n = ev.n();
    let q0 = ev.oracle().queries();
    let ell = (1.0 / eps).ceil() as usize;
    let mut guide = DenseVector::zeros(n);
    let mut total = DenseVector::zeros(n);
    let mut parts = Vec::with_capacity(ell);
    let mut diag = Diagnostics::default();
    let mut checkpoints = Vec::new();
    for i in 0..ell {
        let run = guided_from(ev, horizon, dt, &guide, region, (i * steps) as u64)?;
        let gi = run.point().clone();
        total = total.add(&gi)?;
        for u in 0..n {
            guide[u] = (guide[u] + gi[u]).min(1.0);
        }
        diag.lp_values.extend(run.diagnostics.lp_values);
        checkpoints.extend(run.checkpoints);
        parts.push(gi);
    }
    diag.guide_sum_max = Some(total.max_coord());
    let mut best: Option<(usize, DenseVector, f64)> = None;
    for (i, gi) in parts.into_iter().enumerate() {
        let obj = GuidedObjective { ev, base: gi, guide: guide.clone() };
        let d = dr_double_greedy(&obj, eps)?;
        let r = obj.point(&d);
        let v = ev.eval(&r)?;
        if best.as_ref().is_none_or(|b| v > b.2) {
            best = Some((i, r, v));
        }
    }
    let (i, r, _) = best.expect("at least one guided run");
    diag.chosen = Some(i);
    finish(ev, region, r, q0, dt, horizon, checkpoints, diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{Constraint, KnapsackConstraint};
    use crate::exhaustive::brute_opt;
    use crate::functions::{random_coverage, DirectedCut};
    use crate::oracle::{FnSetFunction, SetFunctionOracle};

    fn two_arcs() -> SetFunctionOracle {
        SetFunctionOracle::new(DirectedCut { n: 4, arcs: vec![(0, 1, 1.0), (2, 3, 1.0)] }).unwrap()
    }

    #[test]
    fn two_optima_instance() {
        let f = two_arcs();
        let ev = MultilinearEvaluator::exact(&f).unwrap();
        let region = Region::Cardinality { n: 4, budget: 1.0 };
        let (_, opt) = brute_opt(&f, &Constraint::Knapsack(KnapsackConstraint::cardinality(4, 1))).unwrap();
        assert_eq!(opt, 1.0);
        let run = general_bicriteria(&ev, &region, 0.25, 0.01).unwrap();
        assert!(run.outcome.value >= 0.25 * opt);
        assert!(run.outcome.infeasibility.unwrap() <= 12.0 + 1e-9);
        assert!(run.diagnostics.guide_sum_max.unwrap() <= 2.0 + 1e-9);
        let cert = run.point().scaled(1.0 / 12.0);
        assert_eq!(region.contains(&cert, 1e-9), Some(true));
    }

    #[test]
    fn monotone_and_zero() {
        let (f, _) = random_coverage(6, 8, 2).instantiate(0).unwrap();
        let ev = MultilinearEvaluator::exact(&f).unwrap();
        let region = Region::Cardinality { n: 6, budget: 2.0 };
        let run = general_bicriteria(&ev, &region, 0.25, 0.02).unwrap();
        assert!(run.outcome.value > 0.0);

        let z = SetFunctionOracle::new(FnSetFunction::new(3, |_| 0.0)).unwrap();
        let ev = MultilinearEvaluator::exact(&z).unwrap();
        let run = general_bicriteria(&ev, &Region::Box { n: 3 }, 0.25, 0.1).unwrap();
        assert_eq!(run.outcome.value, 0.0);
        assert!(general_bicriteria(&ev, &Region::Box { n: 3 }, 0.5, 0.1).is_err());
    }

    #[test]
    fn guided_partial_matches_difference() {
        let f = two_arcs();
        let ev = MultilinearEvaluator::exact(&f).unwrap();
        let obj = GuidedObjective {
            ev: &ev,
            base: DenseVector::new(vec![0.1, 0.3, 0.0, 0.5]),
            guide: DenseVector::new(vec![0.7, 0.2, 1.0, 0.4]),
        };
        let x = [0.3, 0.6, 0.2, 0.9];
        for u in 0..4 {
            let mut hi = x;
            let mut lo = x;
            hi[u] = 1.0;
            lo[u] = 0.0;
            let fd = obj.value(&hi) - obj.value(&lo);
            assert!((fd - obj.partial(&x, u)).abs() < 1e-12);
        }
    }
}
