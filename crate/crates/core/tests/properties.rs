use bicriteria::constraints::{matroid_union_independent, nu, rho};
use bicriteria::continuous::{continuous_double_greedy_knapsack, guided_mcg, measured_continuous_greedy, more_mcg};
use bicriteria::discrete::{
    combinatorial_general, density_greedy_monotone, density_greedy_symmetric, warmup_cardinality, DoubleGreedyMode,
};
use bicriteria::exhaustive::{verify_submodular, verify_symmetric};
use bicriteria::functions::{random_coverage, random_directed_cut, random_modular, random_undirected_cut};
use bicriteria::rounding::{pipage_knapsack, pipage_matroid};
use bicriteria::{Constraint, DenseVector, ElementSet, KnapsackConstraint, Matroid, MultilinearEvaluator, Region};
use proptest::prelude::*;

fn unit_point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0..=1.0f64, n)
}

fn matroid_strategy() -> impl Strategy<Value = Matroid> {
    prop_oneof![
        (1usize..=3).prop_map(|r| Matroid::uniform(6, r)),
        (proptest::collection::vec(0usize..3, 6), proptest::collection::vec(0usize..=2, 3))
            .prop_map(|(parts, limits)| Matroid::partition(parts, limits).unwrap()),
        proptest::collection::vec((0usize..4, 0usize..4), 6).prop_map(|edges| Matroid::graphic(4, edges).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_families_are_submodular(seed in 0u64..10_000, n in 2usize..=8) {
        for fam in [random_coverage(n, 10, seed), random_directed_cut(n, 0.4, seed), random_undirected_cut(n, 0.4, seed)] {
            let (f, _) = fam.instantiate(seed).unwrap();
            prop_assert!(verify_submodular(&f).unwrap().is_none());
        }
        let (g, _) = random_undirected_cut(n, 0.5, seed).instantiate(0).unwrap();
        prop_assert!(verify_symmetric(&g).unwrap().is_none());
    }

    #[test]
    fn lp_maximize_beats_region_points(w in proptest::collection::vec(-2.0..2.0f64, 6), x in unit_point(6), m in matroid_strategy()) {
        let k = KnapsackConstraint::new(vec![1.0, 0.5, 2.0, 1.5, 0.0, 1.0], 2.0).unwrap();
        let regions = [
            Region::Box { n: 6 },
            Region::Cardinality { n: 6, budget: 2.5 },
            Region::Knapsack(k),
            Region::Matroid(m.clone()),
            Region::MatroidUnion { matroid: m, k: 2 },
        ];
        for region in regions {
            let best = region.lp_maximize(&w).unwrap();
            prop_assert_eq!(region.contains(&best, 1e-9), Some(true));
            // shrink x into the region along the ray from 0
            let inside: Vec<f64> = match region.infeasibility_ratio(&x) {
                Ok(t) => x.iter().map(|v| v / t.max(1.0)).collect(),
                Err(_) => vec![0.0; 6],
            };
            prop_assert!(best.dot(&w) >= inside.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() - 1e-6);
        }
    }

    #[test]
    fn union_of_one_is_independence(m in matroid_strategy(), bits in 0u64..64) {
        let s = ElementSet::from_bits(bits);
        prop_assert_eq!(matroid_union_independent(&m, 1, s).unwrap(), m.is_independent(s));
    }

    #[test]
    fn gradient_is_antitone(seed in 0u64..10_000, x in unit_point(6), bump in unit_point(6)) {
        let (f, _) = random_directed_cut(6, 0.5, seed).instantiate(0).unwrap();
        let ev = MultilinearEvaluator::exact(&f).unwrap();
        let y: Vec<f64> = x.iter().zip(&bump).map(|(a, b)| (a + b * (1.0 - a)).min(1.0)).collect();
        let gx = ev.gradient(&x).unwrap();
        let gy = ev.gradient(&y).unwrap();
        for u in 0..6 {
            prop_assert!(gx[u] >= gy[u] - 1e-9);
        }
    }

    #[test]
    fn symmetric_gradient_flips(seed in 0u64..10_000, y in unit_point(7)) {
        let (f, _) = random_undirected_cut(7, 0.5, seed).instantiate(0).unwrap();
        let ev = MultilinearEvaluator::exact(&f).unwrap();
        let flipped: Vec<f64> = y.iter().map(|v| 1.0 - v).collect();
        let a = ev.gradient(&y).unwrap();
        let b = ev.gradient(&flipped).unwrap();
        for u in 0..7 {
            prop_assert!((a[u] + b[u]).abs() < 1e-9);
        }
    }

    #[test]
    fn prob_sum_laws(a in unit_point(5), b in unit_point(5), c in unit_point(5)) {
        let (a, b, c) = (DenseVector::new(a), DenseVector::new(b), DenseVector::new(c));
        let left = a.prob_sum(&b).unwrap().prob_sum(&c).unwrap();
        let right = a.prob_sum(&b.prob_sum(&c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
        prop_assert!(a.prob_sum(&b).unwrap().max_abs_diff(&b.prob_sum(&a).unwrap()) < 1e-12);
    }

    #[test]
    fn density_greedy_densities_fall(seed in 0u64..10_000, budget in 1usize..4) {
        let (f, _) = random_coverage(10, 14, seed).instantiate(0).unwrap();
        let prices: Vec<f64> = (0..10).map(|u| 1.0 + (u % 3) as f64 * 0.5).collect();
        let k = KnapsackConstraint::new(prices.clone(), budget as f64 * 2.0).unwrap();
        let run = density_greedy_monotone(&f, &k, 0.2).unwrap();
        let dens: Vec<f64> = run.trace.picks.iter().map(|p| p.marginal / prices[p.element]).collect();
        for w in dens.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9);
        }
    }

    #[test]
    fn greedy_blocks_are_disjoint(seed in 0u64..10_000, budget in 1usize..3) {
        let (f, _) = random_directed_cut(9, 0.4, seed).instantiate(0).unwrap();
        let runs = [
            warmup_cardinality(&f, budget, 0.2, seed, DoubleGreedyMode::Randomized).unwrap(),
            combinatorial_general(&f, &Constraint::Cardinality { n: 9, budget }, 0.2, seed, DoubleGreedyMode::Auto).unwrap(),
            combinatorial_general(&f, &Constraint::Matroid(Matroid::uniform(9, budget)), 0.2, seed, DoubleGreedyMode::Auto).unwrap(),
        ];
        for run in runs {
            let sizes: usize = run.trace.rounds.iter().map(|r| r.a.len()).sum();
            let union = run.trace.rounds.iter().fold(ElementSet::EMPTY, |a, r| a.union(r.a));
            prop_assert_eq!(union.len(), sizes);
        }
    }

    #[test]
    fn symmetric_removals_bounded(seed in 0u64..10_000, budget in 1usize..4) {
        let (f, _) = random_undirected_cut(9, 0.5, seed).instantiate(0).unwrap();
        let delta = 0.05;
        let run = density_greedy_symmetric(&f, &KnapsackConstraint::cardinality(9, budget), 0.1, delta).unwrap();
        prop_assert!(run.trace.removals as f64 <= 81.0 / delta);
    }

    #[test]
    fn knapsack_pipage_cost_and_progress(x in unit_point(6), seed in 0u64..u64::MAX) {
        let k = KnapsackConstraint::new(vec![0.0, 1.0, 2.5, 0.5, 3.0, 1.5], 3.0).unwrap();
        let s = pipage_knapsack(&x, &k, seed).unwrap();
        prop_assert!(k.cost(s) <= k.dot(&x) + 3.0 + 1e-9);
        let unit = KnapsackConstraint::cardinality(6, 2);
        let s = pipage_knapsack(&x, &unit, seed).unwrap();
        prop_assert!(s.len() as f64 <= (x.iter().sum::<f64>() - 1e-9).ceil().max(0.0));
    }

    #[test]
    fn matroid_pipage_stays_independent(m in matroid_strategy(), x in unit_point(6), beta in 0.5..3.0f64, seed in 0u64..u64::MAX) {
        // scale x into β·P(M)
        let region = Region::Matroid(m.clone());
        let Ok(t) = region.infeasibility_ratio(&x) else { return Ok(()) };
        let scale = if t > 0.0 { (beta / t).min(1.0) } else { 1.0 };
        let x: Vec<f64> = x.iter().map(|v| v * scale * (1.0 - 1e-9)).collect();
        let s = pipage_matroid(&x, beta, &m, seed).unwrap();
        prop_assert!(matroid_union_independent(&m, beta.ceil() as usize, s).unwrap());
    }

    #[test]
    fn rho_is_continuous_at_half(eps in 0.01..1.0f64) {
        let lo = rho(0.5, eps).unwrap();
        let hi = rho(0.5 + 1e-13, eps).unwrap();
        prop_assert!((lo - hi).abs() < 1e-12 + 1e-12 * lo.abs().max(1.0) * 10.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn continuous_trajectories_stay_feasible(seed in 0u64..10_000) {
        let (f, _) = random_coverage(7, 9, seed).instantiate(0).unwrap();
        let ev = MultilinearEvaluator::exact(&f).unwrap();
        let region = Region::Knapsack(KnapsackConstraint::cardinality(7, 2));
        let run = measured_continuous_greedy(&ev, &region, 1.5, 0.015).unwrap();
        for c in run.checkpoints.iter().skip(1) {
            prop_assert!(c.y.in_unit_box());
            prop_assert_eq!(region.contains(&c.y.scaled(1.0 / c.t), 1e-6), Some(true));
        }
        let guide = DenseVector::constant(7, 0.3);
        let run = guided_mcg(&ev, 2.0, 0.02, &guide, &region).unwrap();
        // Euler form of 1 − e^{−t(1−a)}
        let cap = 1.0 - (1.0 - 0.02 * 0.7f64).powi(100);
        prop_assert!(run.point().iter().all(|&v| v <= cap + 1e-9));
        for w in run.diagnostics.lp_values.windows(2) {
            prop_assert!(w[1] <= w[0] + 0.02 * 10.0);
        }

        let (g, _) = random_undirected_cut(7, 0.5, seed).instantiate(0).unwrap();
        let ev = MultilinearEvaluator::exact(&g).unwrap();
        let run = more_mcg(&ev, &region, 1.0, 0.01).unwrap();
        prop_assert!(run.point().max_coord() <= 0.5 + 1e-12);

        let (h, _) = random_modular(7, seed).instantiate(0).unwrap();
        let ev = MultilinearEvaluator::exact(&h).unwrap();
        let k = KnapsackConstraint::cardinality(7, 3);
        let run = continuous_double_greedy_knapsack(&ev, &k, 0.25, 0.01).unwrap();
        for c in &run.checkpoints {
            prop_assert!(c.y.iter().all(|&v| v <= c.t + 1e-9));
        }
        prop_assert!(k.dot(run.point()) <= 3.0 * rho(3.0 / 7.0, 0.25).unwrap() + 1e-6);
        prop_assert!(nu(1.0).unwrap() > 0.0);
    }
}
