use super::{checkpoint_due, finish, steps_for, Checkpoint, ContinuousRun, Diagnostics};
use crate::constraints::{rho, KnapsackConstraint, Region};
use crate::error::{invalid, Error, Result};
use crate::multilinear::{DrObjective, MultilinearEvaluator};
use crate::vector::DenseVector;

const BISECTION_ITERS: usize = 60;
const ZERO_SUM: f64 = 1e-9;

fn ratios(a: &[f64], b: &[f64], p: &[f64], l: f64) -> Vec<f64> {
    (0..a.len())
        .map(|u| {
            let ap = (a[u] - l * p[u]).max(0.0);
            let bp = (b[u] + l * p[u]).max(0.0);
            if ap + bp == 0.0 {
                0.0
            } else {
                ap / (ap + bp)
            }
        })
        .collect()
}

fn dot(p: &[f64], x: &[f64]) -> f64 {
    p.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Direction `d` and multiplier `ℓ` for one step, given `a = ∇F(x)` and `b = −∇F(y)`.
fn direction(a: &[f64], b: &[f64], p: &[f64], cap: f64) -> (Vec<f64>, f64) {
    let d0 = ratios(a, b, p, 0.0);
    if dot(p, &d0) <= cap {
        return (d0, 0.0);
    }
    // The priced cost is non-increasing and right-continuous in ℓ and vanishes at `hi`.
    let mut hi = (0..a.len()).filter(|&u| p[u] > 0.0).map(|u| a[u] / p[u]).fold(0.0, f64::max);
    let mut lo = 0.0;
    for _ in 0..BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if dot(p, &ratios(a, b, p, mid)) <= cap {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut d = ratios(a, b, p, hi);
    let zero: Vec<usize> = (0..a.len())
        .filter(|&u| (a[u] - hi * p[u]).max(0.0) + (b[u] + hi * p[u]).max(0.0) <= ZERO_SUM)
        .collect();
    let pz: f64 = zero.iter().map(|&u| p[u]).sum();
    let r = if pz > 0.0 { ((cap - dot(p, &d)) / pz).clamp(0.0, 1.0) } else { 0.0 };
    for u in zero {
        d[u] += r;
    }
    (d, hi)
}

/// Coupled ascent from `x = 0` and descent from `y = 1` over `t ∈ [0,1]`.
///
/// The price rate never exceeds `B·ρ(c, ε)`, so `⟨p, x(1)⟩ ≤ B·ρ(c, ε)`.
/// Knapsacks with density `c ≥ 1` impose no cap.
pub fn continuous_double_greedy_knapsack(
    ev: &MultilinearEvaluator,
    k: &KnapsackConstraint,
    eps: f64,
    dt: f64,
) -> Result<ContinuousRun> {
    let n = ev.n();
    if k.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: k.n() });
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(format!("ε must lie in (0,1], got {eps}")));
    }
    let c = k.density()?;
    let cap = if c >= 1.0 { f64::INFINITY } else { k.budget() * rho(c, eps)? };
    let steps = steps_for(1.0, dt)?;
    let p = k.prices();
    let q0 = ev.oracle().queries();
    let mut x = DenseVector::zeros(n);
    let mut y = DenseVector::ones(n);
    let mut checkpoints = vec![Checkpoint { t: 0.0, y: x.clone(), value: ev.eval_at_step(&x, 0)? }];
    let mut diag = Diagnostics::default();
    for s in 0..steps {
        let a = ev.gradient_at_step(&x, s as u64)?;
        let b: Vec<f64> = ev.gradient_at_step(&y, s as u64)?.iter().map(|v| -v).collect();
        let (d, l) = direction(&a, &b, p, cap);
        diag.multipliers.push(l);
        let t = (s + 1) as f64 / steps as f64;
        for u in 0..n {
            x[u] = (x[u] + dt * d[u]).clamp(0.0, 1.0);
            y[u] = (x[u] + (1.0 - t)).min(1.0);
        }
        if checkpoint_due(s + 1, steps) {
            checkpoints.push(Checkpoint { t, y: x.clone(), value: ev.eval_at_step(&x, s as u64 + 1)? });
        }
    }
    finish(ev, &Region::Knapsack(k.clone()), x, q0, dt, 1.0, checkpoints, diag)
}

/// Coordinate-wise double greedy for DR-submodular objectives on `[0,1]^N`.
///
/// Each coordinate is settled in index order at `a′/(a′+b′)` rounded to the
/// `ε` grid, where `a` and `−b` are its partials at the lower and upper points.
pub fn dr_double_greedy(g: &dyn DrObjective, eps: f64) -> Result<DenseVector> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(format!("ε must lie in (0,1], got {eps}")));
    }
    let n = g.dim();
    let mut x = DenseVector::zeros(n);
    let mut y = DenseVector::ones(n);
    for u in 0..n {
        let a = g.partial(&x, u).max(0.0);
        let b = (-g.partial(&y, u)).max(0.0);
        let z = if a + b == 0.0 { 1.0 } else { a / (a + b) };
        let z = ((z / eps).round() * eps).clamp(0.0, 1.0);
        x[u] = z;
        y[u] = z;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::Constraint;
    use crate::exhaustive::brute_opt;
    use crate::functions::{arcs_symmetry_gap, random_coverage, Modular};
    use crate::oracle::{FnSetFunction, SetFunctionOracle};

    #[test]
    fn modular_trace() {
        let f = SetFunctionOracle::new(Modular { weights: vec![1.0, 1.0] }).unwrap();
        let ev = MultilinearEvaluator::exact(&f).unwrap();
        let k = KnapsackConstraint::cardinality(2, 1);
        let run = continuous_double_greedy_knapsack(&ev, &k, 0.25, 0.01).unwrap();
        assert!(run.point().iter().all(|&v| (v - 0.5).abs() < 1e-9));
        assert!((k.dot(run.point()) - 1.0).abs() < 1e-9);
        assert!((run.outcome.value - 1.0).abs() < 1e-9);
        assert!(run.diagnostics.multipliers.iter().all(|&l| (l - 1.0).abs() < 1e-9));
    }

    #[test]
    fn degenerate_cases() {
        let c = SetFunctionOracle::new(FnSetFunction::new(3, |_| 1.0)).unwrap();
        let ev = MultilinearEvaluator::exact(&c).unwrap();
        let k = KnapsackConstraint::cardinality(3, 1);
        let run = continuous_double_greedy_knapsack(&ev, &k, 0.5, 0.05).unwrap();
        let rho_cap = rho(1.0 / 3.0, 0.5).unwrap();
        assert!(k.dot(run.point()) <= rho_cap + 1e-9);

        let f = SetFunctionOracle::new(Modular { weights: vec![1.0, 2.0] }).unwrap();
        let ev = MultilinearEvaluator::exact(&f).unwrap();
        let run = continuous_double_greedy_knapsack(&ev, &KnapsackConstraint::cardinality(2, 1), 1.0, 0.1).unwrap();
        assert!(run.point().max_coord() < 1e-9);
        assert!(continuous_double_greedy_knapsack(&ev, &KnapsackConstraint::cardinality(2, 1), 0.0, 0.1).is_err());
    }

    #[test]
    fn coverage_guarantee() {
        for seed in 0..3 {
            let (f, _) = random_coverage(8, 10, seed).instantiate(0).unwrap();
            let ev = MultilinearEvaluator::exact(&f).unwrap();
            let k = KnapsackConstraint::cardinality(8, 4);
            let (_, opt) = brute_opt(&f, &Constraint::Knapsack(k.clone())).unwrap();
            for eps in [0.25, 0.5] {
                let run = continuous_double_greedy_knapsack(&ev, &k, eps, 0.005).unwrap();
                assert!(run.outcome.value >= (1.0 - eps) * opt - 1e-6);
                assert!(k.dot(run.point()) <= k.budget() * rho(0.5, eps).unwrap() + 1e-6);
            }
        }
    }

    #[test]
    fn dr_examples() {
        let m = SetFunctionOracle::new(Modular { weights: vec![1.0, 2.0] }).unwrap();
        let ev = MultilinearEvaluator::exact(&m).unwrap();
        assert_eq!(dr_double_greedy(&ev, 0.1).unwrap(), DenseVector::ones(2));

        let arc = SetFunctionOracle::new(arcs_symmetry_gap(1)).unwrap();
        let ev = MultilinearEvaluator::exact(&arc).unwrap();
        let x = dr_double_greedy(&ev, 0.05).unwrap();
        assert!(ev.eval(&x).unwrap() >= 0.5 - 0.05);

        let c = SetFunctionOracle::new(FnSetFunction::new(2, |_| 3.0)).unwrap();
        let ev = MultilinearEvaluator::exact(&c).unwrap();
        assert_eq!(ev.eval(&dr_double_greedy(&ev, 0.2).unwrap()).unwrap(), 3.0);
    }
}
