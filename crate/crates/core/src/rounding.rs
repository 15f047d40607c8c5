//! Dependent rounding of fractional points to sets.
//!
//! Both rounders keep the point's expected position fixed at every step, so for
//! submodular `f` the returned set satisfies `E[f(S)] ≥ F(x)`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::constraints::{KnapsackConstraint, Matroid, Region, MEMBERSHIP_ENUM_LIMIT};
use crate::error::{invalid, Error, Result};
use crate::rng::substream;
use crate::set::ElementSet;
use crate::vector::BOX_TOL;

const TIGHT_TOL: f64 = 1e-9;

fn snap(x: &mut [f64]) {
    for v in x.iter_mut() {
        if *v < BOX_TOL {
            *v = 0.0;
        } else if *v > 1.0 - BOX_TOL {
            *v = 1.0;
        }
    }
}

fn is_frac(v: f64) -> bool {
    v > 0.0 && v < 1.0
}

fn check_point(x: &[f64], n: usize) -> Result<Vec<f64>> {
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    if x.iter().any(|v| !(-BOX_TOL..=1.0 + BOX_TOL).contains(v)) {
        return Err(invalid("point must lie in [0,1]^N"));
    }
    let mut x = x.to_vec();
    snap(&mut x);
    Ok(x)
}

fn ones(x: &[f64]) -> ElementSet {
    (0..x.len()).filter(|&u| x[u] == 1.0).collect()
}

fn coin(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.gen::<f64>() < p
}

/// Pipage rounding for a knapsack.
///
/// Zero-price coordinates are rounded independently, then fractional pairs
/// trade price-weighted mass until at most one stays fractional, which is
/// rounded last. The cost of the result is at most `⟨p, x⟩ + max p`, and with
/// unit prices the size is at most `⌈Σ x⌉`.
pub fn pipage_knapsack(x: &[f64], k: &KnapsackConstraint, seed: u64) -> Result<ElementSet> {
    let mut x = check_point(x, k.n())?;
    let p = k.prices();
    let mut rng = substream(seed, "pipage_knapsack", 0, 0);
    for u in 0..x.len() {
        if p[u] == 0.0 && is_frac(x[u]) {
            x[u] = if coin(&mut rng, x[u]) { 1.0 } else { 0.0 };
        }
    }
    loop {
        let mut frac = (0..x.len()).filter(|&u| is_frac(x[u]));
        let (Some(u), Some(v)) = (frac.next(), frac.next()) else { break };
        let su = (1.0 - x[u]).min(p[v] * x[v] / p[u]);
        let sv = (1.0 - x[v]).min(p[u] * x[u] / p[v]);
        let up_u = p[v] * sv / (p[v] * sv + p[u] * su);
        let (a, b, s) = if coin(&mut rng, up_u) { (u, v, su) } else { (v, u, sv) };
        // `a` rises by `s`, `b` falls by the price-equivalent amount; one of them lands on {0,1}.
        if s == 1.0 - x[a] {
            x[a] = 1.0;
            x[b] -= p[a] * s / p[b];
        } else {
            x[a] += s;
            x[b] = 0.0;
        }
        snap(&mut x);
    }
    if let Some(u) = (0..x.len()).find(|&u| is_frac(x[u])) {
        x[u] = if coin(&mut rng, x[u]) { 1.0 } else { 0.0 };
    }
    Ok(ones(&x))
}

/// Pipage rounding inside the polytope of the `⌈β⌉`-fold union of `m`.
///
/// `x/β` must lie in the matroid polytope. The result is independent in the
/// union, so it splits into at most `⌈β⌉` independent sets of `m`. Tight sets
/// are found by enumerating subsets of the support, which is capped at
/// [`MEMBERSHIP_ENUM_LIMIT`] elements.
pub fn pipage_matroid(x: &[f64], beta: f64, m: &Matroid, seed: u64) -> Result<ElementSet> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid(format!("β must be positive, got {beta}")));
    }
    let mut x = check_point(x, m.n())?;
    let k = beta.ceil() as usize;
    let scaled: Vec<f64> = x.iter().map(|v| v / beta).collect();
    match Region::Matroid(m.clone()).contains(&scaled, TIGHT_TOL) {
        Some(true) => {}
        Some(false) => return Err(invalid("x/β lies outside the matroid polytope")),
        None => return Err(Error::CertificateUnavailable),
    }
    let support: Vec<usize> = (0..x.len()).filter(|&u| x[u] > 0.0).collect();
    let s = support.len();
    if s > MEMBERSHIP_ENUM_LIMIT {
        return Err(Error::TooLarge { n: s, max: MEMBERSHIP_ENUM_LIMIT });
    }
    let to_set = |mask: usize| -> ElementSet { (0..s).filter(|&i| mask >> i & 1 == 1).map(|i| support[i]).collect() };
    let rank: Vec<f64> = (0..1usize << s).map(|mask| m.union_rank(k, to_set(mask)) as f64).collect();
    let mut rng = substream(seed, "pipage_matroid", 0, 0);
    let limit = 4 * s * s + 16;
    for _ in 0..limit {
        let frac: Vec<usize> = (0..s).filter(|&i| is_frac(x[support[i]])).collect();
        if frac.is_empty() {
            let out = ones(&x);
            debug_assert!(m.union_independent(k, out));
            return Ok(out);
        }
        let mut mass = vec![0.0; 1 << s];
        for mask in 1..1usize << s {
            let low = mask.trailing_zeros() as usize;
            mass[mask] = mass[mask & (mask - 1)] + x[support[low]];
        }
        let slack = |mask: usize| rank[mask] - mass[mask];
        let frac_mask: usize = frac.iter().map(|&i| 1 << i).sum();
        // smallest tight set holding a fractional coordinate, lowest bits on ties
        let tight = (1..1usize << s)
            .filter(|&t| t & frac_mask != 0 && slack(t) <= TIGHT_TOL)
            .min_by_key(|&t| (t.count_ones(), t));
        let min_slack = |inside: usize, outside: usize| {
            (1..1usize << s)
                .filter(|&t| t & inside == inside && t & outside == 0)
                .map(slack)
                .fold(f64::INFINITY, f64::min)
                .max(0.0)
        };
        match tight {
            None => {
                let i = frac[0];
                let u = support[i];
                let up = (1.0 - x[u]).min(min_slack(1 << i, 0));
                let down = x[u];
                x[u] += if coin(&mut rng, down / (up + down)) { up } else { -down };
            }
            Some(t) => {
                let mut inside = frac.iter().copied().filter(|&i| t >> i & 1 == 1);
                let first = inside.next().expect("tight set holds a fractional coordinate");
                let Some(j) = inside.next() else {
                    // Only within tolerance of tight: the lone coordinate is within TIGHT_TOL of an integer.
                    let u = support[first];
                    x[u] = x[u].round();
                    continue;
                };
                let i = first;
                let (u, v) = (support[i], support[j]);
                let plus = (1.0 - x[u]).min(x[v]).min(min_slack(1 << i, 1 << j));
                let minus = x[u].min(1.0 - x[v]).min(min_slack(1 << j, 1 << i));
                let step = if coin(&mut rng, minus / (plus + minus)) { plus } else { -minus };
                x[u] += step;
                x[v] -= step;
            }
        }
        snap(&mut x);
    }
    Err(invalid("pipage rounding did not converge"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knapsack_examples() {
        let k = KnapsackConstraint::cardinality(3, 1);
        assert_eq!(pipage_knapsack(&[1.0, 0.0, 1.0], &k, 4).unwrap(), ElementSet::from_elements([0, 2]));
        let k = KnapsackConstraint::cardinality(2, 1);
        let mut zeros = 0;
        for seed in 0..2000 {
            let s = pipage_knapsack(&[0.5, 0.5], &k, seed).unwrap();
            assert_eq!(s.len(), 1);
            zeros += s.contains(0) as usize;
        }
        assert!((zeros as f64 / 2000.0 - 0.5).abs() < 0.05);
    }

    #[test]
    fn knapsack_cost_bound() {
        let k = KnapsackConstraint::new(vec![0.0, 1.5, 2.0, 0.7, 3.0], 3.0).unwrap();
        let x = [0.4, 0.3, 0.9, 0.55, 0.25];
        let bound = k.dot(&x) + 3.0;
        for seed in 0..500 {
            assert!(k.cost(pipage_knapsack(&x, &k, seed).unwrap()) <= bound + 1e-9);
        }
    }

    #[test]
    fn matroid_examples() {
        let m = Matroid::uniform(3, 2);
        let s = pipage_matroid(&[1.0, 0.0, 1.0], 1.0, &m, 1).unwrap();
        assert_eq!(s, ElementSet::from_elements([0, 2]));

        let m = Matroid::uniform(2, 1);
        for seed in 0..50 {
            assert_eq!(pipage_matroid(&[0.5, 0.5], 1.0, &m, seed).unwrap().len(), 1);
        }

        let m = Matroid::partition(vec![0, 0, 1, 1], vec![1, 1]).unwrap();
        for seed in 0..50 {
            let s = pipage_matroid(&[0.5; 4], 1.0, &m, seed).unwrap();
            assert_eq!(s.len(), 2);
            assert!(m.is_independent(s));
        }
        assert!(pipage_matroid(&[0.9, 0.9], 1.0, &Matroid::uniform(2, 1), 0).is_err());
    }

    #[test]
    fn matroid_union_rounding() {
        let m = Matroid::graphic(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let x = [0.9, 0.7, 0.8, 0.6, 0.5];
        for seed in 0..100 {
            let s = pipage_matroid(&x, 1.5, &m, seed).unwrap();
            assert!(m.union_independent(2, s));
        }
    }
}
