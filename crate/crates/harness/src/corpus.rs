//! Seeded instance corpora used by the acceptance suite and `gen`.

use bicriteria::functions::{
    random_coverage, random_directed_cut, random_modular, random_undirected_cut, FunctionFamily,
};
use bicriteria::rng::substream;
use rand::Rng;

use crate::spec::{ConstraintSpec, Decimal, InstanceSpec, MatroidSpec};

#[derive(Clone, Debug)]
pub struct Entry {
    pub id: String,
    pub family: FunctionFamily,
    pub seed: u64,
}

impl Entry {
    pub fn n(&self) -> usize {
        self.family.ground_size()
    }

    pub fn with(&self, tag: &str, constraint: ConstraintSpec) -> InstanceSpec {
        InstanceSpec::new(format!("{}/{tag}", self.id), self.family.clone(), constraint, self.seed)
    }
}

fn size(j: usize, lo: usize, hi: usize) -> usize {
    lo + j % (hi - lo + 1)
}

/// `coverage` coverage and `modular` modular instances with `n` cycling through `lo..=hi`.
pub fn monotone(lo: usize, hi: usize, coverage: usize, modular: usize) -> Vec<Entry> {
    let cov = (0..coverage).map(|j| {
        let n = size(j, lo, hi);
        let seed = 1000 + j as u64;
        Entry { id: format!("coverage-{j}"), family: random_coverage(n, 2 * n, seed), seed }
    });
    let m = (0..modular).map(|j| {
        let n = size(j, lo, hi);
        let seed = 2000 + j as u64;
        Entry { id: format!("modular-{j}"), family: random_modular(n, seed), seed }
    });
    cov.chain(m).collect()
}

/// Directed cut functions, which are neither monotone nor symmetric.
pub fn directed_cuts(lo: usize, hi: usize, count: usize) -> Vec<Entry> {
    (0..count)
        .map(|j| {
            let seed = 3000 + j as u64;
            Entry { id: format!("dicut-{j}"), family: random_directed_cut(size(j, lo, hi), 0.35, seed), seed }
        })
        .collect()
}

pub fn undirected_cuts(lo: usize, hi: usize, count: usize) -> Vec<Entry> {
    (0..count)
        .map(|j| {
            let seed = 4000 + j as u64;
            Entry { id: format!("cut-{j}"), family: random_undirected_cut(size(j, lo, hi), 0.4, seed), seed }
        })
        .collect()
}

fn decimal(v: f64) -> Decimal {
    // multiples of 1/8 print exactly
    format!("{v}").parse().expect("non-negative finite value")
}

/// Prices in `{0.5, 1, …, 5}`.
pub fn prices(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, "corpus_prices", 0, 0);
    (0..n).map(|_| rng.gen_range(1..=10) as f64 / 2.0).collect()
}

/// Knapsack with budget a third of the total price, rounded down to a half, but at least the largest price.
pub fn knapsack(n: usize, seed: u64) -> ConstraintSpec {
    let p = prices(n, seed);
    let total: f64 = p.iter().sum();
    let max = p.iter().copied().fold(0.0, f64::max);
    let budget = ((total / 3.0) * 2.0).floor() / 2.0;
    ConstraintSpec::Knapsack {
        prices: p.iter().map(|&v| decimal(v)).collect(),
        budget: decimal(budget.max(max)),
        oversized: false,
    }
}

/// Knapsack whose budget is exactly `c` times the total price, `c` a multiple of 1/4.
pub fn knapsack_with_density(n: usize, seed: u64, c: f64) -> ConstraintSpec {
    let p = prices(n, seed);
    let total: f64 = p.iter().sum();
    let max = p.iter().copied().fold(0.0, f64::max);
    let budget = c * total;
    ConstraintSpec::Knapsack {
        prices: p.iter().map(|&v| decimal(v)).collect(),
        budget: decimal(budget),
        oversized: max > budget,
    }
}

/// A uniform, a partition and a graphic matroid on `n` elements.
pub fn matroids(n: usize, seed: u64) -> [MatroidSpec; 3] {
    let mut rng = substream(seed, "corpus_matroids", 0, 0);
    let rank = 2 + (seed as usize) % 2;
    let parts = (0..n).map(|u| u % 3).collect();
    let limits = (0..3).map(|_| rng.gen_range(1..=2)).collect();
    let vertices = (n / 2).max(3);
    let edges = (0..n)
        .map(|_| {
            let a = rng.gen_range(0..vertices);
            let b = (a + rng.gen_range(1..vertices)) % vertices;
            (a, b)
        })
        .collect();
    [
        MatroidSpec::Uniform { rank },
        MatroidSpec::Partition { parts, limits },
        MatroidSpec::Graphic { vertices, edges },
    ]
}

/// The corpus `gen` writes: every entry under a knapsack constraint.
pub fn named(corpus: &str) -> Option<Vec<InstanceSpec>> {
    let entries = match corpus {
        "monotone" => monotone(8, 16, 50, 20),
        "directed_cut" => directed_cuts(6, 10, 20),
        "undirected_cut" => undirected_cuts(8, 14, 20),
        _ => return None,
    };
    Some(entries.iter().map(|e| e.with("knapsack", knapsack(e.n(), e.seed))).collect())
}

pub const CORPORA: [&str; 3] = ["monotone", "directed_cut", "undirected_cut"];
