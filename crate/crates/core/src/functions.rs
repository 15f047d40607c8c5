//! Submodular function families, including the hard-instance constructions.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constraints::{Constraint, Matroid};
use crate::error::{invalid, Error, Result};
use crate::oracle::{SetFunction, SetFunctionOracle};
use crate::rng::substream;
use crate::set::{ElementSet, MAX_ELEMENTS};

const DOMAIN_TOL: f64 = 1e-12;

/// `1 - (1 - x - y)^{1/c}` on `[0,c] × [0,1-c]`.
pub fn eval_g(c: f64, x: f64, y: f64) -> Result<f64> {
    check_domain(c, x, y)?;
    Ok(1.0 - (1.0 - (x + y)).max(0.0).powf(1.0 / c))
}

/// The perturbed counterpart of [`eval_g`] that hides the planted set.
pub fn eval_f_hard(c: f64, delta: f64, x: f64, y: f64) -> Result<f64> {
    check_domain(c, x, y)?;
    if !(delta > 0.0 && delta < c / 4.0) {
        return Err(invalid(format!("δ′ must lie in (0, c/4), got {delta}")));
    }
    let q = y / (1.0 - c);
    // Below the line x = c·q + δ′ the two expressions coincide; taking G there
    // keeps them bit-identical.
    if y >= (1.0 - delta) * (1.0 - c) || x <= c * q + delta {
        return eval_g(c, x, y);
    }
    let lift = ((x - c * q - delta) / (c * (1.0 - q - delta))).max(0.0);
    let base = 1.0 - (x + y).min(q + delta);
    Ok(1.0 - (1.0 - lift) * base.max(0.0).powf(1.0 / c))
}

fn check_domain(c: f64, x: f64, y: f64) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return Err(invalid(format!("c must lie in (0,1), got {c}")));
    }
    if !(-DOMAIN_TOL..=c + DOMAIN_TOL).contains(&x) || !(-DOMAIN_TOL..=1.0 - c + DOMAIN_TOL).contains(&y) {
        return Err(invalid(format!("({x}, {y}) is outside [0,{c}]×[0,{}]", 1.0 - c)));
    }
    Ok(())
}

pub struct Modular {
    pub weights: Vec<f64>,
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }
    fn eval(&self, s: ElementSet) -> f64 {
        s.iter().map(|u| self.weights[u]).sum()
    }
    fn is_monotone(&self) -> bool {
        true
    }
    fn is_symmetric(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0)
    }
}

/// Weighted coverage. Element `u` covers the universe items in `covers[u]`.
pub struct Coverage {
    weights: Vec<f64>,
    masks: Vec<Vec<u64>>,
}

impl Coverage {
    pub fn new(universe_weights: Vec<f64>, covers: &[Vec<usize>]) -> Result<Self> {
        let words = universe_weights.len().div_ceil(64);
        let mut masks = Vec::with_capacity(covers.len());
        for cover in covers {
            let mut m = vec![0u64; words];
            for &j in cover {
                if j >= universe_weights.len() {
                    return Err(invalid(format!("cover item {j} outside the universe")));
                }
                m[j / 64] |= 1 << (j % 64);
            }
            masks.push(m);
        }
        Ok(Self { weights: universe_weights, masks })
    }
}

impl SetFunction for Coverage {
    fn ground_size(&self) -> usize {
        self.masks.len()
    }
    fn eval(&self, s: ElementSet) -> f64 {
        let mut covered = vec![0u64; self.weights.len().div_ceil(64)];
        for u in s {
            for (c, m) in covered.iter_mut().zip(&self.masks[u]) {
                *c |= m;
            }
        }
        let mut total = 0.0;
        for (w, &word) in covered.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                total += self.weights[w * 64 + bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
        }
        total
    }
    fn is_monotone(&self) -> bool {
        true
    }
}

/// Weight of arcs leaving `S`.
pub struct DirectedCut {
    pub n: usize,
    pub arcs: Vec<(usize, usize, f64)>,
}

impl SetFunction for DirectedCut {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn eval(&self, s: ElementSet) -> f64 {
        self.arcs.iter().filter(|&&(a, b, _)| s.contains(a) && !s.contains(b)).map(|a| a.2).sum()
    }
}

/// Weight of edges with exactly one end in `S`.
pub struct UndirectedCut {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl SetFunction for UndirectedCut {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn eval(&self, s: ElementSet) -> f64 {
        self.edges.iter().filter(|&&(a, b, _)| s.contains(a) != s.contains(b)).map(|e| e.2).sum()
    }
    fn is_symmetric(&self) -> bool {
        true
    }
}

/// `F(|S∩O|/(iℓ), |S∖O|/(iℓ))` over `iℓ` elements with a planted set `O` of size `ih`.
pub struct HardMonotone {
    c: f64,
    delta: f64,
    scale: f64,
    n: usize,
    planted: ElementSet,
}

impl HardMonotone {
    pub fn new(h: usize, l: usize, i: usize, delta: f64, planted: ElementSet) -> Result<Self> {
        if h == 0 || i == 0 || 2 * h > l {
            return Err(invalid(format!("need 0 < h/ℓ ≤ 1/2 and i ≥ 1, got h={h}, ℓ={l}, i={i}")));
        }
        let c = h as f64 / l as f64;
        if !(delta > 0.0 && delta < c / 4.0) {
            return Err(invalid(format!("δ′ must lie in (0, c/4), got {delta}")));
        }
        let n = i * l;
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge { n, max: MAX_ELEMENTS });
        }
        if planted.len() != i * h || !planted.is_subset(ElementSet::full(n)) {
            return Err(invalid("planted set must have ih elements of the ground set"));
        }
        Ok(Self { c, delta, scale: n as f64, n, planted })
    }

    pub fn planted(&self) -> ElementSet {
        self.planted
    }

    pub fn budget(&self) -> usize {
        self.planted.len()
    }
}

impl SetFunction for HardMonotone {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn eval(&self, s: ElementSet) -> f64 {
        let x = s.intersection(self.planted).len() as f64 / self.scale;
        let y = s.difference(self.planted).len() as f64 / self.scale;
        eval_f_hard(self.c, self.delta, x, y).expect("counts stay inside the domain")
    }
    fn is_monotone(&self) -> bool {
        true
    }
}

/// A density-1/2 hard instance plus linear filler elements, raising the density to `h/ℓ`.
pub struct HardMonotoneExtended {
    inner: HardMonotone,
    extra: usize,
    unit: f64,
}

impl HardMonotoneExtended {
    pub fn new(h: usize, l: usize, i: usize, delta: f64, r: f64, planted: ElementSet) -> Result<Self> {
        if !(h < l && l < 2 * h) || i == 0 {
            return Err(invalid(format!("need 1/2 < h/ℓ < 1 and i ≥ 1, got h={h}, ℓ={l}, i={i}")));
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(invalid(format!("r must lie in [0,1], got {r}")));
        }
        let inner_i = (l - h) * i;
        let inner = HardMonotone::new(1, 2, inner_i, delta, planted)?;
        let extra = (2 * h - l) * i;
        if inner.n + extra > MAX_ELEMENTS {
            return Err(Error::TooLarge { n: inner.n + extra, max: MAX_ELEMENTS });
        }
        Ok(Self { inner, extra, unit: r / inner_i as f64 })
    }

    pub fn budget(&self) -> usize {
        self.inner.budget() + self.extra
    }

    pub fn inner(&self) -> &HardMonotone {
        &self.inner
    }
}

impl SetFunction for HardMonotoneExtended {
    fn ground_size(&self) -> usize {
        self.inner.n + self.extra
    }
    fn eval(&self, s: ElementSet) -> f64 {
        let core = ElementSet::full(self.inner.n);
        self.inner.eval(s.intersection(core)) + self.unit * s.difference(core).len() as f64
    }
    fn is_monotone(&self) -> bool {
        true
    }
}

/// Elements `a_j = j` and `b_j = n + j` for `j < n`, valued by the count of
/// arcs `a_j → b_j` leaving `S`.
pub fn arcs_symmetry_gap(n: usize) -> DirectedCut {
    DirectedCut { n: 2 * n, arcs: (0..n).map(|j| (j, n + j, 1.0)).collect() }
}

/// `κ g + (1-κ) h` on `{a, b} ∪ A ∪ B`, `|A| = |B| = n²`.
///
/// Element 0 is `a`, 1 is `b`, `2 + i n + j` is `a_{i,j}` and
/// `2 + n² + i n + j` is `b_{i,j}`.
pub struct KappaBlend {
    n: usize,
    kappa: f64,
}

impl KappaBlend {
    pub fn new(n: usize, kappa: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(invalid(format!("κ must lie in [0,1], got {kappa}")));
        }
        if n == 0 || 2 + 2 * n * n > MAX_ELEMENTS {
            return Err(invalid(format!("n = {n} does not fit a bitset ground set")));
        }
        Ok(Self { n, kappa })
    }

    pub fn a_index(&self, i: usize, j: usize) -> usize {
        2 + i * self.n + j
    }

    pub fn b_index(&self, i: usize, j: usize) -> usize {
        2 + self.n * self.n + i * self.n + j
    }

    pub fn g(&self, s: ElementSet) -> f64 {
        if s.contains(0) != s.contains(1) {
            1.0
        } else {
            0.0
        }
    }

    pub fn h(&self, s: ElementSet) -> f64 {
        let n = self.n as f64;
        let side = |skip: usize, idx: &dyn Fn(usize, usize) -> usize| {
            if s.contains(skip) {
                return 0.0;
            }
            let miss: f64 = (0..self.n)
                .map(|i| {
                    let hit = (0..self.n).filter(|&j| s.contains(idx(i, j))).count() as f64;
                    1.0 - hit / n
                })
                .product();
            1.0 - miss
        };
        side(0, &|i, j| self.a_index(i, j)) + side(1, &|i, j| self.b_index(i, j))
    }
}

impl SetFunction for KappaBlend {
    fn ground_size(&self) -> usize {
        2 + 2 * self.n * self.n
    }
    fn eval(&self, s: ElementSet) -> f64 {
        self.kappa * self.g(s) + (1.0 - self.kappa) * self.h(s)
    }
}

/// Serializable family descriptions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FunctionFamily {
    Modular { weights: Vec<f64> },
    Coverage { universe_weights: Vec<f64>, element_covers: Vec<Vec<usize>> },
    DirectedCut { n: usize, arcs: Vec<(usize, usize, f64)> },
    UndirectedCut { n: usize, edges: Vec<(usize, usize, f64)> },
    /// `c = h/ℓ ≤ 1/2`; the planted set is drawn from the seed when absent.
    HardMonotone { h: usize, l: usize, i: usize, delta: f64, planted: Option<Vec<usize>> },
    /// `1/2 < c = h/ℓ < 1`.
    HardMonotoneExtended { h: usize, l: usize, i: usize, delta: f64, r: f64, planted: Option<Vec<usize>> },
    ArcsSymmetryGap { n: usize },
    KappaBlend { n: usize, kappa: f64 },
}

fn draw_planted(n: usize, k: usize, seed: u64) -> ElementSet {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut substream(seed, "planted", 0, 0));
    idx.into_iter().take(k).collect()
}

impl FunctionFamily {
    pub fn ground_size(&self) -> usize {
        match self {
            FunctionFamily::Modular { weights } => weights.len(),
            FunctionFamily::Coverage { element_covers, .. } => element_covers.len(),
            FunctionFamily::DirectedCut { n, .. } | FunctionFamily::UndirectedCut { n, .. } => *n,
            FunctionFamily::HardMonotone { l, i, .. } | FunctionFamily::HardMonotoneExtended { l, i, .. } => {
                l * i
            }
            FunctionFamily::ArcsSymmetryGap { n } => 2 * n,
            FunctionFamily::KappaBlend { n, .. } => 2 + 2 * n * n,
        }
    }

    /// The oracle and the constraint the family comes with.
    ///
    /// Families without a natural constraint come back unconstrained.
    pub fn instantiate(&self, seed: u64) -> Result<(SetFunctionOracle, Constraint)> {
        let n = self.ground_size();
        let free = Constraint::Unconstrained { n };
        let check_edges = |list: &[(usize, usize, f64)]| -> Result<()> {
            if list.iter().any(|&(a, b, w)| a >= n || b >= n || !(w >= 0.0)) {
                return Err(invalid("arc endpoints must be in range with non-negative weights"));
            }
            Ok(())
        };
        Ok(match self {
            FunctionFamily::Modular { weights } => {
                if weights.iter().any(|w| !(*w >= 0.0)) {
                    return Err(invalid("modular weights must be non-negative"));
                }
                (SetFunctionOracle::new(Modular { weights: weights.clone() })?, free)
            }
            FunctionFamily::Coverage { universe_weights, element_covers } => {
                if universe_weights.iter().any(|w| !(*w >= 0.0)) {
                    return Err(invalid("coverage weights must be non-negative"));
                }
                (SetFunctionOracle::new(Coverage::new(universe_weights.clone(), element_covers)?)?, free)
            }
            FunctionFamily::DirectedCut { n, arcs } => {
                check_edges(arcs)?;
                (SetFunctionOracle::new(DirectedCut { n: *n, arcs: arcs.clone() })?, free)
            }
            FunctionFamily::UndirectedCut { n, edges } => {
                check_edges(edges)?;
                (SetFunctionOracle::new(UndirectedCut { n: *n, edges: edges.clone() })?, free)
            }
            FunctionFamily::HardMonotone { h, l, i, delta, planted } => {
                let o = match planted {
                    Some(v) => v.iter().copied().collect(),
                    None => draw_planted(n, h * i, seed),
                };
                let f = HardMonotone::new(*h, *l, *i, *delta, o)?;
                let budget = f.budget();
                (SetFunctionOracle::new(f)?, Constraint::Cardinality { n, budget })
            }
            FunctionFamily::HardMonotoneExtended { h, l, i, delta, r, planted } => {
                let inner_n = 2 * (l.saturating_sub(*h)) * i;
                let o = match planted {
                    Some(v) => v.iter().copied().collect(),
                    None => draw_planted(inner_n, inner_n / 2, seed),
                };
                let f = HardMonotoneExtended::new(*h, *l, *i, *delta, *r, o)?;
                let budget = f.budget();
                (SetFunctionOracle::new(f)?, Constraint::Cardinality { n, budget })
            }
            FunctionFamily::ArcsSymmetryGap { n: m } => {
                if *m == 0 {
                    return Err(invalid("the arc instance needs n ≥ 1"));
                }
                let parts = (0..2 * m).map(|u| usize::from(u >= *m)).collect();
                let base = Matroid::partition(parts, vec![1, m - 1])?;
                (SetFunctionOracle::new(arcs_symmetry_gap(*m))?, Constraint::MatroidBase(base))
            }
            FunctionFamily::KappaBlend { n: m, kappa } => {
                let f = KappaBlend::new(*m, *kappa)?;
                (SetFunctionOracle::new(f)?, Constraint::Cardinality { n, budget: m + 1 })
            }
        })
    }
}

/// Coverage instance with universe weights in `(0,1]` and random cover sizes.
pub fn random_coverage(n: usize, universe: usize, seed: u64) -> FunctionFamily {
    let mut rng = substream(seed, "coverage", 0, 0);
    let universe_weights = (0..universe).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let max_size = universe.div_ceil(2).max(1);
    let mut items: Vec<usize> = (0..universe).collect();
    let element_covers = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=max_size);
            items.shuffle(&mut rng);
            let mut c = items[..k].to_vec();
            c.sort_unstable();
            c
        })
        .collect();
    FunctionFamily::Coverage { universe_weights, element_covers }
}

pub fn random_modular(n: usize, seed: u64) -> FunctionFamily {
    let mut rng = substream(seed, "modular", 0, 0);
    FunctionFamily::Modular { weights: (0..n).map(|_| 1.0 - rng.gen::<f64>()).collect() }
}

/// Directed graph with each ordered pair present with probability `p`.
pub fn random_directed_cut(n: usize, p: f64, seed: u64) -> FunctionFamily {
    let mut rng = substream(seed, "directed_cut", 0, 0);
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                arcs.push((a, b, 1.0 - rng.gen::<f64>()));
            }
        }
    }
    FunctionFamily::DirectedCut { n, arcs }
}

pub fn random_undirected_cut(n: usize, p: f64, seed: u64) -> FunctionFamily {
    let mut rng = substream(seed, "undirected_cut", 0, 0);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b, 1.0 - rng.gen::<f64>()));
            }
        }
    }
    FunctionFamily::UndirectedCut { n, edges }
}
