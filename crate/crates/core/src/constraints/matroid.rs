//! Matroids given by closed forms or by an independence oracle.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::set::ElementSet;

pub type IndependenceFn = dyn Fn(ElementSet) -> bool + Send + Sync;

#[derive(Clone)]
pub enum Matroid {
    /// Sets of size at most `rank`.
    Uniform { n: usize, rank: usize },
    /// At most `limits[j]` elements from part `j`; `part_of[u]` is the part of `u`.
    Partition { part_of: Vec<usize>, limits: Vec<usize> },
    /// Forests of a multigraph; element `u` is edge `edges[u]`.
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    /// Arbitrary independence oracle.
    Oracle { n: usize, independent: Arc<IndependenceFn>, rank_hint: Option<usize> },
    /// `inner` plus `extra` free elements, truncated to the rank of `inner`.
    Padded { inner: Box<Matroid>, extra: usize },
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matroid::Uniform { n, rank } => write!(f, "Uniform(n={n}, rank={rank})"),
            Matroid::Partition { part_of, limits } => {
                write!(f, "Partition(parts={part_of:?}, limits={limits:?})")
            }
            Matroid::Graphic { vertices, edges } => {
                write!(f, "Graphic(vertices={vertices}, edges={edges:?})")
            }
            Matroid::Oracle { n, rank_hint, .. } => write!(f, "Oracle(n={n}, rank={rank_hint:?})"),
            Matroid::Padded { inner, extra } => write!(f, "Padded({inner:?}, +{extra})"),
        }
    }
}

impl Matroid {
    pub fn uniform(n: usize, rank: usize) -> Self {
        Matroid::Uniform { n, rank }
    }

    pub fn partition(part_of: Vec<usize>, limits: Vec<usize>) -> Result<Self> {
        if let Some(&p) = part_of.iter().find(|&&p| p >= limits.len()) {
            return Err(invalid(format!("part {p} has no limit")));
        }
        Ok(Matroid::Partition { part_of, limits })
    }

    pub fn graphic(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.iter().any(|&(a, b)| a >= vertices || b >= vertices) {
            return Err(invalid("edge endpoint out of range"));
        }
        Ok(Matroid::Graphic { vertices, edges })
    }

    pub fn from_oracle<F>(n: usize, independent: F) -> Self
    where
        F: Fn(ElementSet) -> bool + Send + Sync + 'static,
    {
        Matroid::Oracle { n, independent: Arc::new(independent), rank_hint: None }
    }

    pub fn n(&self) -> usize {
        match self {
            Matroid::Uniform { n, .. } | Matroid::Oracle { n, .. } => *n,
            Matroid::Partition { part_of, .. } => part_of.len(),
            Matroid::Graphic { edges, .. } => edges.len(),
            Matroid::Padded { inner, extra } => inner.n() + extra,
        }
    }

    pub fn is_independent(&self, s: ElementSet) -> bool {
        match self {
            Matroid::Uniform { rank, .. } => s.len() <= *rank,
            Matroid::Partition { part_of, limits } => {
                let mut used = vec![0usize; limits.len()];
                for u in s {
                    used[part_of[u]] += 1;
                    if used[part_of[u]] > limits[part_of[u]] {
                        return false;
                    }
                }
                true
            }
            Matroid::Graphic { vertices, edges } => {
                let mut dsu = Dsu::new(*vertices);
                s.iter().all(|u| dsu.union(edges[u].0, edges[u].1))
            }
            Matroid::Oracle { independent, .. } => independent(s),
            Matroid::Padded { inner, .. } => {
                let orig = s.intersection(ElementSet::full(inner.n()));
                s.len() <= inner.rank() && inner.is_independent(orig)
            }
        }
    }

    /// Rank of `s`, computed greedily.
    pub fn rank_of(&self, s: ElementSet) -> usize {
        match self {
            Matroid::Uniform { rank, .. } => s.len().min(*rank),
            Matroid::Partition { part_of, limits } => {
                let mut used = vec![0usize; limits.len()];
                for u in s {
                    used[part_of[u]] += 1;
                }
                used.iter().zip(limits).map(|(&a, &b)| a.min(b)).sum()
            }
            _ => {
                let mut basis = ElementSet::EMPTY;
                for u in s {
                    if self.is_independent(basis.with(u)) {
                        basis.insert(u);
                    }
                }
                basis.len()
            }
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Matroid::Oracle { rank_hint: Some(r), .. } => *r,
            _ => self.rank_of(ElementSet::full(self.n())),
        }
    }

    /// Rank of `s` in the `k`-fold union of this matroid.
    pub fn union_rank(&self, k: usize, s: ElementSet) -> usize {
        match self {
            Matroid::Uniform { rank, .. } => s.len().min(k * rank),
            Matroid::Partition { part_of, limits } => {
                let mut used = vec![0usize; limits.len()];
                for u in s {
                    used[part_of[u]] += 1;
                }
                used.iter().zip(limits).map(|(&a, &b)| a.min(k * b)).sum()
            }
            _ => self.partition_into(k, s).iter().map(|p| p.len()).sum(),
        }
    }

    /// True when `s` splits into at most `k` independent sets.
    pub fn union_independent(&self, k: usize, s: ElementSet) -> bool {
        if k == 0 {
            return s.is_empty();
        }
        self.union_rank(k, s) == s.len()
    }

    /// Largest partitionable subset of `s` as `k` disjoint independent sets,
    /// found by shortest augmenting paths.
    pub fn partition_into(&self, k: usize, s: ElementSet) -> Vec<ElementSet> {
        let mut parts = vec![ElementSet::EMPTY; k];
        if k == 0 {
            return parts;
        }
        let mut owner = [usize::MAX; 64];
        for x0 in s {
            // BFS over elements; parent[y] = (x, j) means y leaves part j for x.
            let mut parent: [Option<(usize, usize)>; 64] = [None; 64];
            let mut seen = ElementSet::singleton(x0);
            let mut queue = VecDeque::from([x0]);
            let mut end = None;
            'bfs: while let Some(x) = queue.pop_front() {
                for (j, &part) in parts.iter().enumerate() {
                    if owner[x] == j {
                        continue;
                    }
                    if self.is_independent(part.with(x)) {
                        end = Some((x, j));
                        break 'bfs;
                    }
                    for y in part.difference(seen) {
                        if self.is_independent(part.without(y).with(x)) {
                            parent[y] = Some((x, j));
                            seen.insert(y);
                            queue.push_back(y);
                        }
                    }
                }
            }
            let Some((mut x, mut j)) = end else { continue };
            loop {
                parts[j].insert(x);
                let prev = owner[x];
                owner[x] = j;
                match parent[x] {
                    Some((px, pj)) => {
                        debug_assert_eq!(prev, pj);
                        parts[pj].remove(x);
                        x = px;
                        j = pj;
                    }
                    None => break,
                }
            }
        }
        parts
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> ElementSet {
        ElementSet::from_elements(e.iter().copied())
    }

    #[test]
    fn union_examples() {
        let u1 = Matroid::uniform(3, 1);
        assert!(u1.union_independent(2, set(&[0, 1])));
        assert!(!u1.union_independent(2, set(&[0, 1, 2])));
        let p = Matroid::partition(vec![0, 0, 1], vec![1, 1]).unwrap();
        assert!(p.union_independent(2, set(&[0, 1, 2])));
    }

    #[test]
    fn union_matches_closed_form_on_oracle_copies() {
        // Same matroids wrapped as opaque oracles go through augmenting paths.
        let p = Matroid::partition(vec![0, 0, 0, 1, 1, 2], vec![1, 2, 1]).unwrap();
        let pc = p.clone();
        let opaque = Matroid::from_oracle(6, move |s| pc.is_independent(s));
        for k in 1..=3 {
            for s in ElementSet::full(6).subsets() {
                assert_eq!(opaque.union_rank(k, s), p.union_rank(k, s), "k={k} s={s:?}");
            }
        }
    }

    #[test]
    fn graphic_forests() {
        // triangle plus a pendant edge
        let g = Matroid::graphic(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert!(g.is_independent(set(&[0, 1, 3])));
        assert!(!g.is_independent(set(&[0, 1, 2])));
        assert_eq!(g.rank(), 3);
        assert!(g.union_independent(2, set(&[0, 1, 2, 3])));
    }

    #[test]
    fn padded_truncates_to_inner_rank() {
        let m = Matroid::Padded { inner: Box::new(Matroid::uniform(2, 1)), extra: 2 };
        assert_eq!(m.n(), 4);
        assert!(m.is_independent(set(&[2])));
        assert!(!m.is_independent(set(&[2, 3])));
        assert!(!m.is_independent(set(&[0, 1])));
        assert_eq!(m.union_rank(3, set(&[0, 1, 2, 3])), 3);
    }
}
