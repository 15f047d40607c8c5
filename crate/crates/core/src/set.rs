//! Ground sets and bitset-backed subsets.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set that fits in an [`ElementSet`].
pub const MAX_ELEMENTS: usize = 63;

/// A ground set `{0, .., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge { n, max: MAX_ELEMENTS });
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn full(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    pub fn check(&self, u: usize) -> Result<()> {
        if u >= self.n {
            Err(Error::IndexOutOfRange { element: u, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Every subset, in increasing bit order.
    pub fn subsets(&self) -> impl Iterator<Item = ElementSet> {
        (0..1u64 << self.n).map(ElementSet::from_bits)
    }
}

/// A subset of a ground set of at most [`MAX_ELEMENTS`] elements.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == 0 {
            Self(0)
        } else {
            Self(u64::MAX >> (64 - n))
        }
    }

    pub fn singleton(u: usize) -> Self {
        Self(1 << u)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(Self(0), |s, u| s.with(u))
    }

    pub fn contains(self, u: usize) -> bool {
        u < 64 && self.0 >> u & 1 == 1
    }

    pub fn insert(&mut self, u: usize) {
        self.0 |= 1 << u;
    }

    pub fn remove(&mut self, u: usize) {
        self.0 &= !(1 << u);
    }

    #[must_use]
    pub fn with(self, u: usize) -> Self {
        Self(self.0 | 1 << u)
    }

    #[must_use]
    pub fn without(self, u: usize) -> Self {
        Self(self.0 & !(1 << u))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        Self(!self.0 & Self::full(n).0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Largest element plus one, or 0 for the empty set.
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Compares sorted element lists lexicographically.
    pub fn lex_cmp(self, other: Self) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(&y),
                _ => {}
            }
        }
    }

    /// All subsets of `self`, starting with the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, cur: 0, done: false }
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_elements(iter)
    }
}

impl IntoIterator for ElementSet {
    type Item = usize;
    type IntoIter = Elements;
    fn into_iter(self) -> Elements {
        self.iter()
    }
}

/// Elements of a set in increasing order.
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let u = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(u)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Elements {}

pub struct Subsets {
    mask: u64,
    cur: u64,
    done: bool,
}

impl Iterator for Subsets {
    type Item = ElementSet;

    fn next(&mut self) -> Option<ElementSet> {
        if self.done {
            return None;
        }
        let out = ElementSet(self.cur);
        self.cur = self.cur.wrapping_sub(self.mask) & self.mask;
        if self.cur == 0 {
            self.done = true;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let s = ElementSet::from_elements([0, 3, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3) && !s.contains(4));
        assert_eq!(s.without(3).to_vec(), vec![0, 5]);
        assert_eq!(s.complement(6).to_vec(), vec![1, 2, 4]);
        assert_eq!(s.span(), 6);
        assert_eq!(ElementSet::full(63).len(), 63);
    }

    #[test]
    fn subsets_of_mask() {
        let s = ElementSet::from_elements([1, 4]);
        let all: Vec<_> = s.subsets().map(|t| t.bits()).collect();
        assert_eq!(all, vec![0, 2, 16, 18]);
        assert_eq!(ElementSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn lexicographic_order() {
        let a = ElementSet::from_elements([0, 5]);
        let b = ElementSet::from_elements([1]);
        assert_eq!(a.lex_cmp(b), Ordering::Less);
        assert_eq!(ElementSet::EMPTY.lex_cmp(b), Ordering::Less);
        assert_eq!(b.lex_cmp(b), Ordering::Equal);
    }

    #[test]
    fn ground_set_limit() {
        assert!(GroundSet::new(63).is_ok());
        assert!(matches!(GroundSet::new(64), Err(Error::TooLarge { .. })));
        assert!(GroundSet::new(3).unwrap().check(3).is_err());
    }
}
