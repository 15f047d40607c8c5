//! Value-oracle access to set functions.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::set::{ElementSet, GroundSet};

/// A set function over `{0, .., n-1}`.
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;

    fn eval(&self, s: ElementSet) -> f64;

    /// Claimed monotonicity. Checked by [`crate::exhaustive::verify_monotone`].
    fn is_monotone(&self) -> bool {
        false
    }

    /// Claimed symmetry, `f(S) = f(N \ S)`.
    fn is_symmetric(&self) -> bool {
        false
    }
}

/// Adapts a closure into a [`SetFunction`].
pub struct FnSetFunction<F> {
    n: usize,
    f: F,
    monotone: bool,
    symmetric: bool,
}

impl<F: Fn(ElementSet) -> f64 + Send + Sync> FnSetFunction<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f, monotone: false, symmetric: false }
    }

    pub fn monotone(mut self, yes: bool) -> Self {
        self.monotone = yes;
        self
    }

    pub fn symmetric(mut self, yes: bool) -> Self {
        self.symmetric = yes;
        self
    }
}

impl<F: Fn(ElementSet) -> f64 + Send + Sync> SetFunction for FnSetFunction<F> {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn eval(&self, s: ElementSet) -> f64 {
        (self.f)(s)
    }
    fn is_monotone(&self) -> bool {
        self.monotone
    }
    fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}

/// Value oracle with a query counter and an optional memo table.
///
/// With memoization on, `queries` counts distinct sets evaluated.
pub struct SetFunctionOracle {
    func: Arc<dyn SetFunction>,
    ground: GroundSet,
    monotone: bool,
    symmetric: bool,
    queries: AtomicU64,
    memo: Option<RwLock<HashMap<u64, f64>>>,
}

impl SetFunctionOracle {
    pub fn new<F: SetFunction + 'static>(func: F) -> Result<Self> {
        Self::from_arc(Arc::new(func))
    }

    pub fn from_arc(func: Arc<dyn SetFunction>) -> Result<Self> {
        let ground = GroundSet::new(func.ground_size())?;
        Ok(Self {
            monotone: func.is_monotone(),
            symmetric: func.is_symmetric(),
            func,
            ground,
            queries: AtomicU64::new(0),
            memo: Some(RwLock::new(HashMap::new())),
        })
    }

    /// Turns the memo table off; every call then counts as a query.
    pub fn without_memo(mut self) -> Self {
        self.memo = None;
        self
    }

    pub fn with_flags(mut self, monotone: bool, symmetric: bool) -> Self {
        self.monotone = monotone;
        self.symmetric = symmetric;
        self
    }

    /// A fresh oracle over the same function, with its own counter and memo.
    pub fn fresh(&self) -> Self {
        Self {
            func: Arc::clone(&self.func),
            ground: self.ground,
            monotone: self.monotone,
            symmetric: self.symmetric,
            queries: AtomicU64::new(0),
            memo: self.memo.as_ref().map(|_| RwLock::new(HashMap::new())),
        }
    }

    pub fn function(&self) -> &Arc<dyn SetFunction> {
        &self.func
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub(crate) fn add_queries(&self, k: u64) {
        self.queries.fetch_add(k, Ordering::Relaxed);
    }

    pub fn value(&self, s: ElementSet) -> f64 {
        debug_assert!(s.is_subset(self.ground.full()), "set outside the ground set");
        if let Some(memo) = &self.memo {
            if let Some(&v) = memo.read().expect("memo lock").get(&s.bits()) {
                return v;
            }
            let v = self.func.eval(s);
            let fresh = memo.write().expect("memo lock").insert(s.bits(), v).is_none();
            if fresh {
                self.queries.fetch_add(1, Ordering::Relaxed);
            }
            v
        } else {
            self.queries.fetch_add(1, Ordering::Relaxed);
            self.func.eval(s)
        }
    }

    /// `f(S + u) - f(S)`.
    pub fn marginal(&self, s: ElementSet, u: usize) -> Result<f64> {
        self.ground.check(u)?;
        if s.contains(u) {
            return Ok(0.0);
        }
        Ok(self.value(s.with(u)) - self.value(s))
    }

    pub(crate) fn require_monotone(&self, solver: &str) -> Result<()> {
        if self.monotone {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{solver} needs a function flagged monotone")))
        }
    }

    pub(crate) fn require_symmetric(&self, solver: &str) -> Result<()> {
        if self.symmetric {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{solver} needs a function flagged symmetric")))
        }
    }
}

impl fmt::Debug for SetFunctionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetFunctionOracle")
            .field("n", &self.n())
            .field("monotone", &self.monotone)
            .field("symmetric", &self.symmetric)
            .field("queries", &self.queries())
            .finish()
    }
}

/// `f(S + u) - f(S)` for an oracle.
pub fn marginal(f: &SetFunctionOracle, s: ElementSet, u: usize) -> Result<f64> {
    f.marginal(s, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn card(n: usize) -> SetFunctionOracle {
        SetFunctionOracle::new(FnSetFunction::new(n, |s| s.len() as f64).monotone(true)).unwrap()
    }

    #[test]
    fn marginal_examples() {
        let f = card(3);
        assert_eq!(f.marginal(ElementSet::EMPTY, 0).unwrap(), 1.0);
        assert_eq!(f.marginal(ElementSet::singleton(0), 0).unwrap(), 0.0);
        assert!(matches!(f.marginal(ElementSet::EMPTY, 3), Err(Error::IndexOutOfRange { .. })));

        // arc a -> b with a = 0, b = 1
        let arc = SetFunctionOracle::new(FnSetFunction::new(2, |s| {
            if s.contains(0) && !s.contains(1) {
                1.0
            } else {
                0.0
            }
        }))
        .unwrap();
        assert_eq!(arc.marginal(ElementSet::singleton(1), 0).unwrap(), 0.0);
    }

    #[test]
    fn memo_counts_distinct_queries() {
        let f = card(4);
        for _ in 0..5 {
            f.value(ElementSet::singleton(1));
        }
        f.value(ElementSet::EMPTY);
        assert_eq!(f.queries(), 2);
        let g = card(4).without_memo();
        g.value(ElementSet::EMPTY);
        g.value(ElementSet::EMPTY);
        assert_eq!(g.queries(), 2);
    }

    #[test]
    fn oracle_is_send_sync() {
        fn check<T: Send + Sync>() {}
        check::<SetFunctionOracle>();
    }
}
