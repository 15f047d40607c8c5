//! Instances, dummy augmentation and solver outcomes.

use std::sync::Arc;

use crate::constraints::{Constraint, Matroid};
use crate::error::{Error, Result};
use crate::oracle::{SetFunction, SetFunctionOracle};
use crate::set::{ElementSet, MAX_ELEMENTS};
use crate::vector::DenseVector;

pub struct Instance {
    pub oracle: SetFunctionOracle,
    pub constraint: Constraint,
}

impl Instance {
    pub fn new(oracle: SetFunctionOracle, constraint: Constraint) -> Result<Self> {
        if oracle.n() != constraint.n() {
            return Err(Error::DimensionMismatch { expected: oracle.n(), got: constraint.n() });
        }
        Ok(Self { oracle, constraint })
    }

    pub fn n(&self) -> usize {
        self.oracle.n()
    }
}

/// `f` extended by valueless elements `n..n+extra`.
pub struct DummyPadded {
    inner: Arc<dyn SetFunction>,
    extra: usize,
}

impl DummyPadded {
    pub fn new(inner: Arc<dyn SetFunction>, extra: usize) -> Self {
        Self { inner, extra }
    }
}

impl SetFunction for DummyPadded {
    fn ground_size(&self) -> usize {
        self.inner.ground_size() + self.extra
    }
    fn eval(&self, s: ElementSet) -> f64 {
        self.inner.eval(s.intersection(ElementSet::full(self.inner.ground_size())))
    }
    fn is_monotone(&self) -> bool {
        self.inner.is_monotone()
    }
    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }
}

/// Oracle over `f` plus `count` dummies, with the original flags.
pub fn pad_oracle(f: &SetFunctionOracle, count: usize) -> Result<SetFunctionOracle> {
    if count == 0 {
        return Ok(f.fresh());
    }
    let n = f.n() + count;
    if n > MAX_ELEMENTS {
        return Err(Error::TooLarge { n, max: MAX_ELEMENTS });
    }
    Ok(SetFunctionOracle::from_arc(Arc::new(DummyPadded::new(Arc::clone(f.function()), count)))?
        .with_flags(f.is_monotone(), f.is_symmetric()))
}

/// Constraint over the padded ground set.
///
/// Knapsack dummies cost the full budget. Matroid dummies are free up to
/// the rank of the original matroid.
pub fn pad_constraint(c: &Constraint, count: usize) -> Constraint {
    if count == 0 {
        return c.clone();
    }
    let pad = |m: &Matroid| Matroid::Padded { inner: Box::new(m.clone()), extra: count };
    match c {
        Constraint::Unconstrained { n } => Constraint::Unconstrained { n: n + count },
        Constraint::Cardinality { n, budget } => Constraint::Cardinality { n: n + count, budget: *budget },
        Constraint::Knapsack(k) => Constraint::Knapsack(k.with_dummies(count)),
        Constraint::Matroid(m) => Constraint::Matroid(pad(m)),
        Constraint::MatroidBase(m) => Constraint::MatroidBase(pad(m)),
    }
}

pub fn augment_with_dummies(inst: &Instance, count: usize) -> Result<Instance> {
    Instance::new(pad_oracle(&inst.oracle, count)?, pad_constraint(&inst.constraint, count))
}

/// Drops every element at index `original_n` or above.
pub fn strip(s: ElementSet, original_n: usize) -> ElementSet {
    s.intersection(ElementSet::full(original_n))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Set(ElementSet),
    Vector(DenseVector),
}

impl Solution {
    pub fn as_set(&self) -> Option<ElementSet> {
        match self {
            Solution::Set(s) => Some(*s),
            Solution::Vector(_) => None,
        }
    }

    pub fn as_vector(&self) -> Option<&DenseVector> {
        match self {
            Solution::Set(_) => None,
            Solution::Vector(v) => Some(v),
        }
    }
}

/// What a solver returns.
///
/// `infeasibility` is `None` only when the region offers no membership check.
#[derive(Clone, Debug, PartialEq)]
pub struct BicriteriaOutcome {
    pub solution: Solution,
    pub value: f64,
    pub infeasibility: Option<f64>,
    pub queries: u64,
    pub seed: u64,
}
