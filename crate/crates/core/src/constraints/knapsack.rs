use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::set::ElementSet;

/// Prices `p` and budget `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnapsackConstraint {
    prices: Vec<f64>,
    budget: f64,
    oversized: bool,
}

impl KnapsackConstraint {
    /// Requires every single price to fit in the budget.
    pub fn new(prices: Vec<f64>, budget: f64) -> Result<Self> {
        let k = Self::allow_oversized(prices, budget)?;
        if let Some((u, p)) = k.prices.iter().enumerate().find(|(_, &p)| p > budget) {
            return Err(invalid(format!("price {p} of element {u} exceeds the budget {budget}")));
        }
        Ok(Self { oversized: false, ..k })
    }

    /// Like [`new`](Self::new) but admits prices above the budget.
    pub fn allow_oversized(prices: Vec<f64>, budget: f64) -> Result<Self> {
        if !(budget.is_finite() && budget >= 0.0) {
            return Err(invalid(format!("budget must be finite and non-negative, got {budget}")));
        }
        if prices.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(invalid("prices must be finite and non-negative"));
        }
        Ok(Self { prices, budget, oversized: true })
    }

    /// Unit prices, so the budget counts elements.
    pub fn cardinality(n: usize, budget: usize) -> Self {
        Self { prices: vec![1.0; n], budget: budget as f64, oversized: false }
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn n(&self) -> usize {
        self.prices.len()
    }

    pub fn is_oversized_allowed(&self) -> bool {
        self.oversized
    }

    pub fn cost(&self, s: ElementSet) -> f64 {
        s.iter().map(|u| self.prices[u]).sum()
    }

    pub fn total(&self) -> f64 {
        self.prices.iter().sum()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.prices.iter().zip(x).map(|(p, v)| p * v).sum()
    }

    /// `B / ‖p‖₁`.
    pub fn density(&self) -> Result<f64> {
        let total = self.total();
        if total <= 0.0 {
            return Err(invalid("density needs a positive total price"));
        }
        Ok(self.budget / total)
    }

    /// Appends `count` elements priced at the budget.
    pub fn with_dummies(&self, count: usize) -> Self {
        let mut prices = self.prices.clone();
        prices.extend(std::iter::repeat_n(self.budget, count));
        Self { prices, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        let d = |p: &[f64], b| KnapsackConstraint::allow_oversized(p.to_vec(), b).unwrap().density().unwrap();
        assert_eq!(d(&[1.0, 1.0, 1.0, 1.0], 1.0), 0.25);
        assert_eq!(d(&[2.0, 2.0], 2.0), 0.5);
        assert_eq!(d(&[1.0, 3.0], 2.0), 0.5);
        assert!(KnapsackConstraint::allow_oversized(vec![0.0], 1.0).unwrap().density().is_err());
    }

    #[test]
    fn oversized_prices_are_rejected_by_default() {
        assert!(KnapsackConstraint::new(vec![3.0], 2.0).is_err());
        assert!(KnapsackConstraint::allow_oversized(vec![3.0], 2.0).is_ok());
        assert!(KnapsackConstraint::new(vec![-1.0], 2.0).is_err());
    }

    #[test]
    fn dummy_price_is_budget() {
        let k = KnapsackConstraint::new(vec![1.0, 1.0], 2.0).unwrap().with_dummies(1);
        assert_eq!(k.prices(), &[1.0, 1.0, 2.0]);
    }
}
