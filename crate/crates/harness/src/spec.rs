//! JSON instance files.

use std::fmt;
use std::str::FromStr;

use bicriteria::functions::FunctionFamily;
use bicriteria::{Constraint, Instance, KnapsackConstraint, Matroid};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

/// A non-negative decimal kept as written, e.g. `"2.5"`.
///
/// Prices and budgets are stored this way so a file means the same thing on
/// every platform and re-serializes to the same bytes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Decimal(String);

impl Decimal {
    pub fn value(&self) -> f64 {
        self.0.parse().expect("validated on construction")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_decimal(s: &str) -> bool {
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    digits(int) && frac.is_none_or(digits)
}

impl FromStr for Decimal {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if is_decimal(s) {
            Ok(Decimal(s.to_string()))
        } else {
            Err(HarnessError::Spec(format!("`{s}` is not a non-negative decimal")))
        }
    }
}

impl TryFrom<String> for Decimal {
    type Error = HarnessError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Decimal> for String {
    fn from(d: Decimal) -> String {
        d.0
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatroidSpec {
    Uniform { rank: usize },
    /// `parts[u]` is the part of element `u`.
    Partition { parts: Vec<usize>, limits: Vec<usize> },
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
}

impl MatroidSpec {
    pub fn build(&self, n: usize) -> Result<Matroid, HarnessError> {
        let m = match self {
            MatroidSpec::Uniform { rank } => Matroid::uniform(n, *rank),
            MatroidSpec::Partition { parts, limits } => Matroid::partition(parts.clone(), limits.clone())?,
            MatroidSpec::Graphic { vertices, edges } => Matroid::graphic(*vertices, edges.clone())?,
        };
        if m.n() != n {
            return Err(HarnessError::Spec(format!("matroid has {} elements, instance has {n}", m.n())));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintSpec {
    /// Whatever constraint the function family comes with.
    Native,
    Unconstrained,
    Cardinality { budget: usize },
    /// `oversized` admits prices above the budget.
    Knapsack { prices: Vec<Decimal>, budget: Decimal, oversized: bool },
    Matroid { matroid: MatroidSpec },
    MatroidBase { matroid: MatroidSpec },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub schema_version: u32,
    pub id: String,
    pub n: usize,
    pub function: FunctionFamily,
    pub constraint: ConstraintSpec,
    /// Drives every random choice made while instantiating the family.
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(id: impl Into<String>, function: FunctionFamily, constraint: ConstraintSpec, seed: u64) -> Self {
        let n = function.ground_size();
        Self { schema_version: SCHEMA_VERSION, id: id.into(), n, function, constraint, seed }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, HarnessError> {
        let spec: Self = serde_json::from_str(s)?;
        if spec.schema_version != SCHEMA_VERSION {
            return Err(HarnessError::Spec(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                spec.schema_version
            )));
        }
        Ok(spec)
    }

    pub fn build(&self) -> Result<Instance, HarnessError> {
        if self.function.ground_size() != self.n {
            return Err(HarnessError::Spec(format!(
                "family has {} elements but n = {}",
                self.function.ground_size(),
                self.n
            )));
        }
        let (oracle, native) = self.function.instantiate(self.seed)?;
        let n = self.n;
        let constraint = match &self.constraint {
            ConstraintSpec::Native => native,
            ConstraintSpec::Unconstrained => Constraint::Unconstrained { n },
            ConstraintSpec::Cardinality { budget } => Constraint::Cardinality { n, budget: *budget },
            ConstraintSpec::Knapsack { prices, budget, oversized } => {
                let p: Vec<f64> = prices.iter().map(Decimal::value).collect();
                let k = if *oversized {
                    KnapsackConstraint::allow_oversized(p, budget.value())?
                } else {
                    KnapsackConstraint::new(p, budget.value())?
                };
                Constraint::Knapsack(k)
            }
            ConstraintSpec::Matroid { matroid } => Constraint::Matroid(matroid.build(n)?),
            ConstraintSpec::MatroidBase { matroid } => Constraint::MatroidBase(matroid.build(n)?),
        };
        Ok(Instance::new(oracle, constraint)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bicriteria::functions::random_coverage;

    #[test]
    fn decimals() {
        for ok in ["0", "2", "2.5", "10.125", "007"] {
            assert_eq!(ok.parse::<Decimal>().unwrap().as_str(), ok);
        }
        for bad in ["", "-1", "1.", ".5", "1e3", "1.2.3", " 1", "NaN"] {
            assert!(bad.parse::<Decimal>().is_err(), "{bad}");
        }
        assert_eq!("2.5".parse::<Decimal>().unwrap().value(), 2.5);
    }

    #[test]
    fn knapsack_file_round_trip() {
        let spec = InstanceSpec::new(
            "cov-1",
            random_coverage(5, 6, 1),
            ConstraintSpec::Knapsack {
                prices: ["1", "2.5", "0.5", "1", "2"].iter().map(|s| s.parse().unwrap()).collect(),
                budget: "3".parse().unwrap(),
                oversized: false,
            },
            9,
        );
        let json = spec.to_json();
        let back = InstanceSpec::from_json(&json).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.to_json(), json);
        let inst = back.build().unwrap();
        match inst.constraint {
            Constraint::Knapsack(k) => assert_eq!(k.prices(), &[1.0, 2.5, 0.5, 1.0, 2.0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_files() {
        let mut spec = InstanceSpec::new("x", random_coverage(4, 4, 0), ConstraintSpec::Cardinality { budget: 1 }, 0);
        spec.n = 5;
        assert!(spec.build().is_err());
        spec.n = 4;
        spec.schema_version = 99;
        assert!(InstanceSpec::from_json(&spec.to_json()).is_err());
        let json = r#"{"schema_version":1,"id":"a","n":1,"function":{"family":"modular","weights":[1.0]},
            "constraint":{"kind":"knapsack","prices":["-1"],"budget":"1","oversized":false},"seed":0}"#;
        assert!(InstanceSpec::from_json(json).is_err());
        let json = r#"{"schema_version":1,"id":"a","n":1,"function":{"family":"modular","weights":[1.0]},
            "constraint":{"kind":"cardinality","budget":1},"seed":0,"extra":true}"#;
        assert!(InstanceSpec::from_json(json).is_err());
        let spec = InstanceSpec::new(
            "m",
            random_coverage(3, 4, 0),
            ConstraintSpec::Matroid { matroid: MatroidSpec::Partition { parts: vec![0, 1], limits: vec![1, 1] } },
            0,
        );
        assert!(spec.build().is_err());
    }
}
