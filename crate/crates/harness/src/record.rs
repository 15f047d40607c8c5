//! Run records and their CSV/JSON output.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// What a solver returned, as written to result files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Certificate {
    Set(Vec<usize>),
    Point(Vec<f64>),
}

/// One solver run. Parameters a solver does not take are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub solver: String,
    pub epsilon: f64,
    pub delta: Option<f64>,
    pub horizon: Option<f64>,
    pub dt: Option<f64>,
    /// Monte-Carlo samples per evaluation; `None` means exact evaluation or a combinatorial solver.
    pub samples: Option<usize>,
    pub seed: u64,
    pub value: f64,
    pub certificate: Certificate,
    pub queries: u64,
    /// Brute-force optimum over the instance constraint, when the ground set is small enough.
    pub opt: Option<f64>,
    /// `value / opt`, present only when `opt > 0`.
    pub alpha: Option<f64>,
    pub beta_achieved: Option<f64>,
    pub beta_bound: f64,
    /// The only field that differs between repeated runs.
    pub wall_ms: f64,
}

/// The fixed CSV column set.
#[derive(Serialize)]
struct CsvRow<'a> {
    instance_id: &'a str,
    solver: &'a str,
    epsilon: f64,
    delta: Option<f64>,
    #[serde(rename = "T")]
    horizon: Option<f64>,
    dt: Option<f64>,
    seed: u64,
    value: f64,
    opt: Option<f64>,
    alpha: Option<f64>,
    beta_achieved: Option<f64>,
    beta_bound: f64,
    queries: u64,
    wall_ms: f64,
}

pub const CSV_COLUMNS: [&str; 14] = [
    "instance_id",
    "solver",
    "epsilon",
    "delta",
    "T",
    "dt",
    "seed",
    "value",
    "opt",
    "alpha",
    "beta_achieved",
    "beta_bound",
    "queries",
    "wall_ms",
];

impl<'a> From<&'a RunRecord> for CsvRow<'a> {
    fn from(r: &'a RunRecord) -> Self {
        CsvRow {
            instance_id: &r.instance_id,
            solver: &r.solver,
            epsilon: r.epsilon,
            delta: r.delta,
            horizon: r.horizon,
            dt: r.dt,
            seed: r.seed,
            value: r.value,
            opt: r.opt,
            alpha: r.alpha,
            beta_achieved: r.beta_achieved,
            beta_bound: r.beta_bound,
            queries: r.queries,
            wall_ms: r.wall_ms,
        }
    }
}

pub fn write_csv<W: Write>(out: W, records: &[RunRecord]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for r in records {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut out: W, records: &[RunRecord]) -> Result<(), HarnessError> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)?;
    Ok(())
}
