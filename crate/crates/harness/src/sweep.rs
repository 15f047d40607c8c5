//! The ratio-versus-infeasibility curve of the multi-optimum greedy.

use std::io::Write;

use bicriteria::constraints::multi_opt_bound;
use bicriteria::continuous::mcg_multi_opt;
use bicriteria::functions::DirectedCut;
use bicriteria::{MultilinearEvaluator, Region, SetFunctionOracle};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub ell: usize,
    pub beta: f64,
    /// `ℓ(e^{−β/ℓ} − e^{−β})/(ℓ−1)`.
    pub analytic: f64,
    /// `F(y(β))` of the solver on [`disjoint_optima`], whose optimum is 1.
    pub empirical: f64,
}

/// `ℓ` disjoint arcs `2j → 2j+1` under a cardinality budget of one.
///
/// Every arc tail alone is optimal with value 1, so the instance has `ℓ`
/// pairwise disjoint optima.
pub fn disjoint_optima(ell: usize) -> (SetFunctionOracle, Region) {
    let n = 2 * ell;
    let arcs = (0..ell).map(|j| (2 * j, 2 * j + 1, 1.0)).collect();
    let f = SetFunctionOracle::new(DirectedCut { n, arcs }).expect("small ground set");
    (f, Region::Cardinality { n, budget: 1.0 })
}

/// Analytic curve and solver runs for every `(ℓ, β)` pair, `steps` Euler steps per run.
pub fn sweep_curve(ells: &[usize], betas: &[f64], steps: usize) -> Result<Vec<SweepPoint>, HarnessError> {
    if let Some(&l) = ells.iter().find(|&&l| l < 2) {
        return Err(HarnessError::Spec(format!("ℓ must be at least 2, got {l}")));
    }
    if let Some(b) = betas.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
        return Err(HarnessError::Spec(format!("β grid must be finite and non-negative, got {b}")));
    }
    if steps == 0 {
        return Err(HarnessError::Spec("need at least one step per run".into()));
    }
    let jobs: Vec<(usize, f64)> = ells.iter().flat_map(|&l| betas.iter().map(move |&b| (l, b))).collect();
    jobs.into_par_iter()
        .map(|(ell, beta)| {
            let analytic = multi_opt_bound(ell, beta)?;
            let (f, region) = disjoint_optima(ell);
            let ev = MultilinearEvaluator::exact(&f)?;
            let empirical = if beta == 0.0 {
                ev.eval(&vec![0.0; f.n()])?
            } else {
                mcg_multi_opt(&ev, &region, beta, beta / steps as f64, ell)?.outcome.value
            };
            Ok(SweepPoint { ell, beta, analytic, empirical })
        })
        .collect()
}

pub fn write_csv<W: Write>(out: W, points: &[SweepPoint]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_values() {
        let pts = sweep_curve(&[2, 3], &[0.0, 1.0, 2.0 * std::f64::consts::LN_2], 100).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0].analytic, 0.0);
        assert_eq!(pts[0].empirical, 0.0);
        assert!((pts[2].analytic - 0.5).abs() < 1e-15);
        // 3(e^{-1/3} - e^{-1})/2 = 1.5 (0.7165313 - 0.3678794)
        assert!((pts[4].analytic - 0.5229778).abs() < 1e-6);
        for p in &pts {
            assert!(p.empirical >= p.analytic - 1e-2, "{p:?}");
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(sweep_curve(&[1], &[1.0], 10).is_err());
        assert!(sweep_curve(&[2], &[f64::NAN], 10).is_err());
        assert!(sweep_curve(&[2], &[1.0], 0).is_err());
    }
}
