use crate::constraints::KnapsackConstraint;
use crate::error::{invalid, precondition, Error, Result};
use crate::vector::DenseVector;

/// Pushes `y` toward `½·1` until its price reaches `B`.
///
/// `z = y + max{(B − ⟨p,y⟩)/(B/(2c) − ⟨p,y⟩), 0}·(½·1 − y)`. Needs density
/// `c ≤ 1/2` and `y ≤ ½·1`; denser knapsacks must be complemented first.
pub fn symmetric_equality_postprocess(y: &DenseVector, k: &KnapsackConstraint) -> Result<DenseVector> {
    if y.len() != k.n() {
        return Err(Error::DimensionMismatch { expected: k.n(), got: y.len() });
    }
    let c = k.density()?;
    if c > 0.5 {
        return Err(precondition(format!("density {c} exceeds 1/2")));
    }
    if y.iter().any(|&v| !(0.0..=0.5).contains(&v)) {
        return Err(invalid("every coordinate must lie in [0, 1/2]"));
    }
    let b = k.budget();
    let py = k.dot(y);
    // B/(2c) = ⟨p, ½·1⟩
    let half = 0.5 * k.total();
    let factor = if py >= b || half <= py { 0.0 } else { (b - py) / (half - py) };
    Ok(DenseVector::new(y.iter().map(|&v| v + factor * (0.5 - v)).collect()))
}
