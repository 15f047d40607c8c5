//! The multilinear extension `F(x) = E[f(R(x))]` and its derivatives.
//!
//! Exact mode tabulates `f` once (2^n queries) and contracts the table one
//! coordinate at a time. Sampled mode averages over random sets; sample `k`
//! of step `s` draws from its own substream `(seed, s, k)`, and every
//! coordinate of a gradient reuses the same draws.

use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::SetFunctionOracle;
use crate::rng::substream;
use crate::set::ElementSet;

pub const EXACT_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvalMode {
    Exact,
    Sampled { samples: usize, seed: u64 },
}

/// `max(1000, ⌈10 n ln n⌉)`.
pub fn default_samples(n: usize) -> usize {
    let nf = n.max(1) as f64;
    ((10.0 * nf * nf.ln()).ceil() as usize).max(1000)
}

/// Anything the continuous double greedy can climb.
pub trait DrObjective: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn partial(&self, x: &[f64], u: usize) -> f64;
}

pub struct MultilinearEvaluator<'a> {
    f: &'a SetFunctionOracle,
    mode: EvalMode,
    table: OnceLock<Vec<f64>>,
}

impl<'a> MultilinearEvaluator<'a> {
    pub fn new(f: &'a SetFunctionOracle, mode: EvalMode) -> Result<Self> {
        if mode == EvalMode::Exact && f.n() > EXACT_LIMIT {
            return Err(Error::TooLarge { n: f.n(), max: EXACT_LIMIT });
        }
        if let EvalMode::Sampled { samples: 0, .. } = mode {
            return Err(Error::InvalidParameter("sampled mode needs at least one sample".into()));
        }
        Ok(Self { f, mode, table: OnceLock::new() })
    }

    pub fn exact(f: &'a SetFunctionOracle) -> Result<Self> {
        Self::new(f, EvalMode::Exact)
    }

    pub fn oracle(&self) -> &SetFunctionOracle {
        self.f
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    fn table(&self) -> &[f64] {
        self.table.get_or_init(|| self.f.function_table())
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: x.len() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.eval_at_step(x, 0)
    }

    pub fn eval_at_step(&self, x: &[f64], step: u64) -> Result<f64> {
        self.check(x)?;
        Ok(match self.mode {
            EvalMode::Exact => contract_all(self.table(), x),
            EvalMode::Sampled { .. } => self.sample_stats(x, step).0,
        })
    }

    /// Sample mean and its standard error; exact mode reports zero error.
    pub fn eval_with_stderr(&self, x: &[f64], step: u64) -> Result<(f64, f64)> {
        self.check(x)?;
        Ok(match self.mode {
            EvalMode::Exact => (contract_all(self.table(), x), 0.0),
            EvalMode::Sampled { .. } => self.sample_stats(x, step),
        })
    }

    fn draw(&self, x: &[f64], step: u64, k: u64) -> ElementSet {
        let EvalMode::Sampled { seed, .. } = self.mode else { unreachable!() };
        let mut rng = substream(seed, "multilinear", step, k);
        (0..x.len()).filter(|&u| rng.gen::<f64>() < x[u]).collect()
    }

    fn sample_stats(&self, x: &[f64], step: u64) -> (f64, f64) {
        let EvalMode::Sampled { samples, .. } = self.mode else { unreachable!() };
        let (mut sum, mut sq) = (0.0, 0.0);
        for k in 0..samples as u64 {
            let v = self.f.value(self.draw(x, step, k));
            sum += v;
            sq += v * v;
        }
        let m = samples as f64;
        let mean = sum / m;
        let var = if samples > 1 { ((sq - m * mean * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
        (mean, (var / m).sqrt())
    }

    /// `∂F/∂x_u = F(x with x_u = 1) - F(x with x_u = 0)`.
    pub fn partial(&self, x: &[f64], u: usize) -> Result<f64> {
        self.check(x)?;
        self.f.ground().check(u)?;
        Ok(match self.mode {
            EvalMode::Exact => contract_except(self.table(), x, u),
            EvalMode::Sampled { samples, .. } => {
                let total: f64 = (0..samples as u64)
                    .map(|k| {
                        let r = self.draw(x, 0, k);
                        self.f.value(r.with(u)) - self.f.value(r.without(u))
                    })
                    .sum();
                total / samples as f64
            }
        })
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.gradient_at_step(x, 0)
    }

    pub fn gradient_at_step(&self, x: &[f64], step: u64) -> Result<Vec<f64>> {
        self.check(x)?;
        let n = self.n();
        Ok(match self.mode {
            EvalMode::Exact => {
                let t = self.table();
                (0..n).map(|u| contract_except(t, x, u)).collect()
            }
            EvalMode::Sampled { samples, .. } => {
                let mut g = vec![0.0; n];
                for k in 0..samples as u64 {
                    let r = self.draw(x, step, k);
                    for (u, gu) in g.iter_mut().enumerate() {
                        *gu += self.f.value(r.with(u)) - self.f.value(r.without(u));
                    }
                }
                g.iter_mut().for_each(|v| *v /= samples as f64);
                g
            }
        })
    }
}

impl DrObjective for MultilinearEvaluator<'_> {
    fn dim(&self) -> usize {
        self.n()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x).expect("dimension checked by caller")
    }
    fn partial(&self, x: &[f64], u: usize) -> f64 {
        MultilinearEvaluator::partial(self, x, u).expect("dimension checked by caller")
    }
}

impl SetFunctionOracle {
    /// `f` on every subset, indexed by bitset. Counts 2^n queries.
    pub fn function_table(&self) -> Vec<f64> {
        let func = self.function();
        let t: Vec<f64> = (0..1u64 << self.n()).map(|b| func.eval(ElementSet::from_bits(b))).collect();
        self.add_queries(t.len() as u64);
        t
    }
}

/// Folds out the top coordinates `len.log2()-1 ..= 0`, returning the scalar.
fn fold_down(mut buf: Vec<f64>, x: &[f64]) -> f64 {
    let mut len = buf.len();
    while len > 1 {
        let half = len / 2;
        let v = half.trailing_zeros() as usize;
        let (p, q) = (x[v], 1.0 - x[v]);
        for s in 0..half {
            buf[s] = q * buf[s] + p * buf[s + half];
        }
        len = half;
    }
    buf[0]
}

fn contract_all(t: &[f64], x: &[f64]) -> f64 {
    if t.len() == 1 {
        return t[0];
    }
    fold_down(t.to_vec(), x)
}

fn contract_except(t: &[f64], x: &[f64], u: usize) -> f64 {
    let n = x.len();
    let keep = 1usize << (u + 1);
    let mut buf = t.to_vec();
    // fold coordinates above u
    let mut len = 1usize << n;
    for v in (u + 1..n).rev() {
        let half = 1usize << v;
        let (p, q) = (x[v], 1.0 - x[v]);
        for s in 0..half {
            buf[s] = q * buf[s] + p * buf[s + half];
        }
        len = half;
    }
    debug_assert_eq!(len, keep);
    let lo = buf[..keep / 2].to_vec();
    let hi = buf[keep / 2..keep].to_vec();
    fold_down(hi, x) - fold_down(lo, x)
}
