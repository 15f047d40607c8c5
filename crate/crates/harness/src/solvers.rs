//! Solver registry and single runs.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use bicriteria::constraints::rho;
use bicriteria::continuous::{
    continuous_double_greedy_knapsack, general_bicriteria, mcg_multi_opt, mcg_non_downclosed,
    measured_continuous_greedy, more_mcg, ContinuousRun,
};
use bicriteria::discrete::{
    combinatorial_general, density_greedy_monotone, density_greedy_symmetric, double_greedy_unconstrained,
    iterative_matroid_greedy, warmup_cardinality, DoubleGreedyMode,
};
use bicriteria::exhaustive::{brute_opt, BRUTE_OPT_LIMIT};
use bicriteria::multilinear::{default_samples, EXACT_LIMIT};
use bicriteria::{
    BicriteriaOutcome, Constraint, EvalMode, Instance, KnapsackConstraint, Matroid, MultilinearEvaluator, Solution,
};

use crate::record::{Certificate, RunRecord};
use crate::spec::InstanceSpec;
use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverId {
    DensityGreedyMonotone,
    IterativeMatroidGreedy,
    WarmupCardinality,
    CombinatorialGeneral,
    DensityGreedySymmetric,
    DoubleGreedy,
    Mcg,
    McgNonDownclosed,
    MoreMcg,
    McgMultiOpt,
    ContinuousDoubleGreedy,
    GeneralBicriteria,
}

impl SolverId {
    pub const ALL: [SolverId; 12] = [
        SolverId::DensityGreedyMonotone,
        SolverId::IterativeMatroidGreedy,
        SolverId::WarmupCardinality,
        SolverId::CombinatorialGeneral,
        SolverId::DensityGreedySymmetric,
        SolverId::DoubleGreedy,
        SolverId::Mcg,
        SolverId::McgNonDownclosed,
        SolverId::MoreMcg,
        SolverId::McgMultiOpt,
        SolverId::ContinuousDoubleGreedy,
        SolverId::GeneralBicriteria,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverId::DensityGreedyMonotone => "density_greedy_monotone",
            SolverId::IterativeMatroidGreedy => "iterative_matroid_greedy",
            SolverId::WarmupCardinality => "warmup_cardinality",
            SolverId::CombinatorialGeneral => "combinatorial_general",
            SolverId::DensityGreedySymmetric => "density_greedy_symmetric",
            SolverId::DoubleGreedy => "double_greedy",
            SolverId::Mcg => "mcg",
            SolverId::McgNonDownclosed => "mcg_non_downclosed",
            SolverId::MoreMcg => "more_mcg",
            SolverId::McgMultiOpt => "mcg_multi_opt",
            SolverId::ContinuousDoubleGreedy => "continuous_double_greedy",
            SolverId::GeneralBicriteria => "general_bicriteria",
        }
    }

    pub fn is_continuous(self) -> bool {
        matches!(
            self,
            SolverId::Mcg
                | SolverId::McgNonDownclosed
                | SolverId::MoreMcg
                | SolverId::McgMultiOpt
                | SolverId::ContinuousDoubleGreedy
                | SolverId::GeneralBicriteria
        )
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverId {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SolverId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| HarnessError::UnknownSolver(s.to_string()))
    }
}

/// Solver parameters. Unset optional values fall back to the defaults
/// documented on each field; the record always shows what was used.
#[derive(Clone, Debug, PartialEq)]
pub struct RunParams {
    pub epsilon: f64,
    /// Removal slack of the symmetric greedy. Default `0.05`.
    pub delta: Option<f64>,
    /// Horizon `T` of the continuous solvers. Defaults to the horizon the
    /// solver's guarantee is stated for at this `ε`.
    pub horizon: Option<f64>,
    /// Euler step. Default `T/200`.
    pub step: Option<f64>,
    /// Monte-Carlo samples; `None` evaluates exactly when `n ≤ 24`.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Number of optima assumed by `mcg_multi_opt`. Default 2.
    pub ell: Option<usize>,
    pub completion: DoubleGreedyMode,
    /// Skip the brute-force optimum even when it is affordable.
    pub skip_opt: bool,
}

impl RunParams {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            delta: None,
            horizon: None,
            step: None,
            samples: None,
            seed,
            ell: None,
            completion: DoubleGreedyMode::Auto,
            skip_opt: false,
        }
    }
}

const DEFAULT_DELTA: f64 = 0.05;
const DEFAULT_STEPS: f64 = 200.0;

fn knapsack_of(c: &Constraint, solver: SolverId) -> Result<KnapsackConstraint, HarnessError> {
    match c {
        Constraint::Knapsack(k) => Ok(k.clone()),
        Constraint::Cardinality { n, budget } => Ok(KnapsackConstraint::cardinality(*n, *budget)),
        other => Err(unsupported(solver, other)),
    }
}

fn matroid_of(c: &Constraint, solver: SolverId) -> Result<Matroid, HarnessError> {
    match c {
        Constraint::Matroid(m) => Ok(m.clone()),
        Constraint::Cardinality { n, budget } => Ok(Matroid::uniform(*n, *budget)),
        other => Err(unsupported(solver, other)),
    }
}

fn unsupported(solver: SolverId, c: &Constraint) -> HarnessError {
    HarnessError::Unsupported(format!("{solver} does not take {c:?}"))
}

fn ell(eps: f64) -> f64 {
    (1.0 / (2.0 * eps)).ceil()
}

fn default_horizon(solver: SolverId, eps: f64) -> f64 {
    match solver {
        SolverId::MoreMcg => 0.5 * (1.0 / (2.0 * eps)).ln(),
        SolverId::McgMultiOpt => 2.0 * std::f64::consts::LN_2,
        SolverId::ContinuousDoubleGreedy => 1.0,
        SolverId::GeneralBicriteria => 2.0,
        SolverId::McgNonDownclosed => (1.0 / eps).ln().max(1.0),
        _ => (1.0 / eps).ln(),
    }
}

struct Ran {
    outcome: BicriteriaOutcome,
    horizon: Option<f64>,
    dt: Option<f64>,
    samples: Option<usize>,
    delta: Option<f64>,
    beta_bound: f64,
}

fn from_continuous(run: ContinuousRun, samples: Option<usize>, beta_bound: f64) -> Ran {
    Ran { horizon: Some(run.horizon), dt: Some(run.dt), samples, delta: None, beta_bound, outcome: run.outcome }
}

fn dispatch(inst: &Instance, solver: SolverId, p: &RunParams) -> Result<Ran, HarnessError> {
    let f = &inst.oracle;
    let c = &inst.constraint;
    let eps = p.epsilon;
    let discrete = |outcome: BicriteriaOutcome, beta_bound: f64| Ran {
        outcome,
        horizon: None,
        dt: None,
        samples: None,
        delta: None,
        beta_bound,
    };
    if !solver.is_continuous() {
        return Ok(match solver {
            SolverId::DensityGreedyMonotone => {
                let run = density_greedy_monotone(f, &knapsack_of(c, solver)?, eps)?;
                discrete(run.outcome, 1.0 + (1.0 / eps).ln())
            }
            SolverId::IterativeMatroidGreedy => {
                let run = iterative_matroid_greedy(f, &matroid_of(c, solver)?, eps)?;
                discrete(run.outcome, (1.0 / eps).log2().ceil().max(1.0))
            }
            SolverId::WarmupCardinality => {
                let Constraint::Cardinality { budget, .. } = c else { return Err(unsupported(solver, c)) };
                let run = warmup_cardinality(f, *budget, eps, p.seed, p.completion)?;
                discrete(run.outcome, 2.0 * ell(eps))
            }
            SolverId::CombinatorialGeneral => {
                let run = combinatorial_general(f, c, eps, p.seed, p.completion)?;
                let bound = match c {
                    Constraint::Knapsack(_) => 3.0 * ell(eps),
                    _ => 2.0 * ell(eps),
                };
                discrete(run.outcome, bound)
            }
            SolverId::DensityGreedySymmetric => {
                let delta = p.delta.unwrap_or(DEFAULT_DELTA);
                let run = density_greedy_symmetric(f, &knapsack_of(c, solver)?, eps, delta)?;
                let mut ran = discrete(run.outcome, 1.0 + 0.5 * (1.0 / (2.0 * eps)).ln());
                ran.delta = Some(delta);
                ran
            }
            SolverId::DoubleGreedy => {
                let Constraint::Unconstrained { .. } = c else { return Err(unsupported(solver, c)) };
                let q0 = f.queries();
                let (s, value) = double_greedy_unconstrained(f, p.seed);
                let outcome = BicriteriaOutcome {
                    solution: Solution::Set(s),
                    value,
                    infeasibility: c.infeasibility_ratio(s).ok(),
                    queries: f.queries() - q0,
                    seed: p.seed,
                };
                discrete(outcome, 1.0)
            }
            _ => unreachable!("continuous solvers handled below"),
        });
    }

    let horizon = p.horizon.unwrap_or_else(|| default_horizon(solver, eps));
    let dt = p.step.unwrap_or(if horizon > 0.0 { horizon / DEFAULT_STEPS } else { 1.0 });
    let mode = match p.samples {
        Some(samples) => EvalMode::Sampled { samples, seed: p.seed },
        None if f.n() <= EXACT_LIMIT => EvalMode::Exact,
        None => EvalMode::Sampled { samples: default_samples(f.n()), seed: p.seed },
    };
    let samples = match mode {
        EvalMode::Exact => None,
        EvalMode::Sampled { samples, .. } => Some(samples),
    };
    let ev = MultilinearEvaluator::new(f, mode)?;
    let region = c.region();
    Ok(match solver {
        SolverId::Mcg => from_continuous(measured_continuous_greedy(&ev, &region, horizon, dt)?, samples, horizon),
        SolverId::McgNonDownclosed => {
            from_continuous(mcg_non_downclosed(&ev, &region, horizon, dt)?, samples, horizon)
        }
        SolverId::MoreMcg => {
            let bound = match c {
                Constraint::Knapsack(k) => {
                    let d = k.density()?;
                    (1.0 - (-2.0 * horizon * d).exp()) / (2.0 * d)
                }
                _ => horizon,
            };
            from_continuous(more_mcg(&ev, &region, horizon, dt)?, samples, bound)
        }
        SolverId::McgMultiOpt => {
            let l = p.ell.unwrap_or(2);
            from_continuous(mcg_multi_opt(&ev, &region, horizon, dt, l)?, samples, horizon)
        }
        SolverId::ContinuousDoubleGreedy => {
            if p.horizon.is_some_and(|t| t != 1.0) {
                return Err(HarnessError::Unsupported(format!("{solver} always runs to T = 1")));
            }
            let k = knapsack_of(c, solver)?;
            let d = k.density()?;
            let bound = if d >= 1.0 { f64::INFINITY } else { rho(d, eps)? };
            from_continuous(continuous_double_greedy_knapsack(&ev, &k, eps, dt)?, samples, bound)
        }
        SolverId::GeneralBicriteria => {
            if p.horizon.is_some_and(|t| t != 2.0) {
                return Err(HarnessError::Unsupported(format!("{solver} always runs guided passes to T = 2")));
            }
            let bound = 2.0 * (1.0 / eps + 2.0);
            from_continuous(general_bicriteria(&ev, &region, eps, dt)?, samples, bound)
        }
        _ => unreachable!("discrete solvers handled above"),
    })
}

/// Runs `solver` on the instance described by `spec`.
///
/// Everything except `wall_ms` is a function of the inputs.
pub fn run(spec: &InstanceSpec, solver: &str, params: &RunParams) -> Result<RunRecord, HarnessError> {
    let solver: SolverId = solver.parse()?;
    let inst = spec.build()?;
    let start = Instant::now();
    let ran = dispatch(&inst, solver, params)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let opt = if params.skip_opt || inst.n() > BRUTE_OPT_LIMIT {
        None
    } else {
        Some(brute_opt(&inst.oracle.fresh(), &inst.constraint)?.1)
    };
    let value = ran.outcome.value;
    let certificate = match &ran.outcome.solution {
        Solution::Set(s) => Certificate::Set(s.to_vec()),
        Solution::Vector(v) => Certificate::Point(v.iter().copied().collect()),
    };
    Ok(RunRecord {
        instance_id: spec.id.clone(),
        solver: solver.name().to_string(),
        epsilon: params.epsilon,
        delta: ran.delta,
        horizon: ran.horizon,
        dt: ran.dt,
        samples: ran.samples,
        seed: params.seed,
        value,
        certificate,
        queries: ran.outcome.queries,
        opt,
        alpha: opt.filter(|&o| o > 0.0).map(|o| value / o),
        beta_achieved: ran.outcome.infeasibility,
        beta_bound: ran.beta_bound,
        wall_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{ConstraintSpec, MatroidSpec};
    use bicriteria::functions::{random_directed_cut, random_modular, random_undirected_cut};

    fn modular_knapsack() -> InstanceSpec {
        InstanceSpec::new(
            "mod-0",
            random_modular(6, 4),
            ConstraintSpec::Knapsack {
                prices: ["1", "2", "1.5", "0.5", "1", "2"].iter().map(|s| s.parse().unwrap()).collect(),
                budget: "3".parse().unwrap(),
                oversized: false,
            },
            0,
        )
    }

    fn strip_time(mut r: RunRecord) -> RunRecord {
        r.wall_ms = 0.0;
        r
    }

    #[test]
    fn names_round_trip() {
        for id in SolverId::ALL {
            assert_eq!(id.name().parse::<SolverId>().unwrap(), id);
        }
        assert!(matches!("nonexistent".parse::<SolverId>(), Err(HarnessError::UnknownSolver(_))));
    }

    #[test]
    fn monotone_greedy_record() {
        let spec = modular_knapsack();
        for eps in [0.5, 0.25, 0.1] {
            let r = run(&spec, "density_greedy_monotone", &RunParams::new(eps, 0)).unwrap();
            assert!(r.alpha.unwrap() >= 1.0 - eps);
            assert!(r.beta_achieved.unwrap() <= r.beta_bound);
            assert_eq!(r.horizon, None);
        }
        assert!(run(&spec, "nonexistent", &RunParams::new(0.5, 0)).is_err());
    }

    #[test]
    fn repeated_runs_agree() {
        let spec = InstanceSpec::new("dc", random_directed_cut(7, 0.4, 2), ConstraintSpec::Cardinality { budget: 2 }, 0);
        for solver in ["warmup_cardinality", "combinatorial_general", "mcg_multi_opt", "general_bicriteria"] {
            let p = RunParams::new(0.25, 11);
            let a = strip_time(run(&spec, solver, &p).unwrap());
            let b = strip_time(run(&spec, solver, &p).unwrap());
            assert_eq!(a, b, "{solver}");
        }
        let mut p = RunParams::new(0.25, 5);
        p.samples = Some(300);
        p.horizon = Some(1.0);
        let a = strip_time(run(&spec, "mcg_multi_opt", &p).unwrap());
        let b = strip_time(run(&spec, "mcg_multi_opt", &p).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.samples, Some(300));
    }

    #[test]
    fn every_solver_runs_somewhere() {
        let cut = InstanceSpec::new("uc", random_undirected_cut(6, 0.5, 1), ConstraintSpec::Cardinality { budget: 2 }, 0);
        let free = InstanceSpec::new("dc", random_directed_cut(6, 0.5, 1), ConstraintSpec::Unconstrained, 0);
        let base = InstanceSpec::new(
            "base",
            random_modular(4, 1),
            ConstraintSpec::MatroidBase { matroid: MatroidSpec::Partition { parts: vec![0, 0, 1, 1], limits: vec![1, 1] } },
            0,
        );
        let cases = [
            (&modular_knapsack(), "density_greedy_monotone"),
            (&modular_knapsack(), "iterative_matroid_greedy"),
            (&cut, "warmup_cardinality"),
            (&modular_knapsack(), "combinatorial_general"),
            (&cut, "density_greedy_symmetric"),
            (&free, "double_greedy"),
            (&modular_knapsack(), "mcg"),
            (&base, "mcg_non_downclosed"),
            (&cut, "more_mcg"),
            (&cut, "mcg_multi_opt"),
            (&modular_knapsack(), "continuous_double_greedy"),
            (&cut, "general_bicriteria"),
        ];
        for (spec, solver) in cases {
            let res = run(spec, solver, &RunParams::new(0.25, 1));
            if solver == "iterative_matroid_greedy" {
                assert!(matches!(res, Err(HarnessError::Unsupported(_))));
                continue;
            }
            let r = res.unwrap_or_else(|e| panic!("{solver}: {e}"));
            assert!(r.value.is_finite());
            if let Some(b) = r.beta_achieved {
                assert!(b <= r.beta_bound + 1e-6, "{solver}: {b} > {}", r.beta_bound);
            }
        }
    }
}
