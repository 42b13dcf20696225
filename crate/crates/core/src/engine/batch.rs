use rayon::prelude::*;
use thiserror::Error;

use super::forest::{generate_forest_scenario, ForestError};
use super::scenario::{PursuerPolicy, Scenario, ScenarioError};
use super::sim::{run_simulation, Outcome, SimResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BatchError {
    #[error("a batch needs at least one trial")]
    NoTrials,
    #[error("trial {trial} (seed {seed}): {source}")]
    Forest {
        trial: usize,
        seed: u64,
        source: ForestError,
    },
    #[error("trial {trial} (seed {seed}): {source}")]
    Scenario {
        trial: usize,
        seed: u64,
        source: ScenarioError,
    },
}

/// Per-trial summary kept by a batch (traces are dropped).
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSummary {
    pub seed: u64,
    pub outcome: Outcome,
    pub t_e: Option<f64>,
    pub t_c: Option<f64>,
    pub d_mo: f64,
    pub d_mp: f64,
    pub safety_violations: usize,
    pub infeasible_ticks: usize,
    pub ticks: usize,
}

impl From<&SimResult> for TrialSummary {
    fn from(r: &SimResult) -> Self {
        Self {
            seed: r.scenario.seed,
            outcome: r.outcome,
            t_e: r.t_e,
            t_c: r.t_c,
            d_mo: r.d_mo,
            d_mp: r.d_mp,
            safety_violations: r.safety_violations,
            infeasible_ticks: r.infeasible_ticks,
            ticks: r.trace.len(),
        }
    }
}

/// Capture-time quantiles over successful trials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    /// Linear-interpolation quantiles; `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Some(Self {
            min: v[0],
            q25: q(0.25),
            median: q(0.5),
            q75: q(0.75),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchStats {
    pub policy: PursuerPolicy,
    pub trials: usize,
    pub captures: usize,
    pub success_rate: f64,
    pub t_c: Option<Quantiles>,
    /// Mean of the finite per-trial `d_mo` values; `+∞` if none.
    pub mean_d_mo: f64,
    pub mean_d_mp: f64,
    pub min_d_mo: f64,
    pub min_d_mp: f64,
    /// Captured trials whose encirclement came strictly first.
    pub encircled_first: usize,
    pub safety_violations: usize,
    pub results: Vec<TrialSummary>,
}

fn finite_mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values
        .filter(|v| v.is_finite())
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::INFINITY
    } else {
        sum / n as f64
    }
}

impl BatchStats {
    pub fn from_results(policy: PursuerPolicy, results: Vec<TrialSummary>) -> Self {
        let trials = results.len();
        let captured: Vec<&TrialSummary> = results
            .iter()
            .filter(|r| r.outcome == Outcome::Captured)
            .collect();
        let captures = captured.len();
        let t_c: Vec<f64> = captured.iter().filter_map(|r| r.t_c).collect();
        let encircled_first = captured
            .iter()
            .filter(|r| matches!((r.t_e, r.t_c), (Some(e), Some(c)) if e < c))
            .count();
        Self {
            policy,
            trials,
            captures,
            success_rate: if trials == 0 {
                0.0
            } else {
                captures as f64 / trials as f64
            },
            t_c: Quantiles::of(&t_c),
            mean_d_mo: finite_mean(results.iter().map(|r| r.d_mo)),
            mean_d_mp: finite_mean(results.iter().map(|r| r.d_mp)),
            min_d_mo: results.iter().map(|r| r.d_mo).fold(f64::INFINITY, f64::min),
            min_d_mp: results.iter().map(|r| r.d_mp).fold(f64::INFINITY, f64::min),
            encircled_first,
            safety_violations: results.iter().map(|r| r.safety_violations).sum(),
            results,
        }
    }
}

/// Scenario for trial `index`: a fresh forest draw when the template has
/// forest parameters, otherwise the template itself. Either way the trial
/// seed is `base_seed + index`.
pub fn trial_scenario(
    base: &Scenario,
    base_seed: u64,
    index: usize,
    policy: PursuerPolicy,
) -> Result<Scenario, BatchError> {
    let seed = base_seed.wrapping_add(index as u64);
    let mut s = match &base.forest {
        Some(params) => {
            generate_forest_scenario(base, params, seed).map_err(|source| BatchError::Forest {
                trial: index,
                seed,
                source,
            })?
        }
        None => base.clone(),
    };
    s.seed = seed;
    s.pursuer_policy = policy;
    Ok(s)
}

/// Runs `trials` independent trials in parallel. Results are in trial
/// order and do not depend on the thread count.
pub fn run_batch(
    base: &Scenario,
    trials: usize,
    base_seed: u64,
    policy: PursuerPolicy,
) -> Result<BatchStats, BatchError> {
    if trials == 0 {
        return Err(BatchError::NoTrials);
    }
    let results = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = trial_scenario(base, base_seed, i, policy)?;
            let seed = s.seed;
            run_simulation(&s)
                .map(|r| TrialSummary::from(&r))
                .map_err(|source| BatchError::Scenario {
                    trial: i,
                    seed,
                    source,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BatchStats::from_results(policy, results))
}
