//! Independent EE runs on one network, pooled into a single estimate.

use rayon::prelude::*;

use crate::attributes::AttributeSet;
use crate::estimator::{ee_estimate, EeConfig, ThetaTrace};
use crate::graph::Digraph;
use crate::inference::{estimate_run, pool_runs, PooledEstimate, RunEstimate, DEFAULT_RETAIN_FRACTION};
use crate::model::ModelSpec;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Fit {
    pub traces: Vec<ThetaTrace>,
    pub runs: Vec<RunEstimate>,
    /// `None` when no run converged.
    pub pooled: Option<PooledEstimate>,
}

impl Fit {
    pub fn converged_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.converged).count()
    }
}

/// Runs `n_runs` EE chains in parallel (run `r` uses random stream `r` of
/// `seed`) and pools the converged ones. Results are in run order.
pub fn fit(
    g: &Digraph,
    attrs: &AttributeSet,
    model: &ModelSpec,
    cfg: &EeConfig,
    seed: u64,
    n_runs: usize,
) -> Result<Fit> {
    if n_runs == 0 {
        return Err(Error::Config("number of runs must be positive".into()));
    }
    let traces = (0..n_runs)
        .into_par_iter()
        .map(|r| ee_estimate(g, attrs, model, cfg, seed, r))
        .collect::<Result<Vec<_>>>()?;
    let runs: Vec<RunEstimate> = traces
        .iter()
        .map(|t| estimate_run(t, DEFAULT_RETAIN_FRACTION))
        .collect();
    let pooled = match pool_runs(&runs) {
        Ok(p) => Some(p),
        Err(Error::NoConvergedRuns) => None,
        Err(e) => return Err(e),
    };
    Ok(Fit { traces, runs, pooled })
}
