//! Simulation studies: estimate many networks drawn at known parameters and
//! report bias, RMSE, coverage and error rates of the significance test.

use std::path::Path;

use rayon::prelude::*;

use crate::attributes::AttributeSet;
use crate::estimator::EeConfig;
use crate::fit::fit;
use crate::inference::{wilson_interval, Z_95};
use crate::model::{Effect, ModelSpec};
use crate::simulate::{generate_attributes, simulate, AttributeRule, SimSpec};
use crate::{Error, Result};

/// Pooled estimate of one network.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkEstimate {
    pub names: Vec<String>,
    pub theta: Vec<f64>,
    pub se: Vec<f64>,
    pub runs_converged: usize,
}

/// Produces the estimate for network `k` of a study; `Ok(None)` when no
/// converged estimate was found.
pub trait NetworkEstimator: Sync {
    fn estimate(&self, network: usize) -> Result<Option<NetworkEstimate>>;

    /// Runs converged for network `k` when it produced no estimate.
    fn runs_converged_on_failure(&self) -> usize {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorRate {
    /// True value nonzero: share of intervals containing 0.
    FalseNegative,
    /// True value zero: share of intervals excluding 0.
    FalsePositive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EffectResult {
    pub effect: String,
    pub true_value: f64,
    pub bias: f64,
    pub rmse: f64,
    pub rate_kind: ErrorRate,
    /// Error rate and its Wilson 95% interval, in percent.
    pub rate: f64,
    pub rate_lower: f64,
    pub rate_upper: f64,
    /// Percent of 95% intervals containing the true value.
    pub coverage: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyResult {
    pub effects: Vec<EffectResult>,
    pub n_networks: usize,
    /// Networks with a converged estimate.
    pub n_converged: usize,
    /// Mean converged runs per network, over all networks.
    pub mean_runs: f64,
    pub estimates: Vec<Option<NetworkEstimate>>,
}

/// Estimates networks `0..n_networks` in parallel and summarises them
/// against `truth` (name, true value) pairs. Results are reduced in network
/// order.
pub fn run_study<E: NetworkEstimator>(
    truth: &[(String, f64)],
    n_networks: usize,
    estimator: &E,
) -> Result<StudyResult> {
    let estimates = (0..n_networks)
        .into_par_iter()
        .map(|k| estimator.estimate(k))
        .collect::<Result<Vec<_>>>()?;
    summarise(truth, estimates, estimator.runs_converged_on_failure())
}

fn summarise(
    truth: &[(String, f64)],
    estimates: Vec<Option<NetworkEstimate>>,
    runs_on_failure: usize,
) -> Result<StudyResult> {
    let converged: Vec<&NetworkEstimate> = estimates.iter().flatten().collect();
    if converged.is_empty() {
        return Err(Error::Estimation(format!(
            "study failed: none of {} networks produced a converged estimate",
            estimates.len()
        )));
    }
    let n_c = converged.len();
    let mut effects = Vec::with_capacity(truth.len());
    for (name, true_value) in truth {
        let mut bias = 0.0;
        let mut sq = 0.0;
        let mut covered = 0u64;
        let mut errors = 0u64;
        for est in &converged {
            let k = est
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Estimation(format!("estimate has no effect {name}")))?;
            let (theta, se) = (est.theta[k], est.se[k]);
            let (lo, hi) = (theta - Z_95 * se, theta + Z_95 * se);
            let d = theta - true_value;
            bias += d;
            sq += d * d;
            covered += u64::from(lo <= *true_value && *true_value <= hi);
            let contains_zero = lo <= 0.0 && 0.0 <= hi;
            errors += u64::from(if *true_value == 0.0 {
                !contains_zero
            } else {
                contains_zero
            });
        }
        let (lower, upper) = wilson_interval(errors, n_c as u64)?;
        effects.push(EffectResult {
            effect: name.clone(),
            true_value: *true_value,
            bias: bias / n_c as f64,
            rmse: (sq / n_c as f64).sqrt(),
            rate_kind: if *true_value == 0.0 {
                ErrorRate::FalsePositive
            } else {
                ErrorRate::FalseNegative
            },
            rate: 100.0 * errors as f64 / n_c as f64,
            rate_lower: 100.0 * lower,
            rate_upper: 100.0 * upper,
            coverage: 100.0 * covered as f64 / n_c as f64,
        });
    }
    let total_runs: usize = estimates
        .iter()
        .map(|e| e.as_ref().map_or(runs_on_failure, |e| e.runs_converged))
        .sum();
    Ok(StudyResult {
        effects,
        n_networks: estimates.len(),
        n_converged: n_c,
        mean_runs: total_runs as f64 / estimates.len() as f64,
        estimates,
    })
}

/// Study design backed by the simulator and EE estimation.
///
/// The generating model holds the effects of `effects` with nonzero value;
/// the estimated model holds all of them, so a zero value makes a zero-effect
/// (Type I error) study for that effect.
#[derive(Clone, Debug)]
pub struct EeStudy {
    pub n: usize,
    /// Effect specs with true values, e.g. `("Sender(b)", 1.5)`.
    pub effects: Vec<(String, f64)>,
    pub attribute_rule: AttributeRule,
    pub binary_name: String,
    pub categorical_name: String,
    pub burnin: u64,
    pub ee: EeConfig,
    pub n_runs: usize,
    pub seed: u64,
}

impl EeStudy {
    pub fn attributes(&self, network: usize) -> Result<AttributeSet> {
        generate_attributes(
            self.n,
            &self.attribute_rule,
            &self.binary_name,
            &self.categorical_name,
            self.seed,
            network as u64,
        )
    }

    /// Estimated model, and the generating model with its parameter values.
    pub fn models(&self, attrs: &AttributeSet) -> Result<(ModelSpec, ModelSpec, Vec<f64>)> {
        let mut estimated = ModelSpec::new();
        let mut generating = ModelSpec::new();
        let mut theta = Vec::new();
        for (spec, value) in &self.effects {
            let e = Effect::parse(spec, attrs)?;
            if *value != 0.0 {
                generating.push(e.clone())?;
                theta.push(*value);
            }
            estimated.push(e)?;
        }
        Ok((estimated, generating, theta))
    }

    /// `(name, true value)` of every estimated parameter.
    pub fn truth(&self) -> Result<Vec<(String, f64)>> {
        let attrs = self.attributes(0)?;
        let (estimated, _, _) = self.models(&attrs)?;
        let mut truth: Vec<(String, f64)> = estimated
            .names()
            .into_iter()
            .zip(self.effects.iter().map(|e| e.1))
            .collect();
        if self.ee.sampler == crate::sampler::SamplerKind::Ifd {
            truth.retain(|(n, _)| n != "Arc");
            let arc = self.effects.iter().find(|(s, _)| s == "Arc").map_or(0.0, |e| e.1);
            truth.insert(0, ("Arc".into(), arc));
        }
        Ok(truth)
    }

    /// Simulated network `k` with its attributes.
    pub fn network(&self, k: usize) -> Result<(crate::graph::Digraph, AttributeSet)> {
        let attrs = self.attributes(k)?;
        let (_, generating, theta) = self.models(&attrs)?;
        let spec = SimSpec {
            n: self.n,
            model: generating,
            theta,
            burnin: self.burnin,
            interval: 1,
            n_samples: 1,
            seed: self.seed.wrapping_add(k as u64),
        };
        let mut sim = simulate(&spec, &attrs)?;
        Ok((sim.graphs.pop().expect("one sample"), attrs))
    }
}

impl NetworkEstimator for EeStudy {
    fn estimate(&self, network: usize) -> Result<Option<NetworkEstimate>> {
        let (g, attrs) = self.network(network)?;
        let (mut estimated, _, _) = self.models(&attrs)?;
        if self.ee.sampler == crate::sampler::SamplerKind::Ifd {
            estimated = estimated.without(&["Arc"]);
        }
        let f = fit(
            &g,
            &attrs,
            &estimated,
            &self.ee,
            self.seed.wrapping_add(network as u64),
            self.n_runs,
        )?;
        let runs_converged = f.converged_runs();
        log::info!("network {network}: {runs_converged} of {} runs converged", self.n_runs);
        Ok(f.pooled.map(|p| NetworkEstimate {
            names: p.names,
            theta: p.theta,
            se: p.se,
            runs_converged,
        }))
    }
}

/// `study_report.csv`; `estim.`, `lower` and `upper` are the false negative
/// rate for nonzero true values and the false positive rate for zero ones.
pub fn write_study_report(result: &StudyResult, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "Effect",
        "Bias",
        "RMSE",
        "estim.",
        "lower",
        "upper",
        "in C.I. (%)",
        "N_C",
        "mean runs",
    ])?;
    for e in &result.effects {
        w.write_record([
            e.effect.clone(),
            format!("{:.4}", e.bias),
            format!("{:.4}", e.rmse),
            format!("{:.0}", e.rate),
            format!("{:.0}", e.rate_lower),
            format!("{:.0}", e.rate_upper),
            format!("{:.0}", e.coverage),
            result.n_converged.to_string(),
            format!("{:.2}", result.mean_runs),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
