//! Point estimates, standard errors, pooling across runs, and convergence
//! classification.
//!
//! The covariance of a run's estimate is the sum of the MCMC error of the
//! mean of the θ chain (multivariate batch means) and the inverse of the
//! covariance of the simulated statistics (the Fisher information).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::estimator::ThetaTrace;
use crate::sampler::SamplerKind;
use crate::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959964;
/// Runs with any |t-ratio| above this are not converged.
pub const T_RATIO_THRESHOLD: f64 = 0.3;
/// Covariances with a larger condition number are treated as singular.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Fraction of the trace kept after burn-in.
pub const DEFAULT_RETAIN_FRACTION: f64 = 0.5;

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let s = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows.len(), s, |r, c| rows[r][c])
}

fn column_means(m: &DMatrix<f64>) -> Vec<f64> {
    (0..m.ncols()).map(|c| m.column(c).mean()).collect()
}

/// Sample covariance with `n − 1` normalisation.
pub fn sample_cov(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let m = to_matrix(rows);
    let n = m.nrows();
    let mean = column_means(&m);
    let centered = DMatrix::from_fn(n, m.ncols(), |r, c| m[(r, c)] - mean[c]);
    (centered.transpose() * &centered) / (n.max(2) - 1) as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchMeans {
    pub mean: Vec<f64>,
    /// Estimated covariance of `mean` (the asymptotic covariance divided by `T`).
    pub cov: DMatrix<f64>,
}

/// Multivariate batch means over a `T × s` chain, batch size `⌊√T⌋`.
/// Trailing samples that do not fill a batch are dropped.
pub fn batch_means_cov(chain: &[Vec<f64>]) -> Result<BatchMeans> {
    let t = chain.len();
    if t < 4 {
        return Err(Error::InsufficientSamples { needed: 4, got: t });
    }
    let m = to_matrix(chain);
    let s = m.ncols();
    let b = (t as f64).sqrt().floor() as usize;
    let a = t / b;
    let used = m.rows(0, a * b);
    let mu: Vec<f64> = (0..s).map(|c| used.column(c).mean()).collect();
    let mut sigma = DMatrix::<f64>::zeros(s, s);
    for k in 0..a {
        let batch = used.rows(k * b, b);
        let dev = DMatrix::from_fn(s, 1, |c, _| batch.column(c).mean() - mu[c]);
        sigma += &dev * dev.transpose();
    }
    sigma *= b as f64 / (a - 1) as f64;
    Ok(BatchMeans {
        mean: column_means(&m),
        cov: sigma / t as f64,
    })
}

/// Inverse of a symmetric matrix, refusing near-singular input.
fn inverse_symmetric(cov: DMatrix<f64>) -> Result<DMatrix<f64>> {
    if cov.is_empty() {
        return Ok(cov);
    }
    let eig = SymmetricEigen::new(cov);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    // negated so that NaN counts as failing
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(min > 0.0) || !(max / min <= CONDITION_LIMIT) {
        let cond = if min > 0.0 { max / min } else { f64::INFINITY };
        return Err(Error::Singular(cond));
    }
    let inv_vals = eig.eigenvalues.map(|l| 1.0 / l);
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&inv_vals) * eig.eigenvectors.transpose())
}

/// Inverse of the sample covariance of simulated statistics.
pub fn fisher_cov(stats_chain: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if stats_chain.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: stats_chain.len(),
        });
    }
    inverse_symmetric(sample_cov(stats_chain))
}

/// `mean / sd` of each statistic deviation; `0/0` counts as a perfect fit.
pub fn t_ratios(stats_chain: &[Vec<f64>]) -> Vec<f64> {
    let m = to_matrix(stats_chain);
    let n = m.nrows() as f64;
    (0..m.ncols())
        .map(|c| {
            let col = m.column(c);
            let mean = col.mean();
            let sd = (col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            if sd > 0.0 {
                mean / sd
            } else if mean == 0.0 {
                0.0
            } else {
                mean.signum() * f64::INFINITY
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunEstimate {
    pub names: Vec<String>,
    pub theta_hat: Vec<f64>,
    pub se: Vec<f64>,
    pub t_ratio: Vec<f64>,
    pub converged: bool,
    pub diverged_reason: Option<String>,
}

impl RunEstimate {
    fn failed(names: Vec<String>, reason: String) -> Self {
        let s = names.len();
        RunEstimate {
            names,
            theta_hat: vec![f64::NAN; s],
            se: vec![f64::NAN; s],
            t_ratio: vec![f64::NAN; s],
            converged: false,
            diverged_reason: Some(reason),
        }
    }
}

/// Standard errors from a θ chain and the matching simulated-statistics chain
/// (both the retained window, same length and dimension).
pub fn run_se(theta_chain: &[Vec<f64>], stats_chain: &[Vec<f64>], names: Vec<String>) -> Result<RunEstimate> {
    run_se_with_offset(theta_chain, stats_chain, 0, names)
}

/// As [`run_se`], where the statistics describe θ columns `offset..` only.
/// Leading columns (the IFD Arc parameter) get the batch-means error alone
/// and a zero t-ratio.
fn run_se_with_offset(
    theta_chain: &[Vec<f64>],
    stats_chain: &[Vec<f64>],
    offset: usize,
    names: Vec<String>,
) -> Result<RunEstimate> {
    if theta_chain.len() != stats_chain.len() {
        return Err(Error::Estimation(format!(
            "theta chain has {} rows, statistics chain {}",
            theta_chain.len(),
            stats_chain.len()
        )));
    }
    let bm = batch_means_cov(theta_chain)?;
    let s = bm.mean.len();
    if stats_chain.iter().any(|r| r.len() + offset != s) || names.len() != s {
        return Err(Error::Estimation("chain dimensions disagree".into()));
    }
    let mut t_ratio = vec![0.0; offset];
    t_ratio.extend(t_ratios(stats_chain));
    let mut total = bm.cov.clone();
    let mut reason = None;
    match fisher_cov(stats_chain) {
        Ok(fisher) => {
            let k = s - offset;
            let mut block = total.view_mut((offset, offset), (k, k));
            block += fisher;
        }
        Err(e) => reason = Some(e.to_string()),
    }
    let se: Vec<f64> = total.diagonal().iter().map(|v| v.max(0.0).sqrt()).collect();
    if reason.is_none() {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if let Some(k) = t_ratio.iter().position(|t| !(t.abs() <= T_RATIO_THRESHOLD)) {
            reason = Some(format!("|t-ratio| of {} is {:.3}", names[k], t_ratio[k].abs()));
        }
    }
    if reason.is_none() && bm.mean.iter().chain(&se).any(|x| !x.is_finite()) {
        reason = Some("non-finite estimate".into());
    }
    Ok(RunEstimate {
        names,
        theta_hat: bm.mean,
        se,
        t_ratio,
        converged: reason.is_none(),
        diverged_reason: reason,
    })
}

/// Point estimate, standard errors and convergence of one EE run, using the
/// last `retain_fraction` of the trace.
pub fn estimate_run(trace: &ThetaTrace, retain_fraction: f64) -> RunEstimate {
    let names = trace.parameter_names();
    if let Some(reason) = &trace.diverged {
        return RunEstimate::failed(names, format!("diverged: {reason}"));
    }
    let n = trace.records.len();
    let keep = ((n as f64) * retain_fraction.clamp(0.0, 1.0)).round() as usize;
    let window = &trace.records[n - keep.min(n)..];
    let theta_chain: Vec<Vec<f64>> = window.iter().map(|r| trace.parameters(r)).collect();
    let stats_chain: Vec<Vec<f64>> = window.iter().map(|r| r.dz.clone()).collect();
    let offset = usize::from(trace.sampler == SamplerKind::Ifd);
    run_se_with_offset(&theta_chain, &stats_chain, offset, names.clone())
        .unwrap_or_else(|e| RunEstimate::failed(names, e.to_string()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PooledEstimate {
    pub names: Vec<String>,
    pub theta: Vec<f64>,
    pub se: Vec<f64>,
    /// Mean convergence t-ratio over the pooled runs.
    pub t_ratio: Vec<f64>,
    pub n_runs_used: usize,
    /// `0` lies outside `θ ± 1.959964·se`.
    pub significant: Vec<bool>,
}

impl PooledEstimate {
    pub fn ci(&self, k: usize) -> (f64, f64) {
        (self.theta[k] - Z_95 * self.se[k], self.theta[k] + Z_95 * self.se[k])
    }
}

pub fn is_significant(theta: f64, se: f64) -> bool {
    theta.abs() > Z_95 * se
}

/// Inverse-variance weighted average of the converged runs.
pub fn pool_runs(estimates: &[RunEstimate]) -> Result<PooledEstimate> {
    let used: Vec<&RunEstimate> = estimates
        .iter()
        .filter(|r| r.converged && r.se.iter().all(|s| s.is_finite()))
        .collect();
    let first = used.first().ok_or(Error::NoConvergedRuns)?;
    let s = first.theta_hat.len();
    if used.iter().any(|r| r.names != first.names) {
        return Err(Error::Estimation("runs have different parameters".into()));
    }
    let mut theta = vec![0.0; s];
    let mut se = vec![0.0; s];
    let mut t_ratio = vec![0.0; s];
    for k in 0..s {
        let exact: Vec<f64> = used.iter().filter(|r| r.se[k] == 0.0).map(|r| r.theta_hat[k]).collect();
        if !exact.is_empty() {
            theta[k] = exact.iter().sum::<f64>() / exact.len() as f64;
            se[k] = 0.0;
        } else {
            let (wsum, wtheta) = used.iter().fold((0.0, 0.0), |(ws, wt), r| {
                let w = 1.0 / (r.se[k] * r.se[k]);
                (ws + w, wt + w * r.theta_hat[k])
            });
            theta[k] = wtheta / wsum;
            se[k] = (1.0 / wsum).sqrt();
        }
        t_ratio[k] = used.iter().map(|r| r.t_ratio[k]).sum::<f64>() / used.len() as f64;
    }
    let significant = theta.iter().zip(&se).map(|(&t, &e)| is_significant(t, e)).collect();
    Ok(PooledEstimate {
        names: first.names.clone(),
        theta,
        se,
        t_ratio,
        n_runs_used: used.len(),
        significant,
    })
}

/// Wilson score interval for a binomial proportion at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> Result<(f64, f64)> {
    wilson_interval_z(successes, trials, Z_95)
}

/// Wilson score interval with normal quantile `z`.
pub fn wilson_interval_z(successes: u64, trials: u64, z: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::Estimation("Wilson interval needs at least one trial".into()));
    }
    if successes > trials {
        return Err(Error::Estimation(format!(
            "{successes} successes out of {trials} trials"
        )));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = ((centre - half) / denom).max(0.0);
    let hi = ((centre + half) / denom).min(1.0);
    Ok((lo, hi))
}
