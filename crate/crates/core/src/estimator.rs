//! Equilibrium Expectation (EE) estimation.
//!
//! A run starts with a few rounds of contrastive divergence from the
//! observed graph to get initial parameters, then runs the EE loop on a
//! single persistent chain that starts at the observed graph:
//!
//! ```text
//! for each outer iteration:
//!     for each inner iteration:
//!         run the sampler for m steps
//!         dz += net change in statistics        (dz = z(chain) - z(obs))
//!         θ  -= sign(dz) ⊙ K_A · D ⊙ dz²
//!     D ⊙= sqrt(c2 · max(|mean θ|, c1) / sd θ)  (over the inner window)
//! ```

use crate::attributes::AttributeSet;
use crate::graph::Digraph;
use crate::model::{EffectKind, ModelSpec};
use crate::rng::{stream, Purpose};
use crate::sampler::{arc_param_from_v, run_sampler, SamplerKind, SamplerState, DEFAULT_IFD_K};
use crate::statistics::compute_statistics;
use crate::{Error, Result};

/// Parameter magnitude beyond which a run is declared diverged.
pub const HUGE_THETA: f64 = 1e10;

#[derive(Clone, Debug, PartialEq)]
pub struct EeConfig {
    /// Contrastive divergence step size (`ACA_S`).
    pub aca_s: f64,
    /// EE step multiplier `K_A` (`ACA_EE`).
    pub aca_ee: f64,
    /// Variance-limiting multiplier `c2` (`compC`).
    pub comp_c: f64,
    /// Floor on `|mean θ|` in the step-size update.
    pub c1: f64,
    pub sampler_steps: usize,
    /// Contrastive divergence rounds (`Ssteps`).
    pub s_steps: usize,
    /// Outer EE iterations (`EEsteps`).
    pub ee_steps: usize,
    /// Inner EE iterations per outer iteration (`EinnerSteps`).
    pub ee_inner_steps: usize,
    pub sampler: SamplerKind,
    pub ifd_k: f64,
}

impl Default for EeConfig {
    fn default() -> Self {
        EeConfig {
            aca_s: 0.1,
            aca_ee: 1e-9,
            comp_c: 0.01,
            c1: 1e-2,
            sampler_steps: 1000,
            s_steps: 50,
            ee_steps: 500,
            ee_inner_steps: 100,
            sampler: SamplerKind::Basic,
            ifd_k: DEFAULT_IFD_K,
        }
    }
}

impl EeConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("ACA_S", self.aca_s),
            ("compC", self.comp_c),
            ("c1", self.c1),
            ("ifd_K", self.ifd_k),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        // K_A = 0 freezes theta after initialisation
        if !(self.aca_ee.is_finite() && self.aca_ee >= 0.0) {
            return Err(Error::Config(format!(
                "ACA_EE must be non-negative, got {}",
                self.aca_ee
            )));
        }
        if self.sampler_steps == 0 || self.ee_steps == 0 {
            return Err(Error::Config("samplerSteps and EEsteps must be positive".into()));
        }
        if self.ee_inner_steps < 2 {
            return Err(Error::Config("EinnerSteps must be at least 2".into()));
        }
        Ok(())
    }
}

/// State after one outer iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    /// Total inner iterations so far.
    pub t: usize,
    pub theta: Vec<f64>,
    /// `z(chain) − z(observed)`.
    pub dz: Vec<f64>,
    pub acceptance_rate: f64,
    /// IFD auxiliary parameter (0 for the basic sampler).
    pub v: f64,
    /// Arc parameter implied by `v` under IFD.
    pub arc_theta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaTrace {
    pub run_index: usize,
    pub effect_names: Vec<String>,
    pub sampler: SamplerKind,
    pub theta0: Vec<f64>,
    pub observed: Vec<f64>,
    pub records: Vec<TraceRecord>,
    /// Set when a parameter became NaN, infinite or huge; the trace stops there.
    pub diverged: Option<String>,
}

impl ThetaTrace {
    /// Names of the reported parameters; under IFD `Arc` comes first.
    pub fn parameter_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.effect_names.len() + 1);
        if self.sampler == SamplerKind::Ifd {
            names.push("Arc".to_string());
        }
        names.extend(self.effect_names.iter().cloned());
        names
    }

    /// Reported parameter vector of a record, matching [`Self::parameter_names`].
    pub fn parameters(&self, record: &TraceRecord) -> Vec<f64> {
        let mut p = Vec::with_capacity(record.theta.len() + 1);
        if self.sampler == SamplerKind::Ifd {
            p.push(record.arc_theta.unwrap_or(f64::NAN));
        }
        p.extend_from_slice(&record.theta);
        p
    }
}

#[inline]
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn check_model(model: &ModelSpec, attrs: &AttributeSet, g: &Digraph, cfg: &EeConfig) -> Result<()> {
    cfg.validate()?;
    model.validate(attrs)?;
    if attrs.num_nodes() != g.num_nodes() {
        return Err(Error::Model(format!(
            "attributes cover {} nodes, graph has {}",
            attrs.num_nodes(),
            g.num_nodes()
        )));
    }
    if cfg.sampler == SamplerKind::Ifd && model.contains(EffectKind::Arc) {
        return Err(Error::Model(
            "Arc must not be in the model when using the IFD sampler".into(),
        ));
    }
    if g.num_arcs() == 0 || g.num_arcs() as u64 >= g.max_arcs() {
        return Err(Error::Estimation(
            "observed graph must be neither empty nor complete".into(),
        ));
    }
    Ok(())
}

/// Initial step-size vector: `D_0 = 1 / max(|z(g_obs)|, 1)` per effect.
pub fn init_d(g_obs: &Digraph, attrs: &AttributeSet, model: &ModelSpec) -> Vec<f64> {
    compute_statistics(model, g_obs, attrs)
        .into_iter()
        .map(|z| 1.0 / z.abs().max(1.0))
        .collect()
}

/// Contrastive divergence: each round restarts the chain at the observed
/// graph, runs the sampler, and moves every parameter by `K1_A` against
/// the sign of the net statistic change.
///
/// Arc starts at the log-odds of the observed density (basic sampler only);
/// all other parameters start at 0. Under IFD, `state.v` is tuned along the
/// way and carries over to the caller.
pub fn cd_initialize(
    g_obs: &Digraph,
    attrs: &AttributeSet,
    model: &ModelSpec,
    cfg: &EeConfig,
    state: &mut SamplerState,
) -> Result<Vec<f64>> {
    check_model(model, attrs, g_obs, cfg)?;
    let l_obs = g_obs.num_arcs() as f64;
    let l_max = g_obs.max_arcs() as f64;
    let mut theta: Vec<f64> = model
        .effects()
        .iter()
        .map(|e| match e.kind {
            EffectKind::Arc => (l_obs / (l_max - l_obs)).ln(),
            _ => 0.0,
        })
        .collect();
    let mut g = g_obs.clone();
    for _ in 0..cfg.s_steps {
        g.clone_from(g_obs);
        state.is_delete = false;
        let out = run_sampler(cfg.sampler, &mut g, attrs, model, &theta, cfg.sampler_steps, state)?;
        for (th, dz) in theta.iter_mut().zip(out.net()) {
            *th -= cfg.aca_s * sign(dz);
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::Estimation(
                "non-finite parameter during contrastive divergence".into(),
            ));
        }
    }
    state.is_delete = false;
    Ok(theta)
}

/// Outcome of one outer iteration.
#[derive(Clone, Debug, PartialEq)]
pub enum OuterStep {
    Record(TraceRecord),
    Diverged(String),
}

/// `θ ← θ − sign(dz) ⊙ K_A · D ⊙ dz²`.
#[inline]
fn ee_update(theta: &mut [f64], dz: &[f64], d: &[f64], k_a: f64) {
    for ((th, &dz), &d) in theta.iter_mut().zip(dz).zip(d) {
        *th -= sign(dz) * k_a * d * dz * dz;
    }
}

/// One EE chain, advanced an outer iteration at a time.
pub struct EeChain<'a> {
    attrs: &'a AttributeSet,
    model: &'a ModelSpec,
    cfg: EeConfig,
    l_obs: u64,
    graph: Digraph,
    state: SamplerState,
    theta: Vec<f64>,
    d: Vec<f64>,
    dz: Vec<f64>,
    t: usize,
    window: Vec<Vec<f64>>,
}

impl<'a> EeChain<'a> {
    /// Chain starting at `g_obs` with the given initial parameters and step sizes.
    pub fn new(
        g_obs: &Digraph,
        attrs: &'a AttributeSet,
        model: &'a ModelSpec,
        cfg: &EeConfig,
        theta0: Vec<f64>,
        d0: Vec<f64>,
        state: SamplerState,
    ) -> Result<Self> {
        check_model(model, attrs, g_obs, cfg)?;
        if theta0.len() != model.len() || d0.len() != model.len() {
            return Err(Error::Estimation("theta0/D0 length does not match model".into()));
        }
        if d0.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(Error::Estimation("D0 must be strictly positive".into()));
        }
        let s = model.len();
        Ok(EeChain {
            attrs,
            model,
            cfg: cfg.clone(),
            l_obs: g_obs.num_arcs() as u64,
            graph: g_obs.clone(),
            state,
            theta: theta0,
            d: d0,
            dz: vec![0.0; s],
            t: 0,
            window: Vec::with_capacity(cfg.ee_inner_steps),
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn step_sizes(&self) -> &[f64] {
        &self.d
    }

    pub fn accumulated_dz(&self) -> &[f64] {
        &self.dz
    }

    pub fn sampler_state(&self) -> &SamplerState {
        &self.state
    }

    fn arc_theta(&self) -> Option<f64> {
        match self.cfg.sampler {
            SamplerKind::Ifd => arc_param_from_v(self.state.v, self.l_obs, self.graph.num_nodes() as u64).ok(),
            SamplerKind::Basic => None,
        }
    }

    fn divergence(&self) -> Option<String> {
        let bad = |x: f64| !x.is_finite() || x.abs() > HUGE_THETA;
        if let Some((k, &x)) = self.theta.iter().enumerate().find(|(_, &x)| bad(x)) {
            return Some(format!("{} = {x}", self.model.effects()[k].name()));
        }
        match self.arc_theta() {
            Some(a) if bad(a) => Some(format!("Arc = {a}")),
            _ => None,
        }
    }

    /// Runs `M_inner` sampler calls with parameter updates, then updates `D`.
    pub fn outer_iteration(&mut self) -> Result<OuterStep> {
        self.window.clear();
        let mut accepted = 0usize;
        let mut proposals = 0usize;
        for _ in 0..self.cfg.ee_inner_steps {
            let out = run_sampler(
                self.cfg.sampler,
                &mut self.graph,
                self.attrs,
                self.model,
                &self.theta,
                self.cfg.sampler_steps,
                &mut self.state,
            )?;
            accepted += out.accepted;
            proposals += out.proposals();
            for (dz, delta) in self.dz.iter_mut().zip(out.net()) {
                *dz += delta;
            }
            ee_update(&mut self.theta, &self.dz, &self.d, self.cfg.aca_ee);
            self.t += 1;
            if let Some(reason) = self.divergence() {
                return Ok(OuterStep::Diverged(reason));
            }
            self.window.push(self.theta.clone());
        }
        let n = self.window.len() as f64;
        for (k, d) in self.d.iter_mut().enumerate() {
            let mean = self.window.iter().map(|th| th[k]).sum::<f64>() / n;
            let var = self.window.iter().map(|th| (th[k] - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let sd = var.sqrt();
            if sd > 0.0 && sd.is_finite() {
                *d *= (self.cfg.comp_c * mean.abs().max(self.cfg.c1) / sd).sqrt();
            }
        }
        Ok(OuterStep::Record(TraceRecord {
            t: self.t,
            theta: self.theta.clone(),
            dz: self.dz.clone(),
            acceptance_rate: accepted as f64 / proposals.max(1) as f64,
            v: self.state.v,
            arc_theta: self.arc_theta(),
        }))
    }
}

/// Full estimation run: contrastive divergence, then `EEsteps` outer EE
/// iterations on a chain started at `g_obs`. The random stream is keyed by
/// `(seed, run_index)`.
pub fn ee_estimate(
    g_obs: &Digraph,
    attrs: &AttributeSet,
    model: &ModelSpec,
    cfg: &EeConfig,
    seed: u64,
    run_index: usize,
) -> Result<ThetaTrace> {
    let mut state = SamplerState::new(stream(seed, Purpose::Estimation, run_index as u64)).with_ifd_k(cfg.ifd_k);
    let observed = compute_statistics(model, g_obs, attrs);
    let theta0 = cd_initialize(g_obs, attrs, model, cfg, &mut state)?;
    let d0 = init_d(g_obs, attrs, model);
    let mut chain = EeChain::new(g_obs, attrs, model, cfg, theta0.clone(), d0, state)?;
    let mut trace = ThetaTrace {
        run_index,
        effect_names: model.names(),
        sampler: cfg.sampler,
        theta0,
        observed,
        records: Vec::with_capacity(cfg.ee_steps),
        diverged: None,
    };
    for _ in 0..cfg.ee_steps {
        match chain.outer_iteration()? {
            OuterStep::Record(record) => trace.records.push(record),
            OuterStep::Diverged(reason) => {
                log::warn!("run {run_index} diverged: {reason}");
                trace.diverged = Some(reason);
                break;
            }
        }
    }
    Ok(trace)
}
