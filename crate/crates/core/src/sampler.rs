//! Metropolis–Hastings samplers over the ERGM distribution.
//!
//! * [`basic_sampler`] toggles a uniformly chosen dyad.
//! * [`ifd_sampler`] (improved fixed density) alternates add and delete
//!   moves so the arc count stays within one of the observed count. The Arc
//!   parameter is replaced by an auxiliary parameter `V` that is tuned after
//!   every call to balance the number of add and delete proposals.

use rand::Rng;

use crate::attributes::AttributeSet;
use crate::change_stats::fill_add_changes;
use crate::graph::Digraph;
use crate::model::{EffectKind, ModelSpec};
use crate::rng::StreamRng;
use crate::{Error, Result};

pub const DEFAULT_IFD_K: f64 = 0.1;

/// Imbalance ratio above which the IFD step multiplier is reported as too small.
const IFD_IMBALANCE_WARN: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerKind {
    Basic,
    Ifd,
}

/// Per-chain sampler state. `is_delete` and `v` persist across calls.
#[derive(Clone, Debug)]
pub struct SamplerState {
    pub v: f64,
    pub is_delete: bool,
    pub ifd_k: f64,
    pub rng: StreamRng,
}

impl SamplerState {
    pub fn new(rng: StreamRng) -> Self {
        SamplerState {
            v: 0.0,
            is_delete: false,
            ifd_k: DEFAULT_IFD_K,
            rng,
        }
    }

    pub fn with_ifd_k(mut self, k: f64) -> Self {
        self.ifd_k = k;
        self
    }
}

/// Accumulated change statistics of accepted moves.
///
/// `dz_add` sums the changes of accepted additions and `dz_del` the
/// (negative) changes of accepted deletions, so
/// `z(final) = z(initial) + dz_add + dz_del`.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplerOutput {
    pub dz_add: Vec<f64>,
    pub dz_del: Vec<f64>,
    pub n_add: usize,
    pub n_del: usize,
    pub accepted: usize,
}

impl SamplerOutput {
    fn new(s: usize) -> Self {
        SamplerOutput {
            dz_add: vec![0.0; s],
            dz_del: vec![0.0; s],
            n_add: 0,
            n_del: 0,
            accepted: 0,
        }
    }

    /// Net change in the statistics over the call.
    pub fn net(&self) -> Vec<f64> {
        self.dz_add.iter().zip(&self.dz_del).map(|(a, d)| a + d).collect()
    }

    pub fn proposals(&self) -> usize {
        self.n_add + self.n_del
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.proposals().max(1) as f64
    }
}

fn check_inputs(model: &ModelSpec, theta: &[f64], m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Sampler("number of sampler steps must be positive".into()));
    }
    if theta.len() != model.len() {
        return Err(Error::Sampler(format!(
            "theta has {} entries, model has {} effects",
            theta.len(),
            model.len()
        )));
    }
    Ok(())
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn accept(rng: &mut StreamRng, log_ratio: f64) -> bool {
    // ratio >= 1 always accepts; uniform draws are in [0, 1)
    log_ratio >= 0.0 || rng.random::<f64>() < log_ratio.exp()
}

/// Improved fixed density sampler: `m` proposals alternating add and delete
/// phases, the phase flipping only after an accepted move.
///
/// Acceptance is `min(1, exp(θ·Δz ± V))` (`+V` for adds, `−V` for deletes).
/// After the proposals, `V` moves by `K_IFD · ((n_del − n_add)/(n_del + n_add))²`,
/// down if deletes outnumbered adds and up otherwise.
pub fn ifd_sampler(
    g: &mut Digraph,
    attrs: &AttributeSet,
    model: &ModelSpec,
    theta: &[f64],
    m: usize,
    state: &mut SamplerState,
) -> Result<SamplerOutput> {
    check_inputs(model, theta, m)?;
    if model.contains(EffectKind::Arc) {
        return Err(Error::Sampler(
            "Arc must not be in the model with the IFD sampler; it is implied by V".into(),
        ));
    }
    let s = model.len();
    let mut out = SamplerOutput::new(s);
    let mut dz = vec![0.0; s];
    for _ in 0..m {
        if state.is_delete {
            out.n_del += 1;
            let (i, j) = g.random_arc(&mut state.rng)?;
            let (i, j) = (i as u32, j as u32);
            g.delete_unchecked(i, j);
            fill_add_changes(model, g, attrs, i, j, &mut dz);
            if accept(&mut state.rng, -dot(theta, &dz) - state.v) {
                out.dz_del.iter_mut().zip(&dz).for_each(|(a, d)| *a -= d);
                out.accepted += 1;
                state.is_delete = false;
            } else {
                g.insert_unchecked(i, j);
            }
        } else {
            out.n_add += 1;
            let (i, j) = g.random_nonarc_dyad(&mut state.rng)?;
            let (i, j) = (i as u32, j as u32);
            fill_add_changes(model, g, attrs, i, j, &mut dz);
            if accept(&mut state.rng, dot(theta, &dz) + state.v) {
                g.insert_unchecked(i, j);
                out.dz_add.iter_mut().zip(&dz).for_each(|(a, d)| *a += d);
                out.accepted += 1;
                state.is_delete = true;
            }
        }
    }
    let (n_del, n_add) = (out.n_del as f64, out.n_add as f64);
    let imbalance = (n_del - n_add) / (n_del + n_add);
    let step = state.ifd_k * imbalance * imbalance;
    if n_del > n_add {
        state.v -= step;
    } else {
        state.v += step;
    }
    if imbalance.abs() > IFD_IMBALANCE_WARN {
        log::warn!(
            "IFD sampler: {} delete vs {} add proposals; ifd_K ({}) might be too small",
            out.n_del,
            out.n_add,
            state.ifd_k
        );
    }
    Ok(out)
}

/// Basic sampler: `m` proposals, each toggling a uniformly random ordered
/// dyad, accepted with `min(1, exp(θ·Δz))`.
pub fn basic_sampler(
    g: &mut Digraph,
    attrs: &AttributeSet,
    model: &ModelSpec,
    theta: &[f64],
    m: usize,
    state: &mut SamplerState,
) -> Result<SamplerOutput> {
    check_inputs(model, theta, m)?;
    if g.num_nodes() < 2 {
        return Err(Error::Sampler("graph needs at least two nodes".into()));
    }
    let s = model.len();
    let mut out = SamplerOutput::new(s);
    let mut dz = vec![0.0; s];
    for _ in 0..m {
        let (i, j) = g.random_dyad(&mut state.rng);
        let (i, j) = (i as u32, j as u32);
        if g.has_arc(i, j) {
            out.n_del += 1;
            g.delete_unchecked(i, j);
            fill_add_changes(model, g, attrs, i, j, &mut dz);
            if accept(&mut state.rng, -dot(theta, &dz)) {
                out.dz_del.iter_mut().zip(&dz).for_each(|(a, d)| *a -= d);
                out.accepted += 1;
            } else {
                g.insert_unchecked(i, j);
            }
        } else {
            out.n_add += 1;
            fill_add_changes(model, g, attrs, i, j, &mut dz);
            if accept(&mut state.rng, dot(theta, &dz)) {
                g.insert_unchecked(i, j);
                out.dz_add.iter_mut().zip(&dz).for_each(|(a, d)| *a += d);
                out.accepted += 1;
            }
        }
    }
    Ok(out)
}

/// Dispatches to [`basic_sampler`] or [`ifd_sampler`].
pub fn run_sampler(
    kind: SamplerKind,
    g: &mut Digraph,
    attrs: &AttributeSet,
    model: &ModelSpec,
    theta: &[f64],
    m: usize,
    state: &mut SamplerState,
) -> Result<SamplerOutput> {
    match kind {
        SamplerKind::Basic => basic_sampler(g, attrs, model, theta, m, state),
        SamplerKind::Ifd => ifd_sampler(g, attrs, model, theta, m, state),
    }
}

/// Arc parameter implied by the IFD auxiliary parameter:
/// `θ_L = V − ln((L_max − L_obs) / (L_obs + 1))` with `L_max = N(N−1)`.
pub fn arc_param_from_v(v: f64, l_obs: u64, n: u64) -> Result<f64> {
    arc_param_for_dyads(v, l_obs, n * n.saturating_sub(1))
}

/// [`arc_param_from_v`] with an explicit dyad count `l_max`.
pub fn arc_param_for_dyads(v: f64, l_obs: u64, l_max: u64) -> Result<f64> {
    if l_obs >= l_max {
        return Err(Error::Sampler(format!(
            "observed arc count {l_obs} leaves no absent dyads (max {l_max})"
        )));
    }
    Ok(v - ((l_max - l_obs) as f64 / (l_obs + 1) as f64).ln())
}
