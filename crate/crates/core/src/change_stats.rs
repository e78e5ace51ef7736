//! Change statistics: the change in each model statistic caused by adding a
//! single arc `i -> j` to a graph that does not contain it.
//!
//! The alternating two-path and triangle terms are evaluated from the
//! two-path tables and the adjacency lists of `i` and `j`, so the cost of a
//! change statistic is linear in the degrees of the endpoints.
//!
//! The full statistics these changes are consistent with, with
//! `a = 1 - 1/λ`:
//!
//! | effect | statistic |
//! |---|---|
//! | Arc | `Σ x_ij` |
//! | Reciprocity | mutual dyads, `Σ_{i<j} x_ij x_ji` |
//! | Isolates | `#{i : in(i) = out(i) = 0}` |
//! | AinS / AoutS | `Σ_i λ²(a^{d_i} − 1) + λ d_i` over in/out degrees |
//! | AT-T | `λ Σ_{i≠j} x_ij (1 − a^{L2(i,j)})` |
//! | AT-C | `λ Σ_{i≠j} x_ji (1 − a^{L2(i,j)})` |
//! | AKT-D / AKT-U | as AT-T with `L2D` / `L2U` |
//! | A2P-T | `λ Σ_{i<j} (1 − a^{L2(i,j)})` |
//! | A2P-D / A2P-U | `λ Σ_{i<j} (1 − a^{L2D(i,j)})`, likewise `L2U` |
//! | A2P-TD | `A2P-T + A2P-D / 2` |
//!
//! A2P-T sums the ordered two-path counts over `i < j` only, so unlike the
//! other statistics it depends on the node labelling.
//!
//! Attribute terms skip any dyad with a missing value on either endpoint.

use crate::attributes::AttributeSet;
use crate::graph::Digraph;
use crate::model::{Effect, EffectKind, ModelSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Add,
    Delete,
}

/// `λ(1 − a^k)`: the alternating-sum weight of a count `k`.
#[inline]
pub(crate) fn alt_weight(lambda: f64, k: u32) -> f64 {
    lambda * (1.0 - (1.0 - 1.0 / lambda).powi(k as i32))
}

#[inline]
fn decay(lambda: f64, k: u32) -> f64 {
    (1.0 - 1.0 / lambda).powi(k as i32)
}

/// Change in one statistic when arc `i -> j` (absent) is added.
pub fn change_stat(effect: &Effect, g: &Digraph, attrs: &AttributeSet, i: usize, j: usize) -> f64 {
    debug_assert!(i != j && !g.is_arc(i, j));
    add_change(effect, g, attrs, i as u32, j as u32)
}

#[inline]
pub(crate) fn add_change(effect: &Effect, g: &Digraph, attrs: &AttributeSet, i: u32, j: u32) -> f64 {
    let (iu, ju) = (i as usize, j as usize);
    let lambda = effect.lambda;
    match effect.kind {
        EffectKind::Arc => 1.0,
        EffectKind::Reciprocity => g.has_arc(j, i) as u8 as f64,
        EffectKind::Isolates => {
            let isolated = |v: usize| g.in_degree(v) + g.out_degree(v) == 0;
            match u8::from(isolated(iu)) + u8::from(isolated(ju)) {
                0 => 0.0,
                k => -f64::from(k),
            }
        }
        EffectKind::AinS => alt_weight(lambda, g.in_degree(ju) as u32),
        EffectKind::AoutS => alt_weight(lambda, g.out_degree(iu) as u32),
        EffectKind::AtT => {
            let mut delta = alt_weight(lambda, g.mix2(i, j));
            for &v in g.out_neighbours(ju) {
                if v != i && g.has_arc(i, v) {
                    delta += decay(lambda, g.mix2(i, v));
                }
            }
            for &h in g.in_neighbours(iu) {
                if h != j && g.has_arc(h, j) {
                    delta += decay(lambda, g.mix2(h, j));
                }
            }
            delta
        }
        EffectKind::AtC => {
            let mut delta = alt_weight(lambda, g.mix2(j, i));
            for &v in g.out_neighbours(ju) {
                if v != i && g.has_arc(v, i) {
                    delta += decay(lambda, g.mix2(i, v));
                }
            }
            for &h in g.in_neighbours(iu) {
                if h != j && g.has_arc(j, h) {
                    delta += decay(lambda, g.mix2(h, j));
                }
            }
            delta
        }
        EffectKind::AktD => {
            let mut delta = alt_weight(lambda, g.in2(i, j));
            // i -> j adds a shared in-neighbour (i) to every pair {j, v}, v an out-neighbour of i
            for &v in g.out_neighbours(iu) {
                let closed = g.has_arc(j, v) as u8 + g.has_arc(v, j) as u8;
                if closed > 0 {
                    delta += closed as f64 * decay(lambda, g.in2(j, v));
                }
            }
            delta
        }
        EffectKind::AktU => {
            let mut delta = alt_weight(lambda, g.out2(i, j));
            for &v in g.in_neighbours(ju) {
                let closed = g.has_arc(i, v) as u8 + g.has_arc(v, i) as u8;
                if closed > 0 {
                    delta += closed as f64 * decay(lambda, g.out2(i, v));
                }
            }
            delta
        }
        EffectKind::A2pT => a2p_t(g, lambda, i, j),
        EffectKind::A2pD => a2p_d(g, lambda, i, j),
        EffectKind::A2pU => a2p_u(g, lambda, i, j),
        EffectKind::A2pTd => a2p_t(g, lambda, i, j) + 0.5 * a2p_d(g, lambda, i, j),
        EffectKind::Sender(c) => {
            let col = &attrs.binary[c].values;
            match (col[iu], col[ju]) {
                (Some(true), Some(_)) => 1.0,
                _ => 0.0,
            }
        }
        EffectKind::Receiver(c) => {
            let col = &attrs.binary[c].values;
            match (col[iu], col[ju]) {
                (Some(_), Some(true)) => 1.0,
                _ => 0.0,
            }
        }
        EffectKind::Interaction(c) => {
            let col = &attrs.binary[c].values;
            match (col[iu], col[ju]) {
                (Some(true), Some(true)) => 1.0,
                _ => 0.0,
            }
        }
        EffectKind::Matching(c) => category_match(attrs, c, iu, ju).map_or(0.0, |m| m as u8 as f64),
        EffectKind::Mismatching(c) => category_match(attrs, c, iu, ju).map_or(0.0, |m| !m as u8 as f64),
        EffectKind::MatchingReciprocity(c) => match category_match(attrs, c, iu, ju) {
            Some(true) if g.has_arc(j, i) => 1.0,
            _ => 0.0,
        },
        EffectKind::MismatchingReciprocity(c) => match category_match(attrs, c, iu, ju) {
            Some(false) if g.has_arc(j, i) => 1.0,
            _ => 0.0,
        },
        EffectKind::ContinuousSender(c) => {
            let col = &attrs.continuous[c].values;
            match (col[iu], col[ju]) {
                (Some(u), Some(_)) => u,
                _ => 0.0,
            }
        }
        EffectKind::ContinuousReceiver(c) => {
            let col = &attrs.continuous[c].values;
            match (col[iu], col[ju]) {
                (Some(_), Some(u)) => u,
                _ => 0.0,
            }
        }
        EffectKind::Diff(c) => {
            let col = &attrs.continuous[c].values;
            match (col[iu], col[ju]) {
                (Some(a), Some(b)) => (a - b).abs(),
                _ => 0.0,
            }
        }
    }
}

#[inline]
fn category_match(attrs: &AttributeSet, c: usize, i: usize, j: usize) -> Option<bool> {
    let col = &attrs.categorical[c].values;
    Some(col[i]? == col[j]?)
}

/// New two-paths `i -> j -> v` and `h -> i -> j`, counted only for pairs
/// whose source has the smaller label.
#[inline]
fn a2p_t(g: &Digraph, lambda: f64, i: u32, j: u32) -> f64 {
    let mut delta = 0.0;
    for &v in g.out_neighbours(j as usize) {
        if v > i {
            delta += decay(lambda, g.mix2(i, v));
        }
    }
    for &h in g.in_neighbours(i as usize) {
        if h < j {
            delta += decay(lambda, g.mix2(h, j));
        }
    }
    delta
}

/// Pairs `{j, v}` gaining shared in-neighbour `i`; `j` is not yet in out(i).
#[inline]
fn a2p_d(g: &Digraph, lambda: f64, i: u32, j: u32) -> f64 {
    g.out_neighbours(i as usize)
        .iter()
        .map(|&v| decay(lambda, g.in2(j, v)))
        .sum()
}

/// Pairs `{i, v}` gaining shared out-neighbour `j`; `i` is not yet in in(j).
#[inline]
fn a2p_u(g: &Digraph, lambda: f64, i: u32, j: u32) -> f64 {
    g.in_neighbours(j as usize)
        .iter()
        .map(|&v| decay(lambda, g.out2(i, v)))
        .sum()
}

/// Change statistics for every effect of `model` in model order.
///
/// For [`Direction::Delete`] the arc must be present; the result is
/// `z(g − arc) − z(g)`, evaluated by removing the arc, computing the add
/// change, and restoring it. `g` is unchanged on return.
pub fn change_stats_all(
    model: &ModelSpec,
    g: &mut Digraph,
    attrs: &AttributeSet,
    i: usize,
    j: usize,
    direction: Direction,
) -> Result<Vec<f64>> {
    if i >= g.num_nodes() || j >= g.num_nodes() {
        return Err(Error::NodeOutOfRange {
            node: i.max(j),
            n: g.num_nodes(),
        });
    }
    if i == j {
        return Err(Error::SelfLoop(i));
    }
    let mut out = vec![0.0; model.len()];
    match direction {
        Direction::Add => {
            if g.is_arc(i, j) {
                return Err(Error::DuplicateArc(i, j));
            }
            fill_add_changes(model, g, attrs, i as u32, j as u32, &mut out);
        }
        Direction::Delete => {
            if !g.is_arc(i, j) {
                return Err(Error::MissingArc(i, j));
            }
            g.delete_unchecked(i as u32, j as u32);
            fill_add_changes(model, g, attrs, i as u32, j as u32, &mut out);
            g.insert_unchecked(i as u32, j as u32);
            out.iter_mut().for_each(|d| *d = -*d);
        }
    }
    Ok(out)
}

/// Writes the add-arc change of every effect into `out`.
#[inline]
pub(crate) fn fill_add_changes(model: &ModelSpec, g: &Digraph, attrs: &AttributeSet, i: u32, j: u32, out: &mut [f64]) {
    for (slot, effect) in out.iter_mut().zip(model.effects()) {
        *slot = add_change(effect, g, attrs, i, j);
    }
}
