//! Full model statistics of a graph.

use crate::attributes::AttributeSet;
use crate::change_stats::fill_add_changes;
use crate::graph::Digraph;
use crate::model::{EffectKind, ModelSpec};

/// `z(g)` for every effect of `model`, in model order.
///
/// Replays the arcs of `g` into an empty graph and sums the add-arc change
/// statistics, which costs `O(L · d)` rather than a pass over all dyads.
/// Isolates is the one statistic that is not zero on the empty graph; it
/// starts from `N`.
pub fn compute_statistics(model: &ModelSpec, g: &Digraph, attrs: &AttributeSet) -> Vec<f64> {
    let mut z: Vec<f64> = model
        .effects()
        .iter()
        .map(|e| match e.kind {
            EffectKind::Isolates => g.num_nodes() as f64,
            _ => 0.0,
        })
        .collect();
    let mut scratch = Digraph::new(g.num_nodes());
    let mut delta = vec![0.0; model.len()];
    for &(i, j) in g.arcs() {
        fill_add_changes(model, &scratch, attrs, i, j, &mut delta);
        z.iter_mut().zip(&delta).for_each(|(a, d)| *a += d);
        scratch.insert_unchecked(i, j);
    }
    z
}
