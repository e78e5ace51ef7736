//! Statistics of a small network and the change in each when one arc is
//! added.

use ergm_ee::attributes::AttributeSet;
use ergm_ee::change_stats::{change_stats_all, Direction};
use ergm_ee::graph::Digraph;
use ergm_ee::model::ModelSpec;
use ergm_ee::statistics::compute_statistics;

fn main() -> ergm_ee::Result<()> {
    let mut g = Digraph::from_arcs(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 2), (4, 2), (5, 4)])?;
    let mut attrs = AttributeSet::new(6);
    attrs.add_binary(
        "senior",
        vec![Some(true), Some(false), Some(true), None, Some(false), Some(false)],
    )?;
    attrs.add_categorical("team", vec![Some(0), Some(0), Some(1), Some(1), Some(2), Some(0)])?;

    let model = ModelSpec::parse(
        &[
            "Arc",
            "Reciprocity",
            "AinSpread",
            "AoutSpread",
            "AltKTrianglesT",
            "AltTwoPathTD",
            "Isolates",
            "Sender(senior)",
            "Matching(team)",
        ],
        &attrs,
    )?;

    let z = compute_statistics(&model, &g, &attrs);
    let dz = change_stats_all(&model, &mut g, &attrs, 1, 0, Direction::Add)?;
    println!("{:<18} {:>10} {:>12}", "effect", "z(x)", "add 2->1");
    for (k, name) in model.names().iter().enumerate() {
        println!("{name:<18} {:>10.4} {:>12.4}", z[k], dz[k]);
    }
    Ok(())
}
