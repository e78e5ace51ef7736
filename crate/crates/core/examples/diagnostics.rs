//! Degree, reciprocity, component and clustering summary of a network.

use ergm_ee::graph::Digraph;
use ergm_ee::simulate::diagnostics_summary;

fn main() -> ergm_ee::Result<()> {
    let g = Digraph::from_arcs(
        8,
        [(0, 1), (1, 0), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (3, 5), (6, 3)],
    )?;
    let s = diagnostics_summary(&g);
    println!(
        "nodes {} arcs {} mean degree {:.3} density {:.4}",
        s.nodes, s.arcs, s.mean_degree, s.density
    );
    println!("reciprocity {:.3}", s.reciprocity);
    println!("components {} giant {}", s.components, s.giant_component);
    println!(
        "clustering global {:.4} mean local {:.4}",
        s.global_clustering, s.mean_local_clustering
    );
    println!("in-degree histogram {:?}", s.in_degree_hist);
    println!("out-degree histogram {:?}", s.out_degree_hist);
    Ok(())
}
