mod common;

use common::*;
use ergm_ee::graph::{Digraph, TwoPathKind};
use rand::Rng;

const KINDS: [TwoPathKind; 3] = [TwoPathKind::Mix, TwoPathKind::In, TwoPathKind::Out];

#[allow(clippy::needless_range_loop)]
/// Every table entry equals the brute-force count and no zero is stored.
fn assert_tables_exact(g: &Digraph) {
    let d = Dense::new(g);
    let n = g.num_nodes();
    for kind in KINDS {
        let brute = match kind {
            TwoPathKind::Mix => &d.mix,
            TwoPathKind::In => &d.ind,
            TwoPathKind::Out => &d.outd,
        };
        let mut nonzero = 0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                assert_eq!(g.two_path_count(kind, i, j), brute[i][j], "{kind:?} ({i},{j})");
                if brute[i][j] > 0 && (kind == TwoPathKind::Mix || i < j) {
                    nonzero += 1;
                }
            }
        }
        let table = g.table(kind);
        assert_eq!(table.len(), nonzero, "{kind:?} stores zero entries");
        assert!(table.iter().all(|(_, _, c)| c > 0));
        assert!(table.prefilter_sound(), "{kind:?} prefilter has a false negative");
    }
    g.check_consistency().unwrap();
    for i in 0..n {
        assert_eq!(g.out_degree(i), d.x[i].iter().filter(|&&b| b).count());
        assert_eq!(g.in_degree(i), (0..n).filter(|&h| d.x[h][i]).count());
    }
}

fn random_toggle<R: Rng>(g: &mut Digraph, r: &mut R) {
    let (i, j) = g.random_dyad(r);
    if g.is_arc(i, j) {
        g.delete_arc(i, j).unwrap();
    } else {
        g.insert_arc(i, j).unwrap();
    }
}

#[test]
fn ten_thousand_operations_on_fifty_nodes() {
    for seed in 0..3 {
        let mut r = rng(seed);
        let mut g = random_graph(&mut r, 50, 0.05);
        for step in 1..=10_000 {
            random_toggle(&mut g, &mut r);
            if step % 250 == 0 {
                assert_tables_exact(&g);
            }
        }
        assert_tables_exact(&g);
    }
}

#[test]
fn every_step_of_a_twenty_node_toggle_sequence() {
    let mut r = rng(9);
    let mut g = random_graph(&mut r, 20, 0.1);
    for _ in 0..500 {
        random_toggle(&mut g, &mut r);
        assert_tables_exact(&g);
    }
}

#[test]
fn small_examples() {
    let mut g = Digraph::new(3);
    g.insert_arc(0, 1).unwrap();
    assert_eq!(g.num_arcs(), 1);
    assert!(KINDS.iter().all(|&k| g.table(k).is_empty()));
    g.insert_arc(1, 2).unwrap();
    assert_eq!(g.two_path_count(TwoPathKind::Mix, 0, 2), 1);
    g.delete_arc(1, 2).unwrap();
    assert!(g.table(TwoPathKind::Mix).is_empty());
    g.delete_arc(0, 1).unwrap();
    assert_eq!(g.num_arcs(), 0);
    assert!(KINDS.iter().all(|&k| g.table(k).is_empty()));

    let star = Digraph::from_arcs(3, [(0, 2), (1, 2)]).unwrap();
    assert_eq!(star.two_path_count(TwoPathKind::Out, 0, 1), 1);
    assert_eq!(star.two_path_count(TwoPathKind::Out, 1, 0), 1);
    assert_eq!(star.two_path_count(TwoPathKind::In, 0, 1), 0);
    let out_star = Digraph::from_arcs(3, [(0, 2), (0, 1)]).unwrap();
    assert_eq!(out_star.two_path_count(TwoPathKind::In, 1, 2), 1);
    assert_eq!(out_star.two_path_count(TwoPathKind::In, 2, 1), 1);
    assert_eq!(out_star.table(TwoPathKind::In).len(), 1);
}

#[test]
fn invalid_operations_are_errors() {
    let mut g = Digraph::from_arcs(3, [(0, 1)]).unwrap();
    assert!(g.insert_arc(0, 1).is_err());
    assert!(g.insert_arc(2, 2).is_err());
    assert!(g.delete_arc(1, 0).is_err());
    assert!(g.insert_arc(0, 3).is_err());
    assert!(Digraph::from_arcs(2, [(0, 1), (0, 1)]).is_err());
    let empty = Digraph::new(4);
    assert!(empty.random_arc(&mut rng(0)).is_err());
    let full = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
    assert!(full.random_nonarc_dyad(&mut rng(0)).is_err());
}

/// Draw counts per cell lie within 4σ of the uniform multinomial mean.
fn assert_uniform(counts: &[u64], draws: u64) {
    let p = 1.0 / counts.len() as f64;
    let mean = draws as f64 * p;
    let sd = (draws as f64 * p * (1.0 - p)).sqrt();
    for &c in counts {
        assert!((c as f64 - mean).abs() <= 4.0 * sd, "count {c}, expected {mean} ± {sd}");
    }
}

#[test]
fn random_arc_is_uniform() {
    let single = Digraph::from_arcs(5, [(3, 1)]).unwrap();
    assert_eq!(single.random_arc(&mut rng(1)).unwrap(), (3, 1));

    let g = Digraph::from_arcs(4, [(0, 1), (2, 3), (3, 0)]).unwrap();
    let mut r = rng(2);
    let arcs = g.sorted_arcs();
    let mut counts = vec![0u64; 3];
    for _ in 0..30_000 {
        let a = g.random_arc(&mut r).unwrap();
        counts[arcs.iter().position(|&b| b == a).unwrap()] += 1;
    }
    for &c in &counts {
        assert!((c as f64 / 30_000.0 - 1.0 / 3.0).abs() < 0.02);
    }

    let mut g = random_graph(&mut r, 30, 0.05);
    for _ in 0..2000 {
        random_toggle(&mut g, &mut r);
    }
    let arcs = g.sorted_arcs();
    let mut counts = vec![0u64; arcs.len()];
    let draws = 100_000;
    for _ in 0..draws {
        let a = g.random_arc(&mut r).unwrap();
        counts[arcs.binary_search(&a).unwrap()] += 1;
    }
    assert_uniform(&counts, draws);
}

#[test]
fn random_nonarc_dyad_is_uniform() {
    let g = Digraph::from_arcs(2, [(0, 1)]).unwrap();
    let mut r = rng(3);
    for _ in 0..100 {
        assert_eq!(g.random_nonarc_dyad(&mut r).unwrap(), (1, 0));
    }

    let empty = Digraph::new(10);
    let mut counts = vec![0u64; 100];
    let draws = 100_000;
    for _ in 0..draws {
        let (i, j) = empty.random_nonarc_dyad(&mut r).unwrap();
        assert_ne!(i, j);
        counts[i * 10 + j] += 1;
    }
    let off_diagonal: Vec<u64> = (0..100).filter(|k| k / 10 != k % 10).map(|k| counts[k]).collect();
    assert_uniform(&off_diagonal, draws);

    // 4 nodes, all but three dyads present
    let mut arcs: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let absent: Vec<(usize, usize)> = vec![arcs.remove(7), arcs.remove(3), arcs.remove(0)];
    let dense = Digraph::from_arcs(4, arcs).unwrap();
    let mut counts = vec![0u64; 3];
    for _ in 0..30_000 {
        let d = dense.random_nonarc_dyad(&mut r).unwrap();
        counts[absent.iter().position(|&a| a == d).unwrap()] += 1;
    }
    assert_uniform(&counts, 30_000);
}
