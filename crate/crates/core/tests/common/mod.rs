//! Shared helpers for integration tests: random graphs and attributes, and a
//! dense brute-force evaluator of every model statistic.

#![allow(dead_code, clippy::needless_range_loop)]

use ergm_ee::attributes::AttributeSet;
use ergm_ee::graph::Digraph;
use ergm_ee::model::{Effect, EffectKind, ModelSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each ordered dyad present independently with probability `density`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> Digraph {
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random::<f64>() < density {
                arcs.push((i, j));
            }
        }
    }
    Digraph::from_arcs(n, arcs).unwrap()
}

/// Columns `b` (binary), `c` (3 categories) and `u` (continuous), each with
/// about 10% missing values.
pub fn random_attributes<R: Rng>(rng: &mut R, n: usize) -> AttributeSet {
    let mut attrs = AttributeSet::new(n);
    let missing = |rng: &mut R| rng.random::<f64>() < 0.1;
    let b = (0..n).map(|_| (!missing(rng)).then(|| rng.random::<bool>())).collect();
    let c = (0..n)
        .map(|_| (!missing(rng)).then(|| rng.random_range(0..3u32)))
        .collect();
    let u = (0..n)
        .map(|_| (!missing(rng)).then(|| rng.random_range(-2.0..2.0)))
        .collect();
    attrs.add_binary("b", b).unwrap();
    attrs.add_categorical("c", c).unwrap();
    attrs.add_continuous("u", u).unwrap();
    attrs
}

pub const STRUCTURAL_SPECS: &[&str] = &[
    "Arc",
    "Reciprocity",
    "Isolates",
    "AinSpread",
    "AoutSpread",
    "AltKTrianglesT",
    "AltKTrianglesC",
    "AltKTrianglesD",
    "AltKTrianglesU",
    "AltTwoPathT",
    "AltTwoPathD",
    "AltTwoPathU",
    "AltTwoPathTD",
];

pub const ATTRIBUTE_SPECS: &[&str] = &[
    "Sender(b)",
    "Receiver(b)",
    "Interaction(b)",
    "Matching(c)",
    "Mismatching(c)",
    "MatchingReciprocity(c)",
    "MismatchingReciprocity(c)",
    "ContinuousSender(u)",
    "ContinuousReceiver(u)",
    "Diff(u)",
];

/// Every effect, structural ones with damping `lambda`.
pub fn full_model(attrs: &AttributeSet, lambda: f64) -> ModelSpec {
    let mut m = ModelSpec::new();
    for s in STRUCTURAL_SPECS {
        let e = Effect::parse(s, attrs).unwrap();
        let e = if e.kind.is_alternating() {
            e.with_lambda(lambda)
        } else {
            e
        };
        m.push(e).unwrap();
    }
    for s in ATTRIBUTE_SPECS {
        m.push(Effect::parse(s, attrs).unwrap()).unwrap();
    }
    m
}

/// Adjacency matrix and the three two-path count matrices of a graph.
pub struct Dense {
    pub n: usize,
    pub x: Vec<Vec<bool>>,
    pub mix: Vec<Vec<u32>>,
    pub ind: Vec<Vec<u32>>,
    pub outd: Vec<Vec<u32>>,
}

impl Dense {
    pub fn new(g: &Digraph) -> Self {
        let n = g.num_nodes();
        let x: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| g.is_arc(i, j)).collect()).collect();
        let mut mix = vec![vec![0; n]; n];
        let mut ind = vec![vec![0; n]; n];
        let mut outd = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for h in 0..n {
                    if h == i || h == j {
                        continue;
                    }
                    mix[i][j] += (x[i][h] && x[h][j]) as u32;
                    ind[i][j] += (x[h][i] && x[h][j]) as u32;
                    outd[i][j] += (x[i][h] && x[j][h]) as u32;
                }
            }
        }
        Dense { n, x, mix, ind, outd }
    }

    fn in_degree(&self, j: usize) -> usize {
        (0..self.n).filter(|&i| self.x[i][j]).count()
    }

    fn out_degree(&self, i: usize) -> usize {
        self.x[i].iter().filter(|&&b| b).count()
    }
}

fn binom(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

/// Alternating k-star of one degree: `Σ_{k≥2} (−1)^k C(d,k) / λ^{k−2}`.
fn alt_star(d: usize, lambda: f64) -> f64 {
    (2..=d as u32)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom(d as u32, k) / lambda.powi(k as i32 - 2)
        })
        .sum()
}

/// Alternating sum over shared partners: `Σ_{k≥1} (−1)^{k+1} C(c,k) / λ^{k−1}`.
fn alt_partners(c: u32, lambda: f64) -> f64 {
    (1..=c)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * binom(c, k) / lambda.powi(k as i32 - 1)
        })
        .sum()
}

pub fn full_statistic(effect: &Effect, d: &Dense, attrs: &AttributeSet) -> f64 {
    let n = d.n;
    let lambda = effect.lambda;
    let x = &d.x;
    let ordered = || (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
    let pairs = || (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)));
    let arcs_where =
        |f: &dyn Fn(usize, usize) -> f64| -> f64 { ordered().filter(|&(i, j)| x[i][j]).map(|(i, j)| f(i, j)).sum() };
    let bin = |c: usize, v: usize| attrs.binary[c].values[v];
    let cat = |c: usize, v: usize| attrs.categorical[c].values[v];
    let cont = |c: usize, v: usize| attrs.continuous[c].values[v];
    match effect.kind {
        EffectKind::Arc => arcs_where(&|_, _| 1.0),
        EffectKind::Reciprocity => pairs().filter(|&(i, j)| x[i][j] && x[j][i]).count() as f64,
        EffectKind::Isolates => (0..n).filter(|&v| d.in_degree(v) + d.out_degree(v) == 0).count() as f64,
        EffectKind::AinS => (0..n).map(|v| alt_star(d.in_degree(v), lambda)).sum(),
        EffectKind::AoutS => (0..n).map(|v| alt_star(d.out_degree(v), lambda)).sum(),
        EffectKind::AtT => arcs_where(&|i, j| alt_partners(d.mix[i][j], lambda)),
        EffectKind::AtC => arcs_where(&|i, j| alt_partners(d.mix[j][i], lambda)),
        EffectKind::AktD => arcs_where(&|i, j| alt_partners(d.ind[i][j], lambda)),
        EffectKind::AktU => arcs_where(&|i, j| alt_partners(d.outd[i][j], lambda)),
        EffectKind::A2pT => pairs().map(|(i, j)| alt_partners(d.mix[i][j], lambda)).sum(),
        EffectKind::A2pD => pairs().map(|(i, j)| alt_partners(d.ind[i][j], lambda)).sum(),
        EffectKind::A2pU => pairs().map(|(i, j)| alt_partners(d.outd[i][j], lambda)).sum(),
        EffectKind::A2pTd => pairs()
            .map(|(i, j)| alt_partners(d.mix[i][j], lambda) + 0.5 * alt_partners(d.ind[i][j], lambda))
            .sum(),
        EffectKind::Sender(c) => arcs_where(&|i, j| (bin(c, i) == Some(true) && bin(c, j).is_some()) as u8 as f64),
        EffectKind::Receiver(c) => arcs_where(&|i, j| (bin(c, j) == Some(true) && bin(c, i).is_some()) as u8 as f64),
        EffectKind::Interaction(c) => {
            arcs_where(&|i, j| (bin(c, i) == Some(true) && bin(c, j) == Some(true)) as u8 as f64)
        }
        EffectKind::Matching(c) => arcs_where(&|i, j| match (cat(c, i), cat(c, j)) {
            (Some(a), Some(b)) => (a == b) as u8 as f64,
            _ => 0.0,
        }),
        EffectKind::Mismatching(c) => arcs_where(&|i, j| match (cat(c, i), cat(c, j)) {
            (Some(a), Some(b)) => (a != b) as u8 as f64,
            _ => 0.0,
        }),
        EffectKind::MatchingReciprocity(c) => pairs()
            .filter(|&(i, j)| x[i][j] && x[j][i])
            .map(|(i, j)| match (cat(c, i), cat(c, j)) {
                (Some(a), Some(b)) => (a == b) as u8 as f64,
                _ => 0.0,
            })
            .sum(),
        EffectKind::MismatchingReciprocity(c) => pairs()
            .filter(|&(i, j)| x[i][j] && x[j][i])
            .map(|(i, j)| match (cat(c, i), cat(c, j)) {
                (Some(a), Some(b)) => (a != b) as u8 as f64,
                _ => 0.0,
            })
            .sum(),
        EffectKind::ContinuousSender(c) => arcs_where(&|i, j| match (cont(c, i), cont(c, j)) {
            (Some(a), Some(_)) => a,
            _ => 0.0,
        }),
        EffectKind::ContinuousReceiver(c) => arcs_where(&|i, j| match (cont(c, i), cont(c, j)) {
            (Some(_), Some(b)) => b,
            _ => 0.0,
        }),
        EffectKind::Diff(c) => arcs_where(&|i, j| match (cont(c, i), cont(c, j)) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ => 0.0,
        }),
    }
}

pub fn full_statistics(model: &ModelSpec, g: &Digraph, attrs: &AttributeSet) -> Vec<f64> {
    let d = Dense::new(g);
    model.effects().iter().map(|e| full_statistic(e, &d, attrs)).collect()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
