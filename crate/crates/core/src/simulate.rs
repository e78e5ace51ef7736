//! Forward simulation from an ERGM with the basic sampler, and summary
//! statistics of directed graphs.

use rand::seq::index::sample;
use rand::Rng;

use crate::attributes::AttributeSet;
use crate::graph::Digraph;
use crate::model::ModelSpec;
use crate::rng::{stream, Purpose};
use crate::sampler::{basic_sampler, SamplerState};
use crate::statistics::compute_statistics;
use crate::{Error, Result};

/// Largest default burn-in.
pub const MAX_DEFAULT_BURNIN: u64 = 100_000_000;

/// `50 · N · ⌈1/density⌉` proposals, capped at [`MAX_DEFAULT_BURNIN`].
pub fn default_burnin(n: usize, density: f64) -> u64 {
    let inv = if density > 0.0 {
        (1.0 / density).ceil()
    } else {
        f64::INFINITY
    };
    let b = 50.0 * n as f64 * inv;
    if b.is_finite() {
        (b as u64).clamp(1, MAX_DEFAULT_BURNIN)
    } else {
        MAX_DEFAULT_BURNIN
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimSpec {
    pub n: usize,
    pub model: ModelSpec,
    pub theta: Vec<f64>,
    pub burnin: u64,
    pub interval: u64,
    pub n_samples: usize,
    pub seed: u64,
}

impl SimSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config("simulation needs at least two nodes".into()));
        }
        if self.burnin == 0 || self.interval == 0 {
            return Err(Error::Config("burnin and interval must be positive".into()));
        }
        if self.theta.len() != self.model.len() {
            return Err(Error::Config(format!(
                "{} parameter values for {} effects",
                self.theta.len(),
                self.model.len()
            )));
        }
        if let Some(k) = self.theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::Config(format!(
                "parameter {} is not finite",
                self.model.names()[k]
            )));
        }
        Ok(())
    }
}

/// How to draw node attributes for a simulated network.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AttributeRule {
    /// Fraction of nodes, chosen uniformly without replacement, whose binary
    /// attribute is True.
    pub binary_true_fraction: Option<f64>,
    /// Number of equiprobable categories of the categorical attribute.
    pub num_categories: Option<u32>,
}

/// Draws attributes named `binary_name` / `categorical_name` per `rule`.
pub fn generate_attributes(
    n: usize,
    rule: &AttributeRule,
    binary_name: &str,
    categorical_name: &str,
    seed: u64,
    index: u64,
) -> Result<AttributeSet> {
    let mut rng = stream(seed, Purpose::Attributes, index);
    let mut attrs = AttributeSet::new(n);
    if let Some(frac) = rule.binary_true_fraction {
        if !(0.0..=1.0).contains(&frac) {
            return Err(Error::Config(format!("binary fraction {frac} not in [0, 1]")));
        }
        let k = (frac * n as f64).round() as usize;
        let mut values = vec![Some(false); n];
        for v in sample(&mut rng, n, k) {
            values[v] = Some(true);
        }
        attrs.add_binary(binary_name, values)?;
    }
    if let Some(c) = rule.num_categories {
        if c == 0 {
            return Err(Error::Config("number of categories must be positive".into()));
        }
        let values = (0..n).map(|_| Some(rng.random_range(0..c))).collect();
        attrs.add_categorical(categorical_name, values)?;
    }
    Ok(attrs)
}

#[derive(Clone, Debug)]
pub struct Simulation {
    pub graphs: Vec<Digraph>,
    pub summaries: Vec<GraphSummary>,
    /// Model statistics of each sample, in model order.
    pub statistics: Vec<Vec<f64>>,
}

/// Starting from the empty graph, runs `burnin` basic-sampler proposals and
/// then records a sample every `interval` proposals.
pub fn simulate(spec: &SimSpec, attrs: &AttributeSet) -> Result<Simulation> {
    spec.validate()?;
    if attrs.num_nodes() != spec.n {
        return Err(Error::Config(format!(
            "attributes cover {} nodes, simulation has {}",
            attrs.num_nodes(),
            spec.n
        )));
    }
    spec.model.validate(attrs)?;
    let mut g = Digraph::new(spec.n);
    let mut z = compute_statistics(&spec.model, &g, attrs);
    let mut state = SamplerState::new(stream(spec.seed, Purpose::Simulation, 0));
    let mut advance = |g: &mut Digraph, z: &mut Vec<f64>, steps: u64| -> Result<()> {
        // bounded chunks keep the step count within usize on any target
        let mut left = steps;
        while left > 0 {
            let m = left.min(1 << 30);
            let out = basic_sampler(g, attrs, &spec.model, &spec.theta, m as usize, &mut state)?;
            z.iter_mut().zip(out.net()).for_each(|(a, d)| *a += d);
            left -= m;
        }
        Ok(())
    };
    advance(&mut g, &mut z, spec.burnin)?;
    let mut sim = Simulation {
        graphs: Vec::with_capacity(spec.n_samples),
        summaries: Vec::with_capacity(spec.n_samples),
        statistics: Vec::with_capacity(spec.n_samples),
    };
    for k in 0..spec.n_samples {
        if k > 0 {
            advance(&mut g, &mut z, spec.interval)?;
        }
        sim.summaries.push(diagnostics_summary(&g));
        sim.statistics.push(z.clone());
        sim.graphs.push(g.clone());
    }
    Ok(sim)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphSummary {
    pub nodes: usize,
    pub arcs: usize,
    /// Arcs per node.
    pub mean_degree: f64,
    pub density: f64,
    /// Fraction of arcs whose reverse is present; 0 for the empty graph.
    pub reciprocity: f64,
    /// Weakly connected components, isolates included.
    pub components: usize,
    pub giant_component: usize,
    /// Transitivity of the underlying undirected graph.
    pub global_clustering: f64,
    /// Mean local clustering of the underlying undirected graph; nodes of
    /// degree below two count as 0.
    pub mean_local_clustering: f64,
    /// `in_degree_hist[d]` nodes have in-degree `d`.
    pub in_degree_hist: Vec<usize>,
    pub out_degree_hist: Vec<usize>,
}

struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

fn histogram(degrees: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut hist = Vec::new();
    for d in degrees {
        if d >= hist.len() {
            hist.resize(d + 1, 0);
        }
        hist[d] += 1;
    }
    hist
}

fn sorted_intersection_len(a: &[u32], b: &[u32], mut each: impl FnMut(u32)) {
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                each(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
}

/// Degree, reciprocity, component and clustering summary of `g`.
pub fn diagnostics_summary(g: &Digraph) -> GraphSummary {
    let n = g.num_nodes();
    let arcs = g.num_arcs();
    let mutual_arcs = g.arcs().iter().filter(|&&(i, j)| g.has_arc(j, i)).count();

    let mut dsu = DisjointSet::new(n);
    for &(i, j) in g.arcs() {
        dsu.union(i, j);
    }
    let mut comp_size = vec![0usize; n];
    for v in 0..n as u32 {
        comp_size[dsu.find(v) as usize] += 1;
    }
    let components = comp_size.iter().filter(|&&s| s > 0).count();
    let giant_component = comp_size.iter().copied().max().unwrap_or(0);

    let undirected: Vec<Vec<u32>> = (0..n)
        .map(|v| {
            let mut nb: Vec<u32> = g.out_neighbours(v).iter().chain(g.in_neighbours(v)).copied().collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    let mut triangles_at = vec![0u64; n];
    for (u, nu) in undirected.iter().enumerate() {
        for &v in nu.iter().filter(|&&v| v as usize > u) {
            sorted_intersection_len(nu, &undirected[v as usize], |w| triangles_at[w as usize] += 1);
        }
    }
    let mut closed = 0u64;
    let mut triples = 0u64;
    let mut local_sum = 0.0;
    for (v, nb) in undirected.iter().enumerate() {
        let d = nb.len() as u64;
        let pairs = d * d.saturating_sub(1) / 2;
        triples += pairs;
        closed += triangles_at[v];
        if pairs > 0 {
            local_sum += triangles_at[v] as f64 / pairs as f64;
        }
    }

    GraphSummary {
        nodes: n,
        arcs,
        mean_degree: if n > 0 { arcs as f64 / n as f64 } else { 0.0 },
        density: g.density(),
        reciprocity: if arcs > 0 {
            mutual_arcs as f64 / arcs as f64
        } else {
            0.0
        },
        components,
        giant_component,
        global_clustering: if triples > 0 {
            closed as f64 / triples as f64
        } else {
            0.0
        },
        mean_local_clustering: if n > 0 { local_sum / n as f64 } else { 0.0 },
        in_degree_hist: histogram((0..n).map(|v| g.in_degree(v))),
        out_degree_hist: histogram((0..n).map(|v| g.out_degree(v))),
    }
}
