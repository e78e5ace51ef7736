//! Sparse mutable directed graph.
//!
//! Besides the out- and in-adjacency lists and a flat arc list (for uniform
//! arc selection), the graph keeps three two-path count tables up to date on
//! every insert and delete:
//!
//! * `Mix`: `L2(i,j)  = #{h : i→h, h→j}` (ordered pairs)
//! * `In`:  `L2D(i,j) = #{h : h→i, h→j}` (shared in-neighbours, symmetric)
//! * `Out`: `L2U(i,j) = #{h : i→h, j→h}` (shared out-neighbours, symmetric)
//!
//! Only non-zero counts are stored. Node ids are `0..n`.

use rand::Rng;
use rustc_hash::FxHashMap;

use crate::prefilter::Prefilter;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoPathKind {
    Mix,
    In,
    Out,
}

#[inline]
fn pair_key(i: u32, j: u32) -> u64 {
    (u64::from(i) << 32) | u64::from(j)
}

/// Pair-indexed positive counts with a membership prefilter in front.
#[derive(Clone, Debug)]
pub struct TwoPathTable {
    symmetric: bool,
    entries: FxHashMap<u64, u32>,
    prefilter: Prefilter,
}

impl TwoPathTable {
    fn new(symmetric: bool, bits: usize) -> Self {
        TwoPathTable {
            symmetric,
            entries: FxHashMap::default(),
            prefilter: Prefilter::with_bits(bits),
        }
    }

    #[inline]
    fn key(&self, i: u32, j: u32) -> u64 {
        if self.symmetric && i > j {
            pair_key(j, i)
        } else {
            pair_key(i, j)
        }
    }

    /// Count for the pair; absent pairs count 0.
    #[inline]
    pub fn get(&self, i: u32, j: u32) -> u32 {
        let key = self.key(i, j);
        if !self.prefilter.may_contain(key) {
            return 0;
        }
        self.entries.get(&key).copied().unwrap_or(0)
    }

    #[inline]
    fn increment(&mut self, i: u32, j: u32) {
        let key = self.key(i, j);
        let prefilter = &mut self.prefilter;
        let mut fresh = false;
        *self.entries.entry(key).or_insert_with(|| {
            prefilter.insert(key);
            fresh = true;
            0
        }) += 1;
        if fresh && self.prefilter.inserted() > self.prefilter.num_bits() / 8 {
            self.rebuild_prefilter();
        }
    }

    #[inline]
    fn decrement(&mut self, i: u32, j: u32) {
        let key = self.key(i, j);
        match self.entries.get_mut(&key) {
            Some(c) if *c > 1 => *c -= 1,
            Some(_) => {
                self.entries.remove(&key);
            }
            None => panic!("two-path table out of sync: no entry for ({i}, {j})"),
        }
    }

    /// Clears stale bits left by deleted entries and grows the filter if
    /// the live key count warrants it.
    pub fn rebuild_prefilter(&mut self) {
        let wanted = (self.entries.len() * 16).max(self.prefilter.num_bits());
        if wanted > self.prefilter.num_bits() {
            self.prefilter = Prefilter::with_bits(wanted);
        } else {
            self.prefilter.clear();
        }
        for &key in self.entries.keys() {
            self.prefilter.insert(key);
        }
    }

    /// Number of stored (non-zero) pairs.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Stored entries as `(i, j, count)`; symmetric tables yield `i < j` only.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.entries.iter().map(|(&k, &c)| ((k >> 32) as u32, k as u32, c))
    }

    /// True when every stored key passes the prefilter.
    pub fn prefilter_sound(&self) -> bool {
        self.entries.keys().all(|&k| self.prefilter.may_contain(k))
    }
}

/// Directed graph with no self-loops or multi-arcs.
#[derive(Clone, Debug)]
pub struct Digraph {
    n: usize,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
    arcs: Vec<(u32, u32)>,
    arc_index: FxHashMap<u64, usize>,
    mix: TwoPathTable,
    in_tp: TwoPathTable,
    out_tp: TwoPathTable,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "too many nodes");
        let bits = (4 * n).max(1 << 12);
        Digraph {
            n,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            arcs: Vec::new(),
            arc_index: FxHashMap::default(),
            mix: TwoPathTable::new(false, bits),
            in_tp: TwoPathTable::new(true, bits),
            out_tp: TwoPathTable::new(true, bits),
        }
    }

    /// Builds a graph from 0-based arcs, rejecting self-loops and duplicates.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Digraph::new(n);
        for (i, j) in arcs {
            g.insert_arc(i, j)?;
        }
        Ok(g)
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// `N(N-1)`, the number of ordered dyads.
    pub fn max_arcs(&self) -> u64 {
        let n = self.n as u64;
        n * n.saturating_sub(1)
    }

    pub fn density(&self) -> f64 {
        match self.max_arcs() {
            0 => 0.0,
            m => self.num_arcs() as f64 / m as f64,
        }
    }

    pub fn arcs(&self) -> &[(u32, u32)] {
        &self.arcs
    }

    pub fn out_neighbours(&self, i: usize) -> &[u32] {
        &self.out_adj[i]
    }

    pub fn in_neighbours(&self, i: usize) -> &[u32] {
        &self.in_adj[i]
    }

    /// # Panics
    /// If either node id is out of range.
    #[inline]
    pub fn is_arc(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n && j < self.n, "node id out of range");
        self.has_arc(i as u32, j as u32)
    }

    #[inline]
    pub(crate) fn has_arc(&self, i: u32, j: u32) -> bool {
        self.arc_index.contains_key(&pair_key(i, j))
    }

    #[inline]
    pub fn out_degree(&self, i: usize) -> usize {
        self.out_adj[i].len()
    }

    #[inline]
    pub fn in_degree(&self, i: usize) -> usize {
        self.in_adj[i].len()
    }

    pub fn table(&self, kind: TwoPathKind) -> &TwoPathTable {
        match kind {
            TwoPathKind::Mix => &self.mix,
            TwoPathKind::In => &self.in_tp,
            TwoPathKind::Out => &self.out_tp,
        }
    }

    #[inline]
    pub fn two_path_count(&self, kind: TwoPathKind, i: usize, j: usize) -> u32 {
        self.table(kind).get(i as u32, j as u32)
    }

    #[inline]
    pub(crate) fn mix2(&self, i: u32, j: u32) -> u32 {
        self.mix.get(i, j)
    }

    #[inline]
    pub(crate) fn in2(&self, i: u32, j: u32) -> u32 {
        self.in_tp.get(i, j)
    }

    #[inline]
    pub(crate) fn out2(&self, i: u32, j: u32) -> u32 {
        self.out_tp.get(i, j)
    }

    fn check_dyad(&self, i: usize, j: usize) -> Result<()> {
        for node in [i, j] {
            if node >= self.n {
                return Err(Error::NodeOutOfRange { node, n: self.n });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        Ok(())
    }

    pub fn insert_arc(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_dyad(i, j)?;
        if self.is_arc(i, j) {
            return Err(Error::DuplicateArc(i, j));
        }
        self.insert_unchecked(i as u32, j as u32);
        Ok(())
    }

    pub fn delete_arc(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_dyad(i, j)?;
        if !self.is_arc(i, j) {
            return Err(Error::MissingArc(i, j));
        }
        self.delete_unchecked(i as u32, j as u32);
        Ok(())
    }

    /// Caller guarantees `i != j`, both in range, arc absent.
    pub(crate) fn insert_unchecked(&mut self, i: u32, j: u32) {
        let (iu, ju) = (i as usize, j as usize);
        // i -> j -> v
        for &v in &self.out_adj[ju] {
            if v != i {
                self.mix.increment(i, v);
            }
        }
        // h -> i -> j
        for &h in &self.in_adj[iu] {
            if h != j {
                self.mix.increment(h, j);
            }
        }
        // i -> j and i -> v share in-neighbour i
        for &v in &self.out_adj[iu] {
            self.in_tp.increment(j, v);
        }
        // i -> j and v -> j share out-neighbour j
        for &v in &self.in_adj[ju] {
            self.out_tp.increment(i, v);
        }
        self.out_adj[iu].push(j);
        self.in_adj[ju].push(i);
        self.arc_index.insert(pair_key(i, j), self.arcs.len());
        self.arcs.push((i, j));
    }

    /// Caller guarantees the arc is present.
    pub(crate) fn delete_unchecked(&mut self, i: u32, j: u32) {
        let (iu, ju) = (i as usize, j as usize);
        remove_value(&mut self.out_adj[iu], j);
        remove_value(&mut self.in_adj[ju], i);
        let pos = self.arc_index.remove(&pair_key(i, j)).expect("arc index out of sync");
        self.arcs.swap_remove(pos);
        if let Some(&(a, b)) = self.arcs.get(pos) {
            self.arc_index.insert(pair_key(a, b), pos);
        }
        for &v in &self.out_adj[ju] {
            if v != i {
                self.mix.decrement(i, v);
            }
        }
        for &h in &self.in_adj[iu] {
            if h != j {
                self.mix.decrement(h, j);
            }
        }
        for &v in &self.out_adj[iu] {
            self.in_tp.decrement(j, v);
        }
        for &v in &self.in_adj[ju] {
            self.out_tp.decrement(i, v);
        }
    }

    /// Uniformly random existing arc.
    pub fn random_arc<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(usize, usize)> {
        if self.arcs.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let (i, j) = self.arcs[rng.random_range(0..self.arcs.len())];
        Ok((i as usize, j as usize))
    }

    /// Uniformly random ordered dyad `(i, j)`, `i != j`, with no arc `i -> j`.
    ///
    /// Rejection sampling; expected cost is `1 / (1 - density)` draws.
    pub fn random_nonarc_dyad<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(usize, usize)> {
        if self.n < 2 || self.num_arcs() as u64 >= self.max_arcs() {
            return Err(Error::CompleteGraph);
        }
        loop {
            let (i, j) = self.random_dyad(rng);
            if !self.has_arc(i as u32, j as u32) {
                return Ok((i, j));
            }
        }
    }

    /// Uniformly random ordered dyad `(i, j)`, `i != j`.
    #[inline]
    pub fn random_dyad<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let i = rng.random_range(0..self.n);
        let mut j = rng.random_range(0..self.n - 1);
        if j >= i {
            j += 1;
        }
        (i, j)
    }

    /// Same nodes, every arc reversed.
    pub fn reversed(&self) -> Digraph {
        let mut g = Digraph::new(self.n);
        for &(i, j) in &self.arcs {
            g.insert_unchecked(j, i);
        }
        g
    }

    /// Arc set as sorted 0-based pairs, independent of insertion history.
    pub fn sorted_arcs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.arcs.iter().map(|&(i, j)| (i as usize, j as usize)).collect();
        v.sort_unstable();
        v
    }

    /// Checks adjacency/arc-list agreement. Intended for tests and debugging.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let out_total: usize = self.out_adj.iter().map(Vec::len).sum();
        let in_total: usize = self.in_adj.iter().map(Vec::len).sum();
        if out_total != self.arcs.len() || in_total != self.arcs.len() {
            return Err(format!(
                "arc counts disagree: out {out_total}, in {in_total}, list {}",
                self.arcs.len()
            ));
        }
        if self.arc_index.len() != self.arcs.len() {
            return Err("arc index size mismatch".into());
        }
        for (pos, &(i, j)) in self.arcs.iter().enumerate() {
            if i == j {
                return Err(format!("self-loop at {i}"));
            }
            if self.arc_index.get(&pair_key(i, j)) != Some(&pos) {
                return Err(format!("arc index wrong for {i}->{j}"));
            }
            if !self.out_adj[i as usize].contains(&j) || !self.in_adj[j as usize].contains(&i) {
                return Err(format!("adjacency missing {i}->{j}"));
            }
        }
        for t in [&self.mix, &self.in_tp, &self.out_tp] {
            if t.iter().any(|(_, _, c)| c == 0) {
                return Err("zero entry stored in two-path table".into());
            }
            if !t.prefilter_sound() {
                return Err("prefilter false negative".into());
            }
        }
        Ok(())
    }
}

#[inline]
fn remove_value(list: &mut Vec<u32>, value: u32) {
    let pos = list
        .iter()
        .position(|&x| x == value)
        .expect("adjacency list out of sync");
    list.swap_remove(pos);
}
