//! Immutable simple undirected graphs with dense bit-matrix adjacency.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::{mask_tail, ones, popcount, words_for, VertexSet, WORD_BITS};
use crate::error::{Error, Result};

/// Where a vertex came from.
///
/// `step` is the generation of the graph in which the clone first appears,
/// so the clones created while going from `ILM_t` to `ILM_{t+1}` carry
/// `step = t + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lineage {
    Original(usize),
    TransitiveClone { parent: usize, step: usize },
    AntiClone { parent: usize, step: usize },
}

impl Lineage {
    pub fn parent(&self) -> Option<usize> {
        match *self {
            Lineage::Original(_) => None,
            Lineage::TransitiveClone { parent, .. } | Lineage::AntiClone { parent, .. } => {
                Some(parent)
            }
        }
    }

    pub fn step(&self) -> usize {
        match *self {
            Lineage::Original(_) => 0,
            Lineage::TransitiveClone { step, .. } | Lineage::AntiClone { step, .. } => step,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Lineage::Original(_) => "original",
            Lineage::TransitiveClone { .. } => "transitive",
            Lineage::AntiClone { .. } => "anti",
        }
    }
}

/// A simple undirected graph on vertex ids `0..n`.
///
/// Rows of the adjacency matrix are packed into `stride` words each. The
/// graph never changes after construction; the ILM operators build new
/// graphs.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    stride: usize,
    adj: Vec<u64>,
    lineage: Vec<Lineage>,
    generation: usize,
    edges: usize,
}

impl Graph {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Graph {
        let stride = words_for(n);
        Graph {
            n,
            stride,
            adj: vec![0; n * stride],
            lineage: (0..n).map(Lineage::Original).collect(),
            generation: 0,
            edges: 0,
        }
    }

    /// Builds a graph from an undirected edge list. Repeated edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(Error::usage(format!("self-loop at vertex {u}")));
            }
            g.set(u, v);
            g.set(v, u);
        }
        g.edges = popcount(&g.adj) / 2;
        Ok(g)
    }

    /// Assembles a graph from raw rows. Rows must already be symmetric.
    pub(crate) fn from_parts(
        n: usize,
        adj: Vec<u64>,
        lineage: Vec<Lineage>,
        generation: usize,
    ) -> Graph {
        let stride = words_for(n);
        debug_assert_eq!(adj.len(), n * stride);
        debug_assert_eq!(lineage.len(), n);
        let edges = popcount(&adj) / 2;
        Graph {
            n,
            stride,
            adj,
            lineage,
            generation,
            edges,
        }
    }

    fn set(&mut self, u: usize, v: usize) {
        self.adj[u * self.stride + v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// The step index `t` at which this graph was produced (0 for seeds).
    #[inline]
    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn lineage(&self) -> &[Lineage] {
        &self.lineage
    }

    /// Replaces the lineage record; used when loading a sidecar file.
    pub fn with_lineage(mut self, lineage: Vec<Lineage>) -> Result<Graph> {
        if lineage.len() != self.n {
            return Err(Error::usage(format!(
                "lineage has {} entries for {} vertices",
                lineage.len(),
                self.n
            )));
        }
        for (id, l) in lineage.iter().enumerate() {
            if let Some(p) = l.parent() {
                if p >= id {
                    return Err(Error::usage(format!(
                        "vertex {id} has parent {p} that is not older"
                    )));
                }
            }
        }
        self.generation = lineage.iter().map(Lineage::step).max().unwrap_or(0);
        self.lineage = lineage;
        Ok(self)
    }

    #[inline]
    pub(crate) fn stride(&self) -> usize {
        self.stride
    }

    /// Raw adjacency row of `v`. Panics if `v` is out of range.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.stride..(v + 1) * self.stride]
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.row(u)[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        Ok(popcount(self.row(v)))
    }

    /// Degrees of all vertices, indexed by id.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| popcount(self.row(v))).collect()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.degrees().into_iter().min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.degrees().into_iter().max()
    }

    pub fn neighbors(&self, v: usize) -> Result<VertexSet> {
        self.check(v)?;
        Ok(VertexSet::from_words(self.n, self.row(v).to_vec()))
    }

    pub fn neighbor_ids(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.row(v))
    }

    /// `N[v] = N(v) ∪ {v}`.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet> {
        let mut s = self.neighbors(v)?;
        s.insert(v);
        Ok(s)
    }

    /// All closed neighborhoods, indexed by vertex.
    pub fn closed_neighborhoods(&self) -> Vec<VertexSet> {
        (0..self.n)
            .map(|v| {
                let mut s = VertexSet::from_words(self.n, self.row(v).to_vec());
                s.insert(v);
                s
            })
            .collect()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            ones(self.row(u))
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// The complement graph; lineage is carried over unchanged.
    pub fn complement(&self) -> Graph {
        let mut adj = Vec::with_capacity(self.adj.len());
        for v in 0..self.n {
            let start = adj.len();
            adj.extend(self.row(v).iter().map(|w| !w));
            let row = &mut adj[start..];
            mask_tail(row, self.n);
            row[v / WORD_BITS] &= !(1u64 << (v % WORD_BITS));
        }
        Graph::from_parts(self.n, adj, self.lineage.clone(), self.generation)
    }

    /// Sum of degrees over `s`.
    pub fn volume(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| popcount(self.row(v))).sum()
    }

    /// Volume of the whole graph, `2|E|`.
    pub fn total_volume(&self) -> usize {
        2 * self.edges
    }

    /// Number of edges with one end in `x` and the other in `y`, where an
    /// edge with both ends in `x ∩ y` counts twice (so `e(X, X) = 2|E(X)|`).
    pub fn edges_between(&self, x: &VertexSet, y: &VertexSet) -> usize {
        x.iter()
            .map(|u| {
                self.row(u)
                    .iter()
                    .zip(y.words())
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum::<usize>()
            })
            .sum()
    }

    /// Subgraph induced on `ids`, relabelled `0..ids.len()` in the given
    /// order. The result is a fresh seed graph (original lineage).
    pub fn induced_subgraph(&self, ids: &[usize]) -> Result<Graph> {
        for &v in ids {
            self.check(v)?;
        }
        let k = ids.len();
        let mut g = Graph::empty(k);
        for (i, &u) in ids.iter().enumerate() {
            for (j, &v) in ids.iter().enumerate().skip(i + 1) {
                if u == v {
                    return Err(Error::usage(format!("vertex {u} repeated")));
                }
                if self.has_edge(u, v) {
                    g.set(i, j);
                    g.set(j, i);
                }
            }
        }
        g.edges = popcount(&g.adj) / 2;
        Ok(g)
    }

    /// The subgraph induced on ids `0..k`, keeping lineage. For an ILM graph
    /// with `k = n_s` this is exactly `ILM_s`.
    pub fn prefix(&self, k: usize) -> Result<Graph> {
        if k > self.n {
            return Err(Error::VertexOutOfRange { vertex: k, n: self.n });
        }
        let stride = words_for(k);
        let mut adj = Vec::with_capacity(k * stride);
        for v in 0..k {
            let start = adj.len();
            adj.extend_from_slice(&self.row(v)[..stride]);
            mask_tail(&mut adj[start..], k);
        }
        let lineage = self.lineage[..k].to_vec();
        let generation = lineage.iter().map(Lineage::step).max().unwrap_or(0);
        Ok(Graph::from_parts(k, adj, lineage, generation))
    }

    /// Number of seed (original) vertices.
    pub fn seed_order(&self) -> usize {
        self.lineage
            .iter()
            .filter(|l| matches!(l, Lineage::Original(_)))
            .count()
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut edges: Vec<(usize, usize)> = self.edges().collect();
        edges.extend(other.edges().map(|(u, v)| (u + self.n, v + self.n)));
        Graph::from_edges(n, &edges).expect("shifted edges are in range")
    }

    /// The set of vertices descending from `root` (including `root`).
    pub fn descendants(&self, root: usize) -> Result<VertexSet> {
        self.check(root)?;
        let mut s = VertexSet::new(self.n);
        s.insert(root);
        for v in root + 1..self.n {
            if let Some(p) = self.lineage[v].parent() {
                if s.contains(p) {
                    s.insert(v);
                }
            }
        }
        Ok(s)
    }

    /// Connected components as vertex sets, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut unseen = VertexSet::full(self.n);
        let mut out = Vec::new();
        while let Some(start) = unseen.first() {
            let mut comp = VertexSet::new(self.n);
            comp.insert(start);
            unseen.remove(start);
            let mut frontier = vec![start];
            while let Some(u) = frontier.pop() {
                for v in ones(self.row(u)) {
                    if unseen.remove(v) {
                        comp.insert(v);
                        frontier.push(v);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Components of the graph with `removed` deleted.
    pub fn components_without(&self, removed: &VertexSet) -> usize {
        let mut unseen = removed.complement();
        let mut count = 0;
        while let Some(start) = unseen.first() {
            count += 1;
            unseen.remove(start);
            let mut frontier = vec![start];
            while let Some(u) = frontier.pop() {
                for v in ones(self.row(u)) {
                    if unseen.remove(v) {
                        frontier.push(v);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Checks the structural invariants: symmetric, loop-free, consistent
    /// edge count, lineage parents older than children.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.lineage.len() != self.n {
            return Err("lineage length mismatch".into());
        }
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return Err(format!("loop at {u}"));
            }
            let row = self.row(u);
            let rem = self.n % WORD_BITS;
            if rem != 0 && row[self.stride - 1] >> rem != 0 {
                return Err(format!("stray bits past n in row {u}"));
            }
            for v in ones(row) {
                if !self.has_edge(v, u) {
                    return Err(format!("asymmetric edge {u}->{v}"));
                }
            }
            if let Some(p) = self.lineage[u].parent() {
                if p >= u {
                    return Err(format!("vertex {u} has parent {p}"));
                }
            }
        }
        if popcount(&self.adj) != 2 * self.edges {
            return Err("edge count disagrees with adjacency".into());
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .field("generation", &self.generation)
            .finish()
    }
}
