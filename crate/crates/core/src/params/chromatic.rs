//! Exact chromatic number by DSATUR branch and bound.
//!
//! A greedy clique fixes the first colours (symmetry breaking and lower
//! bound), greedy DSATUR gives the first upper bound, and the search only
//! explores colourings strictly better than the incumbent.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

pub const DEFAULT_COLORING_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticReport {
    /// `Some` when the search finished, in which case `lower == upper`.
    pub exact: Option<usize>,
    pub lower: usize,
    pub upper: usize,
    /// Best proper colouring found; it uses more than `upper` colours only
    /// when the seed bracket tightened `upper`.
    pub coloring: Vec<usize>,
    pub nodes: u64,
    /// Whether the bracket from the seed graph tightened the bounds.
    pub used_lineage_bounds: bool,
}

/// Greedy clique grown from each vertex in degree order; returns the largest.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let degrees = g.degrees();
    let mut best = Vec::new();
    for v in 0..g.n() {
        if degrees[v] < best.len() {
            continue;
        }
        let mut cand: Vec<usize> = g.neighbor_ids(v).collect();
        cand.sort_by_key(|&u| (std::cmp::Reverse(degrees[u]), u));
        let mut clique = vec![v];
        for u in cand {
            if clique.iter().all(|&w| g.has_edge(u, w)) {
                clique.push(u);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

struct Dsatur<'a> {
    g: &'a Graph,
    degrees: Vec<usize>,
    color: Vec<usize>,
    /// `nbr[v * k + c]`: neighbours of `v` currently coloured `c`.
    nbr: Vec<u32>,
    sat: Vec<usize>,
    k: usize,
    uncolored: usize,
}

const NONE: usize = usize::MAX;

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph, k: usize) -> Self {
        Dsatur {
            g,
            degrees: g.degrees(),
            color: vec![NONE; g.n()],
            nbr: vec![0; g.n() * k],
            sat: vec![0; g.n()],
            k,
            uncolored: g.n(),
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c;
        self.uncolored -= 1;
        for u in self.g.neighbor_ids(v) {
            let slot = &mut self.nbr[u * self.k + c];
            if *slot == 0 {
                self.sat[u] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v];
        self.color[v] = NONE;
        self.uncolored += 1;
        for u in self.g.neighbor_ids(v) {
            let slot = &mut self.nbr[u * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.sat[u] -= 1;
            }
        }
    }

    /// Uncoloured vertex of maximum saturation, then degree, then smallest id.
    fn pick(&self) -> usize {
        let mut best = NONE;
        for v in 0..self.g.n() {
            if self.color[v] != NONE {
                continue;
            }
            if best == NONE || (self.sat[v], self.degrees[v]) > (self.sat[best], self.degrees[best]) {
                best = v;
            }
        }
        best
    }

    fn free(&self, v: usize, c: usize) -> bool {
        self.nbr[v * self.k + c] == 0
    }
}

/// Plain DSATUR; returns a proper colouring.
fn greedy_dsatur(g: &Graph, clique: &[usize]) -> Vec<usize> {
    let mut st = Dsatur::new(g, g.n().max(1));
    for (c, &v) in clique.iter().enumerate() {
        st.assign(v, c);
    }
    while st.uncolored > 0 {
        let v = st.pick();
        let c = (0..).find(|&c| st.free(v, c)).expect("some colour is free");
        st.assign(v, c);
    }
    st.color
}

struct Search<'a> {
    st: Dsatur<'a>,
    best: usize,
    best_coloring: Vec<usize>,
    lower: usize,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn run(&mut self, used: usize) {
        if self.best <= self.lower || self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if self.st.uncolored == 0 {
            self.best = used;
            self.best_coloring = self.st.color.clone();
            return;
        }
        let v = self.st.pick();
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if !self.st.free(v, c) {
                continue;
            }
            self.st.assign(v, c);
            self.run(used.max(c + 1));
            self.st.unassign(v);
            if self.best <= self.lower || self.exhausted {
                return;
            }
        }
    }
}

fn is_proper(g: &Graph, coloring: &[usize]) -> bool {
    g.edges().all(|(u, v)| coloring[u] != coloring[v])
}

fn colors_used(coloring: &[usize]) -> usize {
    coloring.iter().map(|&c| c + 1).max().unwrap_or(0)
}

/// Exact chromatic number within `budget` search nodes, otherwise bounds.
///
/// When the search runs out and `g` carries ILM lineage, the bounds are
/// intersected with `[χ(seed) + t − 1, χ(seed) + t]`.
pub fn chromatic_number(g: &Graph, budget: u64) -> ChromaticReport {
    let mut report = chromatic_plain(g, budget);
    if report.exact.is_none() && g.generation() > 0 {
        let seed = g.prefix(g.seed_order()).expect("seed prefix exists");
        let seed_report = chromatic_plain(&seed, budget);
        let t = g.generation();
        let lo = seed_report.lower + t - 1;
        let hi = seed_report.upper + t;
        if lo > report.lower || hi < report.upper {
            report.used_lineage_bounds = true;
        }
        report.lower = report.lower.max(lo);
        report.upper = report.upper.min(hi).max(report.lower);
        if report.lower == report.upper {
            report.exact = Some(report.lower);
        }
    }
    report
}

fn chromatic_plain(g: &Graph, budget: u64) -> ChromaticReport {
    if g.n() == 0 {
        return ChromaticReport {
            exact: Some(0),
            lower: 0,
            upper: 0,
            coloring: vec![],
            nodes: 0,
            used_lineage_bounds: false,
        };
    }
    let clique = greedy_clique(g);
    let greedy = greedy_dsatur(g, &clique);
    debug_assert!(is_proper(g, &greedy));
    let upper = colors_used(&greedy);
    let lower = clique.len().max(1);
    let mut search = Search {
        st: Dsatur::new(g, upper),
        best: upper,
        best_coloring: greedy,
        lower,
        nodes: 0,
        budget,
        exhausted: false,
    };
    if upper > lower {
        for (c, &v) in clique.iter().enumerate() {
            search.st.assign(v, c);
        }
        search.run(clique.len());
    }
    let done = !search.exhausted || search.best <= lower;
    ChromaticReport {
        exact: done.then_some(search.best),
        lower: if done { search.best } else { lower },
        upper: search.best,
        coloring: search.best_coloring,
        nodes: search.nodes,
        used_lineage_bounds: false,
    }
}
