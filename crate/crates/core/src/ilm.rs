//! The locally transitive (LT) and locally anti-transitive (LAT) cloning
//! steps, and the iterated local model driven by a binary sequence.
//!
//! Step `t -> t+1` appends one clone per vertex: the clone of vertex `i`
//! gets id `n_t + i`, so `ILM_t` is always the subgraph induced on the first
//! `n_t` ids of any later graph.

use serde::{Deserialize, Serialize};

use crate::bitset::{mask_tail, or_shifted, words_for, WORD_BITS};
use crate::error::{Error, Result};
use crate::graph::{Graph, Lineage};
use crate::sequence::Sequence;

pub const DEFAULT_MAX_VERTICES: usize = 1 << 15;

/// Environment variable overriding [`DEFAULT_MAX_VERTICES`].
pub const MAX_VERTICES_ENV: &str = "ILM_MAX_VERTICES";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

impl Limits {
    /// Default limits, with `ILM_MAX_VERTICES` applied when set and valid.
    pub fn from_env() -> Limits {
        let mut l = Limits::default();
        if let Some(v) = std::env::var(MAX_VERTICES_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
        {
            l.max_vertices = v;
        }
        l
    }

    fn check(&self, requested: usize) -> Result<()> {
        if requested > self.max_vertices {
            Err(Error::Capacity {
                what: "graph order",
                requested,
                limit: self.max_vertices,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    Transitive,
    AntiTransitive,
}

impl StepKind {
    pub fn from_bit(bit: u8) -> StepKind {
        if bit == 0 {
            StepKind::AntiTransitive
        } else {
            StepKind::Transitive
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            StepKind::Transitive => 1,
            StepKind::AntiTransitive => 0,
        }
    }
}

/// Applies one cloning step, refusing to exceed `limits`.
pub fn step(g: &Graph, kind: StepKind, limits: &Limits) -> Result<Graph> {
    let n = g.n();
    if n == 0 {
        return Err(Error::usage("cannot clone the empty graph"));
    }
    let n2 = 2 * n;
    limits.check(n2)?;
    let stride = g.stride();
    let stride2 = words_for(n2);
    let mut adj = vec![0u64; n2 * stride2];
    let mut part = vec![0u64; stride];
    for x in 0..n {
        // `part` is the neighbourhood of the clone of x inside V(G).
        let row = g.row(x);
        part.copy_from_slice(row);
        part[x / WORD_BITS] |= 1 << (x % WORD_BITS);
        if kind == StepKind::AntiTransitive {
            for w in part.iter_mut() {
                *w = !*w;
            }
            mask_tail(&mut part, n);
        }
        let orig = &mut adj[x * stride2..(x + 1) * stride2];
        orig[..stride].copy_from_slice(row);
        or_shifted(orig, &part, n, n);
        let clone = &mut adj[(n + x) * stride2..(n + x + 1) * stride2];
        clone[..stride].copy_from_slice(&part);
    }
    // Row y receives part(y) at offset n while clone x' receives part(x); the
    // two agree because y ∈ N[x] ⇔ x ∈ N[y].
    let step = g.generation() + 1;
    let mut lineage = g.lineage().to_vec();
    lineage.extend((0..n).map(|parent| match kind {
        StepKind::Transitive => Lineage::TransitiveClone { parent, step },
        StepKind::AntiTransitive => Lineage::AntiClone { parent, step },
    }));
    Ok(Graph::from_parts(n2, adj, lineage, step))
}

/// `LT(G)`: each clone `x'` is adjacent to `N_G[x]`.
pub fn lt_step(g: &Graph) -> Result<Graph> {
    step(g, StepKind::Transitive, &Limits::default())
}

/// `LAT(G)`: each anti-clone `x*` is adjacent to `V(G) \ N_G[x]`.
pub fn lat_step(g: &Graph) -> Result<Graph> {
    step(g, StepKind::AntiTransitive, &Limits::default())
}

/// Edge count after one step on a graph with `n` vertices and `e` edges:
/// `3e + n` for a transitive step, `n² − e − n` for an anti-transitive one.
pub fn predict_edges(n: u128, e: u128, bit: u8) -> u128 {
    if bit == 1 {
        3 * e + n
    } else {
        n * n - e - n
    }
}

/// `(n_t, e_t)` for `t = 0..=steps` from the recurrences alone.
pub fn edge_recurrence(n0: u128, e0: u128, seq: &Sequence, steps: usize) -> Result<Vec<(u128, u128)>> {
    let mut out = Vec::with_capacity(steps + 1);
    let (mut n, mut e) = (n0, e0);
    out.push((n, e));
    for t in 0..steps {
        let bit = seq
            .bit(t)
            .ok_or_else(|| Error::usage(format!("sequence {seq} has no bit {t}")))?;
        e = predict_edges(n, e, bit);
        n *= 2;
        out.push((n, e));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub bit: u8,
    pub n: usize,
    pub e: usize,
    pub predicted_e: u128,
}

/// Per-step record of a generation run; `step` is the index of the produced
/// graph, `bit` the sequence entry `s_{step-1}` that produced it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationTrace {
    pub records: Vec<StepRecord>,
}

impl GenerationTrace {
    pub fn is_consistent(&self) -> bool {
        self.records.iter().all(|r| r.e as u128 == r.predicted_e)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,bit,n,e,predicted_e\n");
        for r in &self.records {
            out.push_str(&format!("{},{},{},{},{}\n", r.step, r.bit, r.n, r.e, r.predicted_e));
        }
        out
    }
}

/// Applies `s_0 .. s_{steps-1}` to `g0`.
pub fn generate(g0: &Graph, seq: &Sequence, steps: usize, limits: &Limits) -> Result<(Graph, GenerationTrace)> {
    if let Some(len) = seq.finite_len() {
        if len < steps {
            return Err(Error::usage(format!(
                "sequence {seq} has {len} bits but {steps} steps were requested"
            )));
        }
    }
    let final_n = g0
        .n()
        .checked_shl(steps as u32)
        .filter(|&n| steps < usize::BITS as usize && n >> steps == g0.n())
        .unwrap_or(usize::MAX);
    limits.check(final_n)?;
    let mut g = g0.clone();
    let mut trace = GenerationTrace::default();
    for t in 0..steps {
        let bit = seq.bit(t).expect("length checked above");
        let predicted_e = predict_edges(g.n() as u128, g.edge_count() as u128, bit);
        g = step(&g, StepKind::from_bit(bit), limits)?;
        trace.records.push(StepRecord {
            step: t + 1,
            bit,
            n: g.n(),
            e: g.edge_count(),
            predicted_e,
        });
    }
    Ok((g, trace))
}

/// `ILM_s` recovered from a later ILM graph as an induced prefix.
pub fn snapshot(g: &Graph, s: usize) -> Result<Graph> {
    let n0 = g.seed_order();
    let k = n0
        .checked_shl(s as u32)
        .filter(|&k| k <= g.n())
        .ok_or_else(|| Error::usage(format!("graph has no snapshot at step {s}")))?;
    g.prefix(k)
}

/// The bit applied at each step, read back from lineage: entry `i` is `s_i`.
pub fn bits_from_lineage(g: &Graph) -> Vec<u8> {
    let mut bits = vec![None; g.generation()];
    for l in g.lineage() {
        match *l {
            Lineage::TransitiveClone { step, .. } => bits[step - 1] = Some(1),
            Lineage::AntiClone { step, .. } => bits[step - 1] = Some(0),
            Lineage::Original(_) => {}
        }
    }
    bits.into_iter().map(|b| b.unwrap_or(1)).collect()
}
