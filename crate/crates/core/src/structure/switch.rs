//! Merging disjoint cycles through edge switches, and the constructive
//! Hamiltonian cycle for ILM graphs with two non-consecutive anti-transitive
//! steps.

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ilm::{bits_from_lineage, snapshot};

use super::hamilton::{palmer, verify_cycle};

/// A 4-cycle `a b … d c` (or `a b … c d`) that uses edge `e` of the first
/// cycle and edge `f` of the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSwitch {
    pub e: (usize, usize),
    pub f: (usize, usize),
    pub cross: [(usize, usize); 2],
    /// Covers every vertex of both cycles.
    pub merged: Vec<usize>,
}

fn check_cycle(g: &Graph, c: &[usize], seen: &mut VertexSet) -> Result<()> {
    if c.len() < 3 {
        return Err(Error::usage("a cycle needs at least 3 vertices"));
    }
    for (i, &v) in c.iter().enumerate() {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
        if seen.contains(v) {
            return Err(Error::usage(format!("vertex {v} repeats across the cycles")));
        }
        seen.insert(v);
        let w = c[(i + 1) % c.len()];
        if !g.has_edge(v, w) {
            return Err(Error::usage(format!("cycle step {v}-{w} is not an edge")));
        }
    }
    Ok(())
}

/// First switch in scan order (edges of `c1`, then edges of `c2`).
pub fn find_edge_switch(g: &Graph, c1: &[usize], c2: &[usize]) -> Result<Option<EdgeSwitch>> {
    let mut seen = VertexSet::new(g.n());
    check_cycle(g, c1, &mut seen)?;
    check_cycle(g, c2, &mut seen)?;
    let (l1, l2) = (c1.len(), c2.len());
    for i in 0..l1 {
        let (a, b) = (c1[i], c1[(i + 1) % l1]);
        // c1 walked from b forward to a.
        let first = || (1..=l1).map(move |k| c1[(i + k) % l1]);
        for j in 0..l2 {
            let (c, d) = (c2[j], c2[(j + 1) % l2]);
            let merged: Vec<usize> = if g.has_edge(a, c) && g.has_edge(b, d) {
                // a → c, then c2 backwards to d, then d → b.
                first().chain((0..l2).map(|k| c2[(j + l2 - k) % l2])).collect()
            } else if g.has_edge(a, d) && g.has_edge(b, c) {
                // a → d, then c2 forwards to c, then c → b.
                first().chain((0..l2).map(|k| c2[(j + 1 + k) % l2])).collect()
            } else {
                continue;
            };
            let cross = if g.has_edge(a, c) && g.has_edge(b, d) {
                [(a, c), (b, d)]
            } else {
                [(a, d), (b, c)]
            };
            debug_assert!(is_cycle_in(g, &merged));
            return Ok(Some(EdgeSwitch {
                e: (a, b),
                f: (c, d),
                cross,
                merged,
            }));
        }
    }
    Ok(None)
}

fn is_cycle_in(g: &Graph, c: &[usize]) -> bool {
    check_cycle(g, c, &mut VertexSet::new(g.n())).is_ok()
}

/// Given a cycle `v_1 … v_m` (`m` even) in the complement of `g`, the two
/// disjoint cycles of `LAT(g)` through the edges `v_i v_{i+1}*` and
/// `v_i* v_{i+1}`, where `x*` has id `n + x`.
pub fn lat_cycle_pair(g: &Graph, complement_cycle: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    let m = complement_cycle.len();
    if m != n || m % 2 == 1 {
        return Err(Error::usage("need a spanning complement cycle of even length"));
    }
    if !verify_cycle(&g.complement(), complement_cycle) {
        return Err(Error::usage("not a Hamiltonian cycle of the complement"));
    }
    let pick = |i: usize, clone_on_odd: bool| {
        let v = complement_cycle[i];
        if (i % 2 == 1) == clone_on_odd {
            n + v
        } else {
            v
        }
    };
    Ok(((0..m).map(|i| pick(i, true)).collect(), (0..m).map(|i| pick(i, false)).collect()))
}

/// A Hamiltonian cycle of `ILM_t` built from its lineage, when the applied
/// bits contain zeros at `τ₁` and at some `β >= τ₁ + 2` with `β < t`.
///
/// The complement of `ILM_{β−1}` is Dirac, so it has a Hamiltonian cycle;
/// routing it through the clones of step `β−1` gives a cycle of the
/// complement of `ILM_β` with four consecutive mutually non-adjacent clones.
/// The anti-transitive step at `β` then yields two cycles joined by an edge
/// switch, and every later transitive step interleaves clones.
pub fn lineage_cycle(g: &Graph) -> Result<Option<Vec<usize>>> {
    let bits = bits_from_lineage(g);
    let t = bits.len();
    let Some(tau1) = bits.iter().position(|&b| b == 0) else {
        return Ok(None);
    };
    let Some(beta) = (tau1 + 2..t).rev().find(|&i| bits[i] == 0) else {
        return Ok(None);
    };
    let prev = snapshot(g, beta - 1)?;
    let m = prev.n();
    if m < 4 {
        return Ok(None);
    }
    let Some(base) = palmer(&prev.complement()) else {
        return Ok(None);
    };
    let (u, v) = (base[0], base[m - 1]);
    let mut route = base.clone();
    let rest = (0..m).filter(|&x| x != u && x != v).map(|x| m + x);
    // Clones of the transitive step touch their parents, so the detour enters
    // through u' and leaves through v'; anti-clones are entered from their
    // own parent.
    if bits[beta - 1] == 1 {
        route.push(m + u);
        route.extend(rest);
        route.push(m + v);
    } else {
        route.push(m + v);
        route.extend(rest);
        route.push(m + u);
    }
    // Start at the first four clones so v_1..v_4 are mutually non-adjacent.
    route.rotate_left(m);
    let cur = snapshot(g, beta)?;
    let (c1, c2) = lat_cycle_pair(&cur, &route)?;
    let next = snapshot(g, beta + 1)?;
    let Some(switch) = find_edge_switch(&next, &c1, &c2)? else {
        return Ok(None);
    };
    let mut cycle = switch.merged;
    for _ in beta + 1..t {
        let n = cycle.len();
        cycle = cycle.iter().flat_map(|&x| [x, n + x]).collect();
    }
    Ok(verify_cycle(g, &cycle).then_some(cycle))
}

/// `M_k` in `ILT_k(K_1)`: starting from the edge `{0, 1}` of `ILT_1(K_1)`,
/// each pair `(x, y)` becomes `(x, y')` and `(x', y)`. The second entry of
/// every pair descends from vertex 1.
pub fn paired_matching(k: usize) -> Vec<(usize, usize)> {
    let mut m = vec![(0, 1)];
    let mut n = 2;
    for _ in 1..k {
        m = m.iter().flat_map(|&(x, y)| [(x, n + y), (n + x, y)]).collect();
        n *= 2;
    }
    if k == 0 {
        m.clear();
    }
    m
}

/// Every pair is an edge from `left` to `right` and each vertex of both
/// classes is covered exactly once.
pub fn is_perfect_matching_between(g: &Graph, pairs: &[(usize, usize)], left: &VertexSet, right: &VertexSet) -> bool {
    let mut covered = VertexSet::new(g.n());
    for &(x, y) in pairs {
        if !left.contains(x) || !right.contains(y) || !g.has_edge(x, y) {
            return false;
        }
        if covered.contains(x) || covered.contains(y) {
            return false;
        }
        covered.insert(x);
        covered.insert(y);
    }
    covered.len() == left.len() + right.len() && left.is_disjoint(right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilm::{generate, lat_step, Limits};
    use crate::named;
    use crate::sequence::Sequence;

    #[test]
    fn triangles_with_two_cross_edges() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4)]).unwrap();
        let s = find_edge_switch(&g, &[0, 1, 2], &[3, 4, 5]).unwrap().unwrap();
        assert_eq!((s.e, s.f), ((0, 1), (3, 4)));
        assert!(verify_cycle(&g, &s.merged));

        let apart = named::parse("K3+K3").unwrap();
        assert_eq!(find_edge_switch(&apart, &[0, 1, 2], &[3, 4, 5]).unwrap(), None);
    }

    #[test]
    fn bad_inputs_are_usage_errors() {
        let g = named::complete(6);
        assert!(find_edge_switch(&g, &[0, 1, 2], &[2, 3, 4]).is_err());
        assert!(find_edge_switch(&g, &[0, 1], &[2, 3, 4]).is_err());
        assert!(find_edge_switch(&named::cycle(6), &[0, 1, 3], &[2, 4, 5]).is_err());
    }

    #[test]
    fn lat_pair_then_switch() {
        // C_4's complement is 2K_2, so take a graph whose complement is C_8.
        let g = named::cycle(8).complement();
        let comp: Vec<usize> = (0..8).collect();
        let (c1, c2) = lat_cycle_pair(&g, &comp).unwrap();
        let h = lat_step(&g).unwrap();
        assert!(find_edge_switch(&h, &c1, &c2).is_ok());
    }

    #[test]
    fn lineage_cycles() {
        let lim = Limits::default();
        for (seed, seq, t) in [
            (named::cycle(4), "(0)*", 3),
            (named::cycle(4), "(01)*", 5),
            (named::complete(2), "0(01)*", 4),
            (named::petersen(), "(0)*", 3),
            (named::star(4), "1(100)*", 6),
            (named::path(4), "(01)*", 6),
        ] {
            let (g, _) = generate(&seed, &Sequence::parse(seq).unwrap(), t, &lim).unwrap();
            let c = lineage_cycle(&g).unwrap();
            assert!(c.is_some_and(|c| verify_cycle(&g, &c)), "{seq} t={t}");
        }
        let (g, _) = generate(&named::cycle(4), &Sequence::zeros(), 2, &lim).unwrap();
        assert_eq!(lineage_cycle(&g).unwrap(), None);
    }

    #[test]
    fn paired_matchings_are_perfect() {
        let lim = Limits::default();
        for k in 1..=6 {
            let (g, _) = generate(&named::complete(1), &Sequence::ones(), k, &lim).unwrap();
            let right = g.descendants(1).unwrap();
            let left = right.complement();
            assert!(is_perfect_matching_between(&g, &paired_matching(k), &left, &right), "k={k}");
        }
    }
}
