//! Induced-subgraph search for small patterns and canonical codes for
//! enumerating graphs up to isomorphism.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_PATTERN_ORDER: usize = 8;
pub const MAX_ENUMERATION_ORDER: usize = 5;

/// Pattern order: each vertex after the first has the most pattern
/// neighbours among those already placed, ties by degree then id.
fn search_order(f: &Graph) -> Vec<usize> {
    let k = f.n();
    let deg = f.degrees();
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while order.len() < k {
        let next = (0..k)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let links = order.iter().filter(|&&j| f.has_edge(i, j)).count();
                (links, deg[i], std::cmp::Reverse(i))
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }
    order
}

struct Matcher<'a> {
    g: &'a Graph,
    f: &'a Graph,
    order: Vec<usize>,
    g_deg: Vec<usize>,
    f_deg: Vec<usize>,
    map: Vec<usize>,
    used: VertexSet,
}

impl Matcher<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let i = self.order[depth];
        let mut cand = self.used.complement();
        for &j in &self.order[..depth] {
            let w = self.map[j];
            let nbrs = self.g.neighbors(w).expect("mapped vertex in range");
            if self.f.has_edge(i, j) {
                cand.intersect_with(&nbrs);
            } else {
                cand = cand.difference(&nbrs);
            }
            if cand.is_empty() {
                return false;
            }
        }
        for v in cand.iter() {
            if self.g_deg[v] < self.f_deg[i] {
                continue;
            }
            self.map[i] = v;
            self.used.insert(v);
            if self.extend(depth + 1) {
                return true;
            }
            self.used.remove(v);
        }
        false
    }
}

/// An injective map `φ` from pattern vertices to vertices of `g` with
/// `φ(i) ~ φ(j)` exactly when `i ~ j`; the first found in id order.
pub fn induced_subgraph_search(g: &Graph, f: &Graph) -> Result<Option<Vec<usize>>> {
    if f.n() > MAX_PATTERN_ORDER {
        return Err(Error::usage(format!(
            "pattern has {} vertices, at most {MAX_PATTERN_ORDER} supported",
            f.n()
        )));
    }
    if f.n() > g.n() {
        return Ok(None);
    }
    let mut m = Matcher {
        g,
        f,
        order: search_order(f),
        g_deg: g.degrees(),
        f_deg: f.degrees(),
        map: vec![0; f.n()],
        used: VertexSet::new(g.n()),
    };
    if !m.extend(0) {
        return Ok(None);
    }
    debug_assert!(is_induced_embedding(g, f, &m.map));
    Ok(Some(m.map))
}

pub fn is_induced_embedding(g: &Graph, f: &Graph, map: &[usize]) -> bool {
    let k = f.n();
    if map.len() != k || map.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let distinct = VertexSet::from_ids(g.n(), map.iter().copied()).len() == k;
    distinct && (0..k).all(|i| (i + 1..k).all(|j| f.has_edge(i, j) == g.has_edge(map[i], map[j])))
}

/// Bit `p` of the code is the `p`-th pair `(i, j)`, `i < j`, in row order.
fn code_under(f: &Graph, perm: &[usize]) -> u64 {
    let k = f.n();
    let mut code = 0u64;
    let mut bit = 0;
    for i in 0..k {
        for j in i + 1..k {
            if f.has_edge(perm[i], perm[j]) {
                code |= 1 << bit;
            }
            bit += 1;
        }
    }
    code
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for len in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=len).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, len);
                    q
                })
            })
            .collect();
    }
    out
}

/// Smallest adjacency code over all relabellings; equal exactly for
/// isomorphic graphs of the same order.
pub fn canonical_code(f: &Graph) -> Result<u64> {
    if f.n() > MAX_PATTERN_ORDER {
        return Err(Error::usage(format!("canonical codes support at most {MAX_PATTERN_ORDER} vertices")));
    }
    Ok(permutations(f.n()).iter().map(|p| code_under(f, p)).min().unwrap_or(0))
}

fn from_code(k: usize, code: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..k {
        for j in i + 1..k {
            if code >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(k, &edges).expect("pairs are in range")
}

/// One representative per isomorphism class on `k` vertices, ordered by
/// canonical code; each representative realises its own code.
pub fn all_graphs(k: usize) -> Result<Vec<Graph>> {
    if k > MAX_ENUMERATION_ORDER {
        return Err(Error::usage(format!("enumeration supports at most {MAX_ENUMERATION_ORDER} vertices")));
    }
    let perms = permutations(k);
    let pairs = k * k.saturating_sub(1) / 2;
    let mut codes: Vec<u64> = (0..1u64 << pairs)
        .map(|c| {
            let g = from_code(k, c);
            perms.iter().map(|p| code_under(&g, p)).min().unwrap_or(0)
        })
        .collect();
    codes.sort_unstable();
    codes.dedup();
    Ok(codes.into_iter().map(|c| from_code(k, c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilm::{generate, Limits};
    use crate::named;
    use crate::sequence::Sequence;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (0..=5).map(|k| all_graphs(k).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34]);
        assert!(all_graphs(6).is_err());
    }

    #[test]
    fn canonical_codes_identify_isomorphs() {
        let p = named::path(4);
        let relabelled = Graph::from_edges(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(canonical_code(&p).unwrap(), canonical_code(&relabelled).unwrap());
        assert_ne!(canonical_code(&p).unwrap(), canonical_code(&named::star(4)).unwrap());
    }

    #[test]
    fn search_examples() {
        let (ilt2, _) = generate(&named::complete(1), &Sequence::ones(), 2, &Limits::default()).unwrap();
        let m = induced_subgraph_search(&ilt2, &named::complete(3)).unwrap().unwrap();
        assert!(is_induced_embedding(&ilt2, &named::complete(3), &m));
        assert_eq!(induced_subgraph_search(&named::complete(3), &Graph::empty(2)).unwrap(), None);
        assert!(induced_subgraph_search(&named::complete(20), &named::complete(9)).is_err());
        let p5 = induced_subgraph_search(&named::petersen(), &named::path(5)).unwrap();
        assert!(p5.is_some());
        assert_eq!(induced_subgraph_search(&named::petersen(), &named::cycle(4)).unwrap(), None);
    }

    #[test]
    fn search_matches_brute_force() {
        let patterns = all_graphs(4).unwrap();
        for seed in 0..6 {
            let g = named::random_gnp(9, 0.4, seed);
            for f in &patterns {
                let brute = brute_contains(&g, f);
                let found = induced_subgraph_search(&g, f).unwrap();
                assert_eq!(found.is_some(), brute, "seed {seed}");
            }
        }
    }

    fn brute_contains(g: &Graph, f: &Graph) -> bool {
        let n = g.n();
        let k = f.n();
        // Every ordered k-tuple of distinct vertices.
        let mut tuple = vec![0usize; k];
        fn rec(g: &Graph, f: &Graph, tuple: &mut Vec<usize>, depth: usize, n: usize) -> bool {
            if depth == tuple.len() {
                return is_induced_embedding(g, f, tuple);
            }
            for v in 0..n {
                if tuple[..depth].contains(&v) {
                    continue;
                }
                tuple[depth] = v;
                if rec(g, f, tuple, depth + 1, n) {
                    return true;
                }
            }
            false
        }
        rec(g, f, &mut tuple, 0, n)
    }
}
