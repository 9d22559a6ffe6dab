use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sequence::Sequence;

/// Sizes up to this are always searched; beyond it only graphs with at most
/// [`EXACT_FALLBACK_MAX_N`] vertices are.
pub const DEFAULT_DOMINATION_CAP: usize = 3;
pub const EXACT_FALLBACK_MAX_N: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domination {
    pub gamma: usize,
    /// Lexicographically smallest minimum dominating set.
    pub witness: Vec<usize>,
}

struct Cover<'a> {
    closed: &'a [VertexSet],
    max_closed: usize,
    chosen: Vec<usize>,
}

impl Cover<'_> {
    /// Extends `chosen` by exactly `left` vertices `>= start` so that
    /// `covered` becomes everything, trying candidates in increasing order.
    fn search(&mut self, covered: &VertexSet, left: usize, start: usize) -> bool {
        let uncovered = covered.complement();
        let Some(u) = uncovered.first() else {
            return left == 0 || self.pad(left, start);
        };
        if left == 0 || uncovered.len() > left * self.max_closed {
            return false;
        }
        if left == 1 {
            let mut cand = self.closed[u].clone();
            for w in uncovered.iter().skip(1) {
                cand.intersect_with(&self.closed[w]);
                if cand.is_empty() {
                    return false;
                }
            }
            return match cand.next_from(start) {
                Some(z) => {
                    self.chosen.push(z);
                    true
                }
                None => false,
            };
        }
        // Later picks are larger, so the smallest uncovered vertex must be
        // covered by a pick no larger than its largest closed neighbour.
        let last = self.closed[u].iter().last().expect("closed sets are nonempty");
        let n = covered.universe();
        for a in start..=last.min(n - left) {
            self.chosen.push(a);
            if self.search(&covered.union(&self.closed[a]), left - 1, a + 1) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }

    /// Already dominating: fill the remaining picks with the smallest ids.
    fn pad(&mut self, left: usize, start: usize) -> bool {
        let n = self.closed.len();
        if start + left > n {
            return false;
        }
        self.chosen.extend(start..start + left);
        true
    }
}

/// Lexicographically smallest dominating set of size exactly `k`, if any.
pub fn dominating_set_of_size(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let n = g.n();
    if k > n {
        return None;
    }
    let closed = g.closed_neighborhoods();
    let max_closed = closed.iter().map(VertexSet::len).max().unwrap_or(0);
    let mut cover = Cover {
        closed: &closed,
        max_closed,
        chosen: Vec::with_capacity(k),
    };
    cover
        .search(&VertexSet::new(n), k, 0)
        .then_some(cover.chosen)
}

/// `γ(g)` with a witness. Sizes `1..=cap` are always tried; larger sizes
/// only when `g` has at most [`EXACT_FALLBACK_MAX_N`] vertices.
pub fn domination_number(g: &Graph, cap: usize) -> Result<Domination> {
    for k in 0..=g.n() {
        if k > cap && g.n() > EXACT_FALLBACK_MAX_N {
            return Err(Error::Capacity {
                what: "domination search size",
                requested: k,
                limit: cap,
            });
        }
        if let Some(witness) = dominating_set_of_size(g, k) {
            return Ok(Domination { gamma: k, witness });
        }
    }
    unreachable!("the whole vertex set dominates")
}

pub fn is_dominating(g: &Graph, set: &[usize]) -> bool {
    let mut covered = VertexSet::new(g.n());
    for &v in set {
        match g.closed_neighborhood(v) {
            Ok(c) => covered.union_with(&c),
            Err(_) => return false,
        }
    }
    covered.len() == g.n()
}

/// Lexicographically smallest pair `u < v` with `N[u] ∪ N[v] = V` and
/// `N[u] ∩ N[v] = ∅`.
pub fn find_partition_pair(g: &Graph) -> Option<(usize, usize)> {
    let closed = g.closed_neighborhoods();
    let n = g.n();
    for u in 0..n {
        let rest = closed[u].complement();
        // v lies in the complement of N[u], and its closed set must equal it.
        for v in rest.iter() {
            if v > u && closed[v] == rest {
                return Some((u, v));
            }
        }
    }
    None
}

pub fn dominating_vertex(g: &Graph) -> Option<usize> {
    let n = g.n();
    (0..n).find(|&v| g.row(v).iter().map(|w| w.count_ones() as usize).sum::<usize>() + 1 == n)
}

pub fn isolated_vertex(g: &Graph) -> Option<usize> {
    (0..g.n()).find(|&v| g.row(v).iter().all(|&w| w == 0))
}

/// Whether `g` is the disjoint union of exactly two (nonempty) complete graphs.
pub fn is_union_of_two_cliques(g: &Graph) -> bool {
    let comps = g.components();
    comps.len() == 2
        && comps.iter().all(|c| {
            let k = c.len();
            c.iter().all(|v| g.row(v).iter().map(|w| w.count_ones() as usize).sum::<usize>() + 1 == k)
        })
}

/// `LAT(g)` is disconnected exactly when `g` has a dominating vertex or is
/// the disjoint union of two complete graphs.
pub fn lat_connectivity_predicate(g: &Graph) -> bool {
    dominating_vertex(g).is_some() || is_union_of_two_cliques(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominationCondition {
    PartitionPair,
    IsolatedVertexFirstStep,
    DominatingVertexDoubleZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationPrediction {
    pub predicts_two: bool,
    /// First condition that holds, in the listed order.
    pub condition: Option<DominationCondition>,
    /// False at `t = τ₁ + 1` when only the dominating-vertex pattern
    /// (minus its time requirement) applies; such instances are recorded.
    pub assertable: bool,
}

/// Predicts whether `γ(ILM_t(g0, s)) = 2` for `t >= τ₁ + 1`.
pub fn classify_domination_2(g0: &Graph, s: &Sequence, t: usize) -> Result<DominationPrediction> {
    let tau1 = s
        .tau1()
        .ok_or_else(|| Error::usage(format!("sequence {s} has no zero")))?;
    if t < tau1 + 1 {
        return Err(Error::usage(format!("step {t} precedes τ₁ + 1 = {}", tau1 + 1)));
    }
    let double_zero = s.bit(tau1 + 1) == Some(0);
    let has_dominating = dominating_vertex(g0).is_some();
    let condition = if find_partition_pair(g0).is_some() {
        Some(DominationCondition::PartitionPair)
    } else if isolated_vertex(g0).is_some() && tau1 == 0 {
        Some(DominationCondition::IsolatedVertexFirstStep)
    } else if has_dominating && double_zero && t >= tau1 + 2 {
        Some(DominationCondition::DominatingVertexDoubleZero)
    } else {
        None
    };
    let borderline = condition.is_none() && has_dominating && double_zero && t == tau1 + 1;
    Ok(DominationPrediction {
        predicts_two: condition.is_some(),
        condition,
        assertable: !borderline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilm::{generate, lat_step, lt_step, Limits};
    use crate::named;

    /// Smallest dominating set by enumerating subsets in size then colex order.
    fn brute_gamma(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|&mask| {
                let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                is_dominating(g, &set)
            })
            .map(u32::count_ones)
            .min()
            .unwrap() as usize
    }

    #[test]
    fn gamma_examples() {
        let d = domination_number(&named::cycle(4), 3).unwrap();
        assert_eq!(d, Domination { gamma: 2, witness: vec![0, 1] });
        assert_eq!(domination_number(&named::star(4), 3).unwrap().witness, vec![0]);
        assert_eq!(domination_number(&Graph::empty(5), 3).unwrap().gamma, 5);
        assert_eq!(domination_number(&named::path(7), 1).unwrap().gamma, 3);
        assert_eq!(domination_number(&Graph::empty(0), 3).unwrap().gamma, 0);
    }

    #[test]
    fn gamma_matches_brute_force() {
        for seed in 0..15 {
            let g = named::random_gnp(11, 0.2, seed);
            let d = domination_number(&g, 3).unwrap();
            assert!(is_dominating(&g, &d.witness));
            assert_eq!(d.gamma, brute_gamma(&g), "seed {seed}");
        }
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        let g = named::cycle(6);
        assert_eq!(dominating_set_of_size(&g, 2).unwrap(), vec![0, 3]);
        assert_eq!(dominating_set_of_size(&g, 3).unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn large_gamma_beyond_cap_is_refused() {
        let g = Graph::empty(70);
        assert!(matches!(domination_number(&g, 3), Err(Error::Capacity { .. })));
    }

    #[test]
    fn partition_pairs() {
        assert_eq!(find_partition_pair(&Graph::empty(2)), Some((0, 1)));
        assert_eq!(find_partition_pair(&named::cycle(4)), None);
        assert_eq!(find_partition_pair(&named::complete(2)), None);
        assert_eq!(find_partition_pair(&named::path(4)), Some((0, 3)));
        let two = Graph::empty(2);
        for h in [lt_step(&two).unwrap(), lat_step(&two).unwrap()] {
            assert!(find_partition_pair(&h).is_some());
        }
    }

    #[test]
    fn lat_predicate_examples() {
        assert!(lat_connectivity_predicate(&named::complete(1)));
        assert!(lat_connectivity_predicate(&named::parse("K2+K3").unwrap()));
        let c5 = named::cycle(5);
        assert!(!lat_connectivity_predicate(&c5));
        assert!(lat_step(&c5).unwrap().is_connected());
    }

    #[test]
    fn classification_examples() {
        let zeros = Sequence::zeros();
        let p = classify_domination_2(&named::complete(1), &zeros, 2).unwrap();
        assert!(p.predicts_two);
        // K1+K2 would also have a partition pair; P4 has no dominating vertex.
        let iso = named::parse("K1+P4").unwrap();
        let p = classify_domination_2(&iso, &Sequence::parse("0(1)*").unwrap(), 1).unwrap();
        assert_eq!(p.condition, Some(DominationCondition::IsolatedVertexFirstStep));
        let p = classify_domination_2(&named::cycle(4), &Sequence::parse("(01)*").unwrap(), 3).unwrap();
        assert!(!p.predicts_two);
        assert!(classify_domination_2(&named::cycle(4), &Sequence::ones(), 3).is_err());
        assert!(classify_domination_2(&named::cycle(4), &zeros, 0).is_err());

        let seq = Sequence::parse("100(1)*").unwrap();
        let p = classify_domination_2(&named::star(3), &seq, 2).unwrap();
        assert!(!p.predicts_two && !p.assertable);
    }

    #[test]
    fn transitive_steps_preserve_gamma() {
        for seed in 0..6 {
            let g = named::random_gnp(9, 0.3, seed);
            let want = domination_number(&g, 3).unwrap().gamma;
            let (h, _) = generate(&g, &Sequence::ones(), 3, &Limits::default()).unwrap();
            assert_eq!(domination_number(&h, 9).unwrap().gamma, want);
        }
    }

    #[test]
    fn c4_alternating_reaches_three() {
        let (g, _) = generate(&named::cycle(4), &Sequence::parse("0101").unwrap(), 4, &Limits::default()).unwrap();
        assert_eq!(domination_number(&g, 3).unwrap().gamma, 3);
    }
}
