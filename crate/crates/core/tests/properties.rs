use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ilm_core::metrics::{clustering_coefficient, local_clustering, lt_step_factor};
use ilm_core::params::{
    chromatic_number, diameter_radius, distances, domination_number, find_partition_pair,
    is_dominating, lat_connectivity_predicate, Distance,
};
use ilm_core::spectral::{mixing_audit, spectrum};
use ilm_core::structure::{
    all_graphs, hamiltonian, held_karp, induced_subgraph_search, is_induced_embedding, verify,
    HamiltonOptions,
};
use ilm_core::{generate, lat_step, lt_step, named, predict_edges, Graph, Limits, Sequence, VertexSet};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, p, seed)| named::random_gnp(n, p, seed))
}

fn bits(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=1, 1..=max_len)
}

fn finite(b: &[u8]) -> Sequence {
    Sequence::new(b.to_vec(), None).unwrap()
}

fn assert_simple(g: &Graph) {
    for u in 0..g.n() {
        assert!(!g.has_edge(u, u));
        for v in 0..g.n() {
            assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
        }
    }
    assert_eq!(g.total_volume(), 2 * g.edge_count());
}

/// Brute-force γ by subset enumeration.
fn brute_gamma(g: &Graph) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .filter(|&m| is_dominating(g, &(0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>()))
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn edges_follow_recurrence(g0 in graph(9), b in bits(4)) {
        let (g, trace) = generate(&g0, &finite(&b), b.len(), &Limits::default()).unwrap();
        prop_assert!(trace.is_consistent());
        let (mut n, mut e) = (g0.n() as u128, g0.edge_count() as u128);
        for &bit in &b {
            e = predict_edges(n, e, bit);
            n *= 2;
        }
        prop_assert_eq!((g.n() as u128, g.edge_count() as u128), (n, e));
        assert_simple(&g);
    }

    #[test]
    fn earlier_snapshots_are_induced_prefixes(g0 in graph(7), b in bits(4)) {
        let (top, _) = generate(&g0, &finite(&b), b.len(), &Limits::default()).unwrap();
        for s in 0..b.len() {
            let direct = match s {
                0 => g0.clone(),
                _ => generate(&g0, &finite(&b[..s]), s, &Limits::default()).unwrap().0,
            };
            let pre = top.prefix(g0.n() << s).unwrap();
            prop_assert_eq!(pre.edges().collect::<Vec<_>>(), direct.edges().collect::<Vec<_>>());
        }
        for (v, l) in top.lineage().iter().enumerate().skip(g0.n()) {
            let p = l.parent().unwrap();
            prop_assert_eq!(v - p, g0.n() << (l.step() - 1));
        }
    }

    #[test]
    fn step_degrees(g in graph(10)) {
        let n = g.n();
        let lt = lt_step(&g).unwrap();
        let lat = lat_step(&g).unwrap();
        for x in 0..n {
            let d = g.degree(x).unwrap();
            prop_assert_eq!(lt.degree(x).unwrap(), 2 * d + 1);
            prop_assert_eq!(lt.degree(n + x).unwrap(), d + 1);
            prop_assert_eq!(lat.degree(x).unwrap(), n - 1);
            prop_assert_eq!(d + lat.degree(n + x).unwrap(), n - 1);
        }
        if n >= 2 {
            prop_assert_eq!(lat.max_degree(), Some(n - 1));
        }
    }

    #[test]
    fn complement_is_an_involution(g in graph(32)) {
        let back = g.complement().complement();
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn transitive_step_keeps_distances(g in graph(10)) {
        let lt = lt_step(&g).unwrap();
        for v in 0..g.n() {
            let before = distances(&g, v).unwrap();
            let after = distances(&lt, v).unwrap();
            prop_assert_eq!(&before[..], &after[..g.n()]);
        }
    }

    #[test]
    fn clustering_is_a_mean_in_unit_interval(g in graph(12)) {
        let mut sum = BigRational::from_integer(BigInt::from(0));
        for v in 0..g.n() {
            let c = local_clustering(&g, v).unwrap();
            prop_assert!(*c.numer() <= *c.denom());
            sum += BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()));
        }
        let mean = sum / BigInt::from(g.n());
        prop_assert_eq!(clustering_coefficient(&g).unwrap(), mean);
    }

    #[test]
    fn transitive_clustering_change(g in graph(10)) {
        prop_assume!(g.min_degree().unwrap_or(0) >= 1);
        let factor = lt_step_factor(g.min_degree().unwrap()).unwrap();
        let factor = BigRational::new(BigInt::from(*factor.numer()), BigInt::from(*factor.denom()));
        let before = clustering_coefficient(&g).unwrap();
        let after = clustering_coefficient(&lt_step(&g).unwrap()).unwrap();
        prop_assert!(after >= factor * before);
    }

    #[test]
    fn spectrum_invariants(g in graph(24)) {
        let s = spectrum(&g).unwrap();
        prop_assert!(s.check_invariants(1e-8).is_ok());
        prop_assert!(s.eigenvalues.iter().all(|&l| (-1e-9..=2.0 + 1e-9).contains(&l)));
        let trace: f64 = s.eigenvalues.iter().sum();
        prop_assert!((trace - (g.n() - s.isolated_count) as f64).abs() < 1e-8);
        prop_assert!(s.residual.unwrap_or(0.0) <= 1e-8);
    }

    #[test]
    fn mixing_holds(g in graph(16), mask in any::<u32>()) {
        prop_assume!(g.edge_count() > 0);
        let x = VertexSet::from_ids(g.n(), (0..g.n()).filter(|&i| mask >> i & 1 == 1));
        // Subsets with a zero-volume side are rejected as degenerate.
        prop_assume!(g.volume(&x) > 0 && g.volume(&x.complement()) > 0);
        let gap = spectrum(&g).unwrap().gap;
        prop_assert!(mixing_audit(&g, &x, gap).unwrap().holds);
    }

    #[test]
    fn domination_is_minimum(g in graph(11)) {
        let d = domination_number(&g, 3).unwrap();
        prop_assert!(is_dominating(&g, &d.witness));
        prop_assert_eq!(d.witness.len(), d.gamma);
        prop_assert_eq!(d.gamma, brute_gamma(&g));
    }

    #[test]
    fn partition_pairs_survive_steps(g in graph(9)) {
        let lt = lt_step(&g).unwrap();
        let lat = lat_step(&g).unwrap();
        if let Some((u, v)) = find_partition_pair(&g) {
            for h in [&lt, &lat] {
                let a = h.closed_neighborhood(u).unwrap();
                let b = h.closed_neighborhood(v).unwrap();
                prop_assert!(a.is_disjoint(&b) && a.len() + b.len() == h.n());
            }
        }
        prop_assert_eq!(find_partition_pair(&lt).is_some(), find_partition_pair(&g).is_some());
    }

    #[test]
    fn lat_connectivity_matches(g in graph(10)) {
        prop_assert_eq!(lat_connectivity_predicate(&g), !lat_step(&g).unwrap().is_connected());
    }

    #[test]
    fn anti_transitive_radius_and_chromatic(g in graph(7)) {
        let lat = lat_step(&g).unwrap();
        let r = diameter_radius(&lat).radius;
        prop_assert!(matches!(r, Distance::Infinite) || r.finite().unwrap() >= 3);
        let chi = |h: &Graph| chromatic_number(&Graph::from_edges(h.n(), &h.edges().collect::<Vec<_>>()).unwrap(), 1 << 22).exact.unwrap();
        prop_assert_eq!(chi(&lt_step(&g).unwrap()), chi(&g) + 1);
    }

    #[test]
    fn hamiltonicity_certificates_verify(g in graph(11)) {
        prop_assume!(g.n() >= 3);
        let h = hamiltonian(&g, &HamiltonOptions::default()).unwrap();
        prop_assert!(verify(&g, &h));
        prop_assert_eq!(h.is_hamiltonian(), held_karp(&g).is_some());
    }

    #[test]
    fn induced_search_matches_brute_force(g in graph(8), k in 1usize..=4) {
        for f in all_graphs(k).unwrap() {
            let found = induced_subgraph_search(&g, &f).unwrap();
            if let Some(map) = &found {
                prop_assert!(is_induced_embedding(&g, &f, map));
            }
            let brute = injections(g.n(), k).any(|m| is_induced_embedding(&g, &f, &m));
            prop_assert_eq!(found.is_some(), brute);
        }
    }
}

/// All injective maps `0..k -> 0..n`.
fn injections(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(k as u32);
    (0..total).filter_map(move |mut code| {
        let mut m = Vec::with_capacity(k);
        for _ in 0..k {
            m.push(code % n);
            code /= n;
        }
        let mut s = m.clone();
        s.sort_unstable();
        s.dedup();
        (s.len() == k).then_some(m)
    })
}
