//! Density series and clustering coefficients, with the bound curves they
//! are compared against.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bitset::popcount;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ilm::{edge_recurrence, Limits};
use crate::sequence::Sequence;

/// Edges among the neighbours of `v` and `deg(v)`.
fn neighbourhood_edges(g: &Graph, v: usize) -> (u64, u64) {
    let nv = g.row(v);
    let twice: usize = g
        .neighbor_ids(v)
        .map(|u| {
            g.row(u)
                .iter()
                .zip(nv)
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum::<usize>()
        })
        .sum();
    (twice as u64 / 2, popcount(nv) as u64)
}

/// `c(v) = |E(G[N(v)])| / C(deg v, 2)`, and 0 when `deg v <= 1`.
pub fn local_clustering(g: &Graph, v: usize) -> Result<Ratio<u64>> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let (edges, d) = neighbourhood_edges(g, v);
    if d <= 1 {
        return Ok(Ratio::zero());
    }
    Ok(Ratio::new(edges, d * (d - 1) / 2))
}

/// Exact mean of the local clustering coefficients.
pub fn clustering_coefficient(g: &Graph) -> Result<BigRational> {
    if g.n() == 0 {
        return Err(Error::usage("clustering coefficient of the empty graph"));
    }
    // Group numerators by denominator so only a handful of big additions occur.
    let mut by_denominator: BTreeMap<u64, u128> = BTreeMap::new();
    for v in 0..g.n() {
        let (edges, d) = neighbourhood_edges(g, v);
        if d > 1 {
            *by_denominator.entry(d * (d - 1) / 2).or_default() += edges as u128;
        }
    }
    let sum = by_denominator
        .into_iter()
        .fold(BigRational::zero(), |acc, (den, num)| {
            acc + BigRational::new(BigInt::from(num), BigInt::from(den))
        });
    Ok(sum / BigInt::from(g.n()))
}

pub fn clustering_coefficient_f64(g: &Graph) -> Result<f64> {
    if g.n() == 0 {
        return Err(Error::usage("clustering coefficient of the empty graph"));
    }
    let sum: f64 = (0..g.n())
        .map(|v| {
            let (edges, d) = neighbourhood_edges(g, v);
            if d > 1 {
                edges as f64 / (d * (d - 1) / 2) as f64
            } else {
                0.0
            }
        })
        .sum();
    Ok(sum / g.n() as f64)
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringReport {
    pub local: Vec<Ratio<u64>>,
    pub mean_exact: BigRational,
    pub mean: f64,
    pub min_degree: usize,
}

pub fn clustering_report(g: &Graph) -> Result<ClusteringReport> {
    let local = (0..g.n())
        .map(|v| local_clustering(g, v))
        .collect::<Result<Vec<_>>>()?;
    let mean_exact = clustering_coefficient(g)?;
    Ok(ClusteringReport {
        local,
        mean: big_to_f64(&mean_exact),
        mean_exact,
        min_degree: g.min_degree().unwrap_or(0),
    })
}

/// Exact one-step factor `7/8 − 3/(8δ)` for a transitive step.
pub fn lt_step_factor(min_degree: usize) -> Result<Ratio<i64>> {
    if min_degree == 0 {
        return Err(Error::usage("transitive clustering factor needs minimum degree >= 1"));
    }
    Ok(Ratio::new(7, 8) - Ratio::new(3, 8 * min_degree as i64))
}

/// Exact floor `(7/8)^k / 4^(k+2)` for bounded-gap sequences.
pub fn bounded_gap_floor(k: u32) -> Ratio<u128> {
    Ratio::new(7u128.pow(k), 8u128.pow(k) * 4u128.pow(k + 2))
}

/// Exact floor `1 / 2^(2k+4)` right after an anti-transitive step.
pub fn anti_transitive_floor(k: u32) -> Ratio<u128> {
    Ratio::new(1, 1u128 << (2 * k + 4))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurves {
    /// `7/8 − 3/(8δ)`.
    pub step_factor: f64,
    /// `(7/8)^t t^(-3/7)`, the decay shape for pure transitive runs.
    pub ilt_envelope: f64,
    /// `∏_{i=1..t} (7/8 − 3/(8i))`, the product that envelope comes from.
    pub ilt_product: f64,
    /// `(7/8)^k / 4^(k+2)`.
    pub bounded_gap_floor: f64,
    /// `1 / 2^(2k+4)`.
    pub anti_transitive_floor: f64,
}

pub fn clustering_bound_curves(k: u32, t: u32, delta: usize) -> Result<BoundCurves> {
    if k == 0 {
        return Err(Error::usage("gap bound k must be >= 1"));
    }
    let step_factor = lt_step_factor(delta)?;
    let ilt_envelope = if t == 0 {
        1.0
    } else {
        (7.0f64 / 8.0).powi(t as i32) * (t as f64).powf(-3.0 / 7.0)
    };
    let ilt_product = (1..=t).map(|i| 7.0 / 8.0 - 3.0 / (8.0 * i as f64)).product();
    let ratio_f64 = |r: Ratio<u128>| *r.numer() as f64 / *r.denom() as f64;
    Ok(BoundCurves {
        step_factor: *step_factor.numer() as f64 / *step_factor.denom() as f64,
        ilt_envelope,
        ilt_product,
        bounded_gap_floor: ratio_f64(bounded_gap_floor(k)),
        anti_transitive_floor: ratio_f64(anti_transitive_floor(k)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub t: usize,
    pub n: u128,
    pub e: u128,
    pub edges_per_vertex: f64,
    /// `e / C(n, 2)`.
    pub density: f64,
    pub beta: Option<usize>,
    /// `2^β (3/2)^(t−β) n_t`, up to constants.
    pub envelope: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DensitySeries {
    pub rows: Vec<DensityRow>,
}

impl DensitySeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,n,e,e_per_n,density,beta,envelope\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.t,
                r.n,
                r.e,
                crate::io::fmt_float(r.edges_per_vertex),
                crate::io::fmt_float(r.density),
                r.beta.map(|b| b.to_string()).unwrap_or_default(),
                r.envelope.map(crate::io::fmt_float).unwrap_or_default(),
            ));
        }
        out
    }

    /// Whether `e_t / n_t` exceeds `e_{t-2} / n_{t-2}` for every `t >= from`.
    pub fn densifies_from(&self, from: usize) -> bool {
        self.rows.windows(3).all(|w| {
            let (a, c) = (&w[0], &w[2]);
            c.t < from.max(2) || c.e * a.n > a.e * c.n
        })
    }
}

/// Density statistics for `t = 0..=t_max`, from the exact edge recurrences.
pub fn density_series(g0: &Graph, seq: &Sequence, t_max: usize, limits: &Limits) -> Result<DensitySeries> {
    let n_max = (g0.n() as u128) << t_max;
    if n_max > limits.max_vertices as u128 {
        return Err(Error::Capacity {
            what: "density series order",
            requested: usize::try_from(n_max).unwrap_or(usize::MAX),
            limit: limits.max_vertices,
        });
    }
    let rec = edge_recurrence(g0.n() as u128, g0.edge_count() as u128, seq, t_max)?;
    let rows = rec
        .into_iter()
        .enumerate()
        .map(|(t, (n, e))| {
            let pairs = n * n.saturating_sub(1) / 2;
            let beta = seq.beta(t);
            DensityRow {
                t,
                n,
                e,
                edges_per_vertex: e as f64 / n as f64,
                density: if pairs == 0 { 0.0 } else { e as f64 / pairs as f64 },
                beta,
                envelope: beta.map(|b| 2f64.powi(b as i32) * 1.5f64.powi((t - b) as i32) * n as f64),
            }
        })
        .collect();
    Ok(DensitySeries { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilm::{generate, lt_step};
    use crate::named;

    /// Brute force: count edges among neighbours pair by pair.
    fn brute_local(g: &Graph, v: usize) -> (usize, usize) {
        let nb: Vec<usize> = (0..g.n()).filter(|&u| g.has_edge(u, v)).collect();
        let mut e = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                e += g.has_edge(a, b) as usize;
            }
        }
        (e, nb.len())
    }

    #[test]
    fn local_examples() {
        let k3 = named::complete(3);
        assert_eq!(local_clustering(&k3, 0).unwrap(), Ratio::from_integer(1));
        let star = named::star(3);
        assert_eq!(local_clustering(&star, 0).unwrap(), Ratio::zero());
        // C4 plus chord 0-2: vertex 0 has neighbours 1, 2, 3 and only 1-2, 2-3.
        let chord = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let (e, d) = brute_local(&chord, 0);
        assert_eq!((e, d), (2, 3));
        assert_eq!(local_clustering(&chord, 0).unwrap(), Ratio::new(2, 3));
        assert_eq!(local_clustering(&chord, 1).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn local_matches_brute_force() {
        let g = named::random_gnp(40, 0.3, 11);
        for v in 0..g.n() {
            let (e, d) = brute_local(&g, v);
            let want = if d <= 1 { Ratio::zero() } else { Ratio::new(e as u64, (d * (d - 1) / 2) as u64) };
            assert_eq!(local_clustering(&g, v).unwrap(), want);
        }
    }

    #[test]
    fn global_examples() {
        assert_eq!(clustering_coefficient(&named::complete(4)).unwrap(), BigRational::from_integer(1.into()));
        assert!(clustering_coefficient(&Graph::empty(2)).unwrap().is_zero());
        let g = named::random_gnp(30, 0.5, 3);
        let exact = big_to_f64(&clustering_coefficient(&g).unwrap());
        assert!((exact - clustering_coefficient_f64(&g).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn bound_curve_examples() {
        assert_eq!(bounded_gap_floor(2), Ratio::new(49, 16384));
        assert_eq!(anti_transitive_floor(2), Ratio::new(1, 256));
        assert_eq!(lt_step_factor(3).unwrap(), Ratio::new(3, 4));
        let c = clustering_bound_curves(2, 5, 1_000_000).unwrap();
        assert!((c.step_factor - 0.875).abs() < 1e-6);
        assert!((c.bounded_gap_floor - 0.00299072265625).abs() < 1e-15);
        assert!(clustering_bound_curves(2, 5, 0).is_err());
    }

    #[test]
    fn clone_clustering_dominates_parent() {
        let g = named::random_gnp(25, 0.4, 5);
        let h = lt_step(&g).unwrap();
        for x in 0..g.n() {
            assert!(local_clustering(&h, g.n() + x).unwrap() >= local_clustering(&g, x).unwrap());
        }
    }

    #[test]
    fn density_examples() {
        let s = Sequence::parse("(10)*").unwrap();
        let series = density_series(&named::complete(1), &s, 8, &Limits::default()).unwrap();
        assert_eq!(series.rows[8].e, 13705);
        let ratio = series.rows[8].e as f64 / (16.0 / 19.0 * 2f64.powi(14));
        assert!((ratio - 0.993328094482).abs() < 1e-9);

        // ILT average degree (3/2)^t (Vol/n0 + 2) − 2 on K1: e_t/n_t.
        let ones = density_series(&named::complete(1), &Sequence::ones(), 6, &Limits::default()).unwrap();
        for r in &ones.rows {
            let avg = 2.0 * r.edges_per_vertex;
            assert!((avg - (1.5f64.powi(r.t as i32) * 2.0 - 2.0)).abs() < 1e-9);
        }

        // ILAT: density drifts towards 2/5.
        let zeros = density_series(&named::complete(1), &Sequence::zeros(), 10, &Limits::default()).unwrap();
        assert!((zeros.rows[10].density - 0.4).abs() < 0.01);
        assert!(zeros.densifies_from(2));
    }

    #[test]
    fn density_matches_construction() {
        let s = Sequence::parse("1(100)*").unwrap();
        let g0 = named::cycle(5);
        let (g, _) = generate(&g0, &s, 6, &Limits::default()).unwrap();
        let series = density_series(&g0, &s, 6, &Limits::default()).unwrap();
        assert_eq!(series.rows[6].e, g.edge_count() as u128);
        assert!(density_series(&g0, &s, 20, &Limits::default()).is_err());
    }
}
