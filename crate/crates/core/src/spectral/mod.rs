//! Normalized Laplacian spectra, spectral gaps and expander-mixing audits.

mod eigen;

pub use eigen::SymmetricEigen;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_SPECTRUM_CAP: usize = 4096;
/// Largest order for which eigenvectors and residuals are computed.
pub const DEFAULT_RESIDUAL_CAP: usize = 1024;
pub const MIXING_TOLERANCE: f64 = 1e-6;

/// `L = I − D^{-1/2} A D^{-1/2}`, row-major. Rows of isolated vertices are zero.
pub fn normalized_laplacian(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let inv_sqrt: Vec<f64> = g
        .degrees()
        .into_iter()
        .map(|d| if d == 0 { 0.0 } else { 1.0 / (d as f64).sqrt() })
        .collect();
    let mut l = vec![0.0; n * n];
    for u in 0..n {
        let row = &mut l[u * n..(u + 1) * n];
        if inv_sqrt[u] > 0.0 {
            row[u] = 1.0;
        }
        for v in g.neighbor_ids(u) {
            row[v] = -inv_sqrt[u] * inv_sqrt[v];
        }
    }
    l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub max_vertices: usize,
    pub residual_max_vertices: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            max_vertices: DEFAULT_SPECTRUM_CAP,
            residual_max_vertices: DEFAULT_RESIDUAL_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `max(|λ_1 − 1|, |λ_{n−1} − 1|)`, and 1 for a single vertex.
    pub gap: f64,
    pub isolated_count: usize,
    /// `max_j ‖L q_j − λ_j q_j‖_∞`, when eigenvectors were computed.
    pub residual: Option<f64>,
    /// True for `n <= 1`, where `λ_1` does not exist.
    pub degenerate: bool,
}

pub fn spectral_gap(eigenvalues: &[f64]) -> f64 {
    match eigenvalues.len() {
        0 | 1 => 1.0,
        n => (eigenvalues[1] - 1.0).abs().max((eigenvalues[n - 1] - 1.0).abs()),
    }
}

pub fn spectrum(g: &Graph) -> Result<Spectrum> {
    spectrum_with(g, &SpectrumOptions::default())
}

pub fn spectrum_with(g: &Graph, opts: &SpectrumOptions) -> Result<Spectrum> {
    let n = g.n();
    if n > opts.max_vertices {
        return Err(Error::Capacity {
            what: "dense eigensolve order",
            requested: n,
            limit: opts.max_vertices,
        });
    }
    let l = normalized_laplacian(g);
    let want_vectors = n <= opts.residual_max_vertices;
    let eig = SymmetricEigen::new(&l, n, want_vectors);
    let residual = want_vectors.then(|| {
        let mut worst: f64 = 0.0;
        for (j, &lambda) in eig.values.iter().enumerate() {
            let q = eig.vector(j).expect("vectors requested");
            for i in 0..n {
                let lq: f64 = l[i * n..(i + 1) * n].iter().zip(q).map(|(a, b)| a * b).sum();
                worst = worst.max((lq - lambda * q[i]).abs());
            }
        }
        worst
    });
    Ok(Spectrum {
        gap: spectral_gap(&eig.values),
        isolated_count: g.degrees().iter().filter(|&&d| d == 0).count(),
        residual,
        degenerate: n <= 1,
        eigenvalues: eig.values,
    })
}

impl Spectrum {
    /// Range, trace and smallest-eigenvalue checks at absolute tolerance `tol`.
    pub fn check_invariants(&self, tol: f64) -> std::result::Result<(), String> {
        let n = self.eigenvalues.len();
        if let Some(bad) = self.eigenvalues.iter().find(|&&x| !(-tol..=2.0 + tol).contains(&x)) {
            return Err(format!("eigenvalue {bad} outside [0, 2]"));
        }
        if n > 0 && self.eigenvalues[0].abs() > tol {
            return Err(format!("smallest eigenvalue {} is not 0", self.eigenvalues[0]));
        }
        let trace: f64 = self.eigenvalues.iter().sum();
        let want = (n - self.isolated_count) as f64;
        if (trace - want).abs() > tol * n.max(1) as f64 {
            return Err(format!("eigenvalue sum {trace} differs from trace {want}"));
        }
        if !(0.0..=1.0 + tol).contains(&self.gap) {
            return Err(format!("gap {} outside [0, 1]", self.gap));
        }
        Ok(())
    }
}

/// `vol(X) / vol(X̄)` for `X` the vertices added by one step applied to a
/// graph with `pre_n` vertices and `pre_e` edges. Since the new vertices are
/// independent, the mixing inequality forces the gap to be at least this.
pub fn step_gap_lower_bound(pre_n: u128, pre_e: u128, bit: u8) -> f64 {
    let (n, e) = (pre_n as f64, pre_e as f64);
    if bit == 1 {
        (2.0 * e + n) / (4.0 * e + n)
    } else {
        let den = n * n - n;
        if den == 0.0 {
            0.0
        } else {
            (n * n - 2.0 * e - n) / den
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingAudit {
    /// `|e(X,X) − vol(X)²/vol(G)|`.
    pub lhs: f64,
    /// `λ vol(X) vol(X̄) / vol(G)`.
    pub rhs: f64,
    /// `lhs <= rhs` up to [`MIXING_TOLERANCE`], relative to `vol(G)`.
    pub holds: bool,
}

pub fn mixing_audit(g: &Graph, x: &VertexSet, gap: f64) -> Result<MixingAudit> {
    if x.universe() != g.n() {
        return Err(Error::usage("vertex set universe differs from graph order"));
    }
    let vol_x = g.volume(x) as f64;
    let vol_xbar = g.volume(&x.complement()) as f64;
    if vol_x == 0.0 || vol_xbar == 0.0 {
        return Err(Error::usage("mixing audit needs positive volume on both sides"));
    }
    let vol = vol_x + vol_xbar;
    let e_xx = g.edges_between(x, x) as f64;
    let lhs = (e_xx - vol_x * vol_x / vol).abs();
    let rhs = gap * vol_x * vol_xbar / vol;
    Ok(MixingAudit {
        lhs,
        rhs,
        holds: lhs <= rhs + MIXING_TOLERANCE * vol,
    })
}

/// Audits `samples` random subsets (each vertex kept with probability 1/2),
/// skipping draws with zero volume on either side.
pub struct MixingAuditor {
    rng: ChaCha8Rng,
}

impl MixingAuditor {
    pub fn new(seed: u64) -> Self {
        MixingAuditor {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn audit(&mut self, g: &Graph, gap: f64, samples: usize) -> Result<Vec<MixingAudit>> {
        if g.edge_count() == 0 {
            return Err(Error::usage("mixing audit needs at least one edge"));
        }
        let n = g.n();
        let mut out = Vec::with_capacity(samples);
        let mut attempts = 0usize;
        while out.len() < samples {
            attempts += 1;
            if attempts > 100 * samples.max(1) {
                return Err(Error::usage("could not draw nondegenerate subsets"));
            }
            let x = VertexSet::from_ids(n, (0..n).filter(|_| self.rng.random_bool(0.5)));
            match mixing_audit(g, &x, gap) {
                Ok(a) => out.push(a),
                Err(Error::Usage(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}
