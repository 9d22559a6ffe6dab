//! Hamiltonicity, edge switches, star experiments and induced subgraphs.

mod hamilton;
mod induced;
mod switch;

pub use hamilton::*;
pub use induced::*;
pub use switch::*;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ilm::{generate, Limits};
use crate::named;
use crate::sequence::Sequence;

/// Whether the complement has minimum degree at least `n / 2`.
pub fn complement_is_dirac(g: &Graph) -> bool {
    let n = g.n();
    match g.max_degree() {
        Some(max) => 2 * (n - 1 - max) >= n,
        None => true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaRow {
    pub t: usize,
    pub n: usize,
    pub status: String,
    /// Solver method for Hamiltonian rows.
    pub method: Option<String>,
    /// `2^t < n − 1`, so the centre's descendants must be a separating cut.
    pub cut_forced: bool,
    /// Components left after deleting the centre's descendants.
    pub descendant_cut_components: usize,
    pub descendant_cut_size: usize,
    pub result: Hamiltonicity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaTable {
    /// Order of the star `K_{1,n−1}`.
    pub star_order: usize,
    pub rows: Vec<ZetaRow>,
    /// Smallest `t` from which every tested row is Hamiltonian.
    pub first_hamiltonian: Option<usize>,
    /// A Hamiltonian row followed by a non-Hamiltonian one.
    pub non_monotone: bool,
}

/// Hamiltonicity of `ILT_t(K_{1,n−1})` for `t = 1..=t_max`.
pub fn zeta_star_experiment(n: usize, t_max: usize, opts: &HamiltonOptions, limits: &Limits) -> Result<ZetaTable> {
    if n < 3 {
        return Err(Error::usage("the star experiment needs n >= 3"));
    }
    let (top, _) = generate(&named::star(n - 1), &Sequence::ones(), t_max, limits)?;
    let mut rows = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let g = top.prefix(n << t)?;
        let cut = g.descendants(0)?;
        let result = hamiltonian(&g, opts)?;
        rows.push(ZetaRow {
            t,
            n: g.n(),
            status: result.status().to_string(),
            method: match &result {
                Hamiltonicity::Hamiltonian { method, .. } => Some(method.clone()),
                _ => None,
            },
            cut_forced: (1usize << t) < n - 1,
            descendant_cut_components: g.components_without(&cut),
            descendant_cut_size: cut.len(),
            result,
        });
    }
    let first_hamiltonian = (1..=t_max)
        .find(|&t| rows[t - 1..].iter().all(|r| r.result.is_hamiltonian()));
    let non_monotone = rows
        .windows(2)
        .any(|w| w[0].result.is_hamiltonian() && !w[1].result.is_hamiltonian());
    Ok(ZetaTable {
        star_order: n,
        rows,
        first_hamiltonian,
        non_monotone,
    })
}
