//! Graph parameters: distances, chromatic number, domination number and the
//! partition pairs that decide when domination number 2 occurs.

mod chromatic;
mod distance;
mod domination;

pub use chromatic::{chromatic_number, greedy_clique, ChromaticReport, DEFAULT_COLORING_BUDGET};
pub use distance::{diameter_radius, distances, DiameterRadius, Distance};
pub use domination::{
    classify_domination_2, dominating_set_of_size, dominating_vertex, domination_number,
    find_partition_pair, is_dominating, is_union_of_two_cliques, isolated_vertex,
    lat_connectivity_predicate, Domination, DominationCondition, DominationPrediction,
    DEFAULT_DOMINATION_CAP, EXACT_FALLBACK_MAX_N,
};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterReport {
    pub n: usize,
    pub edges: usize,
    #[serde(flatten)]
    pub distances: DiameterRadius,
    pub chromatic: ChromaticReport,
    /// `None` when the search exceeded its size cap.
    pub domination: Option<Domination>,
    pub partition_pair: Option<(usize, usize)>,
    pub dominating_vertex: Option<usize>,
}

pub fn parameter_report(g: &Graph, coloring_budget: u64, domination_cap: usize) -> ParameterReport {
    ParameterReport {
        n: g.n(),
        edges: g.edge_count(),
        distances: diameter_radius(g),
        chromatic: chromatic_number(g, coloring_budget),
        domination: domination_number(g, domination_cap).ok(),
        partition_pair: find_partition_pair(g),
        dominating_vertex: dominating_vertex(g),
    }
}
