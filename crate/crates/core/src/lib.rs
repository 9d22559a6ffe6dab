//! Iterated local model (ILM) graphs.
//!
//! Each step clones every vertex: a transitive clone joins the closed
//! neighbourhood of its parent, an anti-transitive clone joins the parent's
//! non-neighbours. A binary sequence picks the step type at each time.
//!
//! The crate builds these graphs on a dense bit-matrix and measures them:
//! density, clustering, distances, colouring, domination, normalized
//! Laplacian spectra, Hamiltonicity and induced subgraphs. The [`harness`]
//! module runs those measurements against the known structural results for
//! the model over a corpus of instances.

pub mod bitset;
pub mod error;
pub mod graph;
pub mod ilm;
pub mod io;
pub mod metrics;
pub mod named;
pub mod params;
pub mod sequence;
pub mod spectral;
pub mod harness;
pub mod structure;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use graph::{Graph, Lineage};
pub use ilm::{generate, lat_step, lt_step, predict_edges, GenerationTrace, Limits, StepKind};
pub use sequence::Sequence;
