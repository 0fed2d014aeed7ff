//! Seeded matching of edge-correlated power-law graphs.
//!
//! Two graphs are independently edge-sampled from a common Chung-Lu parent
//! and one of them is relabeled by a hidden permutation; given a small set of
//! pre-matched seed pairs, the matcher recovers the rest of the correspondence.
//! The pipeline slices vertices by degree, matches the first slice by counting
//! seeds in exact-distance D-hop neighborhoods, cascades 1-hop matching down
//! the slices, percolates the low-degree remainder, and finishes with the
//! highest-degree slice.
//!
//! The crate also ships the generative model, baseline matchers, parameter
//! estimation for real graph pairs, and a reproducible benchmark harness.

pub mod bench;
pub mod error;
pub mod estimation;
pub mod gen;
pub mod graph;
pub mod matchers;
pub mod rng;
pub mod slicing;

pub use error::Error;
pub use gen::{CorrelatedInstance, ModelParams, WeightSequence};
pub use graph::{Graph, VertexSet};
pub use matchers::{Matching, Stage};
pub use slicing::{DerivedConstants, KStarMode, PldParams};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
