//! Symmetric rigidity of plane bar-joint frameworks, decided from quotient
//! gain graphs over the plane point groups.
//!
//! The crate works with a gain graph `(G, ψ)` over a group `Γ` and its covering
//! graph. It provides
//!
//! * the count functions ρ, μ and ν_t and the rigidity matroids they define,
//! * mixed- and gain-mixed-connectivity with explicit witnesses,
//! * symmetric covers built from edge partitions,
//! * a numerical rigidity-matrix oracle for cross-checking the combinatorics.

pub mod connectivity;
pub mod covering;
pub mod error;
pub mod fixtures;
pub mod gain_graph;
pub mod group;
pub mod matroid;
pub mod numeric;
pub mod symcover;

pub use covering::{CoveringGraph, FixedEdgeReport};
pub use error::{Error, Result};
pub use gain_graph::{BalanceClass, BalanceKind, Edge, EdgeId, GainGraph, SplitWitness, Step, VertexId, Walk};
pub use group::{GroupElement, GroupKind, GroupSpec, Subgroup, SubgroupClass};
