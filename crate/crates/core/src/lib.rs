//! Symbolic toolkit for graph states and weighted hypergraph states.
//!
//! The crate rewrites weighted hypergraph states under the local gates
//! `Z^a`, `X` and `X^a` with exact dyadic weights, decides local Clifford
//! equivalence of labeled graph states over GF(2), and builds bipartite graph
//! pairs that are equivalent under local unitaries but not under local
//! Clifford operations. A small state-vector oracle cross-checks the rules.

pub mod counterexamples;
pub mod dyadic;
pub mod error;
pub mod export;
pub mod gf2;
pub mod graph;
pub mod hypergraph;
pub mod lc;
pub mod oracle;
pub mod par;
pub mod phase;
pub mod transforms;

#[doc(hidden)]
pub mod cli;

pub use dyadic::{Dyadic, Weight};
pub use error::{Error, Result};
pub use gf2::{BitVec, GF2Matrix};
pub use graph::SimpleGraph;
pub use hypergraph::{Edge, VertexId, WeightedHypergraph};
pub use par::Exec;
pub use transforms::{GateApplication, GateSequence};
