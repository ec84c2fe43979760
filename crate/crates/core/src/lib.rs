//! Simplex trees: a trie over sorted vertex-label words whose nodes are in
//! bijection with the faces of a simplicial complex.
//!
//! Besides the data structure itself ([`SimplexTree`]) the crate builds Rips
//! complexes ([`flag`]), witness and relaxed witness complexes ([`witness`]),
//! and supports collapses and edge contractions.

pub mod error;
pub mod flag;
pub mod geometry;
pub mod io;
pub mod simplex;
mod topology;
pub mod tree;
pub mod witness;

pub use error::{Error, Result};
pub use simplex::{Simplex, VertexLabel};
pub use tree::{Insertion, LabelDepthIndex, NodeHandle, SimplexTree, TreeStats};
