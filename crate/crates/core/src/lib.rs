//! Exact treewidth via positive-instance driven dynamic programming over
//! oriented minimal separators and potential maximal cliques.

pub mod blocks;
pub mod error;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod safe_sep;
pub mod sieve;
pub mod solver;
pub mod td;
pub mod vertex_set;

pub use error::{Error, Result};
pub use graph::Graph;
pub use td::TreeDecomposition;
pub use vertex_set::VertexSet;
