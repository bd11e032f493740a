pub mod catalog;
pub mod dimension;
pub mod engine;
pub mod error;
pub mod group;
pub mod lifting;
pub mod matrix;
pub mod ncgraph;
pub mod perm;
pub mod tree;

pub use error::{Error, ErrorKind, Result};
pub use group::PermGroup;
pub use perm::Perm;
pub use tree::{Portrait, TreeShape, Vertex};
pub use catalog::{catalog, AutomatonGroup, GroupDef, TreeGroup};
pub use matrix::{ExactMatrix, FpMatrix, IntMatrix, PolyMatrix};
