pub mod e2sat;
pub mod error;
pub mod graph;
pub mod matching;
pub mod reduction;
pub mod residual;

pub use error::{Error, Result};
pub use graph::{Bipartition, Coord, EmbeddedGraph, Graph, SpecialClass};
pub use matching::{Budget, Matching};
