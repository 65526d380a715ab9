//! Zero forcing, PSD forcing and power domination on simple graphs: relaxed
//! chronologies, parallel increasing path covers, time slices, path bundles
//! and exhaustive parameter solvers.

pub mod bundles;
pub mod enumerate;
pub mod error;
pub mod forcing;
pub mod graph;
pub mod io;
pub mod par;
pub mod pip;
pub mod random;
pub mod set;
pub mod slices;
pub mod solvers;
pub mod sweep;

pub use error::{ChronologyError, Error, Result};
pub use forcing::{Force, RelaxedChronology, Rule};
pub use graph::{Graph, PathCover};
pub use pip::{Block, BlockPartition, PipWitness};
pub use set::VertexSet;
