//! Edge colorings of complete graphs and hypergraphs in which every copy of a
//! pattern family receives many colors.
//!
//! The crate builds such colorings (randomized tile packing followed by
//! local-resampling completion, and explicit clique-block constructions),
//! verifies them by exhaustive or sampled copy checking, evaluates the
//! associated closed-form bounds exactly, and computes exact optima on tiny
//! hosts by branch and bound.

pub mod bounds;
pub mod coloring;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod finish;
pub mod host;
pub mod io;
pub mod pack;
pub mod paths;
pub mod pipeline;
pub mod verify;

pub use coloring::{Color, ColorClassIndex, Coloring, UNCOLORED};
pub use enumerate::{count_copies, stream_copies, stream_copies_through, CopyKind, CopyStream, SubgraphCopy};
pub use error::{Error, Result};
pub use host::{EdgeId, HostMode, HostSpec, Vertex};
