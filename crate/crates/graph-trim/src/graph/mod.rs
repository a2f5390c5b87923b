//! Graph representations and constructors.
//!
//! Explicit graphs live in compressed sparse row form ([`CsrGraph`]);
//! implicit graphs are a vertex count plus a successor function
//! ([`ImplicitGraph`]). Engines that can run on-the-fly are generic over
//! [`SuccessorSource`], which deliberately exposes *only* forward edges:
//! an engine written against it cannot ask for predecessors.

mod csr;
mod gen;
mod implicit;
mod io;
mod sample;
mod stats;

pub use csr::CsrGraph;
pub use gen::{gen_ba, gen_er, gen_rmat, RMAT_A, RMAT_B, RMAT_C};
pub use implicit::{csr_as_implicit, ImplicitGraph};
pub use io::{load_edge_list, read_csr, write_csr, write_edge_list};
pub use sample::{sample_edges, sample_vertices};
pub use stats::{peeling_steps, GraphStats};

/// Dense vertex identifier in `[0, n)`.
///
/// Targets are stored as `u32` both in memory and on disk, which caps graphs
/// at `2^32 - 1` vertices while halving edge storage versus 64-bit ids.
pub type VertexId = u32;

/// Tells a successor scan whether to keep visiting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanControl {
    Continue,
    Stop,
}

/// Ordered access to the successors of each vertex.
///
/// `scan_successors(v, start, ..)` must visit the same sequence on every
/// call: the suffix of `v`'s successor list beginning at slot `start`.
/// Engines rely on that stability to resume scans where a previous one
/// stopped (the per-vertex edge cursor).
pub trait SuccessorSource: Sync {
    fn vertex_count(&self) -> usize;

    /// Visits successors of `v` from slot `start` onward, stopping early when
    /// `visit` returns [`ScanControl::Stop`]. Returns how many successors
    /// were delivered to `visit`.
    fn scan_successors<F>(&self, v: VertexId, start: usize, visit: F) -> usize
    where
        F: FnMut(VertexId) -> ScanControl;
}
