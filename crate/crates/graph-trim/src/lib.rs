//! Shared-memory parallel graph trimming.
//!
//! Trimming iteratively removes every vertex that has no outgoing edge to a
//! still-present vertex, until a fixed point is reached. It is a standard
//! preprocessing step for strongly-connected-component decomposition, cycle
//! detection, and model-checking state spaces, where the removed vertices are
//! exactly the size-1 SCCs reachable by peeling.
//!
//! Three engine families are provided, named after the arc-consistency
//! algorithms they mirror:
//!
//! * [`ac3`] — repeated parallel sweeps over all vertices until no sweep
//!   removes anything. No auxiliary state beyond the status flags; runs
//!   on-the-fly (successor function only).
//! * [`ac4`] — out-degree counters plus transpose-driven propagation.
//!   Linear work, but requires the reversed graph in memory.
//! * [`ac6`] — single-support bookkeeping: each live vertex tracks one live
//!   successor as its support and is re-examined only when that support
//!   dies. Linear work, no transpose, runs on-the-fly, and inspects each
//!   edge slot at most once.
//!
//! All parallel engines share one [`state::StatusArray`] whose `LIVE -> DEAD`
//! transitions are monotone, and produce the same dead set as the naive
//! fixed-point oracle in [`oracle`] regardless of worker count or schedule.
//! The [`bench`] module reruns engines under the measurement protocol used
//! throughout the test suite: per-worker traversed-edge counts, waiting-set
//! high-water marks, and repetition statistics.

pub mod ac3;
pub mod ac4;
pub mod ac6;
pub mod bench;
mod chunk;
mod error;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod state;

pub use error::Error;
pub use graph::{CsrGraph, GraphStats, ImplicitGraph, ScanControl, SuccessorSource, VertexId};
pub use metrics::{TrimMetrics, TrimResult};
pub use state::StatusArray;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
