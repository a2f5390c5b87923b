use std::time::Duration;

use crate::state::StatusArray;

/// Measurements collected by one engine run.
///
/// Edge counts are per-worker unsynchronized tallies merged at join time;
/// each successor inspection belongs to exactly one worker, so the merge is
/// exact. `max_qp` is the high-water mark of any worker's private waiting
/// set. `sweeps_or_rounds` counts repetition sweeps for the sweep engine and
/// propagation rounds elsewhere.
#[derive(Clone, Debug, Default)]
pub struct TrimMetrics {
    pub per_worker_edges: Vec<u64>,
    pub max_qp: usize,
    pub wall_time: Duration,
    pub removed: usize,
    pub sweeps_or_rounds: usize,
}

impl TrimMetrics {
    pub fn total_edges(&self) -> u64 {
        self.per_worker_edges.iter().sum()
    }

    pub fn max_edges_per_worker(&self) -> u64 {
        self.per_worker_edges.iter().copied().max().unwrap_or(0)
    }
}

/// Final status array plus the run's measurements.
pub struct TrimResult {
    pub status: StatusArray,
    pub metrics: TrimMetrics,
}
