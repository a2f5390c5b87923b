//! Single-support trimming: each live vertex records one live successor as
//! its support and joins that successor's supporting set. A vertex is
//! re-examined only when its support dies, resuming its successor scan at the
//! per-vertex edge cursor, so every edge slot is inspected at most once over
//! the entire run and the total inspection count never exceeds `m`.
//!
//! Only forward edges are ever consulted — the engine is generic over
//! [`SuccessorSource`] and can run on implicit graphs.
//!
//! In the parallel engine the supporting sets are the one shared structure
//! that needs mutual exclusion. A one-bit spin lock per vertex covers two
//! critical sections: a predecessor inserting itself into `w`'s set
//! (status re-check plus append), and the owner's own `LIVE -> DEAD` write.
//! Killing inside the lock guarantees that no insertion can slip in after the
//! owner's set has been drained. Draining itself needs no lock: the owner is
//! already DEAD, so every racing insert re-checks the status and backs off.

use std::time::Instant;

use crate::chunk::{ChunkQueue, DEFAULT_CHUNK_SIZE};
use crate::graph::{ScanControl, SuccessorSource, VertexId};
use crate::metrics::{TrimMetrics, TrimResult};
use crate::state::{EdgeCursors, StatusArray, SupportSets};

#[derive(Clone, Debug)]
pub struct Ac6Options {
    pub workers: usize,
    pub chunk_size: usize,
}

impl Default for Ac6Options {
    fn default() -> Self {
        Ac6Options {
            workers: crate::ac3::default_workers(),
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }
}

/// Sequential single-support trim. `init` may carry pre-marked DEAD vertices
/// (vertex-sampled starts); they are skipped and act as dead successors.
pub fn trim_ac6_seq<S: SuccessorSource>(g: &S, init: StatusArray) -> TrimResult {
    trim_ac6_seq_observed(g, init, &mut |_, _| {})
}

/// Sequential engine with an observation hook invoked after every
/// propagation step; tests use it to validate mid-run invariants.
pub(crate) fn trim_ac6_seq_observed<S: SuccessorSource>(
    g: &S,
    init: StatusArray,
    observe: &mut dyn FnMut(&StatusArray, &mut SupportSets),
) -> TrimResult {
    let started = Instant::now();
    let n = g.vertex_count();
    let status = init;
    let cursors = EdgeCursors::new(n);
    let mut supports = SupportSets::new(n);
    let mut queue: Vec<VertexId> = Vec::new();
    let mut edges = 0u64;
    let mut removed = 0usize;
    let mut max_q = 0usize;
    let mut pops = 0usize;

    for v in 0..n as VertexId {
        if !status.is_live(v) {
            continue;
        }
        do_post_seq(
            g, &status, &cursors, &mut supports, v, &mut edges, &mut queue, &mut removed,
            &mut max_q,
        );
        while let Some(w) = queue.pop() {
            pops += 1;
            let members = supports.take_exclusive(w);
            for member in members {
                do_post_seq(
                    g, &status, &cursors, &mut supports, member, &mut edges, &mut queue,
                    &mut removed, &mut max_q,
                );
            }
            observe(&status, &mut supports);
        }
    }

    if cfg!(debug_assertions) && n > 0 {
        supports.validate_quiescent(&status);
        debug_assert_eq!(edges, cursors.total(), "inspections must equal cursor mass");
    }
    let metrics = TrimMetrics {
        per_worker_edges: vec![edges],
        max_qp: max_q,
        wall_time: started.elapsed(),
        removed,
        sweeps_or_rounds: pops,
    };
    TrimResult { status, metrics }
}

/// Finds the next live successor of `v` and registers `v` in its supporting
/// set, or kills `v` and enqueues it when the scan exhausts. Single-threaded
/// flavor: no locks, exclusive access to the supporting sets.
#[allow(clippy::too_many_arguments)]
fn do_post_seq<S: SuccessorSource>(
    g: &S,
    status: &StatusArray,
    cursors: &EdgeCursors,
    supports: &mut SupportSets,
    v: VertexId,
    edges: &mut u64,
    queue: &mut Vec<VertexId>,
    removed: &mut usize,
    max_q: &mut usize,
) {
    let start = cursors.get(v);
    let mut adopted = false;
    let delivered = g.scan_successors(v, start, |w| {
        if status.is_live(w) {
            supports.push_exclusive(w, v);
            adopted = true;
            ScanControl::Stop
        } else {
            ScanControl::Continue
        }
    });
    *edges += delivered as u64;
    // Every delivered slot is consumed: dead successors are jumped over for
    // good, and a consumed support is re-examined only through w's set.
    cursors.advance_to(v, start + delivered);
    if !adopted {
        status.kill(v);
        *removed += 1;
        queue.push(v);
        *max_q = (*max_q).max(queue.len());
    }
}

pub(crate) struct WorkerTally {
    edges: u64,
    removed: usize,
    max_qp: usize,
    pops: usize,
}

/// Parallel single-support trim with dynamic chunk scheduling and
/// worker-private waiting sets.
pub fn trim_ac6_par<S: SuccessorSource>(g: &S, init: StatusArray, opts: &Ac6Options) -> TrimResult {
    assert!(opts.workers >= 1, "worker count must be >= 1");
    assert!(opts.chunk_size >= 1, "chunk size must be >= 1");
    let started = Instant::now();
    let n = g.vertex_count();
    let status = init;
    let cursors = EdgeCursors::new(n);
    let mut supports = SupportSets::new(n);
    let queue = ChunkQueue::new(n, opts.chunk_size);

    let tallies: Vec<WorkerTally> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..opts.workers)
            .map(|_| {
                let status = &status;
                let cursors = &cursors;
                let supports = &supports;
                let queue = &queue;
                scope.spawn(move || {
                    let mut tally = WorkerTally {
                        edges: 0,
                        removed: 0,
                        max_qp: 0,
                        pops: 0,
                    };
                    let mut qp: Vec<VertexId> = Vec::new();
                    let noop = |_: VertexId| {};
                    while let Some(range) = queue.claim() {
                        for v in range {
                            let v = v as VertexId;
                            if !status.is_live(v) {
                                continue;
                            }
                            do_post_par(g, status, cursors, supports, v, &mut tally, &mut qp, &noop);
                            while let Some(w) = qp.pop() {
                                tally.pops += 1;
                                // SAFETY: this worker killed `w` inside w's
                                // lock; no insert can follow the kill, so the
                                // drain is the sole accessor.
                                let members = unsafe { supports.take(w) };
                                for member in members {
                                    do_post_par(
                                        g, status, cursors, supports, member, &mut tally, &mut qp,
                                        &noop,
                                    );
                                }
                            }
                        }
                    }
                    tally
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    if cfg!(debug_assertions) && n > 0 {
        supports.validate_quiescent(&status);
        debug_assert_eq!(
            tallies.iter().map(|t| t.edges).sum::<u64>(),
            cursors.total(),
            "inspections must equal cursor mass"
        );
    }
    let metrics = TrimMetrics {
        per_worker_edges: tallies.iter().map(|t| t.edges).collect(),
        max_qp: tallies.iter().map(|t| t.max_qp).max().unwrap_or(0),
        wall_time: started.elapsed(),
        removed: tallies.iter().map(|t| t.removed).sum(),
        sweeps_or_rounds: tallies.iter().map(|t| t.pops).sum(),
    };
    TrimResult { status, metrics }
}

/// Parallel DoPost. Calls to this function for one particular `v` are never
/// concurrent: `v` sits in at most one supporting set, the drain removes it
/// before re-posting, and the chunk owner issues the first call. That makes
/// `v`'s cursor single-writer at any instant and lets the kill be a plain
/// store (performed inside `v`'s lock to fence off late inserters).
///
/// `before_lock` runs between the lock-free status peek and the lock
/// acquisition; tests inject a concurrent kill there.
#[allow(clippy::too_many_arguments)]
#[inline]
pub(crate) fn do_post_par<S: SuccessorSource, H: Fn(VertexId)>(
    g: &S,
    status: &StatusArray,
    cursors: &EdgeCursors,
    supports: &SupportSets,
    v: VertexId,
    tally: &mut WorkerTally,
    qp: &mut Vec<VertexId>,
    before_lock: &H,
) {
    let start = cursors.get(v);
    let mut pos = start;
    let mut adopted = false;
    let delivered = g.scan_successors(v, start, |w| {
        if status.is_live(w) {
            // The cursor may move past `w` whatever happens next: either `w`
            // becomes the support (re-entry goes through w's set), or the
            // in-lock re-check sees it DEAD and dead slots are never
            // revisited. Storing before taking the lock keeps the cursor
            // write inside the release/acquire edge the lock provides.
            cursors.advance_to(v, pos + 1);
            before_lock(w);
            supports.lock(w);
            if status.is_live(w) {
                // SAFETY: w's lock is held.
                unsafe { supports.push(w, v) };
                supports.unlock(w);
                adopted = true;
                pos += 1;
                return ScanControl::Stop;
            }
            supports.unlock(w);
            // w died between the peek and the lock: scan on.
        }
        pos += 1;
        ScanControl::Continue
    });
    tally.edges += delivered as u64;
    debug_assert!(adopted || pos == start + delivered);
    if !adopted {
        cursors.advance_to(v, pos);
        supports.lock(v);
        status.kill(v);
        supports.unlock(v);
        tally.removed += 1;
        qp.push(v);
        tally.max_qp = tally.max_qp.max(qp.len());
    }
}
