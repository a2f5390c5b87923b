//! Counter-based trimming: every vertex carries its remaining live
//! out-degree; when a vertex dies, the counters of its predecessors (read
//! from the transposed graph) are decremented, and any counter reaching zero
//! kills its vertex in turn.
//!
//! The engine's signature requires the transpose, so it cannot be invoked
//! on an implicit graph at all — needing reverse edges is a property of the
//! algorithm, not a runtime failure mode.

use std::sync::Barrier;
use std::time::Instant;

use crate::chunk::{ChunkQueue, DEFAULT_CHUNK_SIZE};
use crate::error::Error;
use crate::graph::{CsrGraph, VertexId};
use crate::metrics::{TrimMetrics, TrimResult};
use crate::state::{DegreeCounters, StatusArray};

/// How the out-degree counters are filled in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CounterInit {
    /// Walk every successor list, inspecting each edge once (adds `m` to the
    /// traversal count).
    Traverse,
    /// Take the difference of adjacent CSR offsets; no edges are touched.
    /// Exact even with duplicate edges, since both modes count slots.
    OffsetDiff,
}

#[derive(Clone, Debug)]
pub struct Ac4Options {
    pub workers: usize,
    pub chunk_size: usize,
    pub counter_init: CounterInit,
}

impl Default for Ac4Options {
    fn default() -> Self {
        Ac4Options {
            workers: crate::ac3::default_workers(),
            chunk_size: DEFAULT_CHUNK_SIZE,
            counter_init: CounterInit::OffsetDiff,
        }
    }
}

fn validate_shapes(g: &CsrGraph, gt: &CsrGraph) -> Result<(), Error> {
    if g.vertex_count() != gt.vertex_count() || g.edge_count() != gt.edge_count() {
        return Err(Error::TransposeMismatch {
            graph: (g.vertex_count(), g.edge_count()),
            transpose: (gt.vertex_count(), gt.edge_count()),
        });
    }
    Ok(())
}

/// Kills and enqueues `v` when its counter has reached zero. The kill is an
/// unconditional store here because the sequential engine has one writer.
fn do_degree_seq(
    status: &StatusArray,
    counters: &DegreeCounters,
    v: VertexId,
    queue: &mut Vec<VertexId>,
    removed: &mut usize,
    max_q: &mut usize,
) {
    if counters.get(v) == 0 && status.is_live(v) {
        status.kill(v);
        *removed += 1;
        queue.push(v);
        *max_q = (*max_q).max(queue.len());
    }
}

/// Sequential counter-based trim. `gt` must be the transpose of `g`.
pub fn trim_ac4_seq(
    g: &CsrGraph,
    gt: &CsrGraph,
    init: StatusArray,
    counter_init: CounterInit,
) -> Result<TrimResult, Error> {
    validate_shapes(g, gt)?;
    let started = Instant::now();
    let n = g.vertex_count();
    let status = init;
    let counters = DegreeCounters::new_zeroed(n);
    let mut edges = 0u64;
    for v in 0..n as VertexId {
        let deg = match counter_init {
            CounterInit::OffsetDiff => g.out_degree(v),
            CounterInit::Traverse => {
                let mut count = 0usize;
                for _ in g.successors(v) {
                    count += 1;
                }
                edges += count as u64;
                count
            }
        };
        counters.set(v, u32::try_from(deg).expect("out-degree exceeds the counter width"));
    }

    let mut queue: Vec<VertexId> = Vec::new();
    let mut removed = 0usize;
    let mut max_q = 0usize;
    let mut pops = 0usize;

    let drain = |queue: &mut Vec<VertexId>, edges: &mut u64, removed: &mut usize, max_q: &mut usize, pops: &mut usize| {
        while let Some(w) = queue.pop() {
            *pops += 1;
            for &u in gt.successors(w) {
                *edges += 1;
                counters.dec(u);
                do_degree_seq(&status, &counters, u, queue, removed, max_q);
            }
        }
    };

    // Vertices dead on entry (vertex-sampled starts) still propagate: their
    // predecessors lose a successor. Snapshot them first so vertices killed
    // by this very propagation are not propagated twice.
    let pre_dead: Vec<VertexId> = (0..n as VertexId).filter(|&v| status.is_dead(v)).collect();
    for v in pre_dead {
        queue.push(v);
        max_q = max_q.max(queue.len());
        drain(&mut queue, &mut edges, &mut removed, &mut max_q, &mut pops);
    }
    for v in 0..n as VertexId {
        do_degree_seq(&status, &counters, v, &mut queue, &mut removed, &mut max_q);
        drain(&mut queue, &mut edges, &mut removed, &mut max_q, &mut pops);
    }

    debug_assert_counters_quiescent(g, &status, &counters);
    let metrics = TrimMetrics {
        per_worker_edges: vec![edges],
        max_qp: max_q,
        wall_time: started.elapsed(),
        removed,
        sweeps_or_rounds: pops,
    };
    Ok(TrimResult { status, metrics })
}

struct WorkerTally {
    edges: u64,
    removed: usize,
    max_qp: usize,
    pops: usize,
}

/// Parallel counter-based trim: dynamic chunks, fetch-and-add counter
/// updates, compare-and-swap kills, and strictly worker-private waiting sets.
pub fn trim_ac4_par(
    g: &CsrGraph,
    gt: &CsrGraph,
    init: StatusArray,
    opts: &Ac4Options,
) -> Result<TrimResult, Error> {
    assert!(opts.workers >= 1, "worker count must be >= 1");
    assert!(opts.chunk_size >= 1, "chunk size must be >= 1");
    validate_shapes(g, gt)?;
    let started = Instant::now();
    let n = g.vertex_count();
    let status = init;
    let counters = DegreeCounters::new_zeroed(n);
    // Snapshot of vertices dead on entry; their propagation belongs to the
    // worker that owns their chunk, exactly once.
    let pre_dead: Option<Vec<bool>> = if status.dead_count() > 0 {
        Some((0..n as VertexId).map(|v| status.is_dead(v)).collect())
    } else {
        None
    };
    let init_queue = ChunkQueue::new(n, opts.chunk_size);
    let main_queue = ChunkQueue::new(n, opts.chunk_size);
    let barrier = Barrier::new(opts.workers);

    let tallies: Vec<WorkerTally> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..opts.workers)
            .map(|_| {
                let status = &status;
                let counters = &counters;
                let init_queue = &init_queue;
                let main_queue = &main_queue;
                let barrier = &barrier;
                let pre_dead = pre_dead.as_deref();
                scope.spawn(move || {
                    let mut tally = WorkerTally {
                        edges: 0,
                        removed: 0,
                        max_qp: 0,
                        pops: 0,
                    };
                    // Phase 1: counter initialization.
                    while let Some(range) = init_queue.claim() {
                        for v in range {
                            let v = v as VertexId;
                            let deg = match opts.counter_init {
                                CounterInit::OffsetDiff => g.out_degree(v),
                                CounterInit::Traverse => {
                                    let mut count = 0usize;
                                    for _ in g.successors(v) {
                                        count += 1;
                                    }
                                    tally.edges += count as u64;
                                    count
                                }
                            };
                            counters.set(
                                v,
                                u32::try_from(deg).expect("out-degree exceeds the counter width"),
                            );
                        }
                    }
                    barrier.wait(); // all counters initialized

                    // Phase 2: scan plus propagation.
                    let mut qp: Vec<VertexId> = Vec::new();
                    while let Some(range) = main_queue.claim() {
                        for v in range {
                            let v = v as VertexId;
                            if pre_dead.is_some_and(|d| d[v as usize]) {
                                qp.push(v);
                                tally.max_qp = tally.max_qp.max(qp.len());
                            } else if counters.get(v) == 0 && status.try_kill(v) {
                                tally.removed += 1;
                                qp.push(v);
                                tally.max_qp = tally.max_qp.max(qp.len());
                            }
                            while let Some(w) = qp.pop() {
                                tally.pops += 1;
                                for &u in gt.successors(w) {
                                    tally.edges += 1;
                                    if counters.dec(u) == 0 && status.try_kill(u) {
                                        tally.removed += 1;
                                        qp.push(u);
                                        tally.max_qp = tally.max_qp.max(qp.len());
                                    }
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

    debug_assert_counters_quiescent(g, &status, &counters);
    let metrics = TrimMetrics {
        per_worker_edges: tallies.iter().map(|t| t.edges).collect(),
        max_qp: tallies.iter().map(|t| t.max_qp).max().unwrap_or(0),
        wall_time: started.elapsed(),
        removed: tallies.iter().map(|t| t.removed).sum(),
        sweeps_or_rounds: tallies.iter().map(|t| t.pops).sum(),
    };
    Ok(TrimResult { status, metrics })
}

/// At quiescence every counter must equal its vertex's live out-degree.
fn debug_assert_counters_quiescent(g: &CsrGraph, status: &StatusArray, counters: &DegreeCounters) {
    if cfg!(debug_assertions) {
        for v in 0..g.vertex_count() as VertexId {
            let live = g.successors(v).iter().filter(|&&w| status.is_live(w)).count();
            assert_eq!(
                counters.get(v),
                live as u32,
                "counter for {v} disagrees with its live out-degree"
            );
        }
    }
}
