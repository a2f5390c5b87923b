//! Sweep-based trimming: repeated parallel passes over all vertices, each
//! removing the vertices that currently have no live successor, until a pass
//! removes nothing.
//!
//! The only synchronization is a shared change flag (any write is `true`, so
//! races are benign) and the monotone status array. A sweep that kills any
//! vertex forces another global sweep, which is what makes the result
//! complete; capping the number of sweeps keeps soundness but may leave
//! removable vertices behind.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Barrier;
use std::time::Instant;

use crate::chunk::{ChunkQueue, DEFAULT_CHUNK_SIZE};
use crate::error::Error;
use crate::graph::{CsrGraph, ScanControl, SuccessorSource, VertexId};
use crate::metrics::{TrimMetrics, TrimResult};
use crate::state::{ChangeFlag, EdgeCursors, StatusArray};

#[derive(Clone, Debug)]
pub struct Ac3Options {
    /// Worker count; each sweep is split into dynamic chunks over the workers.
    pub workers: usize,
    /// Vertices per scheduling unit.
    pub chunk_size: usize,
    /// Optional cap on the number of sweeps. With a cap the dead set is a
    /// subset of the true fixed point.
    pub max_repetitions: Option<usize>,
    /// Additionally remove vertices with no live predecessor. Requires the
    /// transposed graph.
    pub check_in_degree: bool,
}

impl Default for Ac3Options {
    fn default() -> Self {
        Ac3Options {
            workers: default_workers(),
            chunk_size: DEFAULT_CHUNK_SIZE,
            max_repetitions: None,
            check_in_degree: false,
        }
    }
}

pub(crate) fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
}

/// Returns `true` iff `v` has no LIVE successor, resuming the scan at `v`'s
/// edge cursor and advancing it past every successor observed DEAD so later
/// sweeps jump over them. Every successor inspection is added to `inspected`.
///
/// The cursor is not advanced past a LIVE successor: that vertex may die
/// later and must be re-examined by the next sweep.
pub fn zero_out_degree<S: SuccessorSource>(
    graph: &S,
    status: &StatusArray,
    cursors: &EdgeCursors,
    v: VertexId,
    inspected: &mut u64,
) -> bool {
    let start = cursors.get(v);
    let mut dead_prefix = 0usize;
    let mut found_live = false;
    let delivered = graph.scan_successors(v, start, |w| {
        if status.is_live(w) {
            found_live = true;
            ScanControl::Stop
        } else {
            dead_prefix += 1;
            ScanControl::Continue
        }
    });
    *inspected += delivered as u64;
    if dead_prefix > 0 {
        cursors.advance_to(v, start + dead_prefix);
    }
    !found_live
}

struct WorkerTally {
    edges: u64,
    removed: usize,
}

/// Runs sweep trimming over `graph`, starting from `init` (pre-marked DEAD
/// vertices are allowed and simply stay dead).
///
/// `transpose` is only consulted when `opts.check_in_degree` is set; passing
/// an implicit graph therefore never requires predecessors.
pub fn trim_ac3<S: SuccessorSource>(
    graph: &S,
    transpose: Option<&CsrGraph>,
    init: StatusArray,
    opts: &Ac3Options,
) -> Result<TrimResult, Error> {
    assert!(opts.workers >= 1, "worker count must be >= 1");
    assert!(opts.chunk_size >= 1, "chunk size must be >= 1");
    let n = graph.vertex_count();
    if opts.check_in_degree && transpose.is_none() {
        return Err(Error::Config(
            "check_in_degree requires a transposed graph".into(),
        ));
    }
    if let Some(t) = transpose {
        if t.vertex_count() != n {
            return Err(Error::TransposeMismatch {
                graph: (n, 0),
                transpose: (t.vertex_count(), t.edge_count()),
            });
        }
    }
    let started = Instant::now();
    let status = init;
    let out_cursors = EdgeCursors::new(n);
    let in_cursors = opts.check_in_degree.then(|| EdgeCursors::new(n));
    let queue = ChunkQueue::new(n, opts.chunk_size);
    let change = ChangeFlag::new();
    let stop = AtomicBool::new(false);
    let barrier = Barrier::new(opts.workers + 1);

    let mut sweeps = 0usize;
    let tallies: Vec<WorkerTally> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..opts.workers)
            .map(|_| {
                let status = &status;
                let out_cursors = &out_cursors;
                let in_cursors = &in_cursors;
                let queue = &queue;
                let change = &change;
                let stop = &stop;
                let barrier = &barrier;
                scope.spawn(move || {
                    let mut tally = WorkerTally {
                        edges: 0,
                        removed: 0,
                    };
                    loop {
                        barrier.wait(); // sweep start gate
                        if stop.load(Ordering::Acquire) {
                            break;
                        }
                        while let Some(range) = queue.claim() {
                            for v in range {
                                let v = v as VertexId;
                                if !status.is_live(v) {
                                    continue;
                                }
                                let mut doomed = zero_out_degree(
                                    graph,
                                    status,
                                    out_cursors,
                                    v,
                                    &mut tally.edges,
                                );
                                if !doomed {
                                    if let (Some(t), Some(ic)) = (transpose, in_cursors.as_ref()) {
                                        doomed =
                                            zero_out_degree(t, status, ic, v, &mut tally.edges);
                                    }
                                }
                                if doomed {
                                    // Single writer: v belongs to exactly one
                                    // chunk of this sweep.
                                    status.kill(v);
                                    tally.removed += 1;
                                    change.set();
                                }
                            }
                        }
                        barrier.wait(); // sweep end gate
                    }
                    tally
                })
            })
            .collect();

        // Sweep driver.
        let mut done = false;
        loop {
            let capped = opts.max_repetitions.is_some_and(|k| sweeps >= k);
            if done || capped {
                stop.store(true, Ordering::Release);
                barrier.wait();
                break;
            }
            change.reset();
            queue.reset();
            barrier.wait(); // release workers into the sweep
            barrier.wait(); // wait for the sweep to finish
            sweeps += 1;
            done = !change.get();
        }

        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let metrics = TrimMetrics {
        per_worker_edges: tallies.iter().map(|t| t.edges).collect(),
        max_qp: 0,
        wall_time: started.elapsed(),
        removed: tallies.iter().map(|t| t.removed).sum(),
        sweeps_or_rounds: sweeps,
    };
    Ok(TrimResult { status, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{csr_as_implicit, CsrGraph};
    use crate::oracle::{check_complete, check_sound, fixed_point_trim};

    fn opts(workers: usize) -> Ac3Options {
        Ac3Options {
            workers,
            chunk_size: 3, // tiny chunks exercise the scheduler
            ..Ac3Options::default()
        }
    }

    fn chain(len: usize) -> CsrGraph {
        let edges: Vec<(VertexId, VertexId)> =
            (0..len as VertexId - 1).map(|v| (v, v + 1)).collect();
        CsrGraph::from_edges(len, &edges).unwrap()
    }

    fn cycle(len: usize) -> CsrGraph {
        let edges: Vec<(VertexId, VertexId)> = (0..len as VertexId)
            .map(|v| (v, (v + 1) % len as VertexId))
            .collect();
        CsrGraph::from_edges(len, &edges).unwrap()
    }

    #[test]
    fn full_cycle_needs_one_sweep_and_no_removals() {
        let g = cycle(100);
        let r = trim_ac3(&g, None, StatusArray::new_live(100), &opts(4)).unwrap();
        assert_eq!(r.metrics.removed, 0);
        assert_eq!(r.metrics.sweeps_or_rounds, 1);
        assert_eq!(r.status.dead_count(), 0);
        // One sweep inspects at most one edge per vertex here.
        assert!(r.metrics.total_edges() <= g.edge_count() as u64);
    }

    #[test]
    fn chain_of_ten_single_worker_runs_eleven_sweeps() {
        let g = chain(10);
        let r = trim_ac3(&g, None, StatusArray::new_live(10), &opts(1)).unwrap();
        assert_eq!(r.status.dead_count(), 10);
        assert_eq!(r.metrics.sweeps_or_rounds, 11, "ten killing sweeps plus one confirming");
    }

    #[test]
    fn example_five_vertex_graph_dies_entirely() {
        let g = CsrGraph::from_edges(5, &[(0, 3), (0, 2), (2, 4), (2, 3), (3, 4)]).unwrap();
        for workers in [1, 2, 4] {
            let r = trim_ac3(&g, None, StatusArray::new_live(5), &opts(workers)).unwrap();
            assert_eq!(r.status.dead_vertices(), vec![0, 1, 2, 3, 4]);
            assert!(check_sound(&g, &r.status));
            assert!(check_complete(&g, &r.status));
        }
    }

    #[test]
    fn zero_out_degree_advances_cursor_past_dead_prefix() {
        // v0 -> {v1 dead, v2 dead, v3 live}
        let g = CsrGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let status = StatusArray::new_live(4);
        status.kill(1);
        status.kill(2);
        let cursors = EdgeCursors::new(4);
        let mut inspected = 0u64;
        assert!(!zero_out_degree(&g, &status, &cursors, 0, &mut inspected));
        assert_eq!(cursors.get(0), 2, "cursor advanced past the two dead successors");
        assert_eq!(inspected, 3);
        // Re-scan resumes at the live successor without re-inspecting.
        let mut again = 0u64;
        assert!(!zero_out_degree(&g, &status, &cursors, 0, &mut again));
        assert_eq!(again, 1);
    }

    #[test]
    fn zero_out_degree_on_empty_post_is_true() {
        let g = CsrGraph::from_edges(1, &[]).unwrap();
        let status = StatusArray::new_live(1);
        let cursors = EdgeCursors::new(1);
        let mut inspected = 0u64;
        assert!(zero_out_degree(&g, &status, &cursors, 0, &mut inspected));
        assert_eq!(inspected, 0);
    }

    #[test]
    fn self_loop_counts_as_support() {
        let g = CsrGraph::from_edges(1, &[(0, 0)]).unwrap();
        let status = StatusArray::new_live(1);
        let cursors = EdgeCursors::new(1);
        let mut inspected = 0u64;
        assert!(!zero_out_degree(&g, &status, &cursors, 0, &mut inspected));
        let r = trim_ac3(&g, None, StatusArray::new_live(1), &opts(2)).unwrap();
        assert_eq!(r.status.dead_count(), 0);
    }

    #[test]
    fn capped_runs_are_sound_subsets() {
        let g = chain(10);
        let oracle = fixed_point_trim(&g, &StatusArray::new_live(10));
        for cap in [0, 1, 3] {
            for workers in [1, 2] {
                let o = Ac3Options {
                    max_repetitions: Some(cap),
                    ..opts(workers)
                };
                let r = trim_ac3(&g, None, StatusArray::new_live(10), &o).unwrap();
                assert!(r.metrics.sweeps_or_rounds <= cap);
                assert!(check_sound(&g, &r.status));
                let dead = r.status.dead_vertices();
                assert!(dead.iter().all(|v| oracle.dead_set.contains(v)));
                if workers == 1 {
                    // Ascending single-worker sweeps peel exactly one chain
                    // vertex per sweep.
                    assert_eq!(dead.len(), cap.min(10));
                }
            }
        }
    }

    #[test]
    fn in_degree_check_requires_transpose() {
        let g = cycle(4);
        let o = Ac3Options {
            check_in_degree: true,
            ..opts(2)
        };
        assert!(matches!(
            trim_ac3(&g, None, StatusArray::new_live(4), &o),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn in_degree_check_removes_sourceless_vertices() {
        // 0 <-> 1 cycle plus 2 -> 0: out-degree alone keeps everything, but
        // vertex 2 has no predecessor and falls to the in-degree rule.
        let g = CsrGraph::from_edges(3, &[(0, 1), (1, 0), (2, 0)]).unwrap();
        let gt = g.transpose();
        let plain = trim_ac3(&g, None, StatusArray::new_live(3), &opts(2)).unwrap();
        assert_eq!(plain.status.dead_count(), 0);
        let o = Ac3Options {
            check_in_degree: true,
            ..opts(2)
        };
        let r = trim_ac3(&g, Some(&gt), StatusArray::new_live(3), &o).unwrap();
        assert_eq!(r.status.dead_vertices(), vec![2]);
    }

    #[test]
    fn in_degree_check_agrees_with_two_rule_fixed_point() {
        // Independent two-rule oracle: kill when all successors dead or all
        // predecessors dead, until stable.
        fn two_rule_oracle(g: &CsrGraph) -> Vec<VertexId> {
            let gt = g.transpose();
            let n = g.vertex_count();
            let mut dead = vec![false; n];
            loop {
                let mut changed = false;
                for v in 0..n as VertexId {
                    if dead[v as usize] {
                        continue;
                    }
                    let no_out = g.successors(v).iter().all(|&w| dead[w as usize]);
                    let no_in = gt.successors(v).iter().all(|&w| dead[w as usize]);
                    if no_out || no_in {
                        dead[v as usize] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            (0..n as VertexId).filter(|&v| dead[v as usize]).collect()
        }

        for seed in 0..30u64 {
            let n = 2 + (seed as usize * 5) % 40;
            let m = (seed as usize * 11) % (2 * n);
            let g = crate::graph::gen_er(n, m.min(n * (n - 1) / 2), seed).unwrap();
            let gt = g.transpose();
            let expected = two_rule_oracle(&g);
            for workers in [1, 4] {
                let o = Ac3Options {
                    check_in_degree: true,
                    ..opts(workers)
                };
                let r = trim_ac3(&g, Some(&gt), StatusArray::new_live(n), &o).unwrap();
                assert_eq!(r.status.dead_vertices(), expected, "seed {seed} P {workers}");
            }
        }
    }

    #[test]
    fn runs_on_implicit_graphs_and_counts_traversals() {
        let g = chain(10);
        let imp = csr_as_implicit(&g);
        let r = trim_ac3(&imp, None, StatusArray::new_live(10), &opts(2)).unwrap();
        assert_eq!(r.status.dead_count(), 10);
        assert_eq!(imp.traversed(), r.metrics.total_edges());
    }

    #[test]
    fn pre_marked_dead_vertices_stay_dead_and_propagate() {
        let g = cycle(4);
        let init = StatusArray::new_live(4);
        init.kill(2);
        let r = trim_ac3(&g, None, init.clone(), &opts(2)).unwrap();
        let oracle = fixed_point_trim(&g, &init);
        assert_eq!(r.status.dead_vertices(), oracle.dead_set);
        assert_eq!(r.status.dead_count(), 4, "breaking the cycle kills everything");
    }

    #[test]
    fn empty_graph_terminates_immediately() {
        let g = CsrGraph::from_edges(0, &[]).unwrap();
        let r = trim_ac3(&g, None, StatusArray::new_live(0), &opts(2)).unwrap();
        assert_eq!(r.metrics.removed, 0);
        assert_eq!(r.metrics.sweeps_or_rounds, 1);
    }
}
