//! Brute-force fixed-point trimmer and the soundness/completeness checkers.
//!
//! This module is the ground truth the engines are tested against. It is
//! deliberately naive — full synchronous rescans, no cursors, no counters, no
//! support bookkeeping — precisely so that it shares no code path with the
//! engines it validates. Cost is `O(rounds * (n + m))`, fine at test scale.

use crate::graph::{CsrGraph, VertexId};
use crate::state::StatusArray;

/// Outcome of [`fixed_point_trim`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// The unique least fixed point of the removal rule, sorted ascending.
    pub dead_set: Vec<VertexId>,
    /// Full scans performed, including the final scan that removed nothing.
    /// Starting all-LIVE this is one more than the number of peeling steps.
    pub rounds: usize,
}

/// Repeatedly scans all vertices, killing every LIVE vertex with no LIVE
/// successor, until a full scan kills nothing. Kills within a scan are
/// applied simultaneously at the end of the scan, so the round count matches
/// synchronous peeling.
pub fn fixed_point_trim(g: &CsrGraph, init: &StatusArray) -> OracleResult {
    let n = g.vertex_count();
    let mut dead: Vec<bool> = (0..n as VertexId).map(|v| init.is_dead(v)).collect();
    let mut rounds = 0usize;
    loop {
        rounds += 1;
        let mut doomed: Vec<VertexId> = Vec::new();
        for v in 0..n as VertexId {
            if dead[v as usize] {
                continue;
            }
            if g.successors(v).iter().all(|&w| dead[w as usize]) {
                doomed.push(v);
            }
        }
        if doomed.is_empty() {
            break;
        }
        for v in doomed {
            dead[v as usize] = true;
        }
    }
    OracleResult {
        dead_set: (0..n as VertexId)
            .filter(|&v| dead[v as usize])
            .collect(),
        rounds,
    }
}

/// True iff every DEAD vertex has no LIVE successor: nothing was removed
/// that still had live support.
pub fn check_sound(g: &CsrGraph, status: &StatusArray) -> bool {
    (0..g.vertex_count() as VertexId).all(|v| {
        status.is_live(v) || g.successors(v).iter().all(|&w| status.is_dead(w))
    })
}

/// True iff every vertex whose successors are all DEAD is itself DEAD:
/// nothing removable was missed.
pub fn check_complete(g: &CsrGraph, status: &StatusArray) -> bool {
    (0..g.vertex_count() as VertexId).all(|v| {
        status.is_dead(v) || g.successors(v).iter().any(|&w| status.is_live(w))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_live(n: usize) -> StatusArray {
        StatusArray::new_live(n)
    }

    fn chain(len: usize) -> CsrGraph {
        let edges: Vec<(VertexId, VertexId)> =
            (0..len as VertexId - 1).map(|v| (v, v + 1)).collect();
        CsrGraph::from_edges(len, &edges).unwrap()
    }

    #[test]
    fn two_cycle_is_stable_in_one_round() {
        let g = CsrGraph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        let r = fixed_point_trim(&g, &all_live(2));
        assert!(r.dead_set.is_empty());
        assert_eq!(r.rounds, 1);
    }

    #[test]
    fn chain_of_ten_needs_eleven_scans() {
        let g = chain(10);
        let r = fixed_point_trim(&g, &all_live(10));
        assert_eq!(r.dead_set, (0..10).collect::<Vec<_>>());
        assert_eq!(r.rounds, 11, "ten killing scans plus one confirming scan");
    }

    #[test]
    fn example_five_vertex_graph_dies_entirely() {
        let g = CsrGraph::from_edges(5, &[(0, 3), (0, 2), (2, 4), (2, 3), (3, 4)]).unwrap();
        let r = fixed_point_trim(&g, &all_live(5));
        assert_eq!(r.dead_set, vec![0, 1, 2, 3, 4]);
        assert_eq!(r.rounds, 5);
    }

    #[test]
    fn respects_initial_dead_vertices() {
        // Two-cycle stays alive unless one side starts dead.
        let g = CsrGraph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        let init = all_live(2);
        init.kill(1);
        let r = fixed_point_trim(&g, &init);
        assert_eq!(r.dead_set, vec![0, 1]);
    }

    #[test]
    fn soundness_and_completeness_predicates() {
        let cyc = CsrGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let s = all_live(3);
        assert!(check_sound(&cyc, &s));
        assert!(check_complete(&cyc, &s));

        let ch = chain(3);
        let s = all_live(3);
        assert!(check_sound(&ch, &s));
        assert!(!check_complete(&ch, &s), "tail vertex violates completeness");

        // Killing a vertex with a live successor breaks soundness.
        let s = all_live(3);
        s.kill(0);
        assert!(!check_sound(&ch, &s));
    }

    // Scan order must not matter: re-run the fixed point with shuffled vertex
    // visit order and compare dead sets.
    fn shuffled_fixed_point(g: &CsrGraph, order_seed: u64) -> Vec<VertexId> {
        let n = g.vertex_count();
        let mut order: Vec<VertexId> = (0..n as VertexId).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(order_seed));
        let mut dead = vec![false; n];
        loop {
            let mut changed = false;
            for &v in &order {
                if !dead[v as usize] && g.successors(v).iter().all(|&w| dead[w as usize]) {
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

    #[test]
    fn dead_set_is_scan_order_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for case in 0..40 {
            let n = 1 + (case * 7) % 50;
            let m = (case * 13) % (2 * n);
            let g = crate::graph::gen_er(n, m.min(n * (n - 1) / 2), case as u64).unwrap();
            let baseline = fixed_point_trim(&g, &all_live(n)).dead_set;
            for _ in 0..3 {
                let seed: u64 = rand::Rng::gen(&mut rng);
                assert_eq!(shuffled_fixed_point(&g, seed), baseline);
            }
        }
    }
}
