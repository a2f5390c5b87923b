use crate::graph::{CsrGraph, VertexId};

/// Headline characteristics of a graph, as reported by the `stats` command:
/// size, degree extremes, peeling steps, and the trimmable fraction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub max_in_degree: usize,
    pub max_out_degree: usize,
    /// Number of synchronous peeling rounds until no vertex has zero live
    /// out-degree.
    pub alpha: usize,
    /// Fraction of vertices removed by trimming, in `[0, 1]`.
    pub trim_percent: f64,
}

impl GraphStats {
    pub fn compute(g: &CsrGraph) -> GraphStats {
        let n = g.vertex_count();
        let m = g.edge_count();
        let max_out_degree = (0..n as VertexId)
            .map(|v| g.out_degree(v))
            .max()
            .unwrap_or(0);
        let mut in_deg = vec![0usize; n];
        for &t in g.targets() {
            in_deg[t as usize] += 1;
        }
        let max_in_degree = in_deg.into_iter().max().unwrap_or(0);
        let (alpha, removed) = peel(g);
        let trim_percent = if n == 0 { 0.0 } else { removed as f64 / n as f64 };
        GraphStats {
            n,
            m,
            max_in_degree,
            max_out_degree,
            alpha,
            trim_percent,
        }
    }
}

/// Number of synchronous peeling rounds: each round simultaneously removes
/// every vertex whose remaining out-degree is zero, decrementing the counters
/// of its predecessors, until a round removes nothing.
pub fn peeling_steps(g: &CsrGraph) -> usize {
    peel(g).0
}

/// Runs synchronous peeling; returns `(rounds_that_removed, total_removed)`.
fn peel(g: &CsrGraph) -> (usize, usize) {
    let n = g.vertex_count();
    let gt = g.transpose();
    let mut deg: Vec<usize> = (0..n as VertexId).map(|v| g.out_degree(v)).collect();
    let mut removed = vec![false; n];
    let mut frontier: Vec<VertexId> = (0..n as VertexId)
        .filter(|&v| deg[v as usize] == 0)
        .collect();
    for &v in &frontier {
        removed[v as usize] = true;
    }
    let mut rounds = 0usize;
    let mut total = 0usize;
    while !frontier.is_empty() {
        rounds += 1;
        total += frontier.len();
        let mut next = Vec::new();
        for &v in &frontier {
            for &u in gt.successors(v) {
                if removed[u as usize] {
                    continue; // self-loop or already-peeled predecessor
                }
                deg[u as usize] -= 1;
                if deg[u as usize] == 0 {
                    removed[u as usize] = true;
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    (rounds, total)
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn chain_peels_one_vertex_per_round() {
        assert_eq!(peeling_steps(&chain(10)), 10);
    }

    #[test]
    fn cycle_never_peels() {
        assert_eq!(peeling_steps(&cycle(5)), 0);
        assert_eq!(peeling_steps(&cycle(100)), 0);
    }

    #[test]
    fn example_five_vertex_graph_peels_in_four_rounds() {
        // Rounds remove {v2, v5}, {v4}, {v3}, {v1} (ids here are zero-based).
        let g = CsrGraph::from_edges(5, &[(0, 3), (0, 2), (2, 4), (2, 3), (3, 4)]).unwrap();
        assert_eq!(peeling_steps(&g), 4);
    }

    #[test]
    fn self_loop_only_vertex_is_not_trimmable() {
        let g = CsrGraph::from_edges(1, &[(0, 0)]).unwrap();
        let s = GraphStats::compute(&g);
        assert_eq!(s.alpha, 0);
        assert_eq!(s.trim_percent, 0.0);
    }

    #[test]
    fn stats_fields_on_mixed_graph() {
        let g = CsrGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 0), (2, 0)]).unwrap();
        let s = GraphStats::compute(&g);
        assert_eq!(s.n, 4);
        assert_eq!(s.m, 5);
        assert_eq!(s.max_out_degree, 3);
        assert_eq!(s.max_in_degree, 2);
        // v3 has no outgoing edge; removing it leaves 0 <-> 1 and 0 <-> 2 cycles.
        assert_eq!(s.alpha, 1);
        assert_eq!(s.trim_percent, 0.25);
    }

    #[test]
    fn peeling_matches_oracle_scan_count_on_random_graphs() {
        // The naive fixed-point trimmer performs one scan per peeling round
        // plus a final confirming scan, on every graph.
        use crate::oracle::fixed_point_trim;
        use crate::state::StatusArray;
        for seed in 0..60u64 {
            let n = 1 + (seed as usize * 11) % 80;
            let m = (seed as usize * 17) % (3 * n);
            let g = crate::graph::gen_er(n, m.min(n * (n - 1) / 2), seed).unwrap();
            let oracle = fixed_point_trim(&g, &StatusArray::new_live(n));
            assert_eq!(peeling_steps(&g), oracle.rounds - 1, "seed {seed}");
        }
    }

    #[test]
    fn edgeless_graph_is_fully_trimmable_in_one_round() {
        let g = crate::graph::gen_er(10, 0, 0).unwrap();
        let s = GraphStats::compute(&g);
        assert_eq!(s.trim_percent, 1.0);
        assert_eq!(s.alpha, 1);
    }

    #[test]
    fn alpha_zero_iff_nothing_trimmable() {
        let s = GraphStats::compute(&cycle(7));
        assert_eq!(s.alpha, 0);
        assert_eq!(s.trim_percent, 0.0);
        let s = GraphStats::compute(&chain(3));
        assert!(s.alpha > 0);
        assert!(s.trim_percent > 0.0);
    }
}
