//! Synthetic graph generators.
//!
//! All three are deterministic functions of their arguments: the same
//! `(n, m, seed, params)` produce a byte-identical graph. Self-loops are
//! never generated and duplicate edges are redrawn, so each generator emits
//! exactly `m` distinct directed edges (BA tops up to `m` after the uniform
//! per-vertex attachment pass).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::graph::{CsrGraph, VertexId};

/// Default R-MAT quadrant weights (the fourth is `1 - a - b - c`).
pub const RMAT_A: f64 = 0.57;
pub const RMAT_B: f64 = 0.19;
pub const RMAT_C: f64 = 0.19;

fn pack(src: VertexId, dst: VertexId) -> u64 {
    ((src as u64) << 32) | dst as u64
}

fn build_from_packed(n: usize, mut packed: Vec<u64>) -> Result<CsrGraph, Error> {
    packed.sort_unstable();
    let edges: Vec<(VertexId, VertexId)> = packed
        .into_iter()
        .map(|p| ((p >> 32) as VertexId, p as VertexId))
        .collect();
    CsrGraph::from_edges(n, &edges)
}

/// Uniform random digraph: `m` distinct directed edges drawn uniformly from
/// the `n * (n - 1)` non-loop pairs.
pub fn gen_er(n: usize, m: usize, seed: u64) -> Result<CsrGraph, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let max_edges = n as u128 * (n as u128 - 1);
    if m as u128 > max_edges {
        return Err(Error::Infeasible(format!(
            "m = {m} exceeds n(n-1) = {max_edges} distinct non-loop edges"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut packed: Vec<u64> = Vec::with_capacity(m + m / 16);
    // Draw, dedupe, and redraw the deficit until exactly m distinct edges.
    while packed.len() < m {
        let need = m - packed.len();
        for _ in 0..need {
            loop {
                let src = rng.gen_range(0..n as u32);
                let dst = rng.gen_range(0..n as u32);
                if src != dst {
                    packed.push(pack(src, dst));
                    break;
                }
            }
        }
        packed.sort_unstable();
        packed.dedup();
    }
    build_from_packed(n, packed)
}

/// Preferential attachment: vertex `i` draws `min(i, m / n)` distinct targets
/// among `0..i`, weighted by how often a vertex already appears as an edge
/// endpoint. Remaining edges (when `n` does not divide `m`) are topped up the
/// same way from uniformly chosen sources. Every edge points to a smaller id,
/// so the result is acyclic and fully trimmable.
pub fn gen_ba(n: usize, m: usize, seed: u64) -> Result<CsrGraph, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let stubs = m / n;
    let cap = (n as u128 * (n as u128 - 1)) / 2;
    if m as u128 > cap {
        return Err(Error::Infeasible(format!(
            "m = {m} exceeds n(n-1)/2 = {cap} old-ward edges"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    // The bag realizes degree-proportional choice: one entry per vertex at
    // creation, one per edge endpoint thereafter.
    let mut bag: Vec<VertexId> = Vec::with_capacity(2 * m + n);
    bag.push(0);
    let mut edges = 0usize;

    fn attach(
        src: usize,
        adj: &mut [Vec<VertexId>],
        bag: &mut Vec<VertexId>,
        rng: &mut ChaCha8Rng,
    ) {
        loop {
            let t = bag[rng.gen_range(0..bag.len())];
            if (t as usize) < src && !adj[src].contains(&t) {
                adj[src].push(t);
                bag.push(t);
                bag.push(src as VertexId);
                return;
            }
        }
    }

    for i in 1..n {
        if edges == m {
            break;
        }
        let k = stubs.min(i).min(m - edges);
        for _ in 0..k {
            attach(i, &mut adj, &mut bag, &mut rng);
            edges += 1;
        }
        bag.push(i as VertexId);
    }
    // Top-up pass so the edge count is exactly m.
    while edges < m {
        let src = rng.gen_range(1..n);
        if adj[src].len() >= src {
            continue; // already saturated toward every smaller id
        }
        attach(src, &mut adj, &mut bag, &mut rng);
        edges += 1;
    }

    let pairs: Vec<(VertexId, VertexId)> = adj
        .iter()
        .enumerate()
        .flat_map(|(src, ts)| ts.iter().map(move |&t| (src as VertexId, t)))
        .collect();
    CsrGraph::from_edges(n, &pairs)
}

/// Recursive-matrix generator: each edge picks one of four quadrants per bit
/// level with probabilities `(a, b, c, 1 - a - b - c)`, yielding skewed,
/// social-network-like degree distributions.
pub fn gen_rmat(
    n: usize,
    m: usize,
    seed: u64,
    a: f64,
    b: f64,
    c: f64,
) -> Result<CsrGraph, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if !(a >= 0.0 && b >= 0.0 && c >= 0.0 && a + b + c <= 1.0 + 1e-12) {
        return Err(Error::InvalidArgument(
            "quadrant weights must be nonnegative with a + b + c <= 1".into(),
        ));
    }
    let max_edges = n as u128 * (n as u128 - 1);
    if m as u128 > max_edges {
        return Err(Error::Infeasible(format!(
            "m = {m} exceeds n(n-1) = {max_edges} distinct non-loop edges"
        )));
    }
    let levels = usize::BITS - (n.max(2) - 1).leading_zeros(); // ceil(log2 n)
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut packed: Vec<u64> = Vec::with_capacity(m + m / 16);
    while packed.len() < m {
        let need = m - packed.len();
        for _ in 0..need {
            loop {
                let mut src: u64 = 0;
                let mut dst: u64 = 0;
                for _ in 0..levels {
                    let r: f64 = rng.gen();
                    let (sbit, dbit) = if r < a {
                        (0, 0)
                    } else if r < a + b {
                        (0, 1)
                    } else if r < a + b + c {
                        (1, 0)
                    } else {
                        (1, 1)
                    };
                    src = (src << 1) | sbit;
                    dst = (dst << 1) | dbit;
                }
                if src < n as u64 && dst < n as u64 && src != dst {
                    packed.push(pack(src as VertexId, dst as VertexId));
                    break;
                }
            }
        }
        packed.sort_unstable();
        packed.dedup();
    }
    build_from_packed(n, packed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_is_deterministic_and_exact() {
        let g1 = gen_er(100, 350, 7).unwrap();
        let g2 = gen_er(100, 350, 7).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(g1.edge_count(), 350);
        assert!(g1.edges().all(|(s, d)| s != d));
        let mut pairs: Vec<_> = g1.edges().collect();
        pairs.sort_unstable();
        pairs.dedup();
        assert_eq!(pairs.len(), 350, "edges must be distinct");
        assert_ne!(gen_er(100, 350, 8).unwrap(), g1);
    }

    #[test]
    fn er_zero_edges_gives_isolated_vertices() {
        let g = gen_er(10, 0, 1).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn er_rejects_infeasible_density() {
        assert!(matches!(gen_er(3, 7, 0), Err(Error::Infeasible(_))));
        assert!(gen_er(3, 6, 0).is_ok());
    }

    #[test]
    fn ba_is_acyclic_with_exact_edge_count() {
        let g = gen_ba(500, 2000, 3).unwrap();
        assert_eq!(g.edge_count(), 2000);
        assert!(g.edges().all(|(s, d)| d < s), "edges must point old-ward");
        assert_eq!(g, gen_ba(500, 2000, 3).unwrap());
    }

    #[test]
    fn rmat_respects_bounds_and_determinism() {
        let g = gen_rmat(300, 900, 11, RMAT_A, RMAT_B, RMAT_C).unwrap();
        assert_eq!(g.edge_count(), 900);
        assert!(g.edges().all(|(s, d)| s != d));
        assert_eq!(g, gen_rmat(300, 900, 11, RMAT_A, RMAT_B, RMAT_C).unwrap());
        assert!(matches!(
            gen_rmat(300, 900, 11, 0.6, 0.3, 0.2, ),
            Err(Error::InvalidArgument(_))
        ));
    }
}
