use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::graph::{CsrGraph, VertexId};
use crate::state::StatusArray;

fn check_ratio(ratio: f64) -> Result<(), Error> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sampling ratio must be in (0, 1], got {ratio}"
        )));
    }
    Ok(())
}

/// Keeps each edge independently with probability `ratio` and rebuilds the
/// CSR arrays, preserving per-vertex successor order. `ratio = 1.0` is the
/// identity.
pub fn sample_edges(g: &CsrGraph, ratio: f64, seed: u64) -> Result<CsrGraph, Error> {
    check_ratio(ratio)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.vertex_count();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets: Vec<VertexId> = Vec::with_capacity(g.edge_count());
    offsets.push(0);
    for v in 0..n as VertexId {
        for &w in g.successors(v) {
            if rng.gen::<f64>() < ratio {
                targets.push(w);
            }
        }
        offsets.push(targets.len());
    }
    CsrGraph::from_parts(offsets, targets)
}

/// Pre-marks each vertex DEAD with probability `1 - ratio`, leaving the rest
/// LIVE. The returned array is the initial status for a sampled trim run.
pub fn sample_vertices(n: usize, ratio: f64, seed: u64) -> Result<StatusArray, Error> {
    check_ratio(ratio)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let status = StatusArray::new_live(n);
    for v in 0..n as VertexId {
        if rng.gen::<f64>() >= ratio {
            status.kill(v);
        }
    }
    Ok(status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_er;

    #[test]
    fn ratio_one_is_identity() {
        let g = gen_er(200, 600, 5).unwrap();
        assert_eq!(sample_edges(&g, 1.0, 9).unwrap(), g);
        let status = sample_vertices(200, 1.0, 9).unwrap();
        assert_eq!(status.dead_count(), 0);
    }

    #[test]
    fn out_of_range_ratio_is_rejected() {
        let g = gen_er(10, 20, 0).unwrap();
        assert!(sample_edges(&g, 0.0, 0).is_err());
        assert!(sample_edges(&g, 1.5, 0).is_err());
        assert!(sample_vertices(10, -0.1, 0).is_err());
    }

    #[test]
    fn sampling_is_deterministic_under_seed() {
        let g = gen_er(500, 2500, 2).unwrap();
        assert_eq!(
            sample_edges(&g, 0.3, 77).unwrap(),
            sample_edges(&g, 0.3, 77).unwrap()
        );
        let a = sample_vertices(500, 0.3, 77).unwrap();
        let b = sample_vertices(500, 0.3, 77).unwrap();
        assert_eq!(a.dead_fingerprint(), b.dead_fingerprint());
    }

    #[test]
    fn kept_edges_within_three_sigma_of_binomial() {
        // Ring with one million edges: src v, dst (v + 1) mod n.
        let n: usize = 1_000_000;
        let offsets: Vec<usize> = (0..=n).collect();
        let targets: Vec<VertexId> = (0..n as VertexId)
            .map(|v| (v + 1) % n as VertexId)
            .collect();
        let g = CsrGraph::from_parts(offsets, targets).unwrap();
        let kept = sample_edges(&g, 0.5, 42).unwrap().edge_count() as f64;
        let mean = 500_000.0;
        let sigma = (1_000_000.0f64 * 0.25).sqrt();
        assert!(
            (kept - mean).abs() <= 3.0 * sigma,
            "kept {kept} outside 3 sigma of binomial mean"
        );
    }
}
