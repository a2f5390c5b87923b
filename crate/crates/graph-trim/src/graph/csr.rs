use crate::error::Error;
use crate::graph::{ScanControl, SuccessorSource, VertexId};

/// Immutable directed graph in compressed sparse row form.
///
/// `offsets` has length `n + 1` with `offsets[0] = 0` and `offsets[n] = m`;
/// the successors of `v` are `targets[offsets[v]..offsets[v + 1]]`, in a
/// fixed per-vertex order. Duplicate edges and self-loops are representable
/// and preserved by every transform in this module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsrGraph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl CsrGraph {
    /// Builds a graph from an edge list. Edge order is kept stable per
    /// source vertex, so `(0,2) (0,1)` yields successors `[2, 1]` for `0`.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, Error> {
        if n > u32::MAX as usize {
            return Err(Error::Capacity(format!(
                "vertex count {n} exceeds the 32-bit id space"
            )));
        }
        let mut offsets = vec![0usize; n + 1];
        for &(src, dst) in edges {
            if (src as usize) >= n || (dst as usize) >= n {
                return Err(Error::Capacity(format!(
                    "edge ({src}, {dst}) references a vertex >= n = {n}"
                )));
            }
            offsets[src as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        // Counting sort by source; per-source order stays the input order.
        let mut cursor = offsets.clone();
        let mut targets = vec![0 as VertexId; edges.len()];
        for &(src, dst) in edges {
            let slot = cursor[src as usize];
            targets[slot] = dst;
            cursor[src as usize] += 1;
        }
        Ok(CsrGraph { offsets, targets })
    }

    /// Assembles a graph directly from CSR arrays, validating the invariants.
    pub fn from_parts(offsets: Vec<usize>, targets: Vec<VertexId>) -> Result<Self, Error> {
        if offsets.is_empty() {
            return Err(Error::Format("offsets array must not be empty".into()));
        }
        let n = offsets.len() - 1;
        if n > u32::MAX as usize {
            return Err(Error::Capacity(format!(
                "vertex count {n} exceeds the 32-bit id space"
            )));
        }
        if offsets[0] != 0 {
            return Err(Error::Format("offsets[0] must be 0".into()));
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Format("offsets must be nondecreasing".into()));
        }
        if offsets[n] != targets.len() {
            return Err(Error::Format(format!(
                "offsets[n] = {} does not match target count {}",
                offsets[n],
                targets.len()
            )));
        }
        if targets.iter().any(|&t| (t as usize) >= n) {
            return Err(Error::Format("target vertex out of range".into()));
        }
        Ok(CsrGraph { offsets, targets })
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// Successors of `v` in their fixed order.
    #[inline]
    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Out-degree of `v`.
    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub(crate) fn targets(&self) -> &[VertexId] {
        &self.targets
    }

    /// Iterates all edges as `(source, target)` pairs in CSR order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count() as VertexId)
            .flat_map(move |v| self.successors(v).iter().map(move |&w| (v, w)))
    }

    /// Builds the reversed graph: `(w, v)` is an edge of the result iff
    /// `(v, w)` is an edge of `self`. The successors of `v` in the result are
    /// exactly the predecessors of `v` in `self`.
    pub fn transpose(&self) -> CsrGraph {
        let n = self.vertex_count();
        let mut offsets = vec![0usize; n + 1];
        for &t in &self.targets {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0 as VertexId; self.targets.len()];
        for v in 0..n {
            for &w in self.successors(v as VertexId) {
                let slot = cursor[w as usize];
                targets[slot] = v as VertexId;
                cursor[w as usize] += 1;
            }
        }
        CsrGraph { offsets, targets }
    }
}

impl SuccessorSource for CsrGraph {
    fn vertex_count(&self) -> usize {
        self.vertex_count()
    }

    #[inline]
    fn scan_successors<F>(&self, v: VertexId, start: usize, mut visit: F) -> usize
    where
        F: FnMut(VertexId) -> ScanControl,
    {
        let lo = self.offsets[v as usize] + start;
        let hi = self.offsets[v as usize + 1];
        debug_assert!(lo <= hi, "scan start past the end of v's successor list");
        let mut delivered = 0;
        for &w in &self.targets[lo..hi] {
            delivered += 1;
            if visit(w) == ScanControl::Stop {
                break;
            }
        }
        delivered
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_cycle_layout() {
        let g = CsrGraph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.offsets(), &[0, 1, 2]);
        assert_eq!(g.targets(), &[1, 0]);
    }

    #[test]
    fn empty_graph() {
        let g = CsrGraph::from_edges(0, &[]).unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.offsets(), &[0]);
    }

    #[test]
    fn per_source_order_is_input_order() {
        // Hand-checked layout for edges (0,2) (0,1) (2,0).
        let g = CsrGraph::from_edges(3, &[(0, 2), (0, 1), (2, 0)]).unwrap();
        assert_eq!(g.offsets(), &[0, 2, 2, 3]);
        assert_eq!(g.targets(), &[2, 1, 0]);
    }

    #[test]
    fn transpose_reverses_chain() {
        let g = CsrGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let t = g.transpose();
        assert_eq!(t.successors(0), &[] as &[VertexId]);
        assert_eq!(t.successors(1), &[0]);
        assert_eq!(t.successors(2), &[1]);
        assert_eq!(t.edge_count(), g.edge_count());
    }

    #[test]
    fn transpose_of_symmetric_graph_has_same_edges() {
        let g = CsrGraph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        let t = g.transpose();
        let mut a: Vec<_> = g.edges().collect();
        let mut b: Vec<_> = t.edges().collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }

    #[test]
    fn from_parts_rejects_bad_offsets() {
        assert!(CsrGraph::from_parts(vec![0, 2, 1], vec![0, 0]).is_err());
        assert!(CsrGraph::from_parts(vec![1, 2], vec![0, 0]).is_err());
        assert!(CsrGraph::from_parts(vec![0, 1], vec![7]).is_err());
    }

    #[test]
    fn scan_respects_start_and_stop() {
        let g = CsrGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let mut seen = Vec::new();
        let visited = g.scan_successors(0, 1, |w| {
            seen.push(w);
            ScanControl::Continue
        });
        assert_eq!(visited, 2);
        assert_eq!(seen, vec![2, 3]);

        let visited = g.scan_successors(0, 0, |_| ScanControl::Stop);
        assert_eq!(visited, 1);
    }

    proptest! {
        // Transposing twice restores the edge multiset (per-vertex order may
        // legitimately change).
        #[test]
        fn transpose_is_involution_on_edge_multiset(
            n in 1usize..40,
            raw in proptest::collection::vec((0u32..40, 0u32..40), 0..160),
        ) {
            let edges: Vec<_> = raw
                .into_iter()
                .map(|(a, b)| (a % n as u32, b % n as u32))
                .collect();
            let g = CsrGraph::from_edges(n, &edges).unwrap();
            let tt = g.transpose().transpose();
            let mut before: Vec<_> = g.edges().collect();
            let mut after: Vec<_> = tt.edges().collect();
            before.sort_unstable();
            after.sort_unstable();
            prop_assert_eq!(before, after);
        }
    }
}
