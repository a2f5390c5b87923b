use std::sync::atomic::{AtomicU64, Ordering};

use crate::graph::{CsrGraph, ScanControl, SuccessorSource, VertexId};

/// A graph defined by a successor function instead of stored edges.
///
/// The function must be pure: enumerating the same vertex twice yields the
/// same successor sequence. Successor generation is the expensive operation
/// on such graphs, so the shared `traversed` tally counts every successor
/// actually delivered to a consumer (skipped prefix slots are not counted).
/// Engines running on an `ImplicitGraph` by construction never see a
/// predecessor, which is what makes them usable on-the-fly.
pub struct ImplicitGraph<F> {
    n: usize,
    post: F,
    traversed: AtomicU64,
}

impl<F> ImplicitGraph<F>
where
    F: Fn(VertexId, &mut dyn FnMut(VertexId) -> bool) + Sync,
{
    /// `post(v, sink)` must feed `v`'s successors to `sink` in a fixed order,
    /// stopping early when `sink` returns `false`.
    pub fn new(n: usize, post: F) -> Self {
        ImplicitGraph {
            n,
            post,
            traversed: AtomicU64::new(0),
        }
    }

    /// Total successors yielded so far, across all threads.
    pub fn traversed(&self) -> u64 {
        self.traversed.load(Ordering::Relaxed)
    }
}

/// Wraps an explicit graph behind the successor-function interface, for
/// exercising on-the-fly engines against known topologies.
pub fn csr_as_implicit(
    g: &CsrGraph,
) -> ImplicitGraph<impl Fn(VertexId, &mut dyn FnMut(VertexId) -> bool) + Sync + '_> {
    ImplicitGraph::new(g.vertex_count(), move |v, sink| {
        for &w in g.successors(v) {
            if !sink(w) {
                break;
            }
        }
    })
}

impl<F> SuccessorSource for ImplicitGraph<F>
where
    F: Fn(VertexId, &mut dyn FnMut(VertexId) -> bool) + Sync,
{
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn scan_successors<G>(&self, v: VertexId, start: usize, mut visit: G) -> usize
    where
        G: FnMut(VertexId) -> ScanControl,
    {
        let mut slot = 0usize;
        let mut delivered = 0usize;
        (self.post)(v, &mut |w| {
            if slot < start {
                slot += 1;
                return true;
            }
            slot += 1;
            self.traversed.fetch_add(1, Ordering::Relaxed);
            delivered += 1;
            visit(w) == ScanControl::Continue
        });
        delivered
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_prefix_and_counts_only_delivered() {
        let g = CsrGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let imp = csr_as_implicit(&g);

        let mut seen = Vec::new();
        let delivered = imp.scan_successors(0, 1, |w| {
            seen.push(w);
            ScanControl::Continue
        });
        assert_eq!(delivered, 2);
        assert_eq!(seen, vec![2, 3]);
        assert_eq!(imp.traversed(), 2);

        // Early stop counts the successor that triggered it.
        let delivered = imp.scan_successors(0, 0, |_| ScanControl::Stop);
        assert_eq!(delivered, 1);
        assert_eq!(imp.traversed(), 3);
    }

    #[test]
    fn enumeration_is_repeatable() {
        let g = CsrGraph::from_edges(3, &[(0, 2), (0, 1)]).unwrap();
        let imp = csr_as_implicit(&g);
        let collect = || {
            let mut v = Vec::new();
            imp.scan_successors(0, 0, |w| {
                v.push(w);
                ScanControl::Continue
            });
            v
        };
        assert_eq!(collect(), collect());
    }
}
