//! Dynamic chunk scheduling: workers pull fixed-size vertex ranges from a
//! shared cursor until none remain, so a worker that finishes early takes the
//! next chunk instead of idling.

use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_CHUNK_SIZE: usize = 4096;

pub struct ChunkQueue {
    next: AtomicUsize,
    len: usize,
    chunk: usize,
}

impl ChunkQueue {
    pub fn new(len: usize, chunk: usize) -> ChunkQueue {
        assert!(chunk >= 1, "chunk size must be >= 1");
        ChunkQueue {
            next: AtomicUsize::new(0),
            len,
            chunk,
        }
    }

    /// Rearms the queue for another sweep over the same range.
    pub fn reset(&self) {
        self.next.store(0, Ordering::Relaxed);
    }

    /// Claims the next unprocessed vertex range, or `None` when exhausted.
    pub fn claim(&self) -> Option<Range<usize>> {
        let chunk_index = self.next.fetch_add(1, Ordering::Relaxed);
        let lo = chunk_index.checked_mul(self.chunk)?;
        if lo >= self.len {
            return None;
        }
        Some(lo..(lo + self.chunk).min(self.len))
    }
}
