//! Shared per-vertex state mutated by concurrent trim workers.
//!
//! Every structure here has a narrow mutation contract:
//!
//! * [`StatusArray`] — `LIVE -> DEAD` only, never back. Parallel engines that
//!   race on a kill go through [`StatusArray::try_kill`] (compare-and-swap),
//!   which grants the transition to exactly one caller.
//! * [`DegreeCounters`] — decremented only by atomic fetch-and-add, so no
//!   update is lost under contention.
//! * [`EdgeCursors`] — per-vertex resume position into the successor list;
//!   nondecreasing, and only ever advanced past successors that were observed
//!   DEAD or consumed as a support.
//! * [`SupportSets`] — per-vertex growable member lists guarded by a one-bit
//!   spin lock. Insertion happens inside the target's lock; draining happens
//!   only after the owner is DEAD, when no further insert can race.

use std::cell::UnsafeCell;
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, AtomicU8, AtomicUsize, Ordering};

use crate::graph::VertexId;

const LIVE: u8 = 0;
const DEAD: u8 = 1;

/// Per-vertex LIVE/DEAD flags; the single shared output of every engine.
pub struct StatusArray {
    flags: Vec<AtomicU8>,
}

impl StatusArray {
    pub fn new_live(n: usize) -> StatusArray {
        StatusArray {
            flags: (0..n).map(|_| AtomicU8::new(LIVE)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    #[inline]
    pub fn is_live(&self, v: VertexId) -> bool {
        self.flags[v as usize].load(Ordering::Acquire) == LIVE
    }

    #[inline]
    pub fn is_dead(&self, v: VertexId) -> bool {
        !self.is_live(v)
    }

    /// Unconditional kill for single-writer contexts (sequential engines,
    /// sweep engines where each vertex belongs to exactly one worker, or
    /// writes under the vertex's lock). Debug builds record the transition
    /// and assert it came from LIVE.
    #[inline]
    pub fn kill(&self, v: VertexId) {
        let prev = self.flags[v as usize].swap(DEAD, Ordering::AcqRel);
        debug_assert_eq!(prev, LIVE, "vertex {v} killed twice");
    }

    /// Atomic `LIVE -> DEAD` transition. Returns whether this call performed
    /// it; under concurrent callers exactly one receives `true`.
    #[inline]
    pub fn try_kill(&self, v: VertexId) -> bool {
        self.flags[v as usize]
            .compare_exchange(LIVE, DEAD, Ordering::AcqRel, Ordering::Acquire)
            .is_ok()
    }

    pub fn dead_count(&self) -> usize {
        self.flags
            .iter()
            .filter(|f| f.load(Ordering::Relaxed) == DEAD)
            .count()
    }

    pub fn live_count(&self) -> usize {
        self.len() - self.dead_count()
    }

    pub fn dead_vertices(&self) -> Vec<VertexId> {
        (0..self.len() as VertexId)
            .filter(|&v| self.is_dead(v))
            .collect()
    }

    /// Order-independent digest of the dead set, for cheap equality checks
    /// across repeated runs.
    pub fn dead_fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in 0..self.len() as u64 {
            if self.flags[v as usize].load(Ordering::Relaxed) == DEAD {
                h ^= (v + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                h = h.rotate_left(27).wrapping_mul(0x100_0000_01b3);
            }
        }
        h
    }
}

impl Clone for StatusArray {
    fn clone(&self) -> Self {
        StatusArray {
            flags: self
                .flags
                .iter()
                .map(|f| AtomicU8::new(f.load(Ordering::Relaxed)))
                .collect(),
        }
    }
}

/// Remaining live out-degree estimates, decremented as successors die.
pub struct DegreeCounters {
    counters: Vec<AtomicU32>,
}

impl DegreeCounters {
    pub fn new_zeroed(n: usize) -> DegreeCounters {
        DegreeCounters {
            counters: (0..n).map(|_| AtomicU32::new(0)).collect(),
        }
    }

    #[inline]
    pub fn set(&self, v: VertexId, value: u32) {
        self.counters[v as usize].store(value, Ordering::Relaxed);
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> u32 {
        self.counters[v as usize].load(Ordering::Relaxed)
    }

    /// Atomically decrements `v`'s counter and returns the post-decrement
    /// value. Concurrent decrements are never lost. A decrement below zero
    /// means the supplied transpose disagrees with the graph; debug builds
    /// treat that as input corruption.
    #[inline]
    pub fn dec(&self, v: VertexId) -> u32 {
        let prev = self.counters[v as usize].fetch_sub(1, Ordering::Relaxed);
        debug_assert!(prev > 0, "out-degree counter for {v} went negative");
        prev.wrapping_sub(1)
    }

    pub fn len(&self) -> usize {
        self.counters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counters.is_empty()
    }
}

/// Per-vertex resume positions into successor lists.
///
/// A cursor only moves forward, and every slot behind it is either a
/// successor that was observed DEAD (it can never revive) or one that was
/// consumed as a support and will trigger a re-scan through its own support
/// set if it dies. Concurrent duplicate advancement is harmless: all writers
/// move toward the same fixed point.
pub struct EdgeCursors {
    cursors: Vec<AtomicUsize>,
}

impl EdgeCursors {
    pub fn new(n: usize) -> EdgeCursors {
        EdgeCursors {
            cursors: (0..n).map(|_| AtomicUsize::new(0)).collect(),
        }
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> usize {
        self.cursors[v as usize].load(Ordering::Relaxed)
    }

    #[inline]
    pub fn advance_to(&self, v: VertexId, pos: usize) {
        debug_assert!(pos >= self.get(v), "edge cursor for {v} moved backward");
        self.cursors[v as usize].store(pos, Ordering::Relaxed);
    }

    /// Sum of all cursor positions; for the single-support engine this equals
    /// the total number of successor inspections performed.
    pub fn total(&self) -> u64 {
        self.cursors
            .iter()
            .map(|c| c.load(Ordering::Relaxed) as u64)
            .sum()
    }
}

/// Per-vertex supporting sets with one-bit spin locks.
///
/// `v`'s set holds the predecessors currently using `v` as their single
/// support. The lock is a busy-wait compare-and-swap flag: the critical
/// sections are at most two operations (status re-check plus append, or the
/// owner's kill write), so queued locks would buy nothing.
pub struct SupportSets {
    locks: Vec<AtomicBool>,
    sets: Vec<UnsafeCell<Vec<VertexId>>>,
}

// SAFETY: all mutable access to `sets[v]` is funneled through the contract
// documented on `push` and `take`: pushes hold `v`'s lock, takes require the
// owner to be DEAD (so no push can be issued concurrently, because pushes
// re-check the status inside the lock and the kill itself happened inside
// that same lock).
unsafe impl Sync for SupportSets {}

impl SupportSets {
    pub fn new(n: usize) -> SupportSets {
        SupportSets {
            locks: (0..n).map(|_| AtomicBool::new(false)).collect(),
            sets: (0..n).map(|_| UnsafeCell::new(Vec::new())).collect(),
        }
    }

    /// Busy-wait acquisition of `v`'s one-bit lock. The critical sections are
    /// two operations long, so the expected spin is a handful of iterations;
    /// the periodic yield only matters when workers outnumber cores and a
    /// lock holder has been descheduled.
    #[inline]
    pub fn lock(&self, v: VertexId) {
        let mut spins = 0u32;
        while self.locks[v as usize]
            .compare_exchange_weak(false, true, Ordering::Acquire, Ordering::Relaxed)
            .is_err()
        {
            spins += 1;
            if spins.is_multiple_of(64) {
                std::thread::yield_now();
            } else {
                std::hint::spin_loop();
            }
        }
    }

    #[inline]
    pub fn unlock(&self, v: VertexId) {
        self.locks[v as usize].store(false, Ordering::Release);
    }

    /// Appends `member` to `v`'s set.
    ///
    /// # Safety
    /// The caller must hold `v`'s lock (or be the only thread able to reach
    /// `v`'s set, as in the sequential engine).
    #[inline]
    pub unsafe fn push(&self, v: VertexId, member: VertexId) {
        (*self.sets[v as usize].get()).push(member);
    }

    /// Removes and returns `v`'s entire set for draining.
    ///
    /// # Safety
    /// `v` must already be DEAD and the caller must be the worker that killed
    /// it: after the kill (performed inside `v`'s lock) no other thread
    /// inserts into or reads `v`'s set.
    #[inline]
    pub unsafe fn take(&self, v: VertexId) -> Vec<VertexId> {
        std::mem::take(&mut *self.sets[v as usize].get())
    }

    /// Lock-free append for single-threaded engines; `&mut self` is the
    /// exclusivity proof.
    #[inline]
    pub fn push_exclusive(&mut self, v: VertexId, member: VertexId) {
        self.sets[v as usize].get_mut().push(member);
    }

    /// Lock-free drain for single-threaded engines.
    #[inline]
    pub fn take_exclusive(&mut self, v: VertexId) -> Vec<VertexId> {
        std::mem::take(self.sets[v as usize].get_mut())
    }

    /// Exclusive view of every set; `&mut self` guarantees quiescence.
    pub fn sets_mut(&mut self) -> impl Iterator<Item = &[VertexId]> {
        self.sets.iter_mut().map(|c| c.get_mut().as_slice())
    }

    /// Permutes the member order of every set; used by tests to show the
    /// drain order does not affect the fixed point.
    #[cfg(test)]
    pub(crate) fn shuffle_all<R: rand::Rng>(&mut self, rng: &mut R) {
        use rand::seq::SliceRandom;
        for set in &mut self.sets {
            set.get_mut().shuffle(rng);
        }
    }

    /// Quiescence invariants: each vertex sits in at most one set, members
    /// and owners of nonempty sets are LIVE, dead owners hold drained sets,
    /// and every LIVE vertex is supported exactly once.
    pub fn validate_quiescent(&mut self, status: &StatusArray) {
        let n = self.sets.len();
        let mut seen = vec![false; n];
        let mut members = 0usize;
        for (owner, set) in self.sets.iter_mut().enumerate() {
            let set = set.get_mut();
            if !set.is_empty() {
                assert!(
                    status.is_live(owner as VertexId),
                    "dead vertex {owner} retains an undrained support set"
                );
            }
            for &member in set.iter() {
                assert!(
                    !std::mem::replace(&mut seen[member as usize], true),
                    "vertex {member} appears in two support sets"
                );
                assert!(
                    status.is_live(member),
                    "dead vertex {member} left in a support set"
                );
                members += 1;
            }
        }
        assert_eq!(
            members,
            status.live_count(),
            "every live vertex must hold exactly one support"
        );
    }
}

/// Shared flag with intentionally relaxed semantics: every writer stores
/// `true`, so racing writers are benign.
pub struct ChangeFlag(AtomicBool);

impl ChangeFlag {
    pub fn new() -> ChangeFlag {
        ChangeFlag(AtomicBool::new(false))
    }

    #[inline]
    pub fn set(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn reset(&self) {
        self.0.store(false, Ordering::Relaxed);
    }

    pub fn get(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

impl Default for ChangeFlag {
    fn default() -> Self {
        Self::new()
    }
}

/// Monotone tally shared by workers; used for traversal counters.
pub struct SharedTally(AtomicU64);

impl SharedTally {
    pub fn new() -> SharedTally {
        SharedTally(AtomicU64::new(0))
    }

    #[inline]
    pub fn add(&self, amount: u64) {
        self.0.fetch_add(amount, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

impl Default for SharedTally {
    fn default() -> Self {
        Self::new()
    }
}
