//! Fork-join building blocks shared by the parallel engines: scoped worker
//! teams, dynamic chunk scheduling, a counting barrier, atomic counter
//! arrays and buffered appends to a shared array.

use std::ops::Range;
use std::sync::atomic::{AtomicU32, AtomicU64, AtomicUsize, Ordering};
use std::sync::Barrier;

/// Default per-worker staging capacity for [`BufferedAppender`].
pub const APPEND_BUFFER: usize = 2048;

/// Environment variable consulted for the default worker count.
pub const THREADS_ENV: &str = "PKT_THREADS";

/// Worker count from [`THREADS_ENV`], falling back to the available
/// parallelism of the machine.
pub fn default_workers() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Runs `body(worker_index)` on `workers` scoped threads and collects the
/// results in worker order. A single worker runs on the calling thread.
pub fn run_workers<T, F>(workers: usize, body: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1);
    if workers == 1 {
        return vec![body(0)];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|tid| {
                let body = &body;
                scope.spawn(move || body(tid))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Contiguous share of `0..len` owned by worker `tid` under a static
/// schedule.
pub fn static_range(tid: usize, workers: usize, len: usize) -> Range<usize> {
    let per = len / workers;
    let extra = len % workers;
    let start = tid * per + tid.min(extra);
    let end = start + per + usize::from(tid < extra);
    start..end
}

/// Shared cursor handing out fixed-size chunks of an index range.
#[derive(Debug, Default)]
pub struct ChunkCursor {
    next: AtomicUsize,
}

impl ChunkCursor {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn claim(&self, chunk: usize, len: usize) -> Option<Range<usize>> {
        let start = self.next.fetch_add(chunk, Ordering::Relaxed);
        (start < len).then(|| start..(start + chunk).min(len))
    }

    /// Only call while no worker is claiming.
    pub fn reset(&self) {
        self.next.store(0, Ordering::Relaxed);
    }
}

/// Barrier that also counts how many times the team synchronized.
#[derive(Debug)]
pub struct CountingBarrier {
    inner: Barrier,
    passes: AtomicU64,
}

impl CountingBarrier {
    pub fn new(workers: usize) -> Self {
        CountingBarrier {
            inner: Barrier::new(workers.max(1)),
            passes: AtomicU64::new(0),
        }
    }

    pub fn wait(&self) {
        if self.inner.wait().is_leader() {
            self.passes.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub fn passes(&self) -> u64 {
        self.passes.load(Ordering::Relaxed)
    }
}

/// Fixed-length array of `u32` counters updated with atomic
/// read-modify-write operations.
#[derive(Debug, Default)]
pub struct AtomicCounts(Box<[AtomicU32]>);

impl AtomicCounts {
    pub fn zeroed(len: usize) -> Self {
        AtomicCounts((0..len).map(|_| AtomicU32::new(0)).collect())
    }

    pub fn from_vec(values: Vec<u32>) -> Self {
        AtomicCounts(values.into_iter().map(AtomicU32::new).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: u32) -> u32 {
        self.0[i as usize].load(Ordering::Relaxed)
    }

    #[inline]
    pub fn set(&self, i: u32, value: u32) {
        self.0[i as usize].store(value, Ordering::Relaxed)
    }

    #[inline]
    pub fn increment(&self, i: u32) -> u32 {
        self.0[i as usize].fetch_add(1, Ordering::Relaxed)
    }

    /// Returns the value before the decrement.
    #[inline]
    pub fn decrement(&self, i: u32) -> u32 {
        self.0[i as usize].fetch_sub(1, Ordering::Relaxed)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.0.iter().map(|a| a.load(Ordering::Relaxed)).collect()
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
            .into_vec()
            .into_iter()
            .map(AtomicU32::into_inner)
            .collect()
    }
}

/// A shared output array with an atomically advanced tail.
#[derive(Debug)]
pub struct SharedArray {
    slots: Box<[AtomicU32]>,
    tail: AtomicUsize,
}

impl SharedArray {
    pub fn with_capacity(capacity: usize) -> Self {
        SharedArray {
            slots: (0..capacity).map(|_| AtomicU32::new(0)).collect(),
            tail: AtomicUsize::new(0),
        }
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn len(&self) -> usize {
        self.tail.load(Ordering::Relaxed)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.slots[i].load(Ordering::Relaxed)
    }

    /// Only call while no worker is appending.
    pub fn clear(&self) {
        self.tail.store(0, Ordering::Relaxed);
    }

    /// Reserves `count` slots and returns the start of the reserved range.
    #[inline]
    pub fn reserve(&self, count: usize) -> usize {
        let start = self.tail.fetch_add(count, Ordering::Relaxed);
        assert!(
            start + count <= self.slots.len(),
            "shared array overflow: {} + {count} > {}",
            start,
            self.slots.len()
        );
        start
    }

    pub fn to_vec(&self) -> Vec<u32> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }
}

/// Per-worker staging buffer in front of a [`SharedArray`]. A flush costs
/// one atomic tail bump followed by a plain copy into the reserved range.
pub struct BufferedAppender<'a> {
    target: &'a SharedArray,
    buf: Vec<u32>,
    capacity: usize,
    flushes: usize,
}

impl<'a> BufferedAppender<'a> {
    pub fn new(target: &'a SharedArray, capacity: usize) -> Self {
        let capacity = capacity.max(1);
        BufferedAppender {
            target,
            buf: Vec::with_capacity(capacity),
            capacity,
            flushes: 0,
        }
    }

    #[inline]
    pub fn push(&mut self, value: u32) {
        self.buf.push(value);
        if self.buf.len() == self.capacity {
            self.flush();
        }
    }

    pub fn flush(&mut self) {
        if self.buf.is_empty() {
            return;
        }
        let start = self.target.reserve(self.buf.len());
        for (slot, &v) in self.target.slots[start..].iter().zip(&self.buf) {
            slot.store(v, Ordering::Relaxed);
        }
        self.buf.clear();
        self.flushes += 1;
    }

    /// Number of tail reservations made so far.
    pub fn flushes(&self) -> usize {
        self.flushes
    }

    pub fn pending(&self) -> usize {
        self.buf.len()
    }
}

impl Drop for BufferedAppender<'_> {
    fn drop(&mut self) {
        self.flush();
    }
}
