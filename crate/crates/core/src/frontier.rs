//! Level-synchronous peeling over an item frontier.
//!
//! Items are edges (truss) or vertices (core). Level `l` starts with a scan
//! that gathers every unprocessed item whose current value equals `l` into
//! `curr`. Sub-levels then drain `curr`: processing an item may lower a
//! neighbor's value to `l`, which queues the neighbor into `next`. After each
//! sub-level the `curr` items are marked processed and the two buffers trade
//! roles. The peel ends once every item has been processed.
//!
//! Inside [`peel`] the whole loop runs in one team of workers. The team
//! synchronizes once after the prepare phase, once after every scan and twice
//! per sub-level (after processing, then after the buffer swap).

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::parallel::{
    run_workers, static_range, BufferedAppender, ChunkCursor, CountingBarrier, SharedArray,
    APPEND_BUFFER,
};

/// Frontier state: `curr`/`next` item arrays, their membership flags and the
/// processed flags.
#[derive(Debug)]
pub struct LevelFrontier {
    buffers: [SharedArray; 2],
    flags: [Box<[AtomicBool]>; 2],
    processed: Box<[AtomicBool]>,
    cur: usize,
    todo: usize,
    level: u32,
}

fn flag_array(len: usize) -> Box<[AtomicBool]> {
    (0..len).map(|_| AtomicBool::new(false)).collect()
}

impl LevelFrontier {
    pub fn new(items: usize) -> Self {
        LevelFrontier {
            buffers: [
                SharedArray::with_capacity(items),
                SharedArray::with_capacity(items),
            ],
            flags: [flag_array(items), flag_array(items)],
            processed: flag_array(items),
            cur: 0,
            todo: items,
            level: 0,
        }
    }

    pub fn items(&self) -> usize {
        self.processed.len()
    }

    /// Items that have not yet entered `curr`.
    pub fn todo(&self) -> usize {
        self.todo
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn set_level(&mut self, level: u32) {
        self.level = level;
    }

    pub fn curr(&self) -> Vec<u32> {
        self.buffers[self.cur].to_vec()
    }

    pub fn next(&self) -> Vec<u32> {
        self.buffers[1 - self.cur].to_vec()
    }

    pub fn in_curr(&self, item: u32) -> bool {
        self.flags[self.cur][item as usize].load(Ordering::Relaxed)
    }

    pub fn in_next(&self, item: u32) -> bool {
        self.flags[1 - self.cur][item as usize].load(Ordering::Relaxed)
    }

    pub fn is_processed(&self, item: u32) -> bool {
        self.processed[item as usize].load(Ordering::Relaxed)
    }

    /// Marks an item as already peeled without running it through a level.
    pub fn mark_processed(&mut self, item: u32) {
        if !self.processed[item as usize].swap(true, Ordering::Relaxed) {
            self.todo -= 1;
        }
    }

    /// Consistency of arrays and flags; meant for tests and debugging.
    pub fn check_invariants(&self) -> Result<(), String> {
        let curr = self.curr();
        let next = self.next();
        let mut seen = vec![0u8; self.items()];
        for (name, list, side) in [("curr", &curr, 0), ("next", &next, 1)] {
            for &e in list.iter() {
                if self.is_processed(e) {
                    return Err(format!("processed item {e} in {name}"));
                }
                if seen[e as usize] != 0 {
                    return Err(format!("item {e} appears twice across curr/next"));
                }
                seen[e as usize] = side + 1;
            }
        }
        for e in 0..self.items() as u32 {
            let s = seen[e as usize];
            if self.in_curr(e) != (s == 1) {
                return Err(format!("in_curr[{e}] disagrees with curr"));
            }
            if self.in_next(e) != (s == 2) {
                return Err(format!("in_next[{e}] disagrees with next"));
            }
        }
        Ok(())
    }

    fn view(&self, cur: usize) -> FrontierView<'_> {
        FrontierView {
            in_curr: &self.flags[cur],
            in_next: &self.flags[1 - cur],
            processed: &self.processed,
        }
    }
}

/// Read access to the flags while a sub-level is being processed.
pub(crate) struct FrontierView<'a> {
    in_curr: &'a [AtomicBool],
    in_next: &'a [AtomicBool],
    processed: &'a [AtomicBool],
}

impl FrontierView<'_> {
    #[inline]
    pub fn in_curr(&self, item: u32) -> bool {
        self.in_curr[item as usize].load(Ordering::Relaxed)
    }

    #[inline]
    pub fn processed(&self, item: u32) -> bool {
        self.processed[item as usize].load(Ordering::Relaxed)
    }

    #[inline]
    pub fn enqueue_next(&self, item: u32, next: &mut BufferedAppender<'_>) {
        self.in_next[item as usize].store(true, Ordering::Relaxed);
        next.push(item);
    }
}

/// The item-specific half of a peel.
pub(crate) trait PeelKernel: Sync {
    type Scratch: Send;

    /// Dynamic schedule chunk for sub-level processing.
    const PROCESS_CHUNK: usize;

    fn scratch(&self) -> Self::Scratch;

    /// Current value of an item (support or remaining degree).
    fn value(&self, item: u32) -> u32;

    /// Removes `item` at `level`, lowering neighbor values and queueing any
    /// neighbor whose value lands on `level`.
    fn process(
        &self,
        item: u32,
        level: u32,
        view: &FrontierView<'_>,
        scratch: &mut Self::Scratch,
        next: &mut BufferedAppender<'_>,
    );
}

/// Sub-level counts per level, plus the number of team synchronizations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubLevelTrace {
    /// `nsl[l]` = number of non-empty sub-levels processed at level `l`.
    pub nsl: Vec<u32>,
    /// Barrier passes of the worker team, including the one that closes
    /// the prepare phase.
    pub barriers: u64,
    /// Σ |curr| over all sub-levels.
    pub frontier_total: u64,
}

impl SubLevelTrace {
    pub fn total_sublevels(&self) -> u64 {
        self.nsl.iter().map(|&c| c as u64).sum()
    }

    /// Number of levels that were scanned.
    pub fn levels(&self) -> usize {
        self.nsl.len()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct PhaseTimes {
    pub prepare: Duration,
    pub scan: Duration,
    pub process: Duration,
}

fn scan_body<K: PeelKernel>(
    kernel: &K,
    frontier: &LevelFrontier,
    cur: usize,
    level: u32,
    tid: usize,
    workers: usize,
) {
    let in_curr = &frontier.flags[cur];
    let mut app = BufferedAppender::new(&frontier.buffers[cur], APPEND_BUFFER);
    for i in static_range(tid, workers, frontier.items()) {
        let item = i as u32;
        if !frontier.processed[i].load(Ordering::Relaxed) && kernel.value(item) == level {
            in_curr[i].store(true, Ordering::Relaxed);
            app.push(item);
        }
    }
    app.flush();
}

fn process_body<K: PeelKernel>(
    kernel: &K,
    frontier: &LevelFrontier,
    cur: usize,
    len: usize,
    level: u32,
    cursor: &ChunkCursor,
    scratch: &mut K::Scratch,
) {
    let curr = &frontier.buffers[cur];
    let view = frontier.view(cur);
    let mut next = BufferedAppender::new(&frontier.buffers[1 - cur], APPEND_BUFFER);
    while let Some(range) = cursor.claim(K::PROCESS_CHUNK, len) {
        for i in range {
            kernel.process(curr.get(i), level, &view, scratch, &mut next);
        }
    }
    next.flush();
}

fn retire_body(frontier: &LevelFrontier, cur: usize, len: usize, tid: usize, workers: usize) {
    let curr = &frontier.buffers[cur];
    let in_curr = &frontier.flags[cur];
    for i in static_range(tid, workers, len) {
        let item = curr.get(i) as usize;
        frontier.processed[item].store(true, Ordering::Relaxed);
        in_curr[item].store(false, Ordering::Relaxed);
    }
}

/// Standalone scan of `level` into an empty `curr`.
pub(crate) fn scan<K: PeelKernel>(
    kernel: &K,
    frontier: &mut LevelFrontier,
    level: u32,
    workers: usize,
) {
    assert!(
        frontier.buffers[frontier.cur].is_empty(),
        "scan requires an empty curr"
    );
    frontier.level = level;
    let workers = workers.max(1);
    let f = &*frontier;
    run_workers(workers, |tid| {
        scan_body(kernel, f, f.cur, level, tid, workers)
    });
}

/// Standalone sub-level: processes `curr`, retires it and swaps buffers.
/// Returns the size of the new `curr`.
pub(crate) fn process_sublevel<K: PeelKernel>(
    kernel: &K,
    frontier: &mut LevelFrontier,
    level: u32,
    workers: usize,
) -> usize {
    let workers = workers.max(1);
    let cur = frontier.cur;
    let len = frontier.buffers[cur].len();
    let cursor = ChunkCursor::new();
    {
        let f = &*frontier;
        run_workers(workers, |_| {
            let mut scratch = kernel.scratch();
            process_body(kernel, f, cur, len, level, &cursor, &mut scratch);
        });
        run_workers(workers, |tid| retire_body(f, cur, len, tid, workers));
    }
    frontier.todo -= len;
    frontier.buffers[cur].clear();
    frontier.cur = 1 - cur;
    frontier.buffers[frontier.cur].len()
}

/// Runs a complete peel with one persistent team. `prepare` runs on every
/// worker before the first scan and is followed by a barrier.
pub(crate) fn peel<K, P>(
    kernel: &K,
    frontier: &mut LevelFrontier,
    workers: usize,
    prepare: P,
) -> (SubLevelTrace, PhaseTimes)
where
    K: PeelKernel,
    P: Fn(usize, &mut K::Scratch) + Sync,
{
    let workers = workers.max(1);
    let barrier = CountingBarrier::new(workers);
    let cursor = ChunkCursor::new();
    let start_cur = frontier.cur;
    let start_todo = frontier.todo;
    let start_level = frontier.level;
    let f = &*frontier;

    let mut results = run_workers(workers, |tid| {
        let mut scratch = kernel.scratch();
        let mut trace = SubLevelTrace::default();
        let mut times = PhaseTimes::default();
        let mut cur = start_cur;
        let mut todo = start_todo;
        let mut level = start_level;

        let t0 = Instant::now();
        prepare(tid, &mut scratch);
        barrier.wait();
        times.prepare = t0.elapsed();

        while todo > 0 {
            let t_scan = Instant::now();
            scan_body(kernel, f, cur, level, tid, workers);
            barrier.wait();
            times.scan += t_scan.elapsed();

            let t_proc = Instant::now();
            let mut len = f.buffers[cur].len();
            let mut sublevels = 0u32;
            while len > 0 {
                todo -= len;
                sublevels += 1;
                trace.frontier_total += len as u64;
                process_body(kernel, f, cur, len, level, &cursor, &mut scratch);
                barrier.wait();

                let next_len = f.buffers[1 - cur].len();
                retire_body(f, cur, len, tid, workers);
                if tid == 0 {
                    f.buffers[cur].clear();
                    cursor.reset();
                }
                barrier.wait();
                cur = 1 - cur;
                len = next_len;
            }
            times.process += t_proc.elapsed();
            if sublevels == 0 {
                // A worker that is already scanning the next level must not
                // append into the buffer whose length others may still read.
                cur = 1 - cur;
            }
            trace.nsl.push(sublevels);
            level += 1;
        }
        (trace, times, cur, level)
    });

    let (mut trace, times, cur, level) = results.swap_remove(0);
    trace.barriers = barrier.passes();
    frontier.cur = cur;
    frontier.level = level;
    frontier.todo = 0;
    (trace, times)
}
