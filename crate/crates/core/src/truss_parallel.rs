//! Level-synchronous parallel truss decomposition.
//!
//! Supports are computed with the oriented pivot kernel, then levels
//! `l = 0, 1, …` are peeled: a scan collects the edges whose support equals
//! `l`, and sub-levels remove those edges in parallel. Removing `e1 = {u, v}`
//! visits every surviving triangle `{u, v, w}` with `e2 = {v, w}` and
//! `e3 = {u, w}`:
//!
//! * a peer edge whose support is above `l` loses one support, clamped at
//!   `l` (an overshoot is repaired by adding the support back);
//! * when a peer is itself in `curr` the triangle belongs to whichever
//!   frontier edge has the lower id, so no peer is decremented twice;
//! * a decrement that lands exactly on `l` queues the edge into `next`.
//!
//! Level `l` corresponds to support `l`, i.e. trussness `l + 2`.

use std::time::{Duration, Instant};

use crate::frontier::{self, FrontierView, LevelFrontier, PeelKernel, SubLevelTrace};
use crate::graph::{EdgeId, TrussGraph};
use crate::parallel::{AtomicCounts, BufferedAppender, ChunkCursor};
use crate::triangle::{am4_worker, MarkScratch, SupportArray};
use crate::truss_serial::TrussnessResult;

/// Dynamic schedule chunk (frontier edges) for sub-level processing.
pub const FRONTIER_CHUNK: usize = 4;

/// Peel state for stepping through the decomposition one phase at a time.
pub struct TrussPeel<'a> {
    tg: &'a TrussGraph,
    support: AtomicCounts,
}

impl<'a> TrussPeel<'a> {
    pub fn new(tg: &'a TrussGraph, support: SupportArray) -> Self {
        assert_eq!(support.len(), tg.num_edges(), "support length must equal m");
        TrussPeel {
            tg,
            support: AtomicCounts::from_vec(support.0),
        }
    }

    pub fn support(&self) -> SupportArray {
        SupportArray(self.support.to_vec())
    }

    pub fn frontier(&self) -> LevelFrontier {
        LevelFrontier::new(self.tg.num_edges())
    }

    /// Collects every unprocessed edge with support `level` into `curr`.
    pub fn scan(&self, frontier: &mut LevelFrontier, level: u32, workers: usize) {
        frontier::scan(self, frontier, level, workers);
    }

    /// Removes the edges in `curr`, retires them and promotes `next` to
    /// `curr`. Returns the size of the new `curr`.
    pub fn process_sublevel(
        &self,
        frontier: &mut LevelFrontier,
        level: u32,
        workers: usize,
    ) -> usize {
        frontier::process_sublevel(self, frontier, level, workers)
    }

    /// Runs all remaining levels from `frontier.level()` onwards.
    pub fn finish(&self, frontier: &mut LevelFrontier, workers: usize) -> SubLevelTrace {
        frontier::peel(self, frontier, workers, |_, _| {}).0
    }

    pub fn into_result(self) -> TrussnessResult {
        TrussnessResult::from_final_support(&self.support.into_vec())
    }

    #[inline]
    fn lower(
        &self,
        e: EdgeId,
        level: u32,
        view: &FrontierView<'_>,
        next: &mut BufferedAppender<'_>,
    ) {
        let before = self.support.decrement(e);
        if before == level + 1 {
            view.enqueue_next(e, next);
        }
        if before <= level {
            self.support.increment(e);
        }
    }
}

impl PeelKernel for TrussPeel<'_> {
    type Scratch = MarkScratch;
    const PROCESS_CHUNK: usize = FRONTIER_CHUNK;

    fn scratch(&self) -> MarkScratch {
        MarkScratch::new(self.tg.num_vertices())
    }

    fn value(&self, e: u32) -> u32 {
        self.support.get(e)
    }

    fn process(
        &self,
        e1: EdgeId,
        level: u32,
        view: &FrontierView<'_>,
        x: &mut MarkScratch,
        next: &mut BufferedAppender<'_>,
    ) {
        let tg = self.tg;
        let es = tg.offsets();
        let nbr = tg.neighbor_array();
        let eid = tg.edge_ids();
        let (u, v) = tg.endpoints(e1);
        let u_adj = es[u as usize] as usize..es[u as usize + 1] as usize;
        x.mark(nbr, u_adj.clone());
        for j in es[v as usize] as usize..es[v as usize + 1] as usize {
            let Some(slot) = x.slot(nbr[j]) else {
                continue;
            };
            let e2 = eid[j];
            let e3 = eid[slot];
            if view.processed(e2) || view.processed(e3) {
                continue;
            }
            let s2 = self.support.get(e2);
            let s3 = self.support.get(e3);
            if s2 > level && s3 > level {
                self.lower(e2, level, view, next);
                self.lower(e3, level, view, next);
            } else if s2 > level {
                if !view.in_curr(e3) || e1 < e3 {
                    self.lower(e2, level, view, next);
                }
            } else if s3 > level && (!view.in_curr(e2) || e1 < e2) {
                self.lower(e3, level, view, next);
            }
        }
        x.unmark(nbr, u_adj);
    }
}

/// Wall-clock split of one decomposition.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PktTimings {
    pub support: Duration,
    pub scan: Duration,
    pub processing: Duration,
    /// Whole call, including team start-up and result assembly.
    pub wall: Duration,
}

#[derive(Clone, Debug)]
pub struct PktRun {
    pub result: TrussnessResult,
    pub trace: SubLevelTrace,
    pub timings: PktTimings,
    /// Support after peeling; equals trussness − 2 edge by edge.
    pub final_support: SupportArray,
}

/// Parallel truss decomposition; the result is identical for every worker
/// count.
pub fn pkt(tg: &TrussGraph, workers: usize) -> (TrussnessResult, SubLevelTrace) {
    let run = pkt_run(tg, workers);
    (run.result, run.trace)
}

/// [`pkt`] with phase timings and the support arrays kept.
pub fn pkt_run(tg: &TrussGraph, workers: usize) -> PktRun {
    let start = Instant::now();
    let m = tg.num_edges();
    if m == 0 {
        return PktRun {
            result: TrussnessResult::default(),
            trace: SubLevelTrace::default(),
            timings: PktTimings {
                wall: start.elapsed(),
                ..PktTimings::default()
            },
            final_support: SupportArray::default(),
        };
    }
    let peel = TrussPeel {
        tg,
        support: AtomicCounts::zeroed(m),
    };
    let mut front = LevelFrontier::new(m);
    let pivots = ChunkCursor::new();
    // The support kernel runs inside the same team; the peel's first
    // barrier closes it.
    let (trace, times) = frontier::peel(&peel, &mut front, workers, |_, x| {
        am4_worker(tg, &pivots, x, &peel.support)
    });
    let final_support = SupportArray(peel.support.into_vec());
    let result = TrussnessResult::from_final_support(&final_support.0);
    let wall = start.elapsed();
    PktRun {
        result,
        trace,
        timings: PktTimings {
            support: times.prepare,
            scan: times.scan,
            processing: times.process,
            wall,
        },
        final_support,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::graph::{build_truss_graph, CsrGraph};
    use crate::triangle::support_am4;
    use crate::truss_serial::truss_oracle;

    fn tg(n: usize, edges: &[(u32, u32)]) -> TrussGraph {
        build_truss_graph(CsrGraph::from_edges(n, edges).unwrap())
    }

    fn k4() -> TrussGraph {
        tg(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn k4_single_sublevel_at_level_two() {
        let (res, trace) = pkt(&k4(), 4);
        assert_eq!(res.truss, vec![4; 6]);
        assert_eq!(trace.nsl, vec![0, 0, 1]);
        assert_eq!(
            trace.barriers,
            res.t_max as u64 + 2 * trace.total_sublevels()
        );
    }

    #[test]
    fn triangle_with_pendant() {
        let g = tg(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]);
        let (res, trace) = pkt(&g, 2);
        assert_eq!(res.truss, vec![3, 3, 2, 3]);
        assert_eq!(trace.nsl, vec![1, 1]);
    }

    #[test]
    fn er_matches_oracle_for_all_worker_counts() {
        let g = gen::erdos_renyi_graph(100, 0.15, 2).unwrap();
        let oracle = truss_oracle(&g).unwrap();
        let tg = build_truss_graph(g);
        let (first, first_trace) = pkt(&tg, 1);
        assert_eq!(first, oracle);
        for w in [2, 4, 8] {
            let (res, trace) = pkt(&tg, w);
            assert_eq!(res, oracle);
            assert_eq!(trace.nsl, first_trace.nsl);
        }
    }

    #[test]
    fn final_support_is_truss_minus_two() {
        let g = gen::erdos_renyi_graph(80, 0.2, 5).unwrap();
        let tg = build_truss_graph(g);
        let run = pkt_run(&tg, 3);
        for (s, t) in run.final_support.0.iter().zip(&run.result.truss) {
            assert_eq!(s + 2, *t);
        }
        assert_eq!(run.trace.frontier_total, tg.num_edges() as u64);
    }

    #[test]
    fn lone_triangle_edge_in_frontier() {
        let g = tg(3, &[(0, 1), (0, 2), (1, 2)]);
        let peel = TrussPeel::new(&g, support_am4(&g, 1));
        let mut f = peel.frontier();
        // force only edge 0 into curr at level 0: its peers drop from 1 to 0
        peel.support.set(0, 0);
        peel.scan(&mut f, 0, 1);
        assert_eq!(f.curr(), vec![0]);
        let next = peel.process_sublevel(&mut f, 0, 2);
        assert_eq!(next, 2);
        let mut curr = f.curr();
        curr.sort_unstable();
        assert_eq!(curr, vec![1, 2]);
        assert_eq!(peel.support().0, vec![0, 0, 0]);
        f.check_invariants().unwrap();
    }

    #[test]
    fn two_frontier_edges_share_one_decrement() {
        // K5 on {0,1,3,4,5} plus vertex 2 hanging off edge (0,1): (0,1) has
        // support 4, (0,2) and (1,2) have support 1 and enter curr together.
        let mut edges = vec![(0, 2), (1, 2)];
        let k5 = [0u32, 1, 3, 4, 5];
        for (i, &a) in k5.iter().enumerate() {
            for &b in &k5[i + 1..] {
                edges.push((a, b));
            }
        }
        let g = tg(6, &edges);
        let support = support_am4(&g, 1);
        let e01 = g.edge_id(0, 1).unwrap();
        assert_eq!(support[e01], 4);
        for workers in [1, 2, 4] {
            let peel = TrussPeel::new(&g, support.clone());
            let mut f = peel.frontier();
            peel.scan(&mut f, 1, workers);
            assert_eq!(f.curr().len(), 2);
            peel.process_sublevel(&mut f, 1, workers);
            assert_eq!(peel.support()[e01], 3);
        }
    }

    #[test]
    fn k4_full_frontier_no_decrements() {
        let g = k4();
        let peel = TrussPeel::new(&g, support_am4(&g, 1));
        let mut f = peel.frontier();
        peel.scan(&mut f, 2, 3);
        assert_eq!(f.curr().len(), 6);
        assert_eq!(peel.process_sublevel(&mut f, 2, 3), 0);
        assert_eq!(peel.support().0, vec![2; 6]);
        assert_eq!(f.todo(), 0);
    }

    #[test]
    fn stepwise_matches_batched() {
        let g = gen::erdos_renyi_graph(60, 0.2, 9).unwrap();
        let tg = build_truss_graph(g);
        let peel = TrussPeel::new(&tg, support_am4(&tg, 2));
        let mut f = peel.frontier();
        let mut level = 0;
        while f.todo() > 0 {
            peel.scan(&mut f, level, 2);
            while peel.process_sublevel(&mut f, level, 2) > 0 {}
            level += 1;
        }
        assert_eq!(peel.into_result(), pkt(&tg, 2).0);
    }

    #[test]
    fn empty_levels_with_oversubscribed_team() {
        // Levels 0 and 1 scan nothing; workers race ahead into later scans.
        let g = k4();
        for _ in 0..200 {
            for w in [2, 3, 8] {
                assert_eq!(pkt(&g, w).0.truss, vec![4; 6]);
            }
        }
    }

    #[test]
    fn empty_graph() {
        let (res, trace) = pkt(&tg(3, &[]), 2);
        assert!(res.truss.is_empty());
        assert_eq!(trace.barriers, 0);
    }
}
