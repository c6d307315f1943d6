//! Vertex coreness and the coreness-based vertex ordering.

use serde::{Deserialize, Serialize};

use crate::frontier::{self, FrontierView, LevelFrontier, PeelKernel, SubLevelTrace};
use crate::graph::{CsrGraph, VertexId};
use crate::parallel::{AtomicCounts, BufferedAppender};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorenessResult {
    pub core: Vec<u32>,
    pub c_max: u32,
}

impl CorenessResult {
    fn new(core: Vec<u32>) -> Self {
        let c_max = core.iter().copied().max().unwrap_or(0);
        CorenessResult { core, c_max }
    }
}

/// Bucket-ordered peeling with constant-time moves between degree bins.
pub fn kcore_serial(g: &CsrGraph) -> CorenessResult {
    let n = g.num_vertices();
    let mut deg: Vec<u32> = (0..n as VertexId).map(|v| g.degree(v) as u32).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0) as usize;

    // bin[d] = first position of degree d in `vert`
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &deg {
        bin[d as usize + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut vert = vec![0 as VertexId; n];
    let mut pos = vec![0usize; n];
    {
        let mut fill = bin.clone();
        for v in 0..n {
            let d = deg[v] as usize;
            pos[v] = fill[d];
            vert[fill[d]] = v as VertexId;
            fill[d] += 1;
        }
    }

    for i in 0..n {
        let v = vert[i];
        let dv = deg[v as usize];
        for &u in g.neighbors(v) {
            let u = u as usize;
            let du = deg[u];
            if du > dv {
                let pu = pos[u];
                let pw = bin[du as usize];
                let w = vert[pw];
                if u as VertexId != w {
                    vert.swap(pu, pw);
                    pos[u] = pw;
                    pos[w as usize] = pu;
                }
                bin[du as usize] += 1;
                deg[u] -= 1;
            }
        }
    }
    CorenessResult::new(deg)
}

struct CoreKernel<'a> {
    g: &'a CsrGraph,
    deg: AtomicCounts,
}

impl PeelKernel for CoreKernel<'_> {
    type Scratch = ();
    const PROCESS_CHUNK: usize = 4;

    fn scratch(&self) {}

    fn value(&self, v: u32) -> u32 {
        self.deg.get(v)
    }

    fn process(
        &self,
        v: u32,
        level: u32,
        view: &FrontierView<'_>,
        _: &mut (),
        next: &mut BufferedAppender<'_>,
    ) {
        for &u in self.g.neighbors(v) {
            if view.processed(u) || self.deg.get(u) <= level {
                continue;
            }
            let before = self.deg.decrement(u);
            if before == level + 1 {
                view.enqueue_next(u, next);
            }
            if before <= level {
                self.deg.increment(u);
            }
        }
    }
}

/// Level-synchronous peeling over vertex frontiers; identical output to
/// [`kcore_serial`] for any worker count.
pub fn kcore_parallel(g: &CsrGraph, workers: usize) -> CorenessResult {
    kcore_parallel_traced(g, workers).0
}

pub fn kcore_parallel_traced(g: &CsrGraph, workers: usize) -> (CorenessResult, SubLevelTrace) {
    let n = g.num_vertices();
    let kernel = CoreKernel {
        g,
        deg: AtomicCounts::from_vec((0..n as VertexId).map(|v| g.degree(v) as u32).collect()),
    };
    let mut front = LevelFrontier::new(n);
    let (trace, _) = frontier::peel(&kernel, &mut front, workers, |_, _| {});
    (CorenessResult::new(kernel.deg.into_vec()), trace)
}

/// Permutation (`perm[old] = new`) sorting vertices by coreness, ties broken
/// by original id.
pub fn coreness_order(res: &CorenessResult) -> Vec<VertexId> {
    let n = res.core.len();
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.sort_by_key(|&v| (res.core[v as usize], v));
    let mut perm = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        perm[old as usize] = new as VertexId;
    }
    perm
}
