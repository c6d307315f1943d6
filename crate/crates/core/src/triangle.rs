//! Per-edge support (triangle membership counts).
//!
//! Two parallel kernels over a [`TrussGraph`]:
//!
//! * [`support_am4`] orients every triangle as `v < u < w`, pivots on the
//!   middle vertex `u` and discovers each triangle exactly once, paying three
//!   atomic increments per triangle. Work is `Θ(m + Σ d⁺(v)²)`, so it
//!   benefits from an ordering that keeps out-degrees small.
//! * [`support_ros`] intersects both full adjacency lists of every edge;
//!   each edge owns its counter, so no atomics are needed, but the work is
//!   proportional to `Σ_{uv} d(u) + d(v)`.
//!
//! [`triangle_oracle`] enumerates all vertex triples and is only meant for
//! verification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CsrGraph, EdgeId, TrussGraph, VertexId};
use crate::parallel::{run_workers, static_range, AtomicCounts, ChunkCursor};

/// Dynamic schedule chunk (pivot vertices) for the support kernels.
pub const PIVOT_CHUNK: usize = 10;

/// Largest graph the cubic oracles accept.
pub const ORACLE_MAX_VERTICES: usize = 512;

/// One triangle count per edge id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportArray(pub Vec<u32>);

impl SupportArray {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&s| s as u64).sum()
    }

    /// |△|, since every triangle is counted once by each of its edges.
    pub fn triangles(&self) -> u64 {
        self.total() / 3
    }
}

impl std::ops::Index<EdgeId> for SupportArray {
    type Output = u32;

    fn index(&self, e: EdgeId) -> &u32 {
        &self.0[e as usize]
    }
}

/// Worker-private mark array: `x[w] = slot + 1` for the marked neighbors of
/// the current pivot, zero otherwise. Cleared by rewalking the marked range.
#[derive(Clone, Debug)]
pub struct MarkScratch {
    x: Vec<u32>,
}

impl MarkScratch {
    pub fn new(n: usize) -> Self {
        MarkScratch { x: vec![0; n] }
    }

    /// Marks `neighbors[range]`, storing each slot index + 1.
    #[inline]
    pub fn mark(&mut self, neighbors: &[VertexId], range: std::ops::Range<usize>) {
        for j in range {
            self.x[neighbors[j] as usize] = j as u32 + 1;
        }
    }

    #[inline]
    pub fn unmark(&mut self, neighbors: &[VertexId], range: std::ops::Range<usize>) {
        for j in range {
            self.x[neighbors[j] as usize] = 0;
        }
    }

    /// Marked slot of `w`, if any.
    #[inline]
    pub fn slot(&self, w: VertexId) -> Option<usize> {
        match self.x[w as usize] {
            0 => None,
            s => Some(s as usize - 1),
        }
    }

    pub fn is_clear(&self) -> bool {
        self.x.iter().all(|&s| s == 0)
    }
}

/// AM4 work for one pivot `u`: every triangle `v < u < w` bumps its three
/// edges. `x` must be clear on entry and is clear again on return.
#[inline]
pub(crate) fn am4_pivot(tg: &TrussGraph, u: VertexId, x: &mut MarkScratch, support: &AtomicCounts) {
    let es = tg.offsets();
    let eo = tg.first_greater_offsets();
    let nbr = tg.neighbor_array();
    let eid = tg.edge_ids();
    let (lo, mid, hi) = (
        es[u as usize] as usize,
        eo[u as usize] as usize,
        es[u as usize + 1] as usize,
    );
    x.mark(nbr, mid..hi);
    for j in lo..mid {
        let v = nbr[j];
        let e_vu = eid[j];
        let v_start = eo[v as usize] as usize;
        for k in (v_start..es[v as usize + 1] as usize).rev() {
            let w = nbr[k];
            if w < u {
                break;
            }
            if let Some(slot) = x.slot(w) {
                support.increment(eid[k]);
                support.increment(e_vu);
                support.increment(eid[slot]);
            }
        }
    }
    x.unmark(nbr, mid..hi);
}

/// Pulls pivots from `cursor` until exhausted.
pub(crate) fn am4_worker(
    tg: &TrussGraph,
    cursor: &ChunkCursor,
    x: &mut MarkScratch,
    support: &AtomicCounts,
) {
    let n = tg.num_vertices();
    while let Some(range) = cursor.claim(PIVOT_CHUNK, n) {
        for u in range {
            am4_pivot(tg, u as VertexId, x, support);
        }
    }
}

/// Support of every edge via oriented pivoting (three atomics per triangle).
pub fn support_am4(tg: &TrussGraph, workers: usize) -> SupportArray {
    let support = AtomicCounts::zeroed(tg.num_edges());
    let cursor = ChunkCursor::new();
    run_workers(workers, |_| {
        let mut x = MarkScratch::new(tg.num_vertices());
        am4_worker(tg, &cursor, &mut x, &support);
        debug_assert!(tg.num_vertices() > 4096 || x.is_clear());
    });
    SupportArray(support.into_vec())
}

/// Support of every edge by intersecting both endpoint adjacencies.
pub fn support_ros(tg: &TrussGraph, workers: usize) -> SupportArray {
    let m = tg.num_edges();
    let es = tg.offsets();
    let nbr = tg.neighbor_array();
    let workers = workers.max(1);
    let chunks = run_workers(workers, |tid| {
        let range = static_range(tid, workers, m);
        let mut x = MarkScratch::new(tg.num_vertices());
        let mut out = Vec::with_capacity(range.len());
        for e in range {
            let (u, v) = tg.endpoints(e as EdgeId);
            let u_adj = es[u as usize] as usize..es[u as usize + 1] as usize;
            x.mark(nbr, u_adj.clone());
            let count = tg
                .csr()
                .neighbors(v)
                .iter()
                .filter(|&&w| w != u && x.slot(w).is_some())
                .count();
            x.unmark(nbr, u_adj);
            out.push(count as u32);
        }
        out
    });
    SupportArray(chunks.concat())
}

/// |△| by the AM4 traversal without per-edge writes.
pub fn triangle_count(tg: &TrussGraph, workers: usize) -> u64 {
    let es = tg.offsets();
    let eo = tg.first_greater_offsets();
    let nbr = tg.neighbor_array();
    let n = tg.num_vertices();
    let cursor = ChunkCursor::new();
    run_workers(workers, |_| {
        let mut marked = vec![false; n];
        let mut count = 0u64;
        while let Some(range) = cursor.claim(PIVOT_CHUNK, n) {
            for u in range {
                let (lo, mid, hi) = (es[u] as usize, eo[u] as usize, es[u + 1] as usize);
                for &w in &nbr[mid..hi] {
                    marked[w as usize] = true;
                }
                for &v in &nbr[lo..mid] {
                    let v = v as usize;
                    for &w in nbr[eo[v] as usize..es[v + 1] as usize].iter().rev() {
                        if (w as usize) < u {
                            break;
                        }
                        count += u64::from(marked[w as usize]);
                    }
                }
                for &w in &nbr[mid..hi] {
                    marked[w as usize] = false;
                }
            }
        }
        count
    })
    .into_iter()
    .sum()
}

pub(crate) fn check_oracle_size(n: usize) -> Result<()> {
    if n > ORACLE_MAX_VERTICES {
        return Err(Error::OracleTooLarge {
            n,
            limit: ORACLE_MAX_VERTICES,
        });
    }
    Ok(())
}

/// Dense `n × n` edge-id matrix; `u32::MAX` marks a non-edge.
pub(crate) fn edge_matrix(g: &CsrGraph) -> Vec<u32> {
    let n = g.num_vertices();
    let mut mat = vec![u32::MAX; n * n];
    for (id, (u, v)) in g.edges().enumerate() {
        let (u, v) = (u as usize, v as usize);
        mat[u * n + v] = id as u32;
        mat[v * n + u] = id as u32;
    }
    mat
}

/// Exhaustive triple enumeration: (|△|, per-edge support).
pub fn triangle_oracle(g: &CsrGraph) -> Result<(u64, SupportArray)> {
    let n = g.num_vertices();
    check_oracle_size(n)?;
    let mat = edge_matrix(g);
    let mut support = vec![0u32; g.num_edges()];
    let mut triangles = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            let ab = mat[a * n + b];
            if ab == u32::MAX {
                continue;
            }
            for c in b + 1..n {
                let (ac, bc) = (mat[a * n + c], mat[b * n + c]);
                if ac != u32::MAX && bc != u32::MAX {
                    triangles += 1;
                    support[ab as usize] += 1;
                    support[ac as usize] += 1;
                    support[bc as usize] += 1;
                }
            }
        }
    }
    Ok((triangles, SupportArray(support)))
}
