//! Simple undirected graphs in compressed sparse row form, plus the
//! edge-indexed augmentation every truss engine works on.
//!
//! Vertex and edge ids are `u32`. Inputs whose vertex count or adjacency
//! length does not fit are rejected at canonicalization time.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;

const ID_LIMIT: u64 = u32::MAX as u64;

/// Unprocessed edge stream: arbitrary labels, possibly with duplicates,
/// self-loops and both orientations of the same edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawEdgeList {
    pub edges: Vec<(u64, u64)>,
}

impl RawEdgeList {
    pub fn new(edges: Vec<(u64, u64)>) -> Self {
        RawEdgeList { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl FromIterator<(u64, u64)> for RawEdgeList {
    fn from_iter<I: IntoIterator<Item = (u64, u64)>>(iter: I) -> Self {
        RawEdgeList {
            edges: iter.into_iter().collect(),
        }
    }
}

/// Symmetric CSR adjacency with sorted, duplicate-free neighbor lists.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CsrGraph {
    offsets: Vec<u32>,
    neighbors: Vec<VertexId>,
}

impl CsrGraph {
    /// Builds a graph from undirected edges over `0..n`. Self-loops and
    /// duplicates (in either orientation) are dropped.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        check_width("vertex count", n as u64)?;
        let mut degree = vec![0u32; n];
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let total: u64 = degree.iter().map(|&d| d as u64).sum();
        check_width("adjacency length (2m)", total)?;

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0u32);
        let mut acc = 0u32;
        for &d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<u32> = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; acc as usize];
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            neighbors[cursor[u as usize] as usize] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize] as usize] = u;
            cursor[v as usize] += 1;
        }

        // sort + dedup each list, then compact
        let mut out_offsets = Vec::with_capacity(n + 1);
        out_offsets.push(0u32);
        let mut write = 0usize;
        for v in 0..n {
            let (lo, hi) = (offsets[v] as usize, offsets[v + 1] as usize);
            neighbors[lo..hi].sort_unstable();
            let mut last = None;
            for read in lo..hi {
                let w = neighbors[read];
                if last != Some(w) {
                    neighbors[write] = w;
                    write += 1;
                    last = Some(w);
                }
            }
            out_offsets.push(write as u32);
        }
        neighbors.truncate(write);
        neighbors.shrink_to_fit();

        Ok(CsrGraph {
            offsets: out_offsets,
            neighbors,
        })
    }

    /// Wraps raw arrays after checking every structural invariant.
    pub fn from_parts(offsets: Vec<u32>, neighbors: Vec<VertexId>) -> Result<Self> {
        let g = CsrGraph { offsets, neighbors };
        g.validate().map_err(Error::InvalidParams)?;
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    pub fn neighbor_array(&self) -> &[VertexId] {
        &self.neighbors
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Undirected edges as `(u, v)` with `u < v`, in edge-id order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.num_vertices() as VertexId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    /// Stream that canonicalizes back to exactly this graph: one self-loop
    /// per vertex in id order fixes the dense ids, followed by every edge.
    pub fn to_raw(&self) -> RawEdgeList {
        let n = self.num_vertices() as u64;
        (0..n)
            .map(|v| (v, v))
            .chain(self.edges().map(|(u, v)| (u as u64, v as u64)))
            .collect()
    }

    /// Index of the first neighbor of `u` greater than `u`.
    pub fn first_greater(&self, u: VertexId) -> usize {
        let lo = self.offsets[u as usize] as usize;
        lo + self.neighbors(u).partition_point(|&w| w < u)
    }

    pub fn out_degree(&self, u: VertexId) -> usize {
        self.offsets[u as usize + 1] as usize - self.first_greater(u)
    }

    /// Checks the CSR invariants; returns a description of the first
    /// violation found.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.offsets.first() != Some(&0) {
            return Err("offsets must start at 0".into());
        }
        if *self.offsets.last().unwrap() as usize != self.neighbors.len() {
            return Err("last offset must equal adjacency length".into());
        }
        if self.offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err("offsets must be nondecreasing".into());
        }
        let n = self.num_vertices();
        for u in 0..n as VertexId {
            let adj = self.neighbors(u);
            if adj.iter().any(|&w| w as usize >= n) {
                return Err(format!("vertex {u} has an out-of-range neighbor"));
            }
            if adj.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("adjacency of {u} not strictly ascending"));
            }
            if adj.contains(&u) {
                return Err(format!("self-loop at {u}"));
            }
            if let Some(&w) = adj.iter().find(|&&w| !self.has_edge(w, u)) {
                return Err(format!("edge {u}-{w} not symmetric"));
            }
        }
        Ok(())
    }
}

fn check_width(what: &'static str, value: u64) -> Result<()> {
    if value > ID_LIMIT {
        return Err(Error::TooLarge {
            what,
            value,
            limit: ID_LIMIT,
        });
    }
    Ok(())
}

/// Canonicalizes a raw stream. Dense ids follow first appearance; see
/// [`canonicalize_labeled`] to keep the original labels.
pub fn canonicalize(raw: &RawEdgeList) -> Result<CsrGraph> {
    canonicalize_labeled(raw).map(|(g, _)| g)
}

/// Like [`canonicalize`], also returning `labels[dense_id] = original label`.
pub fn canonicalize_labeled(raw: &RawEdgeList) -> Result<(CsrGraph, Vec<u64>)> {
    let mut ids: HashMap<u64, VertexId> = HashMap::new();
    let mut labels = Vec::new();
    let mut dense = Vec::with_capacity(raw.len());
    for &(a, b) in &raw.edges {
        let mut id_of = |x: u64| -> Result<VertexId> {
            if let Some(&id) = ids.get(&x) {
                return Ok(id);
            }
            check_width("vertex count", labels.len() as u64 + 1)?;
            let id = labels.len() as VertexId;
            ids.insert(x, id);
            labels.push(x);
            Ok(id)
        };
        let u = id_of(a)?;
        let v = id_of(b)?;
        dense.push((u, v));
    }
    let g = CsrGraph::from_edges(labels.len(), &dense)?;
    Ok((g, labels))
}

/// Relabels vertex `v` as `perm[v]` and re-sorts every adjacency list.
pub fn reorder(g: &CsrGraph, perm: &[VertexId]) -> Result<CsrGraph> {
    let n = g.num_vertices();
    let mut seen = vec![false; n];
    let bijective = perm.len() == n
        && perm.iter().all(|&p| {
            let p = p as usize;
            p < n && !std::mem::replace(&mut seen[p], true)
        });
    if !bijective {
        return Err(Error::NotAPermutation { len: perm.len(), n });
    }

    let mut inverse = vec![0 as VertexId; n];
    for (old, &new) in perm.iter().enumerate() {
        inverse[new as usize] = old as VertexId;
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut neighbors = Vec::with_capacity(g.neighbors.len());
    offsets.push(0u32);
    for &old in &inverse {
        let start = neighbors.len();
        neighbors.extend(g.neighbors(old).iter().map(|&w| perm[w as usize]));
        neighbors[start..].sort_unstable();
        offsets.push(neighbors.len() as u32);
    }
    Ok(CsrGraph { offsets, neighbors })
}

/// Inverse of a permutation given as `perm[old] = new`.
pub fn invert_permutation(perm: &[VertexId]) -> Vec<VertexId> {
    let mut inverse = vec![0; perm.len()];
    for (old, &new) in perm.iter().enumerate() {
        inverse[new as usize] = old as VertexId;
    }
    inverse
}

/// CSR plus per-slot edge ids (`eid`), the edge list (`el`) and the index
/// of the first greater neighbor of each vertex (`eo`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrussGraph {
    csr: CsrGraph,
    eid: Vec<EdgeId>,
    el: Vec<(VertexId, VertexId)>,
    eo: Vec<u32>,
}

/// Byte counts of the six arrays the decomposition keeps resident,
/// at 4-byte integer width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryFootprint {
    pub neighbors: u64,
    pub offsets: u64,
    pub edge_ids: u64,
    pub edge_list: u64,
    pub first_greater: u64,
    pub support: u64,
}

impl MemoryFootprint {
    pub fn total(&self) -> u64 {
        self.neighbors
            + self.offsets
            + self.edge_ids
            + self.edge_list
            + self.first_greater
            + self.support
    }
}

pub fn build_truss_graph(g: CsrGraph) -> TrussGraph {
    let n = g.num_vertices();
    let m = g.num_edges();
    let mut eid = vec![0 as EdgeId; g.neighbors.len()];
    let mut el = Vec::with_capacity(m);
    let mut eo = Vec::with_capacity(n);
    // cursor[v] walks N-(v) in ascending order; edges into v from smaller
    // vertices arrive in ascending order of the smaller endpoint.
    let mut cursor: Vec<u32> = g.offsets[..n].to_vec();
    for u in 0..n as VertexId {
        let first = g.first_greater(u);
        eo.push(first as u32);
        for j in first..g.offsets[u as usize + 1] as usize {
            let v = g.neighbors[j];
            let id = el.len() as EdgeId;
            el.push((u, v));
            eid[j] = id;
            let back = cursor[v as usize] as usize;
            debug_assert_eq!(g.neighbors[back], u);
            eid[back] = id;
            cursor[v as usize] += 1;
        }
    }
    TrussGraph {
        csr: g,
        eid,
        el,
        eo,
    }
}

impl TrussGraph {
    pub fn csr(&self) -> &CsrGraph {
        &self.csr
    }

    pub fn into_csr(self) -> CsrGraph {
        self.csr
    }

    pub fn num_vertices(&self) -> usize {
        self.csr.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.el.len()
    }

    pub fn offsets(&self) -> &[u32] {
        &self.csr.offsets
    }

    pub fn neighbor_array(&self) -> &[VertexId] {
        &self.csr.neighbors
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.eid
    }

    pub fn edge_list(&self) -> &[(VertexId, VertexId)] {
        &self.el
    }

    pub fn first_greater_offsets(&self) -> &[u32] {
        &self.eo
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.el[e as usize]
    }

    /// Edge id of `{u, v}`, if present.
    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let lo = self.csr.offsets[u as usize] as usize;
        self.csr
            .neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|i| self.eid[lo + i])
    }

    /// Footprint of `N`, `Es`, `Eid`, `El`, `Eo` and the support array.
    /// `Es` is counted without its trailing sentinel, which always equals
    /// the length of `N`.
    pub fn memory_footprint(&self) -> MemoryFootprint {
        const W: u64 = 4;
        MemoryFootprint {
            neighbors: self.csr.neighbors.len() as u64 * W,
            offsets: self.num_vertices() as u64 * W,
            edge_ids: self.eid.len() as u64 * W,
            edge_list: self.el.len() as u64 * 2 * W,
            first_greater: self.eo.len() as u64 * W,
            support: self.el.len() as u64 * W,
        }
    }

    /// Checks every augmented-layout invariant against the CSR.
    pub fn validate(&self) -> std::result::Result<(), String> {
        self.csr.validate()?;
        let n = self.num_vertices();
        if self.eo.len() != n || self.eid.len() != self.csr.neighbors.len() {
            return Err("array lengths disagree with the CSR".into());
        }
        let mut hits = vec![0u8; self.el.len()];
        for u in 0..n as VertexId {
            let lo = self.csr.offsets[u as usize] as usize;
            let hi = self.csr.offsets[u as usize + 1] as usize;
            let eo = self.eo[u as usize] as usize;
            if eo < lo || eo > hi {
                return Err(format!("eo[{u}] outside its adjacency"));
            }
            if self.csr.neighbors[lo..eo].iter().any(|&w| w > u)
                || self.csr.neighbors[eo..hi].iter().any(|&w| w < u)
            {
                return Err(format!("eo[{u}] does not split N-/N+"));
            }
            for j in lo..hi {
                let v = self.csr.neighbors[j];
                let e = self.eid[j] as usize;
                if e >= self.el.len() || self.el[e] != (u.min(v), u.max(v)) {
                    return Err(format!("slot {j} of {u} maps to the wrong edge"));
                }
                hits[e] += 1;
            }
        }
        if hits.iter().any(|&h| h != 2) {
            return Err("edge ids are not a bijection".into());
        }
        Ok(())
    }
}

/// Size and work statistics of a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: u64,
    pub m: u64,
    pub d_max: u64,
    pub wedge_count: u64,
    pub sum_deg_sq: u64,
    pub sum_dplus_sq: u64,
    pub triangle_count: Option<u64>,
    pub c_max: Option<u32>,
    pub t_max: Option<u32>,
}

pub fn stats(g: &CsrGraph) -> GraphStats {
    let n = g.num_vertices();
    let m = g.num_edges() as u64;
    let mut d_max = 0u64;
    let mut sum_deg_sq = 0u64;
    let mut sum_dplus_sq = 0u64;
    for v in 0..n as VertexId {
        let d = g.degree(v) as u64;
        let dp = g.out_degree(v) as u64;
        d_max = d_max.max(d);
        sum_deg_sq += d * d;
        sum_dplus_sq += dp * dp;
    }
    GraphStats {
        n: n as u64,
        m,
        d_max,
        wedge_count: (sum_deg_sq - 2 * m) / 2,
        sum_deg_sq,
        sum_dplus_sq,
        triangle_count: None,
        c_max: None,
        t_max: None,
    }
}
