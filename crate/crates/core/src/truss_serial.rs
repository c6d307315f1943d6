//! Serial truss decomposition, the brute-force peeling oracle and k-truss
//! component extraction.

use std::collections::{BTreeMap, HashMap};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CsrGraph, EdgeId, TrussGraph, VertexId};
use crate::triangle::{check_oracle_size, SupportArray};

/// Trussness per edge id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrussnessResult {
    pub truss: Vec<u32>,
    pub t_max: u32,
    /// Trussness level → number of edges in that k-class.
    pub kclass_sizes: BTreeMap<u32, u64>,
}

impl TrussnessResult {
    pub fn from_truss(truss: Vec<u32>) -> Self {
        let mut kclass_sizes = BTreeMap::new();
        for &t in &truss {
            *kclass_sizes.entry(t).or_insert(0) += 1;
        }
        let t_max = truss.iter().copied().max().unwrap_or(0);
        TrussnessResult {
            truss,
            t_max,
            kclass_sizes,
        }
    }

    /// Final peeled support + 2.
    pub fn from_final_support(support: &[u32]) -> Self {
        Self::from_truss(support.iter().map(|&s| s + 2).collect())
    }

    pub fn len(&self) -> usize {
        self.truss.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truss.is_empty()
    }
}

/// Edges kept in nondecreasing order of current support, with O(1)
/// decrement-and-reposition.
#[derive(Clone, Debug)]
pub struct EdgeBucketOrder {
    sorted: Vec<EdgeId>,
    pos: Vec<usize>,
    /// `bucket[s]` = first position holding support `s`.
    bucket: Vec<usize>,
}

impl EdgeBucketOrder {
    /// Counting sort by support; ties keep edge-id order.
    pub fn new(support: &[u32]) -> Self {
        let max = support.iter().copied().max().unwrap_or(0) as usize;
        let mut bucket = vec![0usize; max + 2];
        for &s in support {
            bucket[s as usize + 1] += 1;
        }
        for s in 1..bucket.len() {
            bucket[s] += bucket[s - 1];
        }
        let mut fill = bucket.clone();
        let mut sorted = vec![0; support.len()];
        let mut pos = vec![0; support.len()];
        for (e, &s) in support.iter().enumerate() {
            let p = fill[s as usize];
            sorted[p] = e as EdgeId;
            pos[e] = p;
            fill[s as usize] += 1;
        }
        EdgeBucketOrder {
            sorted,
            pos,
            bucket,
        }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn at(&self, i: usize) -> EdgeId {
        self.sorted[i]
    }

    pub fn position(&self, e: EdgeId) -> usize {
        self.pos[e as usize]
    }

    /// Moves `e` from bucket `current` to bucket `current - 1` by swapping it
    /// with the first element of its bucket and advancing that bucket's start.
    pub fn decrement(&mut self, e: EdgeId, current: u32) {
        let s = current as usize;
        let pe = self.pos[e as usize];
        let first = self.bucket[s];
        let other = self.sorted[first];
        if other != e {
            self.sorted.swap(pe, first);
            self.pos[e as usize] = first;
            self.pos[other as usize] = pe;
        }
        self.bucket[s] += 1;
    }

    /// Checks the order against `support` for positions `from..`.
    pub fn is_consistent(&self, support: &[u32], from: usize) -> bool {
        let sorted_ok = self.sorted[from..]
            .windows(2)
            .all(|w| support[w[0] as usize] <= support[w[1] as usize]);
        let pos_ok = self
            .sorted
            .iter()
            .enumerate()
            .all(|(i, &e)| self.pos[e as usize] == i);
        let bucket_ok = (from..self.sorted.len()).all(|i| {
            let s = support[self.sorted[i] as usize] as usize;
            self.bucket[s] <= i && (s + 1 >= self.bucket.len() || i < self.bucket[s + 1])
        });
        sorted_ok && pos_ok && bucket_ok
    }
}

/// Serial bottom-up decomposition: edges leave in ascending support order,
/// triangles are found through a pair → edge-id table, and neighbors above
/// the current level lose one support per destroyed triangle.
pub fn truss_wc(tg: &TrussGraph, initial: &SupportArray) -> Result<TrussnessResult> {
    let m = tg.num_edges();
    if initial.len() != m {
        return Err(Error::SupportMismatch {
            expected: m,
            got: initial.len(),
        });
    }
    let mut support = initial.0.clone();
    let mut order = EdgeBucketOrder::new(&support);
    let table: HashMap<(VertexId, VertexId), EdgeId> = tg
        .edge_list()
        .iter()
        .enumerate()
        .map(|(e, &uv)| (uv, e as EdgeId))
        .collect();
    let mut deleted = vec![false; m];
    let lookup = |a: VertexId, b: VertexId, deleted: &[bool]| -> Option<EdgeId> {
        table
            .get(&(a.min(b), a.max(b)))
            .copied()
            .filter(|&e| !deleted[e as usize])
    };

    for i in 0..m {
        let e = order.at(i);
        let k = support[e as usize];
        let (u, v) = tg.endpoints(e);
        for &w in tg.csr().neighbors(u) {
            if w == v {
                continue;
            }
            let Some(e_uw) = lookup(u, w, &deleted) else {
                continue;
            };
            let Some(e_vw) = lookup(v, w, &deleted) else {
                continue;
            };
            for f in [e_uw, e_vw] {
                let s = support[f as usize];
                if s > k {
                    order.decrement(f, s);
                    support[f as usize] = s - 1;
                }
            }
        }
        deleted[e as usize] = true;
        debug_assert!(m > 2000 || order.is_consistent(&support, i + 1));
    }
    Ok(TrussnessResult::from_final_support(&support))
}

/// Exact peeling from the definition: at each level `k` recompute supports
/// from scratch and delete every edge with support `≤ k − 2` until none
/// remain, assigning those edges trussness `k`. Common neighbors are counted
/// over adjacency bitsets of the surviving edges.
pub fn truss_oracle(g: &CsrGraph) -> Result<TrussnessResult> {
    let n = g.num_vertices();
    check_oracle_size(n)?;
    let words = n.div_ceil(64);
    let mut rows = vec![0u64; n * words];
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (u as usize, v as usize)).collect();
    let toggle = |rows: &mut [u64], a: usize, b: usize| {
        rows[a * words + b / 64] ^= 1 << (b % 64);
        rows[b * words + a / 64] ^= 1 << (a % 64);
    };
    for &(u, v) in &edges {
        toggle(&mut rows, u, v);
    }
    let m = edges.len();
    let mut alive = vec![true; m];
    let mut remaining = m;
    let mut truss = vec![0u32; m];

    let mut k = 2u32;
    while remaining > 0 {
        loop {
            let doomed: Vec<usize> = (0..m)
                .filter(|&e| alive[e])
                .filter(|&e| {
                    let (u, v) = edges[e];
                    let (ru, rv) = (&rows[u * words..][..words], &rows[v * words..][..words]);
                    let support: u32 = ru.iter().zip(rv).map(|(a, b)| (a & b).count_ones()).sum();
                    support <= k - 2
                })
                .collect();
            if doomed.is_empty() {
                break;
            }
            for e in doomed {
                let (u, v) = edges[e];
                toggle(&mut rows, u, v);
                alive[e] = false;
                truss[e] = k;
                remaining -= 1;
            }
        }
        k += 1;
    }
    Ok(TrussnessResult::from_truss(truss))
}

/// Connected components of the subgraph of edges with trussness ≥ `k`,
/// each returned as sorted edge ids; components are ordered by their
/// smallest edge id.
pub fn ktruss_subgraphs(g: &CsrGraph, truss: &TrussnessResult, k: u32) -> Result<Vec<Vec<EdgeId>>> {
    if k < 2 || k > truss.t_max {
        return Err(Error::LevelOutOfRange {
            k,
            t_max: truss.t_max,
        });
    }
    if truss.len() != g.num_edges() {
        return Err(Error::SupportMismatch {
            expected: g.num_edges(),
            got: truss.len(),
        });
    }
    let mut dsu = UnionFind::<u32>::new(g.num_vertices());
    let edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    for (e, &(u, v)) in edges.iter().enumerate() {
        if truss.truss[e] >= k {
            dsu.union(u, v);
        }
    }
    let mut by_root: BTreeMap<u32, Vec<EdgeId>> = BTreeMap::new();
    for (e, &(u, _)) in edges.iter().enumerate() {
        if truss.truss[e] >= k {
            by_root.entry(dsu.find(u)).or_default().push(e as EdgeId);
        }
    }
    let mut comps: Vec<Vec<EdgeId>> = by_root.into_values().collect();
    comps.sort_by_key(|c| c[0]);
    Ok(comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::graph::build_truss_graph;
    use crate::triangle::support_am4;

    fn g(n: usize, edges: &[(u32, u32)]) -> CsrGraph {
        CsrGraph::from_edges(n, edges).unwrap()
    }

    fn complete(n: u32) -> CsrGraph {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        g(n as usize, &edges)
    }

    fn wc(graph: &CsrGraph) -> TrussnessResult {
        let tg = build_truss_graph(graph.clone());
        let s = support_am4(&tg, 1);
        truss_wc(&tg, &s).unwrap()
    }

    /// Two diamonds joined by two bridging edges: every vertex has degree 3.
    #[rustfmt::skip]
    pub(crate) fn two_diamonds() -> CsrGraph {
        g(
            8,
            &[
                (0, 1), (0, 2), (0, 3), (1, 2), (1, 3),
                (4, 5), (4, 6), (4, 7), (5, 6), (5, 7),
                (2, 6), (3, 7),
            ],
        )
    }

    #[test]
    fn triangle_with_pendant() {
        let graph = g(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]);
        // ids: (0,1)=0 (0,2)=1 (0,3)=2 (1,2)=3
        let want = vec![3, 3, 2, 3];
        assert_eq!(wc(&graph).truss, want);
        assert_eq!(truss_oracle(&graph).unwrap().truss, want);
    }

    #[test]
    fn complete_graphs() {
        let r = wc(&complete(5));
        assert_eq!(r.truss, vec![5; 10]);
        assert_eq!(r.t_max, 5);
        assert_eq!(r.kclass_sizes, BTreeMap::from([(5, 10)]));
    }

    #[test]
    fn oracle_single_edge_and_shared_edge() {
        assert_eq!(truss_oracle(&g(2, &[(0, 1)])).unwrap().truss, vec![2]);
        // two triangles on the shared edge (0,1)
        let bowtie = g(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]);
        let r = truss_oracle(&bowtie).unwrap();
        assert_eq!(r.truss, vec![3; 5]);
        let s = support_am4(&build_truss_graph(bowtie), 1);
        assert_eq!(s.0[0], 2);
    }

    #[test]
    fn two_diamond_pattern() {
        let graph = two_diamonds();
        let r = truss_oracle(&graph).unwrap();
        assert_eq!(r.kclass_sizes, BTreeMap::from([(2, 2), (3, 10)]));
        assert_eq!(wc(&graph), r);
        let comps = ktruss_subgraphs(&graph, &r, 3).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 5));
    }

    #[test]
    fn er_matches_oracle() {
        let graph = gen::erdos_renyi_graph(100, 0.15, 2).unwrap();
        assert_eq!(wc(&graph), truss_oracle(&graph).unwrap());
    }

    #[test]
    fn support_mismatch_rejected() {
        let tg = build_truss_graph(complete(3));
        assert!(matches!(
            truss_wc(&tg, &SupportArray(vec![1])),
            Err(Error::SupportMismatch { .. })
        ));
    }

    #[test]
    fn subgraph_extraction() {
        let k5 = complete(5);
        let r = wc(&k5);
        assert_eq!(
            ktruss_subgraphs(&k5, &r, 5).unwrap(),
            vec![(0..10).collect::<Vec<_>>()]
        );
        assert!(matches!(
            ktruss_subgraphs(&k5, &r, 6),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(ktruss_subgraphs(&k5, &r, 1).is_err());

        let two = g(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]);
        let comps = ktruss_subgraphs(&two, &wc(&two), 3).unwrap();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn bucket_order_stays_sorted() {
        let support = vec![3, 1, 2, 3, 1, 0, 2];
        let mut cur = support.clone();
        let mut order = EdgeBucketOrder::new(&cur);
        assert!(order.is_consistent(&cur, 0));
        assert_eq!(order.at(0), 5);
        for (e, times) in [(0u32, 2), (3, 1), (6, 1)] {
            for _ in 0..times {
                let s = cur[e as usize];
                order.decrement(e, s);
                cur[e as usize] = s - 1;
                assert!(order.is_consistent(&cur, 0));
            }
        }
    }
}
