//! Seeded synthetic graph generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{canonicalize, CsrGraph, RawEdgeList};

/// Recursive-matrix generator parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RmatParams {
    pub scale: u32,
    pub edge_factor: u32,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RmatParams {
    pub fn new(scale: u32, edge_factor: u32) -> Self {
        RmatParams {
            scale,
            edge_factor,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale == 0 || self.scale > 31 {
            return Err(Error::InvalidParams(format!(
                "rmat scale must be in 1..=31, got {}",
                self.scale
            )));
        }
        if self.edge_factor == 0 {
            return Err(Error::InvalidParams(
                "rmat edge factor must be positive".into(),
            ));
        }
        let probs = [self.a, self.b, self.c, self.d];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParams(format!(
                "rmat probabilities must lie in [0, 1], got {probs:?}"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParams(format!(
                "rmat probabilities must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }

    pub fn raw_edge_count(&self) -> u64 {
        (self.edge_factor as u64) << self.scale
    }
}

impl Default for RmatParams {
    fn default() -> Self {
        RmatParams {
            scale: 10,
            edge_factor: 16,
            a: 0.57,
            b: 0.19,
            c: 0.19,
            d: 0.05,
        }
    }
}

/// `edge_factor · 2^scale` raw edges; duplicates and self-loops are kept.
pub fn rmat_raw(params: &RmatParams, seed: u64) -> Result<RawEdgeList> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ab, abc) = (params.a + params.b, params.a + params.b + params.c);
    let edges = (0..params.raw_edge_count())
        .map(|_| {
            let (mut u, mut v) = (0u64, 0u64);
            for _ in 0..params.scale {
                let r: f64 = rng.gen();
                let (du, dv) = if r < params.a {
                    (0, 0)
                } else if r < ab {
                    (0, 1)
                } else if r < abc {
                    (1, 0)
                } else {
                    (1, 1)
                };
                u = (u << 1) | du;
                v = (v << 1) | dv;
            }
            (u, v)
        })
        .collect();
    Ok(RawEdgeList { edges })
}

pub fn rmat_graph(params: &RmatParams, seed: u64) -> Result<CsrGraph> {
    canonicalize(&rmat_raw(params, seed)?)
}

fn check_er(n: u64, p: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "er vertex count must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!(
            "er edge probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

fn er_pairs(n: u64, p: f64, seed: u64) -> impl Iterator<Item = (u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
        .filter(move |_| rng.gen_bool(p))
}

/// G(n, p) edge stream over labels `0..n`, each pair kept with probability `p`.
pub fn erdos_renyi_raw(n: u64, p: f64, seed: u64) -> Result<RawEdgeList> {
    check_er(n, p)?;
    Ok(er_pairs(n, p, seed).collect())
}

/// G(n, p) keeping all `n` vertices, isolated ones included.
pub fn erdos_renyi_graph(n: usize, p: f64, seed: u64) -> Result<CsrGraph> {
    check_er(n as u64, p)?;
    let edges: Vec<(u32, u32)> = er_pairs(n as u64, p, seed)
        .map(|(u, v)| (u as u32, v as u32))
        .collect();
    CsrGraph::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_is_seeded() {
        let a = erdos_renyi_raw(100, 0.15, 2).unwrap();
        let b = erdos_renyi_raw(100, 0.15, 2).unwrap();
        let c = erdos_renyi_raw(100, 0.15, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(
            erdos_renyi_graph(100, 0.15, 2).unwrap().num_edges(),
            a.len()
        );
    }

    #[test]
    fn rmat_raw_size() {
        let raw = rmat_raw(&RmatParams::new(10, 8), 1).unwrap();
        assert_eq!(raw.len(), 8 * 1024);
        assert!(raw.edges.iter().all(|&(u, v)| u < 1024 && v < 1024));
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = RmatParams::new(10, 8);
        p.d = 0.2;
        assert!(matches!(rmat_raw(&p, 1), Err(Error::InvalidParams(_))));
        assert!(rmat_raw(&RmatParams::new(0, 8), 1).is_err());
        assert!(erdos_renyi_raw(0, 0.5, 1).is_err());
        assert!(erdos_renyi_raw(10, 1.5, 1).is_err());
    }
}
