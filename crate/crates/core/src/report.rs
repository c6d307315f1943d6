//! Structured run reports (JSON-serializable) and their text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::MemoryFootprint;

/// Seconds spent per pipeline stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub support: f64,
    pub scan: f64,
    pub processing: f64,
    pub kcore: f64,
    pub reorder: f64,
    /// Building the edge-indexed graph from the (reordered) CSR.
    pub build: f64,
    /// Wall time of the decomposition call (support + scan + processing).
    pub decomposition_wall: f64,
}

impl PhaseTimings {
    pub fn decomposition(&self) -> f64 {
        self.support + self.scan + self.processing
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NslSummary {
    pub levels: u64,
    pub total_sublevels: u64,
    pub per_level: Vec<u32>,
    pub barriers: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub algorithm: String,
    pub reorder: String,
    pub workers: usize,
    pub n: u64,
    pub m: u64,
    pub wedge_count: u64,
    pub triangle_count: u64,
    pub t_max: u32,
    pub c_max: u32,
    pub timings: PhaseTimings,
    /// Wedges per second of decomposition time, in units of 10⁹.
    pub gweps: f64,
    pub nsl: NslSummary,
    pub kclass_sizes: BTreeMap<u32, u64>,
    pub memory: MemoryFootprint,
    /// Worker placement is left to the OS scheduler.
    pub pinning: String,
}

/// Giga-wedges per second; zero when no time was measured.
pub fn gweps(wedges: u64, seconds: f64) -> f64 {
    if seconds > 0.0 {
        wedges as f64 / (seconds * 1e9)
    } else {
        0.0
    }
}

impl DecompositionReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn summary(&self) -> String {
        let t = &self.timings;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} ({} workers, {} order): n={} m={} wedges={} triangles={}",
            self.algorithm,
            self.workers,
            self.reorder,
            self.n,
            self.m,
            self.wedge_count,
            self.triangle_count
        );
        let _ = writeln!(s, "t_max={} c_max={}", self.t_max, self.c_max);
        let _ = writeln!(
            s,
            "kcore {:.4}s  reorder {:.4}s  build {:.4}s  support {:.4}s  scan {:.4}s  processing {:.4}s",
            t.kcore, t.reorder, t.build, t.support, t.scan, t.processing
        );
        let _ = writeln!(
            s,
            "GWeps {:.4}  levels {}  sub-levels {}  barriers {}",
            self.gweps, self.nsl.levels, self.nsl.total_sublevels, self.nsl.barriers
        );
        s
    }
}

/// One timed repetition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchSample {
    pub support: f64,
    pub scan: f64,
    pub processing: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub workers: usize,
    pub samples: Vec<BenchSample>,
    /// Per-phase medians over `samples`.
    pub median: BenchSample,
    /// Median processing time of the baseline row divided by this row's.
    pub speedup_processing: f64,
    pub speedup_total: f64,
    pub gweps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub n: u64,
    pub m: u64,
    pub wedge_count: u64,
    pub t_max: u32,
    pub reorder: String,
    pub repeats: usize,
    pub rows: Vec<BenchRow>,
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

impl BenchReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "n={} m={} wedges={} t_max={} order={} repeats={}",
            self.n, self.m, self.wedge_count, self.t_max, self.reorder, self.repeats
        );
        let _ = writeln!(
            s,
            "{:>7} {:>10} {:>10} {:>10} {:>10} {:>9} {:>9} {:>8}",
            "workers", "support", "scan", "process", "total", "spd-proc", "spd-tot", "GWeps"
        );
        for r in &self.rows {
            let m = &r.median;
            let _ = writeln!(
                s,
                "{:>7} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>9.2} {:>9.2} {:>8.4}",
                r.workers,
                m.support,
                m.scan,
                m.processing,
                m.total,
                r.speedup_processing,
                r.speedup_total,
                r.gweps
            );
        }
        s
    }
}
