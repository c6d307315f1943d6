//! The end-to-end pipeline and the operations behind each subcommand of the
//! `pkt` binary. Everything here is callable as a library.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{self, RmatParams};
use crate::graph::{
    build_truss_graph, canonicalize_labeled, reorder, stats, CsrGraph, EdgeId, RawEdgeList,
    TrussGraph, VertexId,
};
use crate::kcore::{coreness_order, kcore_parallel};
use crate::report::{
    self, BenchReport, BenchRow, BenchSample, DecompositionReport, NslSummary, PhaseTimings,
};
use crate::triangle::{support_am4, triangle_count};
use crate::truss_parallel::pkt_run;
use crate::truss_serial::{ktruss_subgraphs, truss_oracle, truss_wc, TrussnessResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    Pkt,
    Wc,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ordering {
    Kcore,
    Natural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Tsv,
    Json,
    Histogram,
}

macro_rules! named_enum {
    ($ty:ty, $kind:literal, $($name:literal => $variant:expr),+) => {
        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok($variant),)+
                    _ => Err(Error::Unknown { kind: $kind, value: s.to_string() }),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $variant { return f.write_str($name); })+
                unreachable!()
            }
        }
    };
}

named_enum!(Algorithm, "algorithm", "pkt" => Algorithm::Pkt, "wc" => Algorithm::Wc, "oracle" => Algorithm::Oracle);
named_enum!(Ordering, "ordering", "kcore" => Ordering::Kcore, "natural" => Ordering::Natural);
named_enum!(OutputFormat, "format", "tsv" => OutputFormat::Tsv, "json" => OutputFormat::Json, "histogram" => OutputFormat::Histogram);

/// A canonical graph with its original vertex labels.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    pub graph: CsrGraph,
    pub labels: Vec<u64>,
}

impl LabeledGraph {
    pub fn from_raw(raw: &RawEdgeList) -> Result<Self> {
        let (graph, labels) = canonicalize_labeled(raw)?;
        Ok(LabeledGraph { graph, labels })
    }

    /// Dense ids double as labels.
    pub fn unlabeled(graph: CsrGraph) -> Self {
        let labels = (0..graph.num_vertices() as u64).collect();
        LabeledGraph { graph, labels }
    }

    pub fn edge_labels(&self, e: (VertexId, VertexId)) -> (u64, u64) {
        (self.labels[e.0 as usize], self.labels[e.1 as usize])
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    pub algorithm: Algorithm,
    pub workers: usize,
    pub ordering: Ordering,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            algorithm: Algorithm::Pkt,
            workers: crate::parallel::default_workers(),
            ordering: Ordering::Kcore,
        }
    }
}

/// Output of [`decompose`]. `truss` is indexed by edge ids of the
/// canonical, un-reordered graph, so it does not depend on the ordering.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub input: LabeledGraph,
    pub truss: TrussnessResult,
    pub report: DecompositionReport,
}

struct EngineRun {
    truss: TrussnessResult,
    support: f64,
    scan: f64,
    processing: f64,
    wall: f64,
    nsl: NslSummary,
}

fn run_engine(tg: &TrussGraph, algorithm: Algorithm, workers: usize) -> Result<EngineRun> {
    match algorithm {
        Algorithm::Pkt => {
            let run = pkt_run(tg, workers);
            Ok(EngineRun {
                truss: run.result,
                support: run.timings.support.as_secs_f64(),
                scan: run.timings.scan.as_secs_f64(),
                processing: run.timings.processing.as_secs_f64(),
                wall: run.timings.wall.as_secs_f64(),
                nsl: NslSummary {
                    levels: run.trace.levels() as u64,
                    total_sublevels: run.trace.total_sublevels(),
                    per_level: run.trace.nsl.clone(),
                    barriers: run.trace.barriers,
                },
            })
        }
        Algorithm::Wc => {
            let start = Instant::now();
            let support = support_am4(tg, workers);
            let t_support = start.elapsed().as_secs_f64();
            let truss = truss_wc(tg, &support)?;
            let wall = start.elapsed().as_secs_f64();
            Ok(EngineRun {
                truss,
                support: t_support,
                scan: 0.0,
                processing: wall - t_support,
                wall,
                nsl: NslSummary::default(),
            })
        }
        Algorithm::Oracle => {
            let start = Instant::now();
            let truss = truss_oracle(tg.csr())?;
            let wall = start.elapsed().as_secs_f64();
            Ok(EngineRun {
                truss,
                support: 0.0,
                scan: 0.0,
                processing: wall,
                wall,
                nsl: NslSummary::default(),
            })
        }
    }
}

/// Canonical graph → optional coreness reordering → truss engine.
pub fn decompose(input: LabeledGraph, opts: &DecomposeOptions) -> Result<Decomposition> {
    let workers = opts.workers.max(1);
    let g = &input.graph;
    if opts.algorithm == Algorithm::Oracle {
        crate::triangle::check_oracle_size(g.num_vertices())?;
    }
    let base = stats(g);

    let t = Instant::now();
    let cores = kcore_parallel(g, workers);
    let t_kcore = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let perm: Option<Vec<VertexId>> = match opts.ordering {
        Ordering::Kcore => Some(coreness_order(&cores)),
        Ordering::Natural => None,
    };
    let work_graph = match &perm {
        Some(p) => reorder(g, p)?,
        None => g.clone(),
    };
    let t_reorder = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let tg = build_truss_graph(work_graph);
    let t_build = t.elapsed().as_secs_f64();

    let run = run_engine(&tg, opts.algorithm, workers)?;
    let triangles = triangle_count(&tg, workers);

    // back to canonical edge ids
    let truss = match &perm {
        None => run.truss,
        Some(p) => {
            let by_canonical = g
                .edges()
                .map(|(u, v)| {
                    let e = tg
                        .edge_id(p[u as usize], p[v as usize])
                        .expect("reordering preserves edges");
                    run.truss.truss[e as usize]
                })
                .collect();
            TrussnessResult::from_truss(by_canonical)
        }
    };

    let timings = PhaseTimings {
        support: run.support,
        scan: run.scan,
        processing: run.processing,
        kcore: t_kcore,
        reorder: t_reorder,
        build: t_build,
        decomposition_wall: run.wall,
    };
    let report = DecompositionReport {
        algorithm: opts.algorithm.to_string(),
        reorder: opts.ordering.to_string(),
        workers,
        n: base.n,
        m: base.m,
        wedge_count: base.wedge_count,
        triangle_count: triangles,
        t_max: truss.t_max,
        c_max: cores.c_max,
        gweps: report::gweps(base.wedge_count, timings.decomposition()),
        timings,
        nsl: run.nsl,
        kclass_sizes: truss.kclass_sizes.clone(),
        memory: tg.memory_footprint(),
        pinning: "os-default".into(),
    };
    Ok(Decomposition {
        input,
        truss,
        report,
    })
}

/// `edge_id<TAB>u<TAB>v<TAB>trussness`, original labels, canonical edge ids.
pub fn write_trussness_tsv<W: Write>(mut out: W, d: &Decomposition) -> std::io::Result<()> {
    for (e, uv) in d.input.graph.edges().enumerate() {
        let (u, v) = d.input.edge_labels(uv);
        writeln!(out, "{e}\t{u}\t{v}\t{}", d.truss.truss[e])?;
    }
    Ok(())
}

/// `trussness<TAB>count`, ascending trussness.
pub fn write_histogram<W: Write>(mut out: W, truss: &TrussnessResult) -> std::io::Result<()> {
    for (k, c) in &truss.kclass_sizes {
        writeln!(out, "{k}\t{c}")?;
    }
    Ok(())
}

pub fn write_decomposition<W: Write>(
    mut out: W,
    d: &Decomposition,
    format: OutputFormat,
) -> Result<()> {
    let io = |e| Error::io("<output>", e);
    match format {
        OutputFormat::Tsv => write_trussness_tsv(&mut out, d).map_err(io),
        OutputFormat::Histogram => write_histogram(&mut out, &d.truss).map_err(io),
        OutputFormat::Json => {
            let text = d.report.to_json()?;
            writeln!(out, "{text}").map_err(io)
        }
    }
}

/// Synthetic generator selection for `gen`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenModel {
    ErdosRenyi { n: u64, p: f64 },
    Rmat(RmatParams),
}

pub fn cmd_gen<W: Write>(model: GenModel, seed: u64, out: W) -> Result<RawEdgeList> {
    let raw = match model {
        GenModel::ErdosRenyi { n, p } => gen::erdos_renyi_raw(n, p, seed)?,
        GenModel::Rmat(params) => gen::rmat_raw(&params, seed)?,
    };
    crate::io::write_edge_list(out, &raw).map_err(|e| Error::io("<output>", e))?;
    Ok(raw)
}

/// One maximal k-truss, as original-label edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrussComponent {
    pub edges: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KtrussListing {
    pub k: u32,
    pub t_max: u32,
    pub components: Vec<TrussComponent>,
    /// Set when nothing could be listed, e.g. `k` above the maximum trussness.
    pub notice: Option<String>,
}

impl KtrussListing {
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        if let Some(notice) = &self.notice {
            writeln!(out, "# {notice}")?;
        }
        for (i, c) in self.components.iter().enumerate() {
            writeln!(out, "# component {i}: {} edges", c.edges.len())?;
            for (u, v) in &c.edges {
                writeln!(out, "{u}\t{v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Maximal k-trusses of a decomposed graph.
pub fn ktruss_listing(d: &Decomposition, k: u32) -> Result<KtrussListing> {
    if k < 2 {
        return Err(Error::LevelOutOfRange {
            k,
            t_max: d.truss.t_max,
        });
    }
    let mut listing = KtrussListing {
        k,
        t_max: d.truss.t_max,
        components: Vec::new(),
        notice: None,
    };
    if k > d.truss.t_max {
        listing.notice = Some(format!(
            "no {k}-truss: maximum trussness is {}",
            d.truss.t_max
        ));
        return Ok(listing);
    }
    let edges: Vec<(VertexId, VertexId)> = d.input.graph.edges().collect();
    listing.components = ktruss_subgraphs(&d.input.graph, &d.truss, k)?
        .into_iter()
        .map(|ids| TrussComponent {
            edges: ids
                .into_iter()
                .map(|e: EdgeId| d.input.edge_labels(edges[e as usize]))
                .collect(),
        })
        .collect();
    Ok(listing)
}

pub fn cmd_ktruss(input: LabeledGraph, k: u32, workers: usize) -> Result<KtrussListing> {
    let d = decompose(
        input,
        &DecomposeOptions {
            workers,
            ..DecomposeOptions::default()
        },
    )?;
    ktruss_listing(&d, k)
}

/// A named trussness engine over a canonical graph.
#[derive(Clone, Copy)]
pub struct Engine {
    pub name: &'static str,
    pub run: fn(&CsrGraph) -> Result<TrussnessResult>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

fn pkt_with<const W: usize>(g: &CsrGraph) -> Result<TrussnessResult> {
    Ok(pkt_run(&build_truss_graph(g.clone()), W).result)
}

fn wc_engine(g: &CsrGraph) -> Result<TrussnessResult> {
    let tg = build_truss_graph(g.clone());
    truss_wc(&tg, &support_am4(&tg, 1))
}

/// Oracle first (the reference), then the serial engine and the parallel
/// engine at 1, 2, 4 and 8 workers.
pub fn default_engines() -> Vec<Engine> {
    vec![
        Engine {
            name: "oracle",
            run: truss_oracle,
        },
        Engine {
            name: "wc",
            run: wc_engine,
        },
        Engine {
            name: "pkt-1",
            run: pkt_with::<1>,
        },
        Engine {
            name: "pkt-2",
            run: pkt_with::<2>,
        },
        Engine {
            name: "pkt-4",
            run: pkt_with::<4>,
        },
        Engine {
            name: "pkt-8",
            run: pkt_with::<8>,
        },
    ]
}

/// A generated test graph.
#[derive(Clone, Debug)]
pub struct SuiteGraph {
    pub name: String,
    pub graph: CsrGraph,
}

/// Seeded mix of G(n, p) graphs (`n ∈ [4, max_n]`, `p ∈ [0.02, 0.5]`) and
/// RMAT graphs (scale 4..=8, capped by `max_n`).
pub fn random_suite(count: usize, max_n: usize, seed: u64) -> Result<Vec<SuiteGraph>> {
    let max_n = max_n.max(4);
    let max_scale = (usize::BITS - 1 - max_n.leading_zeros()).clamp(4, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let graph_seed: u64 = rng.gen();
            if i % 3 == 2 {
                let scale = rng.gen_range(4..=max_scale);
                let ef = rng.gen_range(2..=16);
                let g = gen::rmat_graph(&RmatParams::new(scale, ef), graph_seed)?;
                Ok(SuiteGraph {
                    name: format!("rmat(scale={scale}, ef={ef}, seed={graph_seed})"),
                    graph: g,
                })
            } else {
                let n = rng.gen_range(4..=max_n);
                let p = rng.gen_range(0.02..=0.5);
                let g = gen::erdos_renyi_graph(n, p, graph_seed)?;
                Ok(SuiteGraph {
                    name: format!("er(n={n}, p={p:.4}, seed={graph_seed})"),
                    graph: g,
                })
            }
        })
        .collect()
}

/// First disagreement found by [`validate`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Divergence {
    pub graph: String,
    pub edges: Vec<(VertexId, VertexId)>,
    pub reference: String,
    pub engine: String,
    /// First differing edge id, or `None` for a length mismatch or error.
    pub edge_id: Option<EdgeId>,
    pub expected: Vec<u32>,
    pub got: Vec<u32>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub graphs_checked: usize,
    pub engines: Vec<String>,
    pub divergence: Option<Divergence>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }

    pub fn summary(&self) -> String {
        match &self.divergence {
            None => format!(
                "all engines agree ({} graphs, engines: {})",
                self.graphs_checked,
                self.engines.join(", ")
            ),
            Some(d) => {
                let mut s = format!("divergence on {}: {} vs {}", d.graph, d.engine, d.reference);
                match (d.edge_id, &d.error) {
                    (_, Some(err)) => s += &format!(" (error: {err})"),
                    (Some(e), None) => {
                        let (u, v) = d.edges[e as usize];
                        s += &format!(
                            " at edge {e} ({u}, {v}): expected {} got {}",
                            d.expected[e as usize], d.got[e as usize]
                        )
                    }
                    (None, None) => s += " (length mismatch)",
                }
                s += &format!(
                    "\nedges: {:?}\nexpected: {:?}\ngot: {:?}",
                    d.edges, d.expected, d.got
                );
                s
            }
        }
    }
}

/// Runs every engine on every graph and stops at the first disagreement
/// with `engines[0]`.
pub fn validate(graphs: &[SuiteGraph], engines: &[Engine]) -> ValidationReport {
    let mut report = ValidationReport {
        graphs_checked: 0,
        engines: engines.iter().map(|e| e.name.to_string()).collect(),
        divergence: None,
    };
    let Some((reference, others)) = engines.split_first() else {
        return report;
    };
    for sg in graphs {
        report.graphs_checked += 1;
        let diverge = |engine: &Engine, expected: Vec<u32>, got: Vec<u32>, error| {
            let edge_id = expected
                .iter()
                .zip(&got)
                .position(|(a, b)| a != b)
                .map(|e| e as EdgeId);
            Divergence {
                graph: sg.name.clone(),
                edges: sg.graph.edges().collect(),
                reference: reference.name.into(),
                engine: engine.name.into(),
                edge_id,
                expected,
                got,
                error,
            }
        };
        let want = match (reference.run)(&sg.graph) {
            Ok(r) => r.truss,
            Err(e) => {
                report.divergence = Some(diverge(reference, vec![], vec![], Some(e.to_string())));
                return report;
            }
        };
        for engine in others {
            match (engine.run)(&sg.graph) {
                Ok(r) if r.truss == want => {}
                Ok(r) => {
                    report.divergence = Some(diverge(engine, want, r.truss, None));
                    return report;
                }
                Err(e) => {
                    report.divergence = Some(diverge(engine, want, vec![], Some(e.to_string())));
                    return report;
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    pub graphs: usize,
    pub max_n: usize,
    pub seed: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            graphs: 200,
            max_n: 256,
            seed: 0,
        }
    }
}

/// Default suite plus the empty graph, checked with [`default_engines`].
pub fn cmd_validate(opts: &ValidateOptions) -> Result<ValidationReport> {
    let mut graphs = vec![SuiteGraph {
        name: "empty".into(),
        graph: CsrGraph::default(),
    }];
    graphs.extend(random_suite(opts.graphs, opts.max_n, opts.seed)?);
    Ok(validate(&graphs, &default_engines()))
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub workers: Vec<usize>,
    pub repeats: usize,
    pub ordering: Ordering,
}

/// Repeated parallel decompositions per worker count; speedups are relative
/// to the first worker count listed.
pub fn cmd_bench(input: &LabeledGraph, opts: &BenchOptions) -> Result<BenchReport> {
    let g = &input.graph;
    let base = stats(g);
    let work_graph = match opts.ordering {
        Ordering::Kcore => {
            let w = opts.workers.iter().copied().max().unwrap_or(1);
            reorder(g, &coreness_order(&kcore_parallel(g, w)))?
        }
        Ordering::Natural => g.clone(),
    };
    let tg = build_truss_graph(work_graph);
    let repeats = opts.repeats.max(1);
    let mut rows: Vec<BenchRow> = Vec::new();
    let mut t_max = 0;
    for &workers in &opts.workers {
        let samples: Vec<BenchSample> = (0..repeats)
            .map(|_| {
                let run = pkt_run(&tg, workers);
                t_max = run.result.t_max;
                BenchSample {
                    support: run.timings.support.as_secs_f64(),
                    scan: run.timings.scan.as_secs_f64(),
                    processing: run.timings.processing.as_secs_f64(),
                    total: run.timings.wall.as_secs_f64(),
                }
            })
            .collect();
        let med = |f: fn(&BenchSample) -> f64| {
            let mut v: Vec<f64> = samples.iter().map(f).collect();
            report::median(&mut v)
        };
        let median = BenchSample {
            support: med(|s| s.support),
            scan: med(|s| s.scan),
            processing: med(|s| s.processing),
            total: med(|s| s.total),
        };
        let (base_proc, base_total) = rows
            .first()
            .map(|r| (r.median.processing, r.median.total))
            .unwrap_or((median.processing, median.total));
        let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
        rows.push(BenchRow {
            workers,
            speedup_processing: ratio(base_proc, median.processing),
            speedup_total: ratio(base_total, median.total),
            gweps: report::gweps(base.wedge_count, median.total),
            samples,
            median,
        });
    }
    Ok(BenchReport {
        n: base.n,
        m: base.m,
        wedge_count: base.wedge_count,
        t_max,
        reorder: opts.ordering.to_string(),
        repeats,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(edges: &[(u64, u64)]) -> LabeledGraph {
        LabeledGraph::from_raw(&RawEdgeList::new(edges.to_vec())).unwrap()
    }

    #[test]
    fn names_parse_and_print() {
        assert_eq!("PKT".parse::<Algorithm>().unwrap(), Algorithm::Pkt);
        assert_eq!(Ordering::Natural.to_string(), "natural");
        assert!(matches!(
            "bogus".parse::<Algorithm>(),
            Err(Error::Unknown {
                kind: "algorithm",
                ..
            })
        ));
    }

    #[test]
    fn triangle_tsv_restores_labels() {
        let d = decompose(
            labeled(&[(10, 20), (20, 30), (30, 10)]),
            &DecomposeOptions {
                workers: 2,
                ..Default::default()
            },
        )
        .unwrap();
        let mut out = Vec::new();
        write_trussness_tsv(&mut out, &d).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "0\t10\t20\t3\n1\t10\t30\t3\n2\t20\t30\t3\n"
        );
    }

    #[test]
    fn oracle_refuses_large_inputs() {
        let g = LabeledGraph::unlabeled(CsrGraph::from_edges(600, &[(0, 1)]).unwrap());
        let opts = DecomposeOptions {
            algorithm: Algorithm::Oracle,
            workers: 1,
            ordering: Ordering::Natural,
        };
        assert!(matches!(
            decompose(g, &opts),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn faulty_engine_is_reported_with_edge_id() {
        fn off_by_one(g: &CsrGraph) -> Result<TrussnessResult> {
            let mut r = truss_oracle(g)?;
            if let Some(t) = r.truss.last_mut() {
                *t += 1;
            }
            Ok(r)
        }
        let graphs = random_suite(3, 20, 1).unwrap();
        let engines = [
            Engine {
                name: "oracle",
                run: truss_oracle,
            },
            Engine {
                name: "faulty",
                run: off_by_one,
            },
        ];
        let report = validate(&graphs, &engines);
        let d = report.divergence.as_ref().expect("fault must be caught");
        assert_eq!(d.engine, "faulty");
        assert_eq!(d.edge_id, Some(d.expected.len() as u32 - 1));
        assert!(report.summary().contains("at edge"));
    }

    #[test]
    fn empty_graph_validates() {
        let graphs = vec![SuiteGraph {
            name: "empty".into(),
            graph: CsrGraph::default(),
        }];
        assert!(validate(&graphs, &default_engines()).passed());
    }
}
