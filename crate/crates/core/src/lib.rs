//! Parallel k-truss decomposition for shared-memory machines.
//!
//! The pipeline turns a raw edge list into a simple undirected graph
//! ([`graph`]), optionally relabels vertices by increasing coreness
//! ([`kcore`]), counts per-edge triangle support ([`triangle`]) and peels
//! edges level by level to obtain every edge's trussness, either in parallel
//! ([`truss_parallel`]) or with the serial reference engine
//! ([`truss_serial`]). Brute-force oracles for supports and trussness back
//! the test suites.
//!
//! ```
//! use pkt::graph::{build_truss_graph, canonicalize, RawEdgeList};
//! use pkt::truss_parallel::pkt;
//!
//! let raw = RawEdgeList::new(vec![(0, 1), (1, 2), (2, 0), (2, 3)]);
//! let tg = build_truss_graph(canonicalize(&raw).unwrap());
//! let (truss, _) = pkt(&tg, 2);
//! assert_eq!(truss.t_max, 3);
//! ```

pub mod cli;
pub mod error;
pub mod frontier;
pub mod gen;
pub mod graph;
pub mod io;
pub mod kcore;
pub mod parallel;
pub mod report;
pub mod triangle;
pub mod truss_parallel;
pub mod truss_serial;

pub use error::{Error, Result};
pub use frontier::{LevelFrontier, SubLevelTrace};
pub use graph::{CsrGraph, EdgeId, GraphStats, RawEdgeList, TrussGraph, VertexId};
pub use kcore::CorenessResult;
pub use report::DecompositionReport;
pub use triangle::SupportArray;
pub use truss_serial::TrussnessResult;
