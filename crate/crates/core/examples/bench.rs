//! Median phase timings of the parallel engine per worker count.
//!
//! ```text
//! cargo run --release --example bench -- 16 1,2,4
//! ```

use pkt::cli::{cmd_bench, BenchOptions, LabeledGraph, Ordering};
use pkt::gen::{rmat_graph, RmatParams};

fn main() -> pkt::Result<()> {
    let mut args = std::env::args().skip(1);
    let scale = args.next().and_then(|s| s.parse().ok()).unwrap_or(14);
    let workers: Vec<usize> = args
        .next()
        .map(|s| s.split(',').filter_map(|w| w.parse().ok()).collect())
        .unwrap_or_else(|| vec![1, 2, 4]);

    let g = rmat_graph(&RmatParams::new(scale, 16), 3)?;
    let opts = BenchOptions {
        workers,
        repeats: 3,
        ordering: Ordering::Kcore,
    };
    let report = cmd_bench(&LabeledGraph::unlabeled(g), &opts)?;
    print!("{}", report.table());
    Ok(())
}
