//! Full pipeline on an edge-list file, or on a generated RMAT graph when no
//! path is given.
//!
//! ```text
//! cargo run --release --example decompose -- graph.txt 4
//! ```

use pkt::cli::{decompose, DecomposeOptions, LabeledGraph};
use pkt::gen::{rmat_raw, RmatParams};

fn main() -> pkt::Result<()> {
    let mut args = std::env::args().skip(1);
    let raw = match args.next() {
        Some(path) => pkt::io::read_edge_list(path)?,
        None => rmat_raw(&RmatParams::new(14, 16), 42)?,
    };
    let workers = args.next().and_then(|w| w.parse().ok()).unwrap_or(4);

    let opts = DecomposeOptions {
        workers,
        ..Default::default()
    };
    let d = decompose(LabeledGraph::from_raw(&raw)?, &opts)?;
    print!("{}", d.report.summary());

    println!("k-class sizes:");
    for (k, count) in &d.truss.kclass_sizes {
        println!("  {k:>4}  {count}");
    }
    Ok(())
}
