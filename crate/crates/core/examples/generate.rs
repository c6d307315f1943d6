//! Writes seeded synthetic edge lists.
//!
//! ```text
//! cargo run --example generate -- rmat 12 out.txt
//! cargo run --example generate -- er 500 out.txt
//! ```

use pkt::cli::{cmd_gen, GenModel};
use pkt::gen::RmatParams;

fn main() -> pkt::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kind = args.first().map(String::as_str).unwrap_or("rmat");
    let size: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let model = match kind {
        "er" => GenModel::ErdosRenyi {
            n: size,
            p: 8.0 / size.max(1) as f64,
        },
        _ => GenModel::Rmat(RmatParams::new(size as u32, 16)),
    };

    let raw = match args.get(2) {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| pkt::Error::io(path, e))?;
            cmd_gen(model, 1, std::io::BufWriter::new(file))?
        }
        None => cmd_gen(model, 1, std::io::sink())?,
    };
    let g = pkt::graph::canonicalize(&raw)?;
    eprintln!(
        "{} raw edges -> n={} m={} after dropping loops and duplicates",
        raw.len(),
        g.num_vertices(),
        g.num_edges()
    );
    Ok(())
}
