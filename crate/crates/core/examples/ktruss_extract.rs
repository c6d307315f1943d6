//! Maximal k-trusses as connected components of the edges with
//! trussness at least k.
//!
//! The graph is two diamonds joined by a pair of bridge edges. Every vertex
//! has coreness 3, yet the bridges sit in no triangle, so the 3-truss splits
//! into two pieces.

use pkt::cli::{cmd_ktruss, LabeledGraph};
use pkt::RawEdgeList;

fn main() -> pkt::Result<()> {
    #[rustfmt::skip]
    let edges = vec![
        (0, 1), (0, 2), (0, 3), (1, 2), (1, 3),
        (4, 5), (4, 6), (4, 7), (5, 6), (5, 7),
        (2, 6), (3, 7),
    ];
    let input = LabeledGraph::from_raw(&RawEdgeList::new(edges))?;

    for k in [2, 3, 4] {
        let listing = cmd_ktruss(input.clone(), k, 2)?;
        println!("k={k}: {} component(s)", listing.components.len());
        listing
            .write_text(std::io::stdout().lock())
            .expect("stdout");
    }
    Ok(())
}
