//! Serial bottom-up engine against the parallel engine on one graph.

use std::time::Instant;

use pkt::gen::{rmat_graph, RmatParams};
use pkt::graph::build_truss_graph;
use pkt::triangle::support_am4;
use pkt::truss_parallel::pkt;
use pkt::truss_serial::truss_wc;

fn main() -> pkt::Result<()> {
    let tg = build_truss_graph(rmat_graph(&RmatParams::new(13, 16), 5)?);

    let t = Instant::now();
    let serial = truss_wc(&tg, &support_am4(&tg, 1))?;
    let t_serial = t.elapsed();

    let t = Instant::now();
    let (parallel, trace) = pkt(&tg, pkt::parallel::default_workers());
    let t_parallel = t.elapsed();

    assert_eq!(serial, parallel);
    println!("m={} t_max={}", tg.num_edges(), serial.t_max);
    println!("serial {t_serial:?}  parallel {t_parallel:?}");
    println!(
        "sub-levels {}  barriers {}",
        trace.total_sublevels(),
        trace.barriers
    );
    Ok(())
}
