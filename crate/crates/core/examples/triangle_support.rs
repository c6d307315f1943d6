//! Per-edge triangle support with the two kernels, checked against each
//! other and against the triangle count.

use std::time::Instant;

use pkt::gen::{rmat_graph, RmatParams};
use pkt::graph::build_truss_graph;
use pkt::triangle::{support_am4, support_ros, triangle_count};

fn main() -> pkt::Result<()> {
    let g = rmat_graph(&RmatParams::new(15, 16), 7)?;
    let tg = build_truss_graph(g);
    let workers = pkt::parallel::default_workers();

    let t = Instant::now();
    let am4 = support_am4(&tg, workers);
    let t_am4 = t.elapsed();
    let t = Instant::now();
    let ros = support_ros(&tg, workers);
    let t_ros = t.elapsed();
    let triangles = triangle_count(&tg, workers);

    assert_eq!(am4, ros);
    assert_eq!(am4.total(), 3 * triangles);
    println!(
        "n={} m={} triangles={triangles}",
        tg.num_vertices(),
        tg.num_edges()
    );
    println!("oriented kernel {t_am4:?}, edge-based kernel {t_ros:?}");

    let busiest = (0..tg.num_edges() as u32)
        .max_by_key(|&e| am4[e])
        .unwrap_or(0);
    if tg.num_edges() > 0 {
        println!(
            "edge {:?} sits in {} triangles",
            tg.endpoints(busiest),
            am4[busiest]
        );
    }
    Ok(())
}
