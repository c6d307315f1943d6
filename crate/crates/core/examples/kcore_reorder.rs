//! Coreness of every vertex and the effect of relabeling vertices by
//! increasing coreness on oriented triangle work.

use pkt::gen::{rmat_graph, RmatParams};
use pkt::graph::{build_truss_graph, reorder, stats};
use pkt::kcore::{coreness_order, kcore_parallel, kcore_serial};
use pkt::triangle::triangle_count;

fn main() -> pkt::Result<()> {
    let g = rmat_graph(&RmatParams::new(14, 16), 1)?;
    let cores = kcore_parallel(&g, 4);
    assert_eq!(cores, kcore_serial(&g));
    println!(
        "n={} m={} c_max={}",
        g.num_vertices(),
        g.num_edges(),
        cores.c_max
    );

    let perm = coreness_order(&cores);
    let ordered = reorder(&g, &perm)?;
    let (before, after) = (stats(&g), stats(&ordered));
    println!("sum d+^2 natural: {}", before.sum_dplus_sq);
    println!("sum d+^2 kcore:   {}", after.sum_dplus_sq);
    println!(
        "work ratio {:.2}",
        before.sum_dplus_sq as f64 / after.sum_dplus_sq.max(1) as f64
    );

    let t1 = triangle_count(&build_truss_graph(g), 4);
    let t2 = triangle_count(&build_truss_graph(ordered), 4);
    assert_eq!(t1, t2);
    println!("triangles {t1} under both orders");
    Ok(())
}
