//! Drives the parallel peel one scan and one sub-level at a time and prints
//! how the frontier evolves.

use pkt::gen::erdos_renyi_graph;
use pkt::graph::build_truss_graph;
use pkt::triangle::support_am4;
use pkt::truss_parallel::{pkt, TrussPeel};

fn main() -> pkt::Result<()> {
    let tg = build_truss_graph(erdos_renyi_graph(200, 0.08, 11)?);
    let workers = 2;
    let peel = TrussPeel::new(&tg, support_am4(&tg, workers));
    let mut frontier = peel.frontier();

    let mut level = 0;
    while frontier.todo() > 0 {
        peel.scan(&mut frontier, level, workers);
        let mut sizes = Vec::new();
        let mut len = frontier.curr().len();
        while len > 0 {
            sizes.push(len);
            len = peel.process_sublevel(&mut frontier, level, workers);
        }
        if !sizes.is_empty() {
            println!(
                "level {level:>2} (trussness {:>2}): sub-levels {sizes:?}",
                level + 2
            );
        }
        level += 1;
    }

    let stepped = peel.into_result();
    assert_eq!(stepped, pkt(&tg, workers).0);
    println!("t_max = {}", stepped.t_max);
    Ok(())
}
