//! Near-clique decomposition of a perturbed extremal colouring.

use cycle_ramsey::stability::{stability_decomposition, StabilityOutcome, StabilityParams};
use cycle_ramsey::witness::chvatal_harary;
use cycle_ramsey::Graph;

fn main() -> cycle_ramsey::Result<()> {
    let (ell, n) = (12, 4);
    let red = chvatal_harary(ell, n)?.red;
    // drop one edge per clique and add a stray vertex joined to two cliques
    let k = ell - 1;
    let mut edges: Vec<(usize, usize)> = red
        .edge_list()
        .into_iter()
        .filter(|&(u, v)| !(u % k == 0 && v == u + 1))
        .collect();
    let stray = red.order();
    edges.extend([(stray, 0), (stray, k)]);
    let g = Graph::from_edges(stray + 1, &edges)?;

    let prm = StabilityParams {
        eta: 0.25,
        ..Default::default()
    };
    match stability_decomposition(&g, ell, n, &prm)? {
        StabilityOutcome::Decomposition(d) => {
            for b in &d.blocks {
                println!("block {b:?}");
            }
            println!("leftover {:?}, guarantee {}", d.leftover, d.guarantee_met);
            println!("{:?}", d.checks);
        }
        StabilityOutcome::FoundCycle { cycle } => println!("red C_{ell}: {:?}", cycle.vertices),
    }
    Ok(())
}
