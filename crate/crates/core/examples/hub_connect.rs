//! Build a hub in a dense host and route vertex-disjoint paths of prescribed lengths through it.

use cycle_ramsey::hubs::{build_hub, check_connection, hub_connect, random_request, HubParams};
use cycle_ramsey::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cycle_ramsey::Result<()> {
    let g = Graph::complete_bipartite(160, 160);
    let hub = build_hub(&g, 40, 0.7, 1, &HubParams::default())?;
    hub.verify(&g)?;
    println!(
        "|A| = |B| = {}, |D| = {}, floor {}, at most {} pairs, length budget {}",
        hub.a.len(),
        hub.d.len(),
        hub.common_neighbor_floor,
        hub.max_pairs(),
        hub.length_budget()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..3 {
        let req = random_request(&hub, &mut rng).expect("hub admits requests");
        let paths = hub_connect(&g, &hub, &req)?;
        check_connection(&g, &hub, &req, &paths)?;
        for ((s, t), p) in req.pairs.iter().zip(&paths) {
            println!("{s} → {t}: {:?}", p.vertices);
        }
    }
    Ok(())
}
