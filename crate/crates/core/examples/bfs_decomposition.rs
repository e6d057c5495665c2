//! BFS growth cutoff, the non-adjacent layer decomposition, and a cycle in a length window.

use cycle_ramsey::bfs::{bfs_layers, cycle_in_range, growth_cutoff, triple_decomposition};
use cycle_ramsey::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cycle_ramsey::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = Graph::gnp(200, 0.03, &mut rng);

    let layers = bfs_layers(&g, 0)?;
    let sizes: Vec<usize> = layers.layers.iter().map(Vec::len).collect();
    println!(
        "layer sizes {sizes:?}, cutoff m = {}",
        growth_cutoff(&layers, 2.0)?
    );

    let triples = triple_decomposition(&g, 3.0)?;
    let covered: usize = triples.iter().map(|t| t.set.len()).sum();
    println!(
        "{} sets, {covered} vertices covered, at least {}",
        triples.len(),
        (200.0f64 / 6.0).ceil()
    );

    let dense = Graph::gnp(80, 0.9, &mut rng);
    let c = cycle_in_range(&dense, 3, 1.3)?;
    println!("cycle of length {} from d1 = 3", c.len());
    Ok(())
}
