//! Turán independent sets, Dirac Hamilton cycles, pancyclicity, long paths and dependent random choice.

use cycle_ramsey::extremal::{
    dependent_random_choice, hamilton_cycle, long_path, pancyclic_cycle, turan_bound,
    turan_independent_set, DrcParams, Pancyclic,
};
use cycle_ramsey::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cycle_ramsey::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = Graph::gnp(60, 0.2, &mut rng);
    println!(
        "independent set of {} ≥ {}",
        turan_independent_set(&g).len(),
        turan_bound(&g)
    );

    let d = Graph::gnp(30, 0.8, &mut rng);
    if 2 * d.min_degree() >= d.order() {
        println!("Hamilton cycle {:?}", hamilton_cycle(&d)?.vertices);
        for ell in [3, 10, 29] {
            if let Pancyclic::Found(c) = pancyclic_cycle(&d, ell)? {
                println!("{ell}-cycle {:?}", c.vertices);
            }
        }
    }
    let k44 = Graph::complete_bipartite(4, 4);
    println!("K_4,4 and length 5: {:?}", pancyclic_cycle(&k44, 5)?);

    println!(
        "path with 9 edges in Petersen: {:?}",
        long_path(&Graph::petersen(), 9)?.map(|p| p.vertices)
    );

    let dense = Graph::gnp(200, 0.9, &mut rng);
    // e ≥ N^(2−δ₀) cannot hold at N = 200 for the default δ₀
    let prm = DrcParams {
        delta0: 0.25,
        ..Default::default()
    };
    let r = dependent_random_choice(&dense, 0.5, 7, &prm)?;
    println!(
        "DRC: |U1| = {}, |U2| = {}, common neighbours ≥ {}",
        r.u1.len(),
        r.u2.len(),
        r.witness_threshold
    );
    Ok(())
}
