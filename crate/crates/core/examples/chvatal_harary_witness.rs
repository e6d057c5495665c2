//! n−1 disjoint red cliques of order ℓ−1: no red C_ℓ, no blue K_n.

use cycle_ramsey::oracles::{find_cycle_exact, independence_number};
use cycle_ramsey::witness::{chvatal_harary, chvatal_harary_report};

fn main() -> cycle_ramsey::Result<()> {
    let (ell, n) = (7, 4);
    let c = chvatal_harary(ell, n)?;
    println!("order {}, red edges {}", c.order(), c.red.edge_count());
    println!(
        "red C_{ell}: {:?}",
        find_cycle_exact(&c.red, ell)?.map(|c| c.vertices)
    );
    println!("α(red) = {}", independence_number(&c.red)?);
    let report = chvatal_harary_report(ell, n)?;
    println!("r(C_{ell},K_{n}) ≥ {}", report.lower_bound());
    println!("{}", report.to_json());
    Ok(())
}
