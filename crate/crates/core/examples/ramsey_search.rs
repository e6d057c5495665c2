//! Certified red C_ℓ or blue K_n in colourings of order (ℓ−1)(n−1)+1.

use cycle_ramsey::oracles::verify_certificate;
use cycle_ramsey::stability::{ramsey_search, random_coloring, RunParams};

fn main() -> cycle_ramsey::Result<()> {
    let params = RunParams::default();
    for (ell, n, seed) in [(6, 3, 1), (8, 3, 2), (6, 4, 3), (10, 4, 4)] {
        let c = random_coloring((ell - 1) * (n - 1) + 1, seed);
        let res = ramsey_search(&c, ell, n, &params, seed)?;
        match res.certificate() {
            Some(cert) => {
                assert!(verify_certificate(&c, cert, ell, n)?);
                println!("(ℓ,n) = ({ell},{n}): {}", cert.to_json());
            }
            None => println!("(ℓ,n) = ({ell},{n}): incomplete"),
        }
        for s in &res.report.stages {
            println!(
                "  depth {} order {} {}: {}",
                s.depth, s.order, s.stage, s.outcome
            );
        }
    }
    Ok(())
}
