//! Exhaustive r(C_ℓ, K_n) for small cases next to (ℓ−1)(n−1)+1.

use cycle_ramsey::oracles::ramsey_exact;

fn main() -> cycle_ramsey::Result<()> {
    for (ell, n, nmax) in [(3, 2, 4), (5, 2, 6), (3, 3, 7), (4, 3, 8), (6, 1, 2)] {
        let formula = (ell - 1) * (n - 1) + 1;
        match ramsey_exact(ell, n, nmax)?.value() {
            Some(r) => println!(
                "r(C_{ell},K_{n}) = {r}  formula {formula}{}",
                if r == formula { "" } else { "  (differs)" }
            ),
            None => println!("r(C_{ell},K_{n}) > {nmax}"),
        }
    }
    Ok(())
}
