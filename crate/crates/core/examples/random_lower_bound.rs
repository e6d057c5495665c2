//! Expectation bounds of the random construction, and a tiny explicit-p run.

use cycle_ramsey::oracles::find_cycle_exact;
use cycle_ramsey::witness::{expectation_check, random_lower_bound, RandomWitnessParams};

fn main() -> cycle_ramsey::Result<()> {
    for n in [1e4, 1e9, 1e13] {
        let e = expectation_check(n, 0.5);
        println!(
            "n = {n:e}: N = {:e}, ℓ0 = {}, ln E[indep] = {:.3e}, short cycles below N/2: {}",
            e.big_n, e.ell0, e.ln_indep_exact, e.short_below_half_n
        );
    }

    let mut p = RandomWitnessParams::new(24, 0.1, 5);
    p.p = Some(0.08);
    p.ell0 = Some(5);
    let w = random_lower_bound(&p)?;
    let stats = w.random.as_ref().expect("random stats");
    let red = &w.coloring.as_ref().expect("colouring").red;
    println!(
        "sampled {} vertices, deleted {}, kept {}",
        stats.sampled_order, stats.deleted, w.order
    );
    for ell in 3..=stats.ell0 {
        assert!(find_cycle_exact(red, ell)?.is_none());
    }
    println!(
        "girth > {}; independence claim {:?}",
        stats.ell0, w.alpha_status
    );
    Ok(())
}
