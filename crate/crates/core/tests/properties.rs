//! Cross-module invariants against brute-force oracles on small graphs.

use cycle_ramsey::dense::dense_partition;
use cycle_ramsey::oracles::{
    find_cycle_exact, independence_number, ramsey_exact, verify_certificate,
};
use cycle_ramsey::stability::{
    ramsey_search, random_coloring, stability_decomposition, RunParams, SearchOutcome,
    StabilityOutcome, StabilityParams,
};
use cycle_ramsey::{EdgeColoring, Graph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(n: usize, p: f64, seed: u64) -> Graph {
    Graph::gnp(n, p, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Cycle of length `ell` by extending simple paths from their least vertex.
fn brute_cycle(g: &Graph, ell: usize) -> bool {
    fn extend(g: &Graph, path: &mut Vec<usize>, ell: usize) -> bool {
        let last = *path.last().unwrap();
        if path.len() == ell {
            return g.has_edge(last, path[0]);
        }
        for w in 0..g.order() {
            if w > path[0] && g.has_edge(last, w) && !path.contains(&w) {
                path.push(w);
                if extend(g, path, ell) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    (0..g.order()).any(|s| extend(g, &mut vec![s], ell))
}

fn brute_alpha(g: &Graph) -> usize {
    let n = g.order();
    (0u32..1 << n)
        .filter(|&m| {
            (0..n).all(|i| {
                m >> i & 1 == 0 || (i + 1..n).all(|j| m >> j & 1 == 0 || !g.has_edge(i, j))
            })
        })
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

/// Whether some colouring of order `order` has neither a red `C_ell` nor a blue `K_n`.
fn brute_avoiding(order: usize, ell: usize, n: usize) -> bool {
    let pairs: Vec<(usize, usize)> = (0..order)
        .flat_map(|i| (i + 1..order).map(move |j| (i, j)))
        .collect();
    (0u64..1 << pairs.len()).any(|mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let red = Graph::from_edges(order, &edges).unwrap();
        !brute_cycle(&red, ell) && brute_alpha(&red) < n
    })
}

#[test]
fn small_ramsey_values_match_enumeration_of_all_colourings() {
    for (ell, n) in [(3, 2), (4, 2), (5, 2), (3, 3)] {
        let r = ramsey_exact(ell, n, 7).unwrap().value().unwrap();
        assert!(brute_avoiding(r - 1, ell, n), "({ell},{n}) at {}", r - 1);
        if r <= 6 {
            assert!(!brute_avoiding(r, ell, n), "({ell},{n}) at {r}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cycle_oracle_matches_brute_force(n in 3usize..10, p in 0.0f64..1.0, seed in any::<u64>(), ell in 3usize..10) {
        let g = graph(n, p, seed);
        let found = find_cycle_exact(&g, ell).unwrap();
        prop_assert_eq!(found.is_some(), brute_cycle(&g, ell));
        if let Some(c) = found {
            c.validate(&g).unwrap();
            prop_assert_eq!(c.len(), ell);
        }
    }

    #[test]
    fn independence_matches_brute_force(n in 0usize..14, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = graph(n, p, seed);
        prop_assert_eq!(independence_number(&g).unwrap(), brute_alpha(&g));
    }

    #[test]
    fn search_certificates_verify(seed in any::<u64>(), case in 0usize..4) {
        let (ell, n) = [(4, 3), (5, 3), (6, 3), (5, 4)][case];
        let c = random_coloring((ell - 1) * (n - 1) + 1, seed);
        let res = ramsey_search(&c, ell, n, &RunParams::default(), seed).unwrap();
        let SearchOutcome::Certificate { certificate } = res.outcome else {
            return Err(TestCaseError::fail("incomplete"));
        };
        prop_assert!(verify_certificate(&c, &certificate, ell, n).unwrap());
    }

    #[test]
    fn stability_output_partitions_vertices(n in 20usize..60, p in 0.3f64..1.0, seed in any::<u64>(), ell in 6usize..14) {
        let g = graph(n, p, seed);
        let prm = StabilityParams { seed, ..Default::default() };
        match stability_decomposition(&g, ell, 3, &prm).unwrap() {
            StabilityOutcome::Decomposition(d) => {
                let mut all: Vec<usize> = d.blocks.iter().flatten().chain(&d.leftover).copied().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
                for (i, a) in d.blocks.iter().enumerate() {
                    for b in &d.blocks[i + 1..] {
                        prop_assert!(a.iter().all(|&x| b.iter().all(|&y| !g.has_edge(x, y))) || !d.checks.no_cross_edges);
                    }
                }
            }
            StabilityOutcome::FoundCycle { cycle } => {
                cycle.validate(&g).unwrap();
                prop_assert_eq!(cycle.len(), ell);
            }
        }
    }

    #[test]
    fn dense_partition_is_a_partition(n in 1usize..80, p in 0.0f64..1.0, seed in any::<u64>(), ell in 3usize..20) {
        let g = graph(n, p, seed);
        let d = dense_partition(&g, ell, 0.5).unwrap();
        let mut all: Vec<usize> = d.blocks.iter().flatten().chain(&d.leftover).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        for b in &d.blocks {
            prop_assert!(b.len() < ell);
        }
    }

    #[test]
    fn certificate_rejected_after_flipping_an_edge(seed in any::<u64>()) {
        let c = random_coloring(11, seed);
        let res = ramsey_search(&c, 6, 3, &RunParams::default(), seed).unwrap();
        let cert = res.certificate().unwrap().clone();
        let (u, v) = (cert.vertices()[0], cert.vertices()[1]);
        let mut edges = c.red.edge_list();
        if c.is_red(u, v) {
            edges.retain(|&e| e != (u.min(v), u.max(v)));
        } else {
            edges.push((u.min(v), u.max(v)));
        }
        let flipped = EdgeColoring::new(Graph::from_edges(11, &edges).unwrap());
        prop_assert!(!verify_certificate(&flipped, &cert, 6, 3).unwrap());
    }
}
