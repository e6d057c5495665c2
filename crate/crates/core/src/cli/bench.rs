use super::{emit, EXIT_OK};
use crate::error::Result;
use crate::graph::Graph;
use crate::oracles::{find_cycle_exact, independence_number, ramsey_exact, Certificate};
use crate::stability::{ramsey_search, random_coloring, RunParams, SearchOutcome};
use clap::{Args, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Exact,
    Pipeline,
    Oracles,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    /// Colourings per (ℓ, n) in the pipeline suite.
    #[arg(long, default_value_t = 200)]
    pub colorings: u64,
}

/// Outcome rows plus wall times; `wall_ms` fields are the only non-deterministic values.
#[derive(Serialize)]
struct BenchReport {
    suite: &'static str,
    rows: Vec<Value>,
    wall_ms: f64,
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e3 * 1e3).round() / 1e3
}

pub fn run(a: &BenchArgs) -> Result<i32> {
    let start = Instant::now();
    let (suite, rows) = match a.suite {
        Suite::Exact => ("exact", exact_rows()?),
        Suite::Pipeline => ("pipeline", pipeline_rows(a.colorings)?),
        Suite::Oracles => ("oracles", oracle_rows()?),
    };
    let report = BenchReport {
        suite,
        rows,
        wall_ms: ms(start),
    };
    for r in &report.rows {
        println!("{r}");
    }
    println!("total {:.1} ms", report.wall_ms);
    emit(&report, a.out.as_deref(), a.json)?;
    Ok(EXIT_OK)
}

fn exact_rows() -> Result<Vec<Value>> {
    let mut cases = vec![(3, 3, 7), (4, 3, 8)];
    cases.extend((3..=8).map(|l| (l, 2, l + 1)));
    cases.extend((3..=5).map(|l| (l, 1, 2)));
    let mut rows = Vec::new();
    for (ell, n, nmax) in cases {
        let t = Instant::now();
        let r = ramsey_exact(ell, n, nmax)?;
        let formula = (ell - 1) * (n - 1) + 1;
        rows.push(json!({
            "ell": ell, "n": n, "nmax": nmax, "value": r.value(), "formula": formula,
            "matches_formula": r.value().map(|v| v == formula), "wall_ms": ms(t),
        }));
    }
    Ok(rows)
}

fn pipeline_rows(count: u64) -> Result<Vec<Value>> {
    let mut rows = Vec::new();
    for (ell, n) in [(6, 3), (8, 3), (6, 4)] {
        let t = Instant::now();
        let (mut red, mut blue, mut incomplete) = (0, 0, 0);
        for seed in 0..count {
            let c = random_coloring((ell - 1) * (n - 1) + 1, seed);
            match ramsey_search(&c, ell, n, &RunParams::default(), seed)?.outcome {
                SearchOutcome::Certificate {
                    certificate: Certificate::RedCycle { .. },
                } => red += 1,
                SearchOutcome::Certificate { .. } => blue += 1,
                SearchOutcome::Incomplete { .. } => incomplete += 1,
            }
        }
        rows.push(json!({
            "ell": ell, "n": n, "colorings": count, "red_cycle": red, "blue_clique": blue,
            "incomplete": incomplete, "success_rate": (red + blue) as f64 / count.max(1) as f64, "wall_ms": ms(t),
        }));
    }
    Ok(rows)
}

fn oracle_rows() -> Result<Vec<Value>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let corpus: Vec<(&str, Graph)> = vec![
        ("petersen", Graph::petersen()),
        ("K_12", Graph::complete(12)),
        ("C_30", Graph::cycle(30)),
        ("K_{8,8}", Graph::complete_bipartite(8, 8)),
        ("G(20,0.3)", Graph::gnp(20, 0.3, &mut rng)),
        ("G(40,0.15)", Graph::gnp(40, 0.15, &mut rng)),
        ("G(60,0.1)", Graph::gnp(60, 0.1, &mut rng)),
    ];
    let mut rows = Vec::new();
    for (name, g) in &corpus {
        for ell in [5, 6, 8] {
            let t = Instant::now();
            let found = find_cycle_exact(g, ell)?.is_some();
            rows.push(json!({ "oracle": "find_cycle_exact", "graph": name, "ell": ell, "found": found, "wall_ms": ms(t) }));
        }
        let t = Instant::now();
        let alpha = independence_number(g)?;
        rows.push(json!({ "oracle": "independence_number", "graph": name, "alpha": alpha, "wall_ms": ms(t) }));
    }
    let t = Instant::now();
    let r = ramsey_exact(3, 3, 7)?;
    rows.push(
        json!({ "oracle": "ramsey_exact", "ell": 3, "n": 3, "value": r.value(), "wall_ms": ms(t) }),
    );
    Ok(rows)
}
