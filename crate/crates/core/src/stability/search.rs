use super::absorb::{absorb_remainder, block_cycle, AbsorbOutcome};
use super::decomposition::{stability_decomposition, StabilityOutcome, StabilityParams};
use super::separate::{absorb_neighbours, separate_remainder, NeighbourOutcome, SeparateOutcome};
use crate::error::{invalid, Error, Result};
use crate::extremal::turan_independent_set;
use crate::graph::{EdgeColoring, Graph};
use crate::hubs::{HubParams, HubPartitionParams};
use crate::oracles::{
    find_cycle_exact, find_cycle_exact_with, max_independent_set, verify_certificate, Certificate,
    CycleOracleConfig, MIS_EXACT_LIMIT, SUBSET_DP_MAX_ORDER,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Tunable constants of a run; read from a flat JSON object, missing keys take defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunParams {
    pub eps: f64,
    pub eta: f64,
    /// Growth factor for the BFS-based lemma commands.
    pub gamma: f64,
    /// Density exponent of the hub precondition `d(G) ≥ N^{1−δ₀}`.
    pub delta0: f64,
    /// Orders up to this are answered by the exact oracles.
    pub exact_threshold: usize,
    /// Orders up to this may fall back to an exact maximum independent set.
    pub mis_threshold: usize,
    pub retries: usize,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            eps: 0.05,
            eta: 0.1,
            gamma: 2.0,
            delta0: 0.25,
            exact_threshold: SUBSET_DP_MAX_ORDER,
            mis_threshold: MIS_EXACT_LIMIT,
            retries: 64,
        }
    }
}

impl RunParams {
    pub fn from_json(s: &str) -> Result<RunParams> {
        let p: RunParams = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| x > 0.0 && x < 1.0;
        if !unit(self.eps) || !unit(self.eta) || !unit(self.delta0) || self.gamma <= 1.0 {
            return invalid("need eps, eta, delta0 in (0,1) and gamma > 1");
        }
        if self.exact_threshold > SUBSET_DP_MAX_ORDER || self.mis_threshold > MIS_EXACT_LIMIT {
            return invalid(format!(
                "exact_threshold ≤ {SUBSET_DP_MAX_ORDER} and mis_threshold ≤ {MIS_EXACT_LIMIT} required"
            ));
        }
        Ok(())
    }

    pub fn stability(&self, seed: u64) -> StabilityParams {
        StabilityParams {
            eps: self.eps,
            eta: self.eta,
            seed,
            hubs: HubPartitionParams {
                hub: HubParams {
                    delta0: self.delta0,
                    retries: self.retries.max(1),
                    smoke_requests: 0,
                    ..Default::default()
                },
                ..Default::default()
            },
            exact_alpha_order: self.mis_threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    /// Number of closed neighbourhoods deleted before this stage.
    pub depth: usize,
    pub order: usize,
    pub n: usize,
    pub stage: String,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub ell: usize,
    pub n: usize,
    pub order: usize,
    pub seed: u64,
    pub params: RunParams,
    pub stages: Vec<StageRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SearchOutcome {
    Certificate {
        certificate: Certificate,
    },
    /// No certificate was produced; never returned in place of a wrong one.
    Incomplete {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub report: RunReport,
}

impl SearchResult {
    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            SearchOutcome::Certificate { certificate } => Some(certificate),
            SearchOutcome::Incomplete { .. } => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("search result serializes")
    }
}

/// A uniformly random colouring of `K_order` with red probability `1/2`.
pub fn random_coloring(order: usize, seed: u64) -> EdgeColoring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    EdgeColoring::new(Graph::gnp(order, 0.5, &mut rng))
}

enum Level {
    Cycle(Vec<usize>),
    Independent(Vec<usize>),
    /// Delete the closed neighbourhood of this vertex and look for `n − 1`.
    Delete(usize),
    Incomplete(String),
}

/// A red `C_ℓ` or a blue `K_n` in a colouring of `K_N`, `N = (ℓ−1)(n−1)+1`.
///
/// Follows the induction: a vertex of red degree below `ℓ−1` is taken into
/// the independent set and its closed neighbourhood deleted, leaving a
/// problem for `n − 1`. Small orders go to the exact oracles; larger ones
/// run decomposition, absorption, separation and neighbour absorption, whose
/// chosen vertex is deleted the same way when its final absorption fails.
/// Exact and greedy fallbacks follow. The certificate is verified before it
/// is returned.
pub fn ramsey_search(
    c: &EdgeColoring,
    ell: usize,
    n: usize,
    params: &RunParams,
    seed: u64,
) -> Result<SearchResult> {
    if ell < 3 || n < 1 {
        return invalid(format!("need ℓ ≥ 3 and n ≥ 1, got ℓ = {ell}, n = {n}"));
    }
    params.validate()?;
    let want = (ell - 1) * (n - 1) + 1;
    if c.order() != want {
        return invalid(format!(
            "colouring has order {}, expected (ℓ−1)(n−1)+1 = {want}",
            c.order()
        ));
    }
    let red = &c.red;
    let mut report = RunReport {
        ell,
        n,
        order: want,
        seed,
        params: params.clone(),
        stages: Vec::new(),
    };
    let mut active = red.vertex_set();
    let mut picked: Vec<usize> = Vec::new();
    let mut depth = 0;
    let outcome = loop {
        let left = n - picked.len();
        if left == 0 {
            break SearchOutcome::Certificate {
                certificate: independent(picked.clone(), n),
            };
        }
        let (g, map) = red.induced_on(&active);
        let level_seed = seed.wrapping_add((depth as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut log = |stage: &str, outcome: String| {
            report.stages.push(StageRecord {
                depth,
                order: g.order(),
                n: left,
                stage: stage.into(),
                outcome,
            });
        };
        match level(&g, ell, left, params, level_seed, &mut log)? {
            Level::Cycle(vs) => {
                let vertices = vs.into_iter().map(|v| map.to_host[v]).collect();
                break SearchOutcome::Certificate {
                    certificate: Certificate::RedCycle { vertices, ell },
                };
            }
            Level::Independent(vs) => {
                let mut all = picked.clone();
                all.extend(vs.into_iter().map(|v| map.to_host[v]));
                break SearchOutcome::Certificate {
                    certificate: independent(all, n),
                };
            }
            Level::Delete(v) => {
                let host = map.to_host[v];
                picked.push(host);
                active.remove(host);
                active.difference_with(red.neighbors(host));
                depth += 1;
            }
            Level::Incomplete(reason) => break SearchOutcome::Incomplete { reason },
        }
    };
    if let SearchOutcome::Certificate { certificate } = &outcome {
        if !verify_certificate(c, certificate, ell, n)? {
            return Err(Error::GuaranteeViolated(format!(
                "certificate failed verification: {}",
                certificate.to_json()
            )));
        }
    }
    Ok(SearchResult { outcome, report })
}

fn independent(mut vertices: Vec<usize>, n: usize) -> Certificate {
    vertices.sort_unstable();
    Certificate::BlueIndependentSet { vertices, n }
}

fn level(
    g: &Graph,
    ell: usize,
    n: usize,
    params: &RunParams,
    seed: u64,
    log: &mut impl FnMut(&str, String),
) -> Result<Level> {
    let order = g.order();
    if order == 0 {
        return Ok(Level::Incomplete("no vertices left".into()));
    }
    if n == 1 {
        log("base", "single vertex".into());
        return Ok(Level::Independent(vec![0]));
    }
    if n == 2 {
        let non_edge = (0..order).find_map(|x| {
            g.neighbors(x)
                .complement()
                .iter()
                .find(|&y| y > x)
                .map(|y| (x, y))
        });
        if let Some((x, y)) = non_edge {
            log("base", "blue edge".into());
            return Ok(Level::Independent(vec![x, y]));
        }
        if order >= ell {
            log("base", "red clique".into());
            return Ok(Level::Cycle((0..ell).collect()));
        }
        return Ok(Level::Incomplete(format!(
            "red clique of order {order} < ℓ"
        )));
    }
    if let Some(v) = (0..order)
        .filter(|&v| g.degree(v) + 1 < ell)
        .min_by_key(|&v| (g.degree(v), v))
    {
        log(
            "low-degree-deletion",
            format!("vertex of degree {}", g.degree(v)),
        );
        return Ok(Level::Delete(v));
    }
    if order <= params.exact_threshold {
        if let Some(c) = find_cycle_exact(g, ell)? {
            log("exact", "red cycle".into());
            return Ok(Level::Cycle(c.vertices));
        }
        let mis = max_independent_set(g)?;
        if mis.len() >= n {
            log("exact", format!("independent set of size {}", mis.len()));
            return Ok(Level::Independent(mis.iter().take(n).collect()));
        }
        log("exact", format!("no red cycle and α = {}", mis.len()));
        return Ok(Level::Incomplete(format!(
            "order {order} has no red {ell}-cycle and no blue K_{n}: the colouring is a counterexample at this order"
        )));
    }
    if let Some(l) = pipeline(g, ell, n, params, seed, log)? {
        return Ok(l);
    }
    let cfg = CycleOracleConfig {
        dfs_budget: 5_000_000,
        max_color_work: 2e9,
        ..Default::default()
    };
    let exact = match find_cycle_exact_with(g, ell, &cfg) {
        Ok(r) => Some(r),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(Some(c)) = &exact {
        log("fallback-cycle", "red cycle".into());
        return Ok(Level::Cycle(c.vertices.clone()));
    }
    if order <= params.mis_threshold {
        let mis = max_independent_set(g)?;
        log("fallback-independent-set", format!("α = {}", mis.len()));
        if mis.len() >= n {
            return Ok(Level::Independent(mis.iter().take(n).collect()));
        }
    }
    let t = turan_independent_set(g);
    log(
        "fallback-greedy",
        format!("independent set of size {}", t.len()),
    );
    if t.len() >= n {
        return Ok(Level::Independent(t.iter().take(n).collect()));
    }
    Ok(Level::Incomplete(format!(
        "no certificate found at order {order} for n = {n}"
    )))
}

fn pipeline(
    g: &Graph,
    ell: usize,
    n: usize,
    params: &RunParams,
    seed: u64,
    log: &mut impl FnMut(&str, String),
) -> Result<Option<Level>> {
    let dec = match stability_decomposition(g, ell, n, &params.stability(seed))? {
        StabilityOutcome::FoundCycle { cycle } => {
            log("stability", "red cycle in a block".into());
            return Ok(Some(Level::Cycle(cycle.vertices)));
        }
        StabilityOutcome::Decomposition(d) => d,
    };
    log(
        "stability",
        format!(
            "{} blocks, leftover {}, guarantee met: {}",
            dec.blocks.len(),
            dec.leftover.len(),
            dec.guarantee_met
        ),
    );
    let state = match absorb_remainder(g, &dec, ell)? {
        AbsorbOutcome::FoundCycle { cycle } => {
            log("absorb-remainder", "red cycle".into());
            return Ok(Some(Level::Cycle(cycle.vertices)));
        }
        AbsorbOutcome::State(s) => s,
    };
    log(
        "absorb-remainder",
        format!(
            "remainder {}, rejected {}",
            state.remainder.len(),
            state.rejected
        ),
    );
    let sep = match separate_remainder(g, &state, ell)? {
        SeparateOutcome::FoundCycle { cycle } => {
            log("separate", "red cycle".into());
            return Ok(Some(Level::Cycle(cycle.vertices)));
        }
        SeparateOutcome::Split(s) => s,
    };
    log(
        "separate",
        format!("|S| = {}, |T| = {}", sep.s.len(), sep.t.len()),
    );
    if sep.t.is_empty() {
        return Ok(None);
    }
    match absorb_neighbours(g, &state, &sep, ell, seed, params.retries)? {
        NeighbourOutcome::FoundCycle { cycle } => {
            log("absorb-neighbours", "red cycle".into());
            Ok(Some(Level::Cycle(cycle.vertices)))
        }
        NeighbourOutcome::Unresolved { block, .. } => {
            log(
                "absorb-neighbours",
                format!("block {block}: no vertex survived"),
            );
            Ok(None)
        }
        NeighbourOutcome::Vertex {
            block,
            v,
            witnesses,
            ..
        } => {
            log(
                "absorb-neighbours",
                format!(
                    "block {block}, vertex {v}, {} absorbable neighbours",
                    witnesses.len()
                ),
            );
            let mut b = state.blocks[block].clone();
            let need = ell.saturating_sub(b.order());
            if need > 0 && witnesses.len() >= need {
                for w in witnesses.into_iter().take(need) {
                    b.absorb(w);
                }
                if let Ok(c) = block_cycle(g, &b, ell) {
                    log("final-absorption", "red cycle".into());
                    return Ok(Some(Level::Cycle(c.vertices)));
                }
            }
            let closed = g.degree(v) + 1;
            if g.order() - closed > (ell - 1) * (n - 2) {
                log("neighbourhood-deletion", format!("vertex {v}"));
                return Ok(Some(Level::Delete(v)));
            }
            Ok(None)
        }
    }
}
