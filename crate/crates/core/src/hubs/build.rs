use super::{common_floor, floor_target, reserve_cap, Hub};
use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use crate::extremal::drc_with_threshold;
use crate::graph::{bipartite_half, Cycle, Graph};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HubParams {
    /// Density hypothesis `d(g) ≥ N^{1−δ₀}`.
    pub delta0: f64,
    /// Attempts, each with a fresh dependent-random-choice run and fresh reserves.
    pub retries: usize,
    /// Reserve samples tried per attempt.
    pub reserve_samples: usize,
    /// Random connection requests answered before the hub is returned.
    pub smoke_requests: usize,
}

impl Default for HubParams {
    fn default() -> Self {
        HubParams {
            delta0: 0.25,
            retries: 16,
            reserve_samples: 8,
            smoke_requests: 4,
        }
    }
}

/// Finds a `(u, ε)`-hub in a dense graph.
///
/// Dependent random choice on a bipartite half gives `U_1`, `U_2` where all
/// pairs share many neighbours across. `A` is `u` vertices of `U_1`, each
/// consecutive pair of `A` is joined through a fresh common neighbour in `U_2`
/// (these form `B`), and `D` is a random sample of the remaining vertices of
/// both sets. The invariants are checked exactly before returning.
pub fn build_hub(g: &Graph, u: usize, eps: f64, seed: u64, params: &HubParams) -> Result<Hub> {
    let n = g.order();
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("eps must lie in (0,1), got {eps}"));
    }
    if u < 2 {
        return invalid(format!("u must be at least 2, got {u}"));
    }
    let need = (n.max(1) as f64).powf(1.0 - params.delta0);
    if n == 0 || g.average_degree() < need {
        return Err(Error::GuaranteeUnavailable(format!(
            "DRC precondition failed: average degree {:.2} < N^(1-{}) = {need:.2}",
            g.average_degree(),
            params.delta0
        )));
    }
    let cap = reserve_cap(u, eps);
    let (res_b, res_a) = (cap.div_ceil(2), cap / 2);
    let target = floor_target(u, eps);
    if 2 * u + cap > n {
        return Err(Error::GuaranteeUnavailable(format!(
            "order {n} below 2u + ⌈εu⌉ = {}",
            2 * u + cap
        )));
    }

    let half = bipartite_half(g).graph;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_floor = 0;
    let mut last_err = String::from("no attempt ran");
    for _ in 0..params.retries.max(1) {
        let drc = match drc_with_threshold(&half, u + target, u + res_b.max(res_a), 8, &mut rng) {
            Ok(r) => r,
            Err(e) => {
                last_err = e.to_string();
                continue;
            }
        };
        let (mut u1, u2) = (drc.u1, drc.u2);
        if u1.len() < u + res_a || u2.len() < u + res_b {
            last_err = "dependent random choice sets too small".into();
            continue;
        }
        u1.shuffle(&mut rng);
        let a_order: Vec<usize> = u1[..u].to_vec();
        let Some(b_order) = backbone_links(&half, &a_order, &u2) else {
            last_err = "greedy backbone ran out of common neighbours".into();
            continue;
        };
        let a_set = BitSet::from_iter_with(n, a_order.iter().copied());
        let b_set = BitSet::from_iter_with(n, b_order.iter().copied());
        let mut pool_a: Vec<usize> = u1.iter().copied().filter(|&v| !a_set.contains(v)).collect();
        let mut pool_b: Vec<usize> = u2.iter().copied().filter(|&v| !b_set.contains(v)).collect();
        pool_a.sort_unstable();
        pool_b.sort_unstable();
        let mut a = a_order.clone();
        a.sort_unstable();
        let mut b = b_order.clone();
        b.sort_unstable();
        for _ in 0..params.reserve_samples.max(1) {
            pool_a.shuffle(&mut rng);
            pool_b.shuffle(&mut rng);
            let mut d: Vec<usize> = pool_a[..res_a]
                .iter()
                .chain(&pool_b[..res_b])
                .copied()
                .collect();
            d.sort_unstable();
            let floor = common_floor(g, &a, &b, &d);
            best_floor = best_floor.max(floor);
            if floor >= target {
                let backbone = a_order
                    .iter()
                    .zip(&b_order)
                    .flat_map(|(&x, &y)| [x, y])
                    .collect();
                let hub = Hub {
                    a,
                    b,
                    d,
                    u,
                    eps,
                    backbone: Cycle::unchecked(backbone),
                    common_neighbor_floor: floor,
                    parity_matching: None,
                };
                hub.verify(g)?;
                smoke_test(g, &hub, params.smoke_requests, &mut rng)?;
                return Ok(hub);
            }
        }
        last_err = format!("reserve floor {best_floor} below target {target}");
    }
    Err(Error::Failure {
        attempts: params.retries.max(1),
        detail: format!("best floor {best_floor} (target {target}); last: {last_err}"),
    })
}

/// `b_i` = lowest unused common neighbour in `pool` of `a_i` and `a_{i+1}`.
fn backbone_links(g: &Graph, a: &[usize], pool: &[usize]) -> Option<Vec<usize>> {
    let mut free = BitSet::from_iter_with(g.order(), pool.iter().copied());
    let k = a.len();
    let mut b = Vec::with_capacity(k);
    for i in 0..k {
        let mut cand = g.neighbors(a[i]).intersection(g.neighbors(a[(i + 1) % k]));
        cand.intersect_with(&free);
        let w = cand.first()?;
        free.remove(w);
        b.push(w);
    }
    Some(b)
}

fn smoke_test(g: &Graph, hub: &Hub, count: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    for _ in 0..count {
        let Some(req) = super::random_request(hub, rng) else {
            return Ok(());
        };
        let paths = super::hub_connect(g, hub, &req).map_err(|e| {
            Error::GuaranteeViolated(format!("smoke request failed on a verified hub: {e}"))
        })?;
        super::check_connection(g, hub, &req, &paths)?;
    }
    Ok(())
}
