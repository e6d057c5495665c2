use super::{build_hub, Hub, HubParams};
use crate::bitset::BitSet;
use crate::dense::{dense_under_indep_bound, AlphaCheck, DenseOptions, DenseOutcome};
use crate::error::{invalid, Result};
use crate::graph::Graph;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HubPartitionParams {
    /// Hub size; `⌊ℓ^{1−ε}⌋` when unset.
    pub u: Option<usize>,
    /// Exponent in `γ = ℓ^β` and `d = ℓ^{1−β}` for dense-block extraction.
    pub beta: f64,
    pub hub: HubParams,
}

impl Default for HubPartitionParams {
    fn default() -> Self {
        HubPartitionParams {
            u: None,
            beta: 0.25,
            hub: HubParams {
                smoke_requests: 0,
                ..Default::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HubPartition {
    pub hubs: Vec<Hub>,
    pub leftover: Vec<usize>,
    /// `|W| ≤ εN` at the end.
    pub guarantee_met: bool,
}

/// Disjoint hubs covering all but a small leftover, best effort.
///
/// Each round tries every component of what is left, largest first: a hub
/// built on the whole component, else on the dense block that
/// `dense_under_indep_bound` (`D = ℓ`, `γ = ℓ^β`, `d = ℓ^{1−β}`) finds in it.
/// Continues until no component yields a hub; the flag records whether the
/// leftover ended at most `εN`.
pub fn hub_partition(
    g: &Graph,
    ell: usize,
    eps: f64,
    seed: u64,
    params: &HubPartitionParams,
) -> Result<HubPartition> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("eps must lie in (0,1), got {eps}"));
    }
    if ell < 3 {
        return invalid(format!("ell must be at least 3, got {ell}"));
    }
    let n = g.order();
    let u = params
        .u
        .unwrap_or(((ell as f64).powf(1.0 - eps) + 1e-9).floor() as usize);
    let limit = eps * n as f64;
    let mut left = g.vertex_set();
    let mut hubs = Vec::new();
    let mut round = 0u64;
    loop {
        let mut comps = g.components_within(&left);
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let mut found = None;
        for comp in comps.iter().filter(|c| c.len() >= 2 * u) {
            let s = seed.wrapping_add(round.wrapping_mul(0x9E37_79B9));
            round += 1;
            if let Some(h) = hub_in(g, comp, ell, u, eps, s, params) {
                found = Some(h);
                break;
            }
        }
        let Some(hub) = found else { break };
        left.difference_with(&hub.vertex_set(n));
        hubs.push(hub);
    }
    Ok(HubPartition {
        hubs,
        leftover: left.to_vec(),
        guarantee_met: left.len() as f64 <= limit,
    })
}

fn hub_in(
    g: &Graph,
    comp: &[usize],
    ell: usize,
    u: usize,
    eps: f64,
    seed: u64,
    params: &HubPartitionParams,
) -> Option<Hub> {
    let set = BitSet::from_iter_with(g.order(), comp.iter().copied());
    let (sub, map) = g.induced_on(&set);
    if let Ok(h) = build_hub(&sub, u, eps, seed, &params.hub) {
        return Some(h.mapped(&map));
    }
    let l = ell as f64;
    let opts = DenseOptions {
        ell,
        enforce_hypotheses: false,
        alpha_check: AlphaCheck::Assumed,
    };
    let gamma = l.powf(params.beta).max(1.0 + 1e-6);
    let Ok(DenseOutcome::Dense { vertices, .. }) =
        dense_under_indep_bound(&sub, ell, gamma, l.powf(1.0 - params.beta), &opts)
    else {
        return None;
    };
    let block = BitSet::from_iter_with(sub.order(), vertices.iter().copied());
    let (bsub, bmap) = sub.induced_on(&block);
    build_hub(&bsub, u, eps, seed, &params.hub)
        .ok()
        .map(|h| h.mapped(&bmap.then(&map)))
}
