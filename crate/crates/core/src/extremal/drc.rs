//! Dependent random choice: two disjoint sets in which every pair (and every
//! single vertex) has many common neighbours on the other side.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrcResult {
    pub u1: Vec<usize>,
    pub u2: Vec<usize>,
    /// Least `|N(a) ∩ N(a') ∩ U_{3−i}|` over pairs `a, a'` (equal allowed) in `U_i`, recomputed on return.
    pub witness_threshold: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrcParams {
    /// Edge-count exponent: requires `e ≥ N^{2−δ₀}`.
    pub delta0: f64,
    /// Smallest order accepted.
    pub n0: usize,
    pub retries: usize,
    /// Each side must keep at least this many vertices.
    pub min_side: usize,
}

impl Default for DrcParams {
    fn default() -> Self {
        DrcParams {
            delta0: 0.1,
            n0: 64,
            retries: 64,
            min_side: 2,
        }
    }
}

/// Checks the edge-count and order hypotheses, then finds sets whose pairs
/// share at least `⌈N^{1−ε}⌉` neighbours across.
pub fn dependent_random_choice(
    g: &Graph,
    eps: f64,
    seed: u64,
    params: &DrcParams,
) -> Result<DrcResult> {
    let n = g.order();
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must lie in (0,1), got {eps}"
        )));
    }
    if n < params.n0 {
        return Err(Error::GuaranteeUnavailable(format!(
            "order hypothesis failed: N = {n} < N_0 = {}",
            params.n0
        )));
    }
    let need = (n as f64).powf(2.0 - params.delta0);
    if (g.edge_count() as f64) < need {
        return Err(Error::GuaranteeUnavailable(format!(
            "edge-count hypothesis failed: e = {} < N^(2-{}) = {need:.1}",
            g.edge_count(),
            params.delta0
        )));
    }
    let threshold = (n as f64).powf(1.0 - eps).ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    drc_with_threshold(g, threshold, params.min_side, params.retries, &mut rng)
}

/// The search itself, without hypothesis checks.
pub(crate) fn drc_with_threshold(
    g: &Graph,
    threshold: usize,
    min_side: usize,
    retries: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DrcResult> {
    let n = g.order();
    let mut best: Option<DrcResult> = None;
    let mut best_sizes = (0, 0);
    if n == 0 {
        return Err(Error::Failure {
            attempts: 0,
            detail: "empty graph".into(),
        });
    }
    for attempt in 0..retries.max(1) {
        let pivots = 1 + attempt % 2;
        let mut u1 = BitSet::full(n);
        for _ in 0..pivots {
            let v = rng.gen_range(0..n);
            u1.intersect_with(g.neighbors(v));
        }
        if u1.is_empty() {
            continue;
        }
        let candidates = [u1.complement(), {
            let pool = u1.to_vec();
            let w = *pool.choose(rng).unwrap();
            g.neighbors(w).difference(&u1)
        }];
        for u2 in candidates {
            let (a, b) = prune(g, u1.clone(), u2, threshold);
            let sizes = (a.len().min(b.len()), a.len().max(b.len()));
            if sizes.0 >= min_side.max(1) && sizes > best_sizes {
                best_sizes = sizes;
                let w = witness(g, &a, &b);
                debug_assert!(w >= threshold);
                best = Some(DrcResult {
                    u1: a.to_vec(),
                    u2: b.to_vec(),
                    witness_threshold: w,
                });
            }
        }
        if best.is_some() && attempt >= 3 {
            break;
        }
    }
    best.ok_or_else(|| Error::Failure {
        attempts: retries.max(1),
        detail: format!(
            "no pair of sets with {min_side} vertices each reached threshold {threshold}"
        ),
    })
}

/// Removes vertices in bad pairs, alternating sides, until both sides are clean.
fn prune(g: &Graph, mut a: BitSet, mut b: BitSet, t: usize) -> (BitSet, BitSet) {
    loop {
        let ca = prune_side(g, &mut a, &b, t);
        let cb = prune_side(g, &mut b, &a, t);
        if !ca && !cb {
            return (a, b);
        }
    }
}

/// Drops from `side` the vertex in most bad pairs until none remain. Returns whether anything changed.
fn prune_side(g: &Graph, side: &mut BitSet, other: &BitSet, t: usize) -> bool {
    let mut changed = false;
    loop {
        let vs = side.to_vec();
        let mut bad = vec![0usize; vs.len()];
        let mut any = false;
        for i in 0..vs.len() {
            let ni = g.neighbors(vs[i]);
            if ni.intersection_len(other) < t {
                bad[i] += vs.len();
                any = true;
                continue;
            }
            for j in i + 1..vs.len() {
                if ni.intersection3_len(g.neighbors(vs[j]), other) < t {
                    bad[i] += 1;
                    bad[j] += 1;
                    any = true;
                }
            }
        }
        if !any {
            return changed;
        }
        let worst = (0..vs.len())
            .max_by_key(|&i| (bad[i], std::cmp::Reverse(vs[i])))
            .unwrap();
        side.remove(vs[worst]);
        changed = true;
    }
}

fn witness(g: &Graph, a: &BitSet, b: &BitSet) -> usize {
    let mut w = usize::MAX;
    for (x, y) in [(a, b), (b, a)] {
        let vs = x.to_vec();
        for i in 0..vs.len() {
            for j in i..vs.len() {
                w = w.min(g.neighbors(vs[i]).intersection3_len(g.neighbors(vs[j]), y));
            }
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_bipartite_sides() {
        let g = Graph::complete_bipartite(40, 40);
        let prm = DrcParams {
            delta0: 0.5,
            ..Default::default()
        };
        let r = dependent_random_choice(&g, 0.3, 1, &prm).unwrap();
        assert_eq!(r.u1.len(), 40);
        assert_eq!(r.u2.len(), 40);
        assert_eq!(r.witness_threshold, 40);
    }

    #[test]
    fn sparse_rejected() {
        let g = Graph::cycle(100);
        assert!(matches!(
            dependent_random_choice(&g, 0.5, 1, &DrcParams::default()),
            Err(Error::GuaranteeUnavailable(m)) if m.contains("edge-count")
        ));
    }

    #[test]
    fn dense_random_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = Graph::gnp(200, 0.5, &mut rng);
        // e ≈ 10^4 is below 200^1.9 ≈ 2.3·10^4, so the default δ₀ would reject it
        let prm = DrcParams {
            delta0: 0.5,
            ..Default::default()
        };
        let r = dependent_random_choice(&g, 0.5, 9, &prm).unwrap();
        let (a, b) = (
            BitSet::from_iter_with(200, r.u1.iter().copied()),
            BitSet::from_iter_with(200, r.u2.iter().copied()),
        );
        assert!(!a.intersects(&b));
        assert!(r.witness_threshold >= 15);
        assert_eq!(witness(&g, &a, &b), r.witness_threshold);
    }
}
