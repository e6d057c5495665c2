//! Hubs: a backbone cycle alternating between two sets `A` and `B`, plus a
//! reserve `D` of common neighbours, through which many disjoint paths of
//! prescribed lengths can be routed.

mod build;
mod connect;
mod handles;
mod partition;

pub use build::{build_hub, HubParams};
pub use connect::{
    check_connection, find_parity_matching, hub_connect, hub_connect_parity_broken, random_request,
    ConnectionRequest,
};
pub use handles::{cycle_from_handles, HandleSystem};
pub use partition::{hub_partition, HubPartition, HubPartitionParams};

use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use crate::graph::{Cycle, Graph, Relabel};
use serde::{Deserialize, Serialize};

const TOL: f64 = 1e-9;

/// `⌊u^{1−ε}⌋`: the most pairs one request may hold.
pub fn max_pairs(u: usize, eps: f64) -> usize {
    ((u as f64).powf(1.0 - eps) + TOL).floor() as usize
}

/// `⌊2(1−ε)u⌋`: the bound on `Σ(ℓ_i + 1)` in one request.
pub fn length_budget(u: usize, eps: f64) -> usize {
    (2.0 * (1.0 - eps) * u as f64 + TOL).floor() as usize
}

/// `⌈εu⌉`: the largest allowed reserve.
pub fn reserve_cap(u: usize, eps: f64) -> usize {
    (eps * u as f64 - TOL).ceil().max(0.0) as usize
}

/// `⌈u^{1−ε/2}⌉`: the required same-side common-neighbour count inside `D`.
pub fn floor_target(u: usize, eps: f64) -> usize {
    ((u as f64).powf(1.0 - eps / 2.0) - TOL).ceil() as usize
}

/// `⌈2u^{1−ε}⌉`: matching size inside `A` that makes a hub parity broken.
pub fn parity_threshold(u: usize, eps: f64) -> usize {
    (2.0 * (u as f64).powf(1.0 - eps) - TOL).ceil() as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// A verified `(u, ε)`-hub in host labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hub {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub d: Vec<usize>,
    pub u: usize,
    pub eps: f64,
    /// `a_1 b_1 a_2 b_2 … a_u b_u`.
    pub backbone: Cycle,
    /// Least `|N(c) ∩ N(c') ∩ D|` over same-side pairs.
    pub common_neighbor_floor: usize,
    /// A matching in `G[A]` of size at least `⌈2u^{1−ε}⌉`, once found.
    pub parity_matching: Option<Vec<(usize, usize)>>,
}

impl Hub {
    pub fn side(&self, v: usize) -> Option<Side> {
        if self.a.binary_search(&v).is_ok() {
            Some(Side::A)
        } else if self.b.binary_search(&v).is_ok() {
            Some(Side::B)
        } else {
            None
        }
    }

    pub fn is_parity_broken(&self) -> bool {
        self.parity_matching.is_some()
    }

    /// `A ∪ B ∪ D`.
    pub fn vertex_set(&self, order: usize) -> BitSet {
        BitSet::from_iter_with(order, self.a.iter().chain(&self.b).chain(&self.d).copied())
    }

    pub fn max_pairs(&self) -> usize {
        max_pairs(self.u, self.eps)
    }

    pub fn length_budget(&self) -> usize {
        length_budget(self.u, self.eps)
    }

    /// Looks for a parity matching and records it. Returns whether the hub is now parity broken.
    pub fn try_break_parity(&mut self, g: &Graph) -> bool {
        if self.parity_matching.is_none() {
            self.parity_matching = find_parity_matching(g, self);
        }
        self.parity_matching.is_some()
    }

    /// Rechecks every invariant against `g` exactly.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let n = g.order();
        let (u, eps) = (self.u, self.eps);
        let bad = |m: String| Err(Error::GuaranteeViolated(format!("hub invariant: {m}")));
        if self.a.len() != u || self.b.len() != u {
            return bad(format!(
                "|A| = {}, |B| = {}, u = {u}",
                self.a.len(),
                self.b.len()
            ));
        }
        if self.d.len() > reserve_cap(u, eps) {
            return bad(format!(
                "|D| = {} > ⌈εu⌉ = {}",
                self.d.len(),
                reserve_cap(u, eps)
            ));
        }
        let mut all = BitSet::new(n);
        for &v in self.a.iter().chain(&self.b).chain(&self.d) {
            if v >= n || !all.insert(v) {
                return bad(format!("vertex {v} out of range or repeated"));
            }
        }
        if !self.a.windows(2).all(|w| w[0] < w[1]) || !self.b.windows(2).all(|w| w[0] < w[1]) {
            return bad("A and B must be sorted".into());
        }
        let c = &self.backbone.vertices;
        if c.len() != 2 * u {
            return bad(format!("backbone has {} vertices", c.len()));
        }
        self.backbone.validate(g)?;
        for (i, &v) in c.iter().enumerate() {
            let want = if i % 2 == 0 { Side::A } else { Side::B };
            if self.side(v) != Some(want) {
                return bad(format!("backbone position {i} is not on side {want:?}"));
            }
        }
        let floor = common_floor(g, &self.a, &self.b, &self.d);
        if floor < self.common_neighbor_floor || self.common_neighbor_floor < floor_target(u, eps) {
            return bad(format!(
                "floor {floor} (stored {}) below ⌈u^(1-ε/2)⌉ = {}",
                self.common_neighbor_floor,
                floor_target(u, eps)
            ));
        }
        if let Some(m) = &self.parity_matching {
            let mut seen = BitSet::new(n);
            for &(x, y) in m {
                if self.side(x) != Some(Side::A)
                    || self.side(y) != Some(Side::A)
                    || !g.has_edge(x, y)
                {
                    return bad(format!("parity matching edge {x}-{y} not an edge of G[A]"));
                }
                if !seen.insert(x) || !seen.insert(y) {
                    return bad("parity matching edges overlap".into());
                }
            }
            if m.len() < parity_threshold(u, eps) {
                return bad("parity matching too small".into());
            }
        }
        Ok(())
    }

    /// Relabels from a derived graph into its host.
    pub fn mapped(&self, map: &Relabel) -> Hub {
        let sorted = |vs: &[usize]| {
            let mut w = map.map_all(vs);
            w.sort_unstable();
            w
        };
        Hub {
            a: sorted(&self.a),
            b: sorted(&self.b),
            d: sorted(&self.d),
            u: self.u,
            eps: self.eps,
            backbone: self.backbone.mapped(map),
            common_neighbor_floor: self.common_neighbor_floor,
            parity_matching: self
                .parity_matching
                .as_ref()
                .map(|m| m.iter().map(|&(x, y)| (map.host(x), map.host(y))).collect()),
        }
    }
}

/// Whether `ℓ` is a bipartite length for `{x, y}`: even for a same-side pair, odd otherwise.
pub fn bipartite_length_ok(hub: &Hub, x: usize, y: usize, ell: usize) -> Result<bool> {
    let (Some(sx), Some(sy)) = (hub.side(x), hub.side(y)) else {
        return invalid(format!("{x} or {y} is not in A ∪ B"));
    };
    if x == y {
        return invalid("endpoints must differ");
    }
    Ok(ell.is_multiple_of(2) == (sx == sy))
}

/// Least `|N(c) ∩ N(c') ∩ D|` over distinct pairs inside `A` and inside `B`.
pub(crate) fn common_floor(g: &Graph, a: &[usize], b: &[usize], d: &[usize]) -> usize {
    let dset = BitSet::from_iter_with(g.order(), d.iter().copied());
    let mut floor = usize::MAX;
    for side in [a, b] {
        for i in 0..side.len() {
            let ni = g.neighbors(side[i]);
            for &w in &side[i + 1..] {
                floor = floor.min(ni.intersection3_len(g.neighbors(w), &dset));
            }
        }
    }
    floor
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(max_pairs(100, 0.6), 6);
        assert_eq!(length_budget(100, 0.6), 80);
        assert_eq!(reserve_cap(100, 0.6), 60);
        assert_eq!(floor_target(100, 0.6), 26);
        assert_eq!(parity_threshold(100, 0.6), 13);
        // exact powers must not be nudged across an integer
        assert_eq!(max_pairs(16, 0.5), 4);
        assert_eq!(floor_target(16, 1.0), 4);
    }

    #[test]
    fn bipartite_lengths() {
        let g = Graph::complete_bipartite(16, 16);
        let hub = build_hub(&g, 6, 0.9, 1, &HubParams::default()).unwrap();
        let (a0, a1, b0) = (hub.a[0], hub.a[1], hub.b[0]);
        assert!(bipartite_length_ok(&hub, a0, a1, 4).unwrap());
        assert!(!bipartite_length_ok(&hub, a0, b0, 4).unwrap());
        assert!(bipartite_length_ok(&hub, a0, b0, 7).unwrap());
        assert!(bipartite_length_ok(&hub, a0, hub.d[0], 2).is_err());
    }
}
