use super::{hub_connect, hub_connect_parity_broken, max_pairs, ConnectionRequest, Hub, Side};
use crate::bitset::BitSet;
use crate::error::{invalid, Result};
use crate::graph::{Cycle, Graph, Path};
use serde::{Deserialize, Serialize};

/// Paths `P_i` from `b_i` to `a_{i+1}` (indices cyclic) attached to hubs.
///
/// `hub_of[i]` indexes the hub slice passed to [`cycle_from_handles`];
/// `a_i` and `b_i` lie in `A ∪ B` of that hub.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleSystem {
    pub hub_of: Vec<usize>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub paths: Vec<Path>,
}

impl HandleSystem {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// `ℓ_total`, the summed handle length.
    pub fn total_length(&self) -> usize {
        self.paths.iter().map(Path::len).sum()
    }

    fn check(&self, g: &Graph, hubs: &[Hub]) -> Result<()> {
        let k = self.paths.len();
        if k == 0 || self.hub_of.len() != k || self.a.len() != k || self.b.len() != k {
            return invalid("handle system needs k ≥ 1 and matching lengths");
        }
        let n = g.order();
        let mut hub_vertices = BitSet::new(n);
        let mut used_hubs: Vec<usize> = self.hub_of.clone();
        used_hubs.sort_unstable();
        used_hubs.dedup();
        for &h in &used_hubs {
            let hub = hubs
                .get(h)
                .ok_or_else(|| crate::Error::InvalidArgument(format!("no hub {h}")))?;
            let vs = hub.vertex_set(n);
            if vs.intersects(&hub_vertices) {
                return invalid("hubs overlap");
            }
            hub_vertices.union_with(&vs);
            let hosted = self.hub_of.iter().filter(|&&x| x == h).count();
            if hosted > max_pairs(hub.u, hub.eps) / 2 {
                return invalid(format!(
                    "hub {h} hosts {hosted} attachments, more than ⌊u^(1-ε)⌋/2"
                ));
            }
        }
        let mut ends = BitSet::new(n);
        for i in 0..k {
            let hub = &hubs[self.hub_of[i]];
            for v in [self.a[i], self.b[i]] {
                if hub.side(v).is_none() {
                    return invalid(format!(
                        "attachment {v} not in A ∪ B of hub {}",
                        self.hub_of[i]
                    ));
                }
                if !ends.insert(v) {
                    return invalid(format!("attachment {v} repeated"));
                }
            }
        }
        let mut interior = BitSet::new(n);
        for (i, p) in self.paths.iter().enumerate() {
            p.validate(g)?;
            if p.is_empty() || p.start() != self.b[i] || p.end() != self.a[(i + 1) % k] {
                return invalid(format!(
                    "handle {i} must run from b_{i} to a_{} with length ≥ 1",
                    (i + 1) % k
                ));
            }
            for &v in &p.vertices[1..p.vertices.len() - 1] {
                if hub_vertices.contains(v) || !interior.insert(v) {
                    return invalid(format!("handle vertex {v} meets a hub or another handle"));
                }
            }
        }
        Ok(())
    }
}

/// An `ℓ`-cycle through the handles, each hub joining its attachment pairs
/// by paths whose lengths add up to `ℓ − ℓ_total`.
///
/// Same parity: every attachment pair in `A` of its hub and `ℓ ≡ ℓ_total`
/// (mod 2), window `[2k + ℓ_total, Σ_H ⌊2(1−ε)u⌋ + ℓ_total − 2k]`.
/// Parity broken: some used hub is parity broken, lower end `7k + ℓ_total`.
pub fn cycle_from_handles(g: &Graph, hubs: &[Hub], hs: &HandleSystem, ell: usize) -> Result<Cycle> {
    hs.check(g, hubs)?;
    let k = hs.len();
    let total = hs.total_length();
    let mut used: Vec<usize> = hs.hub_of.clone();
    used.sort_unstable();
    used.dedup();
    let budget_sum: usize = used.iter().map(|&h| hubs[h].length_budget()).sum();
    let upper = (budget_sum + total).saturating_sub(2 * k);
    let all_in_a = (0..k).all(|i| {
        let h = &hubs[hs.hub_of[i]];
        h.side(hs.a[i]) == Some(Side::A) && h.side(hs.b[i]) == Some(Side::A)
    });
    let any_broken = used.iter().any(|&h| hubs[h].is_parity_broken());
    let case_i = all_in_a && ell % 2 == total % 2;
    let lower = if case_i {
        2 * k + total
    } else if any_broken {
        7 * k + total
    } else {
        return invalid(format!(
            "ℓ = {ell}: needs all attachments in A with ℓ ≡ ℓ_total = {total} (mod 2), or a parity-broken hub"
        ));
    };
    if ell < lower || ell > upper {
        return invalid(format!("ℓ = {ell} outside window [{lower}, {upper}]"));
    }
    let lengths = split_lengths(hubs, hs, ell - total)?;

    let mut hub_paths: Vec<Option<Path>> = vec![None; k];
    for &h in &used {
        let idx: Vec<usize> = (0..k).filter(|&i| hs.hub_of[i] == h).collect();
        let req = ConnectionRequest::new(
            idx.iter().map(|&i| (hs.a[i], hs.b[i])).collect(),
            idx.iter().map(|&i| lengths[i]).collect(),
        );
        let hub = &hubs[h];
        let needs_split = idx
            .iter()
            .any(|&i| (lengths[i] % 2 == 0) != (hub.side(hs.a[i]) == hub.side(hs.b[i])));
        let paths = if needs_split {
            hub_connect_parity_broken(g, hub, &req)?
        } else {
            hub_connect(g, hub, &req)?
        };
        for (i, p) in idx.into_iter().zip(paths) {
            hub_paths[i] = Some(p);
        }
    }
    let mut vs = Vec::with_capacity(ell);
    for (slot, handle) in hub_paths.iter_mut().zip(&hs.paths) {
        vs.extend(slot.take().expect("every pair routed").vertices);
        let h = &handle.vertices;
        vs.extend_from_slice(&h[1..h.len() - 1]);
    }
    let c = Cycle::new_in(g, vs)?;
    debug_assert_eq!(c.len(), ell);
    Ok(c)
}

/// Minimum feasible lengths, one parity flip on a parity-broken hub when the
/// remainder is odd, then the rest poured in steps of 2 into the first pairs
/// whose hub budget has room.
fn split_lengths(hubs: &[Hub], hs: &HandleSystem, target: usize) -> Result<Vec<usize>> {
    let k = hs.len();
    let mut len: Vec<usize> = (0..k)
        .map(|i| {
            let h = &hubs[hs.hub_of[i]];
            if h.side(hs.a[i]) == h.side(hs.b[i]) {
                2
            } else {
                3
            }
        })
        .collect();
    let base: usize = len.iter().sum();
    if target < base {
        return invalid(format!("ℓ − ℓ_total = {target} below the minimum {base}"));
    }
    let mut rem = target - base;
    let room = |len: &[usize], h: usize| {
        let spent: usize = (0..k)
            .filter(|&i| hs.hub_of[i] == h)
            .map(|i| len[i] + 1)
            .sum();
        hubs[h].length_budget().saturating_sub(spent)
    };
    if rem % 2 == 1 {
        // 2 → 7 or 3 → 8: the smallest wrong-parity length a broken hub accepts
        let flip = (0..k)
            .find(|&i| hubs[hs.hub_of[i]].is_parity_broken() && room(&len, hs.hub_of[i]) >= 5);
        match flip {
            Some(i) if rem >= 5 => {
                len[i] += 5;
                rem -= 5;
            }
            _ => return invalid("odd remainder and no parity-broken hub can absorb it"),
        }
    }
    for i in 0..k {
        if rem == 0 {
            break;
        }
        let add = room(&len, hs.hub_of[i]).min(rem) / 2 * 2;
        len[i] += add;
        rem -= add;
    }
    if rem > 0 {
        return invalid("hub budgets cannot absorb the requested length");
    }
    Ok(len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hubs::{build_hub, HubParams};

    /// Two copies of `K_{4u,4u}` with a hub in each.
    fn two_hubs(u: usize, eps: f64) -> (Vec<Graph>, Vec<Hub>) {
        let block = Graph::complete_bipartite(4 * u, 4 * u);
        let hub = build_hub(&block, u, eps, 2, &HubParams::default()).unwrap();
        let shift = |h: &Hub, off: usize| {
            let map = crate::graph::Relabel {
                to_host: (0..8 * u).map(|v| v + off).collect(),
                from_host: vec![],
            };
            h.mapped(&map)
        };
        (vec![block], vec![hub.clone(), shift(&hub, 8 * u)])
    }

    #[test]
    fn two_hubs_two_handles() {
        let u = 100;
        let (blocks, hubs) = two_hubs(u, 0.6);
        let (h0, h1) = (&hubs[0], &hubs[1]);
        // handles a-side to a-side across the blocks
        let mut edges = Graph::disjoint_union(&[blocks[0].clone(), blocks[0].clone()]).edge_list();
        edges.push((h0.a[1], h1.a[0]));
        edges.push((h1.a[1], h0.a[0]));
        let g = Graph::from_edges(16 * u, &edges).unwrap();
        let hs = HandleSystem {
            hub_of: vec![0, 1],
            a: vec![h0.a[0], h1.a[0]],
            b: vec![h0.a[1], h1.a[1]],
            paths: vec![
                Path::unchecked(vec![h0.a[1], h1.a[0]]),
                Path::unchecked(vec![h1.a[1], h0.a[0]]),
            ],
        };
        // window [2k + 2, 2·80 + 2 − 4] = [6, 158], even lengths only
        for ell in [6, 40, 82, 158] {
            let c = cycle_from_handles(&g, &hubs, &hs, ell).unwrap();
            assert_eq!(c.len(), ell);
            c.validate(&g).unwrap();
        }
        assert!(cycle_from_handles(&g, &hubs, &hs, 160).is_err());
        assert!(cycle_from_handles(&g, &hubs, &hs, 41).is_err());
    }

    #[test]
    fn single_returning_handle() {
        let u = 100;
        let (blocks, hubs) = two_hubs(u, 0.6);
        let h = &hubs[0];
        let mut edges = blocks[0].edge_list();
        edges.push((h.a[0], h.a[1]));
        let g = Graph::from_edges(8 * u, &edges).unwrap();
        let hs = HandleSystem {
            hub_of: vec![0],
            a: vec![h.a[0]],
            b: vec![h.a[1]],
            paths: vec![Path::unchecked(vec![h.a[1], h.a[0]])],
        };
        let c = cycle_from_handles(&g, &hubs[..1], &hs, 3).unwrap();
        assert_eq!(c.len(), 3);
    }
}
