//! Breadth-first layers, the growth cutoff, cycles of approximate length
//! and the layered decomposition into mutually non-adjacent sets.
//!
//! All `log_γ` bounds are rounded up by [`log_gamma_ceil`] so that
//! implementation and tests compare against the same integers.

use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use crate::extremal::long_path;
use crate::graph::{bipartite_half, k_core_set, Cycle, Graph};
use serde::{Deserialize, Serialize};

/// `⌈log_γ x⌉`, with a small tolerance so exact powers are not rounded past.
pub fn log_gamma_ceil(x: f64, gamma: f64) -> usize {
    let v = x.ln() / gamma.ln();
    (v - 1e-9).ceil().max(0.0) as usize
}

/// `log_γ x` as a real.
pub fn log_gamma(x: f64, gamma: f64) -> f64 {
    x.ln() / gamma.ln()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsLayers {
    pub root: usize,
    pub layers: Vec<Vec<usize>>,
    /// Indexed by host vertex; `None` for the root and for unreached vertices.
    pub parent: Vec<Option<usize>>,
}

impl BfsLayers {
    /// Layer index of `v`, if reached.
    pub fn depth(&self, v: usize) -> Option<usize> {
        if v == self.root {
            return Some(0);
        }
        let mut d = 0;
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            d += 1;
            cur = p;
        }
        (cur == self.root && d > 0).then_some(d)
    }

    /// Tree path from `v` up to the root, starting with `v`.
    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out
    }

    /// The unique tree path from `x` to `y`.
    pub fn tree_path(&self, x: usize, y: usize) -> Vec<usize> {
        let px = self.path_to_root(x);
        let py = self.path_to_root(y);
        let (mut i, mut j) = (px.len(), py.len());
        while i > 0 && j > 0 && px[i - 1] == py[j - 1] {
            i -= 1;
            j -= 1;
        }
        // px[i] == py[j] is the lowest common ancestor
        let mut out = px[..=i].to_vec();
        out.extend(py[..j].iter().rev());
        out
    }

    pub fn reached(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }
}

pub fn bfs_layers(g: &Graph, root: usize) -> Result<BfsLayers> {
    if root >= g.order() {
        return invalid(format!("root {root} outside [0,{})", g.order()));
    }
    Ok(bfs_within(g, root, &g.vertex_set()))
}

/// BFS from `root` inside `G[allowed]`. Parents are the lowest-index neighbour
/// in the previous layer.
pub(crate) fn bfs_within(g: &Graph, root: usize, allowed: &BitSet) -> BfsLayers {
    let n = g.order();
    let mut seen = BitSet::new(n);
    seen.insert(root);
    let mut parent = vec![None; n];
    let mut layers = vec![vec![root]];
    loop {
        let prev = layers.last().unwrap();
        let prev_set = BitSet::from_iter_with(n, prev.iter().copied());
        let mut next = g.neighborhood_of(&prev_set);
        next.intersect_with(allowed);
        next.difference_with(&seen);
        if next.is_empty() {
            break;
        }
        for v in next.iter() {
            parent[v] = g.neighbors(v).first_common(&prev_set);
        }
        seen.union_with(&next);
        layers.push(next.to_vec());
    }
    BfsLayers {
        root,
        layers,
        parent,
    }
}

/// Least `m` with `|V_0 ∪ … ∪ V_{m+1}| ≤ γ |V_0 ∪ … ∪ V_m|`.
pub fn growth_cutoff(layers: &BfsLayers, gamma: f64) -> Result<usize> {
    if gamma.is_nan() || gamma <= 1.0 {
        return invalid(format!("gamma must exceed 1, got {gamma}"));
    }
    let mut cum = 0usize;
    let sizes: Vec<usize> = layers.layers.iter().map(Vec::len).collect();
    for m in 0.. {
        cum += sizes.get(m).copied().unwrap_or(0);
        let next = cum + sizes.get(m + 1).copied().unwrap_or(0);
        if next as f64 <= gamma * cum as f64 {
            return Ok(m);
        }
    }
    unreachable!()
}

/// A cycle with length in `[d1, d1 + ⌈2 log_γ N⌉]`, given `d(G) ≥ 16 γ d1`.
pub fn cycle_in_range(g: &Graph, d1: usize, gamma: f64) -> Result<Cycle> {
    if d1 < 2 {
        return invalid(format!("d1 must be at least 2, got {d1}"));
    }
    if gamma.is_nan() || gamma <= 1.0 {
        return invalid(format!("gamma must exceed 1, got {gamma}"));
    }
    let need = 16.0 * gamma * d1 as f64;
    if g.average_degree() < need {
        return Err(Error::GuaranteeUnavailable(format!(
            "average degree {:.3} below 16·γ·d1 = {need}",
            g.average_degree()
        )));
    }
    let hi = d1 + log_gamma_ceil(g.order() as f64, gamma) * 2;
    cycle_in_window(g, d1, hi, gamma).ok_or_else(|| {
        Error::GuaranteeViolated(format!("no cycle with length in [{d1},{hi}] assembled"))
    })
}

/// The constructive core of [`cycle_in_range`] without the degree gate:
/// tries every root of the core and every layer pair below the cutoff.
pub(crate) fn cycle_in_window(g: &Graph, d1: usize, hi: usize, gamma: f64) -> Option<Cycle> {
    let half = bipartite_half(g).graph;
    let k = (half.average_degree() / 2.0).ceil() as usize;
    let core = k_core_set(&half, &half.vertex_set(), k);
    for root in core.iter() {
        let bfs = bfs_within(&half, root, &core);
        let m = growth_cutoff(&bfs, gamma).ok()?;
        for i in 0..=m.min(bfs.layers.len().saturating_sub(2)) {
            if let Some(c) = close_through_tree(&half, &bfs, i, d1, hi) {
                debug_assert!(c.validate(g).is_ok());
                return Some(c);
            }
        }
    }
    None
}

/// Long path in `G[V_i, V_{i+1}]`, trimmed to a window with both ends in `V_i`,
/// closed by the tree path between its ends.
fn close_through_tree(g: &Graph, bfs: &BfsLayers, i: usize, d1: usize, hi: usize) -> Option<Cycle> {
    let n = g.order();
    let vi = BitSet::from_iter_with(n, bfs.layers[i].iter().copied());
    let vj = BitSet::from_iter_with(n, bfs.layers[i + 1].iter().copied());
    let h = g.filter_edges(|a, b| {
        (vi.contains(a) && vj.contains(b)) || (vi.contains(b) && vj.contains(a))
    });
    if h.edge_count() == 0 {
        return None;
    }
    let path = long_path(&h, d1).ok().flatten()?.vertices;
    let lens: Vec<usize> = [d1, d1.saturating_sub(1), d1.saturating_sub(2)]
        .into_iter()
        .filter(|&l| l >= 2)
        .collect();
    for &len in &lens {
        for s in 0..path.len().saturating_sub(len) {
            let (x, y) = (path[s], path[s + len]);
            if !vi.contains(x) || !vi.contains(y) {
                continue;
            }
            let tp = bfs.tree_path(y, x);
            let total = len + tp.len() - 1;
            if total < d1 || total > hi {
                continue;
            }
            let mut cyc = path[s..=s + len].to_vec();
            cyc.extend(&tp[1..tp.len() - 1]);
            return Some(Cycle::unchecked(cyc));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompTriple {
    pub root: usize,
    pub set: Vec<usize>,
    /// Parent map of the BFS tree, indexed by host vertex.
    pub parent: Vec<Option<usize>>,
    pub depth: usize,
}

impl DecompTriple {
    /// Tree distance from `v` to the root.
    pub fn tree_distance(&self, v: usize) -> Option<usize> {
        let mut d = 0;
        let mut cur = v;
        while cur != self.root {
            cur = self.parent[cur]?;
            d += 1;
        }
        Some(d)
    }

    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out
    }
}

/// Disjoint, mutually non-adjacent sets, each at a fixed tree depth from
/// its root, together covering at least `N/(2γ)` vertices.
pub fn triple_decomposition(g: &Graph, gamma: f64) -> Result<Vec<DecompTriple>> {
    if gamma.is_nan() || gamma <= 1.0 {
        return invalid(format!("gamma must exceed 1, got {gamma}"));
    }
    Ok(decompose_within(g, &g.vertex_set(), gamma))
}

pub(crate) fn decompose_within(g: &Graph, within: &BitSet, gamma: f64) -> Vec<DecompTriple> {
    let mut out = Vec::new();
    let mut rest = within.clone();
    while let Some(root) = rest.first() {
        let bfs = bfs_within(g, root, &rest);
        let m = growth_cutoff(&bfs, gamma).expect("gamma checked");
        let top = m.min(bfs.layers.len() - 1);
        let size = |par: usize| -> usize {
            (0..=top)
                .filter(|j| j % 2 == par)
                .map(|j| bfs.layers[j].len())
                .sum()
        };
        let parity = if size(0) >= size(1) { 0 } else { 1 };
        let mut x = BitSet::new(g.order());
        for j in (0..=top).filter(|j| j % 2 == parity) {
            x.union_with(&BitSet::from_iter_with(
                g.order(),
                bfs.layers[j].iter().copied(),
            ));
            out.push(DecompTriple {
                root,
                set: bfs.layers[j].clone(),
                parent: bfs.parent.clone(),
                depth: j,
            });
        }
        let mut closed = g.neighborhood_of(&x);
        closed.union_with(&x);
        rest.difference_with(&closed);
    }
    out
}
