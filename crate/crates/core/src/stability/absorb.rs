use super::decomposition::CliqueDecomposition;
use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use crate::extremal::{hamilton_cycle, pancyclic_cycle, Pancyclic};
use crate::graph::{Cycle, Graph, Path, Relabel};
use crate::oracles::{find_cycle_exact_with, CycleOracleConfig};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Node expansions allowed to one exact-length path search inside a block.
const PATH_SEARCH_BUDGET: u64 = 400_000;

/// A path of length at most 2 outside a block, attached to `a` (next to
/// `vertices[0]`) and `b` (next to the last vertex).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbedPath {
    pub vertices: Vec<usize>,
    pub a: usize,
    pub b: usize,
}

/// `W_i = V_i ∪ R_i` with its free attachment vertices `A_i ⊆ V_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockState {
    pub core: Vec<usize>,
    pub available: Vec<usize>,
    pub absorbed: Vec<AbsorbedPath>,
}

impl BlockState {
    pub fn new(core: Vec<usize>) -> Self {
        BlockState {
            available: core.clone(),
            core,
            absorbed: Vec::new(),
        }
    }

    /// `|R_i|`.
    pub fn absorbed_len(&self) -> usize {
        self.absorbed.iter().map(|p| p.vertices.len()).sum()
    }

    /// `|W_i|`.
    pub fn order(&self) -> usize {
        self.core.len() + self.absorbed_len()
    }

    pub fn vertex_set(&self, n: usize) -> BitSet {
        BitSet::from_iter_with(
            n,
            self.core
                .iter()
                .chain(self.absorbed.iter().flat_map(|p| &p.vertices))
                .copied(),
        )
    }

    /// Adds `p` and removes its attachments from `A_i`.
    pub fn absorb(&mut self, p: AbsorbedPath) {
        self.available.retain(|&v| v != p.a && v != p.b);
        self.absorbed.push(p);
    }

    /// The graph `H` on `W_i`: edges of `G[V_i]`, the absorbed paths and their attachment edges.
    pub fn local_graph(&self, g: &Graph) -> (Graph, Relabel) {
        let n = g.order();
        let (sub, map) = g.induced_on(&self.vertex_set(n));
        let local = |v: usize| map.from_host[v].expect("block vertex");
        let core = BitSet::from_iter_with(sub.order(), self.core.iter().map(|&v| local(v)));
        let mut extra = BTreeSet::new();
        for p in &self.absorbed {
            let chain: Vec<usize> = std::iter::once(p.a)
                .chain(p.vertices.iter().copied())
                .chain([p.b])
                .collect();
            for w in chain.windows(2) {
                let (x, y) = (local(w[0]), local(w[1]));
                extra.insert((x.min(y), x.max(y)));
            }
        }
        let h = sub
            .filter_edges(|x, y| (core.contains(x) && core.contains(y)) || extra.contains(&(x, y)));
        (h, map)
    }

    /// `δ(H[V]) ≥ 0.9|V|` and `|U| ≤ 0.1|V|`.
    pub fn hypotheses_hold(&self, g: &Graph) -> bool {
        let v = self.core.len();
        let core = BitSet::from_iter_with(g.order(), self.core.iter().copied());
        let delta = self
            .core
            .iter()
            .map(|&x| g.neighbors(x).intersection_len(&core))
            .min()
            .unwrap_or(0);
        10 * delta >= 9 * v && 10 * self.absorbed_len() <= v
    }

    /// Absorbed paths of length at most 2 with distinct attachments in `V_i`.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let core = BitSet::from_iter_with(g.order(), self.core.iter().copied());
        let mut ends = BTreeSet::new();
        for p in &self.absorbed {
            let ok = (1..=3).contains(&p.vertices.len())
                && p.a != p.b
                && core.contains(p.a)
                && core.contains(p.b)
                && ends.insert(p.a)
                && ends.insert(p.b)
                && g.has_edge(p.a, p.vertices[0])
                && g.has_edge(p.b, *p.vertices.last().unwrap())
                && p.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]));
            if !ok {
                return Err(Error::GuaranteeViolated(format!("bad absorbed path {p:?}")));
            }
        }
        Ok(())
    }
}

fn failure(block: &BlockState, g: &Graph, what: String) -> Error {
    if block.hypotheses_hold(g) {
        Error::GuaranteeViolated(what)
    } else {
        Error::GuaranteeUnavailable(format!(
            "{what}; block hypotheses δ ≥ 0.9|V|, |U| ≤ 0.1|V| fail"
        ))
    }
}

/// An `x`–`y` path of length exactly `len` through the block.
///
/// Window `2 ≤ len ≤ ⌊2v(H)/3⌋`, and `len ≥ 6` when an endpoint lies on an
/// absorbed path. The path grows greedily inside `V`, keeping attachment
/// vertices for last, and backtracks when stuck; endpoints on absorbed paths
/// leave through their recorded attachments.
pub fn block_path(g: &Graph, block: &BlockState, x: usize, y: usize, len: usize) -> Result<Path> {
    let n = g.order();
    let w = block.vertex_set(n);
    if x == y || x >= n || y >= n || !w.contains(x) || !w.contains(y) {
        return invalid(format!(
            "endpoints {x}, {y} must be distinct vertices of the block"
        ));
    }
    let core = BitSet::from_iter_with(n, block.core.iter().copied());
    let min = if core.contains(x) && core.contains(y) {
        2
    } else {
        6
    };
    let max = 2 * block.order() / 3;
    if len < min || len > max {
        return invalid(format!("path length {len} outside [{min}, {max}]"));
    }
    let (h, map) = block.local_graph(g);
    let local = |v: usize| map.from_host[v].expect("block vertex");
    let attach: BitSet = BitSet::from_iter_with(
        h.order(),
        block.absorbed.iter().flat_map(|p| [local(p.a), local(p.b)]),
    );
    let plain =
        BitSet::from_iter_with(h.order(), block.core.iter().map(|&v| local(v))).difference(&attach);
    let mut budget = PATH_SEARCH_BUDGET;
    match exact_length_path(&h, local(x), local(y), len, &plain, &mut budget) {
        Some(p) => Ok(Path::unchecked(
            p.into_iter().map(|v| map.to_host[v]).collect(),
        )),
        None => Err(failure(
            block,
            g,
            format!("no {x}–{y} path of length {len} found in the block"),
        )),
    }
}

/// Backtracking search for an `x`–`y` path with exactly `len` edges;
/// neighbours in `prefer` are tried first.
pub(crate) fn exact_length_path(
    h: &Graph,
    x: usize,
    y: usize,
    len: usize,
    prefer: &BitSet,
    budget: &mut u64,
) -> Option<Vec<usize>> {
    fn rec(
        h: &Graph,
        y: usize,
        len: usize,
        prefer: &BitSet,
        path: &mut Vec<usize>,
        used: &mut BitSet,
        budget: &mut u64,
    ) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let cur = *path.last().unwrap();
        let left = len + 1 - path.len();
        if left == 1 {
            if h.has_edge(cur, y) {
                path.push(y);
                return true;
            }
            return false;
        }
        let mut cand = h.neighbors(cur).difference(used);
        cand.remove(y);
        if left == 2 {
            cand.intersect_with(h.neighbors(y));
        }
        let first = cand.intersection(prefer);
        let rest = cand.difference(prefer);
        for v in first.iter().chain(rest.iter()) {
            path.push(v);
            used.insert(v);
            if rec(h, y, len, prefer, path, used, budget) {
                return true;
            }
            path.pop();
            used.remove(v);
        }
        false
    }
    if len == 0 || len >= h.order() {
        return None;
    }
    let mut path = vec![x];
    let mut used = BitSet::new(h.order());
    used.insert(x);
    used.insert(y);
    rec(h, y, len, prefer, &mut path, &mut used, budget).then_some(path)
}

/// An `ℓ`-cycle in the block, `3 ≤ ℓ ≤ v(H)`.
///
/// `ℓ ≤ |V|`: Dirac/Bondy on `G[V]`. Larger `ℓ`: absorbed paths are taken in
/// order until they hold at least `ℓ − |V|` vertices, each is contracted
/// with its attachments into one vertex joined to their common neighbours,
/// and a Hamilton cycle of a suitable subgraph is expanded. A budgeted exact
/// search on `G[W]` covers the cases where neither applies.
pub fn block_cycle(g: &Graph, block: &BlockState, ell: usize) -> Result<Cycle> {
    let v = block.core.len();
    if ell < 3 || ell > block.order() {
        return invalid(format!("cycle length {ell} outside [3, {}]", block.order()));
    }
    let n = g.order();
    let core = BitSet::from_iter_with(n, block.core.iter().copied());
    if ell <= v {
        let (sub, map) = g.induced_on(&core);
        if let Ok(Pancyclic::Found(c)) = pancyclic_cycle(&sub, ell) {
            return Ok(c.mapped(&map));
        }
    } else if let Some(c) = contracted_cycle(g, block, &core, ell) {
        return Ok(c);
    }
    let (sub, map) = g.induced_on(&block.vertex_set(n));
    let cfg = CycleOracleConfig {
        dfs_budget: 2_000_000,
        max_color_work: 5e8,
        ..Default::default()
    };
    match find_cycle_exact_with(&sub, ell, &cfg) {
        Ok(Some(c)) => Ok(c.mapped(&map)),
        Ok(None) | Err(Error::Capacity { .. }) => Err(failure(
            block,
            g,
            format!("no {ell}-cycle found in the block"),
        )),
        Err(e) => Err(e),
    }
}

fn contracted_cycle(g: &Graph, block: &BlockState, core: &BitSet, ell: usize) -> Option<Cycle> {
    let need = ell - block.core.len();
    let mut paths = Vec::new();
    let mut got = 0;
    for p in &block.absorbed {
        if got >= need {
            break;
        }
        got += p.vertices.len();
        paths.push(p);
    }
    let k = paths.len();
    // each contracted vertex stands for |P| + 2 vertices of the cycle
    let m = ell.checked_sub(paths.iter().map(|p| p.vertices.len() + 1).sum::<usize>())?;
    if m < k.max(3) {
        return None;
    }
    let mut free = core.clone();
    for p in &paths {
        free.remove(p.a);
        free.remove(p.b);
    }
    let hooks: Vec<BitSet> = paths
        .iter()
        .map(|p| {
            g.neighbors(p.a)
                .intersection(g.neighbors(p.b))
                .intersection(&free)
        })
        .collect();
    let mut pool = free.to_vec();
    pool.sort_by_key(|&x| std::cmp::Reverse(hooks.iter().filter(|h| h.contains(x)).count()));
    if pool.len() < m - k {
        return None;
    }
    let chosen = &pool[..m - k];
    // local ids: chosen vertices first, then one per contracted path
    let mut edges = Vec::new();
    for (i, &x) in chosen.iter().enumerate() {
        for (j, &y) in chosen.iter().enumerate().skip(i + 1) {
            if g.has_edge(x, y) {
                edges.push((i, j));
            }
        }
        for (t, h) in hooks.iter().enumerate() {
            if h.contains(x) {
                edges.push((i, m - k + t));
            }
        }
    }
    let aux = Graph::from_edges(m, &edges).ok()?;
    let ham = hamilton_cycle(&aux).ok()?;
    let mut vs = Vec::with_capacity(ell);
    let cyc = &ham.vertices;
    for (i, &c) in cyc.iter().enumerate() {
        if c < m - k {
            vs.push(chosen[c]);
            continue;
        }
        let p = paths[c - (m - k)];
        let prev = cyc[(i + m - 1) % m];
        // orient so the attachment next to the previous cycle vertex comes first
        let forward = prev >= m - k || g.has_edge(chosen[prev], p.a);
        let mut seg: Vec<usize> = std::iter::once(p.a)
            .chain(p.vertices.iter().copied())
            .chain([p.b])
            .collect();
        if !forward {
            seg.reverse();
        }
        vs.extend(seg);
    }
    Cycle::new_in(g, vs).ok().filter(|c| c.len() == ell)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionState {
    pub ell: usize,
    pub eta: f64,
    pub blocks: Vec<BlockState>,
    /// Vertices of the leftover not absorbed by any block.
    pub remainder: Vec<usize>,
    /// Candidate absorptions whose cycle extraction failed and were rolled back.
    pub rejected: usize,
    /// `|R_i| < ηℓ` for every block.
    pub small_absorbed: bool,
    /// `|A_i| ≥ (1−3η)ℓ` for every block.
    pub large_available: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AbsorbOutcome {
    State(AbsorptionState),
    FoundCycle { cycle: Cycle },
}

/// Moves short paths of the leftover into blocks.
///
/// Each round takes the first absorbable path `P` of length 0, then 1, then
/// 2 in `G[R]` (blocks in order, lowest vertices first) with distinct
/// attachments `a, b ∈ A_i`, moves `V(P)` into `R_i` and removes `a, b` from
/// `A_i`. When `|W_i|` would reach `ℓ` an `ℓ`-cycle is extracted from the
/// enlarged block; if that fails the move is undone and the candidate skipped.
pub fn absorb_remainder(g: &Graph, dec: &CliqueDecomposition, ell: usize) -> Result<AbsorbOutcome> {
    let n = g.order();
    let mut blocks: Vec<BlockState> = dec.blocks.iter().cloned().map(BlockState::new).collect();
    let mut rem = BitSet::from_iter_with(n, dec.leftover.iter().copied());
    let mut rejected: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    loop {
        let avail: Vec<BitSet> = blocks
            .iter()
            .map(|b| BitSet::from_iter_with(n, b.available.iter().copied()))
            .collect();
        let Some((i, p)) = next_absorbable(g, &rem, &avail, &rejected) else {
            break;
        };
        let mut trial = blocks[i].clone();
        trial.absorb(p.clone());
        if trial.order() >= ell {
            match block_cycle(g, &trial, ell) {
                Ok(c) => return Ok(AbsorbOutcome::FoundCycle { cycle: c }),
                Err(Error::GuaranteeViolated(_))
                | Err(Error::GuaranteeUnavailable(_))
                | Err(Error::InvalidArgument(_)) => {
                    let mut key = p.vertices.clone();
                    key.sort_unstable();
                    rejected.insert((i, key));
                    continue;
                }
                Err(e) => return Err(e),
            }
        }
        for &v in &p.vertices {
            rem.remove(v);
        }
        blocks[i] = trial;
    }
    for b in &blocks {
        b.check(g)?;
        if b.order() >= ell {
            return Err(Error::GuaranteeViolated(format!(
                "block of order {} ≥ ℓ after absorption",
                b.order()
            )));
        }
    }
    let l = ell as f64;
    let eta = dec.eta;
    Ok(AbsorbOutcome::State(AbsorptionState {
        ell,
        eta,
        small_absorbed: blocks.iter().all(|b| (b.absorbed_len() as f64) < eta * l),
        large_available: blocks
            .iter()
            .all(|b| b.available.len() as f64 >= (1.0 - 3.0 * eta) * l - 1e-9),
        blocks,
        remainder: rem.to_vec(),
        rejected: rejected.len(),
    }))
}

fn next_absorbable(
    g: &Graph,
    rem: &BitSet,
    avail: &[BitSet],
    rejected: &BTreeSet<(usize, Vec<usize>)>,
) -> Option<(usize, AbsorbedPath)> {
    let attach = |i: usize, s: usize, t: usize| -> Option<(usize, usize)> {
        let ns = g.neighbors(s).intersection(&avail[i]);
        let nt = g.neighbors(t).intersection(&avail[i]);
        ns.iter().find_map(|a| {
            let mut bs = nt.clone();
            bs.remove(a);
            bs.first().map(|b| (a, b))
        })
    };
    let ok = |i: usize, vs: &[usize]| {
        let mut key = vs.to_vec();
        key.sort_unstable();
        !rejected.contains(&(i, key))
    };
    for len in 0..=2 {
        for i in 0..avail.len() {
            for s in rem.iter() {
                let paths: Vec<Vec<usize>> = match len {
                    0 => vec![vec![s]],
                    1 => g
                        .neighbors(s)
                        .intersection(rem)
                        .iter()
                        .filter(|&t| t > s)
                        .map(|t| vec![s, t])
                        .collect(),
                    _ => {
                        let mids = g.neighbors(s).intersection(rem);
                        let mut out = Vec::new();
                        for m in mids.iter() {
                            let ends = g.neighbors(m).intersection(rem);
                            out.extend(ends.iter().filter(|&t| t > s).map(|t| vec![s, m, t]));
                        }
                        out
                    }
                };
                for vs in paths {
                    if !ok(i, &vs) {
                        continue;
                    }
                    if let Some((a, b)) = attach(i, vs[0], *vs.last().unwrap()) {
                        return Some((i, AbsorbedPath { vertices: vs, a, b }));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::decomposition::DecompositionChecks;

    fn decomposition(blocks: Vec<Vec<usize>>, leftover: Vec<usize>) -> CliqueDecomposition {
        CliqueDecomposition {
            blocks,
            leftover,
            eta: 0.1,
            guarantee_met: true,
            checks: DecompositionChecks {
                sizes: true,
                min_degree: true,
                coverage: true,
                no_cross_edges: true,
            },
            report: Default::default(),
        }
    }

    /// `K_v` on `0..v` plus extra edges.
    fn clique_plus(v: usize, order: usize, extra: &[(usize, usize)]) -> Graph {
        let mut edges = Graph::complete(v).edge_list();
        edges.extend_from_slice(extra);
        Graph::from_edges(order, &edges).unwrap()
    }

    #[test]
    fn paths_in_clique_block() {
        let g = Graph::complete(10);
        let b = BlockState::new((0..10).collect());
        for len in 2..=6 {
            let p = block_path(&g, &b, 0, 9, len).unwrap();
            p.validate(&g).unwrap();
            assert_eq!((p.len(), p.start(), p.end()), (len, 0, 9));
        }
        assert!(matches!(
            block_path(&g, &b, 0, 9, 7),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            block_path(&g, &b, 0, 9, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn path_from_absorbed_vertex() {
        // K_12 with a 2-path 12-13-14 attached to 0 and 1
        let g = clique_plus(12, 15, &[(12, 13), (13, 14), (0, 12), (1, 14)]);
        let mut b = BlockState::new((0..12).collect());
        b.absorb(AbsorbedPath {
            vertices: vec![12, 13, 14],
            a: 0,
            b: 1,
        });
        assert_eq!(b.available.len(), 10);
        let p = block_path(&g, &b, 13, 5, 7).unwrap();
        p.validate(&g).unwrap();
        assert_eq!((p.len(), p.start(), p.end()), (7, 13, 5));
        assert!(p.vertices[2] == 0 || p.vertices[2] == 1);
        assert!(block_path(&g, &b, 13, 5, 5).is_err());
    }

    #[test]
    fn clique_cycles_all_lengths() {
        let g = Graph::complete(10);
        let b = BlockState::new((0..10).collect());
        for ell in 3..=10 {
            let c = block_cycle(&g, &b, ell).unwrap();
            c.validate(&g).unwrap();
            assert_eq!(c.len(), ell);
        }
        assert!(matches!(
            block_cycle(&g, &b, 11),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn expanded_hamilton_cycle() {
        // K_9 and a 2-path 9-10-11 attached to 0 and 1, v(H) = 12
        let g = clique_plus(9, 12, &[(9, 10), (10, 11), (0, 9), (1, 11)]);
        let mut b = BlockState::new((0..9).collect());
        b.absorb(AbsorbedPath {
            vertices: vec![9, 10, 11],
            a: 0,
            b: 1,
        });
        for ell in [10, 11, 12] {
            let c = block_cycle(&g, &b, ell).unwrap();
            c.validate(&g).unwrap();
            assert_eq!(c.len(), ell);
        }
        assert!(matches!(
            block_cycle(&g, &b, 13),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn empty_remainder_is_noop() {
        let g = Graph::complete(6);
        let dec = decomposition(vec![(0..6).collect()], vec![]);
        let AbsorbOutcome::State(s) = absorb_remainder(&g, &dec, 8).unwrap() else {
            panic!()
        };
        assert_eq!(s.blocks[0], BlockState::new((0..6).collect()));
        assert!(s.remainder.is_empty());
    }

    #[test]
    fn isolated_vertex_absorbed() {
        let g = clique_plus(6, 7, &[(6, 2), (6, 4)]);
        let dec = decomposition(vec![(0..6).collect()], vec![6]);
        let AbsorbOutcome::State(s) = absorb_remainder(&g, &dec, 9).unwrap() else {
            panic!()
        };
        assert_eq!(
            s.blocks[0].absorbed,
            vec![AbsorbedPath {
                vertices: vec![6],
                a: 2,
                b: 4
            }]
        );
        assert_eq!(s.blocks[0].available, vec![0, 1, 3, 5]);
        assert!(s.remainder.is_empty());
    }

    #[test]
    fn overfull_block_yields_cycle() {
        // K_7, ℓ = 9: two pendant vertices each seeing two clique vertices
        let g = clique_plus(7, 9, &[(7, 0), (7, 1), (8, 2), (8, 3)]);
        let dec = decomposition(vec![(0..7).collect()], vec![7, 8]);
        match absorb_remainder(&g, &dec, 9).unwrap() {
            AbsorbOutcome::FoundCycle { cycle } => {
                cycle.validate(&g).unwrap();
                assert_eq!(cycle.len(), 9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn failed_extraction_rolls_back() {
        // hexagon with 6 seeing 0 and 2: the 7 vertices carry no 7-cycle
        let g = Graph::from_edges(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 0),
                (6, 0),
                (6, 2),
                (7, 6),
            ],
        )
        .unwrap();
        let dec = decomposition(vec![(0..6).collect()], vec![6, 7]);
        let AbsorbOutcome::State(s) = absorb_remainder(&g, &dec, 7).unwrap() else {
            panic!()
        };
        assert_eq!(s.rejected, 1);
        assert_eq!(s.blocks[0].order(), 6);
        assert_eq!(s.remainder, vec![6, 7]);
    }
}
