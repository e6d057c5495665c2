//! Exact fixed-length cycle detection.
//!
//! Orders up to [`SUBSET_DP_MAX_ORDER`] use a deterministic subset dynamic
//! program over `(vertex set, endpoint)`. Larger graphs first run a budgeted
//! exhaustive DFS, then colour-coding with enough trials to push the miss
//! probability below `2^-40`.

use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use crate::graph::{Cycle, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest order handled by the subset DP (table of `2^24` words).
pub const SUBSET_DP_MAX_ORDER: usize = 24;

#[derive(Clone, Debug)]
pub struct CycleOracleConfig {
    /// Node expansions the exhaustive DFS may spend before handing over.
    pub dfs_budget: u64,
    /// Cap on `trials · 2^ℓ · 2e(G) · ⌈N/64⌉` for colour-coding.
    pub max_color_work: f64,
    pub seed: u64,
}

impl Default for CycleOracleConfig {
    fn default() -> Self {
        CycleOracleConfig {
            dfs_budget: 20_000_000,
            max_color_work: 2e10,
            seed: 0x5eed_c0de,
        }
    }
}

/// Returns an `ell`-cycle of `g` if one exists.
pub fn find_cycle_exact(g: &Graph, ell: usize) -> Result<Option<Cycle>> {
    find_cycle_exact_with(g, ell, &CycleOracleConfig::default())
}

pub fn find_cycle_exact_with(
    g: &Graph,
    ell: usize,
    cfg: &CycleOracleConfig,
) -> Result<Option<Cycle>> {
    if ell < 3 {
        return invalid(format!("cycle length must be at least 3, got {ell}"));
    }
    if ell > g.order() {
        return Ok(None);
    }
    let found = if g.order() <= SUBSET_DP_MAX_ORDER {
        subset_dp(g, ell)
    } else {
        match bounded_dfs(g, ell, cfg.dfs_budget) {
            DfsOutcome::Found(c) => Some(c),
            DfsOutcome::Absent => None,
            DfsOutcome::OutOfBudget => color_coding(g, ell, cfg)?,
        }
    };
    if let Some(c) = &found {
        debug_assert!(c.validate(g).is_ok() && c.len() == ell);
    }
    Ok(found)
}

fn subset_dp(g: &Graph, ell: usize) -> Option<Cycle> {
    let n = g.order();
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, w| m | (1 << w)))
        .collect();
    let full: u32 = if n == 32 { !0 } else { (1u32 << n) - 1 };
    let mut dp = vec![0u32; 1usize << n];
    for s in 0..n {
        dp[1 << s] = 1 << s;
    }
    for mask in 1usize..(1usize << n) {
        let ends = dp[mask];
        if ends == 0 {
            continue;
        }
        let m = mask as u32;
        let low = m.trailing_zeros();
        if m.count_ones() as usize == ell {
            if ends & adj[low as usize] != 0 {
                return Some(reconstruct_dp(&dp, &adj, mask, ends & adj[low as usize]));
            }
            continue;
        }
        let above_low = !((1u32 << (low + 1)) - 1);
        let allowed = full & !m & above_low;
        let mut e = ends;
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut nxt = adj[v] & allowed;
            while nxt != 0 {
                let w = nxt.trailing_zeros();
                nxt &= nxt - 1;
                dp[mask | (1usize << w)] |= 1 << w;
            }
        }
    }
    None
}

fn reconstruct_dp(dp: &[u32], adj: &[u32], mask: usize, closing_ends: u32) -> Cycle {
    let mut v = closing_ends.trailing_zeros() as usize;
    let mut m = mask;
    let mut seq = vec![v];
    while (m as u32).count_ones() > 1 {
        let prev = m ^ (1 << v);
        let cands = dp[prev] & adj[v];
        let u = cands.trailing_zeros() as usize;
        debug_assert!(cands != 0);
        seq.push(u);
        m = prev;
        v = u;
    }
    seq.reverse();
    Cycle::unchecked(seq)
}

enum DfsOutcome {
    Found(Cycle),
    Absent,
    OutOfBudget,
}

fn bounded_dfs(g: &Graph, ell: usize, budget: u64) -> DfsOutcome {
    let n = g.order();
    let mut spent = 0u64;
    for s in 0..n {
        // vertices above s only, so each cycle is met from its lowest vertex
        let mut allowed = BitSet::new(n);
        for v in s + 1..n {
            allowed.insert(v);
        }
        let dist = distances_to(g, s, &allowed);
        let mut path = vec![s];
        let mut used = BitSet::new(n);
        used.insert(s);
        match dfs_step(
            g, ell, &allowed, &dist, &mut path, &mut used, &mut spent, budget,
        ) {
            Some(true) => return DfsOutcome::Found(Cycle::unchecked(path)),
            Some(false) => {}
            None => return DfsOutcome::OutOfBudget,
        }
    }
    DfsOutcome::Absent
}

fn distances_to(g: &Graph, s: usize, allowed: &BitSet) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.order()];
    dist[s] = 0;
    let mut q = std::collections::VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for w in g.neighbors(v).intersection(allowed).iter() {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

/// `Some(true)` found (path holds the cycle), `Some(false)` exhausted, `None` budget hit.
#[allow(clippy::too_many_arguments)]
fn dfs_step(
    g: &Graph,
    ell: usize,
    allowed: &BitSet,
    dist: &[usize],
    path: &mut Vec<usize>,
    used: &mut BitSet,
    spent: &mut u64,
    budget: u64,
) -> Option<bool> {
    *spent += 1;
    if *spent > budget {
        return None;
    }
    let depth = path.len() - 1;
    let cur = *path.last().unwrap();
    if path.len() == ell {
        return Some(g.has_edge(cur, path[0]));
    }
    let mut cands = g.neighbors(cur).intersection(allowed);
    cands.difference_with(used);
    for w in cands.iter() {
        // after stepping to w we sit at depth+1 and still need a return of ell-(depth+1) edges
        if dist[w] == usize::MAX || dist[w] > ell - (depth + 1) {
            continue;
        }
        path.push(w);
        used.insert(w);
        match dfs_step(g, ell, allowed, dist, path, used, spent, budget) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => return None,
        }
        path.pop();
        used.remove(w);
    }
    Some(false)
}

/// Trials needed so that a fixed `ell`-cycle is colourful in at least one trial
/// except with probability `2^-40`.
pub fn color_coding_trials(ell: usize) -> u64 {
    // P(colourful) = ell!/ell^ell; trials = ceil(40 ln 2 / P)
    let ln_p: f64 =
        (1..=ell).map(|i| (i as f64).ln()).sum::<f64>() - ell as f64 * (ell as f64).ln();
    (40.0 * std::f64::consts::LN_2 / ln_p.exp()).ceil() as u64
}

fn color_coding(g: &Graph, ell: usize, cfg: &CycleOracleConfig) -> Result<Option<Cycle>> {
    let n = g.order();
    let trials = color_coding_trials(ell);
    let work = trials as f64
        * (1u64 << ell.min(62)) as f64
        * (2 * g.edge_count()).max(1) as f64
        * n.div_ceil(64) as f64;
    if ell > 30 || work > cfg.max_color_work {
        return Err(Error::Capacity {
            what: "colour-coding work for cycle detection",
            limit: cfg.max_color_work as usize,
            got: work.min(usize::MAX as f64) as usize,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (ell as u64) << 32);
    let sets = 1usize << ell;
    for _ in 0..trials {
        let color: Vec<usize> = (0..n).map(|_| rng.gen_range(0..ell)).collect();
        // reach[S * n + v] = starts with a colourful path to v using colours S
        let mut reach: Vec<Option<BitSet>> = vec![None; sets * n];
        for v in 0..n {
            let mut b = BitSet::new(n);
            b.insert(v);
            reach[(1 << color[v]) * n + v] = Some(b);
        }
        for s in 1..sets {
            if (s.count_ones() as usize) >= ell {
                continue;
            }
            for v in 0..n {
                let Some(src) = reach[s * n + v].clone() else {
                    continue;
                };
                for w in g.neighbors(v).iter() {
                    if s & (1 << color[w]) != 0 {
                        continue;
                    }
                    let t = (s | (1 << color[w])) * n + w;
                    match &mut reach[t] {
                        Some(b) => b.union_with(&src),
                        slot @ None => *slot = Some(src.clone()),
                    }
                }
            }
        }
        let fullset = sets - 1;
        for v in 0..n {
            if let Some(starts) = &reach[fullset * n + v] {
                if let Some(s0) = starts.first_common(g.neighbors(v)) {
                    let mut seq = vec![v];
                    let mut set = fullset;
                    let mut cur = v;
                    while seq.len() < ell {
                        let prev_set = set & !(1 << color[cur]);
                        let u = g
                            .neighbors(cur)
                            .iter()
                            .find(|&u| {
                                reach[prev_set * n + u]
                                    .as_ref()
                                    .is_some_and(|b| b.contains(s0))
                            })
                            .expect("colour-coding back-pointer");
                        seq.push(u);
                        set = prev_set;
                        cur = u;
                    }
                    seq.reverse();
                    return Ok(Some(Cycle::unchecked(seq)));
                }
            }
        }
    }
    Ok(None)
}

/// All cycles of length `3..=max_len`, each reported once: starting at its
/// lowest vertex, with the second vertex smaller than the last.
pub fn short_cycles(g: &Graph, max_len: usize) -> Vec<Cycle> {
    let n = g.order();
    let mut out = Vec::new();
    if max_len < 3 {
        return out;
    }
    for s in 0..n {
        let mut path = vec![s];
        let mut used = BitSet::new(n);
        used.insert(s);
        collect_cycles(g, s, max_len, &mut path, &mut used, &mut out);
    }
    out
}

fn collect_cycles(
    g: &Graph,
    s: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    used: &mut BitSet,
    out: &mut Vec<Cycle>,
) {
    let cur = *path.last().unwrap();
    for w in g.neighbors(cur).iter() {
        if w <= s {
            if w == s && path.len() >= 3 && path[1] < cur {
                out.push(Cycle::unchecked(path.clone()));
            }
            continue;
        }
        if used.contains(w) || path.len() >= max_len {
            continue;
        }
        path.push(w);
        used.insert(w);
        collect_cycles(g, s, max_len, path, used, out);
        path.pop();
        used.remove(w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::chvatal_harary;

    #[test]
    fn cycle_graph_lengths() {
        let g = Graph::cycle(7);
        let c = find_cycle_exact(&g, 7).unwrap().unwrap();
        assert_eq!(c.len(), 7);
        c.validate(&g).unwrap();
        assert!(find_cycle_exact(&g, 6).unwrap().is_none());
    }

    #[test]
    fn petersen_lengths() {
        let g = Graph::petersen();
        assert!(find_cycle_exact(&g, 5).unwrap().is_some());
        for ell in [3, 4, 7] {
            assert!(find_cycle_exact(&g, ell).unwrap().is_none(), "ell={ell}");
        }
        // Petersen has cycles of lengths 5, 6, 8, 9 only
        for ell in [6, 8, 9] {
            assert!(find_cycle_exact(&g, ell).unwrap().is_some(), "ell={ell}");
        }
        assert!(find_cycle_exact(&g, 10).unwrap().is_none());
    }

    #[test]
    fn chvatal_harary_has_no_long_cycle() {
        let c = chvatal_harary(6, 4).unwrap();
        assert!(find_cycle_exact(&c.red, 6).unwrap().is_none());
    }

    #[test]
    fn rejects_short_length() {
        assert!(find_cycle_exact(&Graph::complete(4), 2).is_err());
    }

    #[test]
    fn large_graph_paths_agree_with_dp() {
        // 26 vertices: two disjoint copies of C_13 → 13-cycles only
        let g = Graph::disjoint_union(&[Graph::cycle(13), Graph::cycle(13)]);
        assert!(find_cycle_exact(&g, 13).unwrap().is_some());
        assert!(find_cycle_exact(&g, 12).unwrap().is_none());
        let k = Graph::complete(30);
        let c = find_cycle_exact(&k, 9).unwrap().unwrap();
        c.validate(&k).unwrap();
    }

    #[test]
    fn color_coding_finds_planted_cycle() {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((5..30).map(|i| (i - 1, i)));
        let g = Graph::from_edges(30, &edges).unwrap();
        let cfg = CycleOracleConfig {
            dfs_budget: 0,
            ..Default::default()
        };
        let c = find_cycle_exact_with(&g, 5, &cfg).unwrap().unwrap();
        c.validate(&g).unwrap();
        assert!(find_cycle_exact_with(&g, 4, &cfg).unwrap().is_none());
    }

    #[test]
    fn short_cycle_counts() {
        assert_eq!(short_cycles(&Graph::complete(4), 4).len(), 4 + 3);
        assert_eq!(short_cycles(&Graph::petersen(), 5).len(), 12);
        assert!(short_cycles(&Graph::petersen(), 4).is_empty());
    }
}
