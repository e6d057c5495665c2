use crate::bitset::BitSet;
use crate::error::{invalid, Result};
use crate::extremal::{long_path, pancyclic_cycle, Pancyclic};
use crate::graph::{k_core_set, Cycle, Graph};
use crate::hubs::{hub_partition, Hub, HubPartitionParams};
use crate::matching::{greedy_matching_within, max_bipartite_matching};
use crate::oracles::{
    find_cycle_exact_with, independence_number, CycleOracleConfig, MIS_EXACT_LIMIT,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityBreak {
    pub broken: Vec<Hub>,
    /// Hubs with no large matching in `G[A]`; their vertices go to the leftover.
    pub exceptions: Vec<Hub>,
    /// `u ≥ 4(α_bound+1)`: every maximal matching in `A` is then large, so no exception can occur.
    pub forced_by_alpha: bool,
}

/// Marks every hub with a parity matching as broken; the rest are exceptions.
pub fn parity_break_all(g: &Graph, hubs: Vec<Hub>, alpha_bound: usize) -> ParityBreak {
    let forced_by_alpha = hubs.iter().all(|h| h.u >= 4 * (alpha_bound + 1));
    let mut broken = Vec::new();
    let mut exceptions = Vec::new();
    for mut h in hubs {
        if h.try_break_parity(g) {
            broken.push(h);
        } else {
            exceptions.push(h);
        }
    }
    ParityBreak {
        broken,
        exceptions,
        forced_by_alpha,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependentSetMatching {
    /// Set indices `i_0 … i_d`.
    pub sets: Vec<usize>,
    /// One edge of `G[I_{i_{j−1}}, I_{i_j}]` for each `j`.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcrossSetsOutcome {
    pub found: Option<IndependentSetMatching>,
    /// `α < v/(12d)` on the union, when its order allows an exact check.
    pub alpha_hypothesis: Option<bool>,
}

/// A path `i_0 … i_d` of sets with one matching edge between consecutive sets.
///
/// Builds a maximal matching with at most one edge between any two sets,
/// the graph on set indices it induces, and a path of length `d` there.
pub fn matching_across_independent_sets(
    g: &Graph,
    sets: &[Vec<usize>],
    d: usize,
) -> Result<AcrossSetsOutcome> {
    let n = g.order();
    let Some(m) = sets.first().map(Vec::len) else {
        return invalid("no sets given");
    };
    if d == 0 || m < 3 * d {
        return invalid(format!("need d ≥ 1 and m ≥ 3d, got m = {m}, d = {d}"));
    }
    let mut owner = vec![usize::MAX; n];
    for (i, s) in sets.iter().enumerate() {
        if s.len() != m {
            return invalid(format!("set {i} has {} vertices, expected {m}", s.len()));
        }
        for &v in s {
            if v >= n || owner[v] != usize::MAX {
                return invalid(format!("vertex {v} out of range or in two sets"));
            }
            owner[v] = i;
        }
        if !g.is_independent(&BitSet::from_iter_with(n, s.iter().copied())) {
            return invalid(format!("set {i} is not independent"));
        }
    }
    let k = sets.len();
    let union = BitSet::from_iter_with(n, sets.iter().flatten().copied());
    let alpha_hypothesis = (union.len() <= MIS_EXACT_LIMIT).then(|| {
        let (sub, _) = g.induced_on(&union);
        let alpha = independence_number(&sub).expect("order within limit");
        12 * d * alpha < union.len()
    });

    let mut pair_edge: std::collections::BTreeMap<(usize, usize), (usize, usize)> =
        Default::default();
    let mut matched = BitSet::new(n);
    for x in union.iter() {
        if matched.contains(x) {
            continue;
        }
        for y in g
            .neighbors(x)
            .intersection(&union)
            .iter()
            .filter(|&y| y > x)
        {
            let key = (owner[x].min(owner[y]), owner[x].max(owner[y]));
            if matched.contains(y) || pair_edge.contains_key(&key) {
                continue;
            }
            pair_edge.insert(key, (x, y));
            matched.insert(x);
            matched.insert(y);
            break;
        }
    }
    let aux_edges: Vec<(usize, usize)> = pair_edge.keys().copied().collect();
    let aux = Graph::from_edges(k, &aux_edges)?;
    let found = long_path(&aux, d)?.map(|p| {
        let seq: Vec<usize> = p.vertices[..=d].to_vec();
        let edges = seq
            .windows(2)
            .map(|w| {
                let (x, y) = pair_edge[&(w[0].min(w[1]), w[0].max(w[1]))];
                if owner[x] == w[0] {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        IndependentSetMatching { sets: seq, edges }
    });
    Ok(AcrossSetsOutcome {
        found,
        alpha_hypothesis,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterHub {
    /// The matching `ℳ`: endpoints in distinct hubs, at most one edge per hub pair.
    pub cross_matching: Vec<(usize, usize)>,
    pub h1_edges: Vec<(usize, usize)>,
    /// Hubs kept after deleting those of `H_1`-degree above `ε⁻¹ℓ^{1−3ε}`.
    pub h2_vertices: Vec<usize>,
    /// Pairs of `H_2` vertices with a matching of size `⌈2ℓ^ε⌉` between their `A ∪ B`.
    pub h3_edges: Vec<(usize, usize)>,
    /// Maximal matchings `M_ij` for the remaining `H_2` pairs joined by some edge.
    pub small_matchings: Vec<PairMatching>,
}

/// A hub pair and a matching between them.
pub type PairMatching = ((usize, usize), Vec<(usize, usize)>);

/// The auxiliary hub graphs `H_1 ⊇ H_2 ⊇ H_3` and the small cross matchings.
pub fn inter_hub_graphs(g: &Graph, hubs: &[Hub], ell: usize, eps: f64) -> InterHub {
    let n = g.order();
    let l = hubs.len();
    let mut owner = vec![usize::MAX; n];
    let sides: Vec<BitSet> = hubs
        .iter()
        .enumerate()
        .map(|(i, h)| {
            for &v in h.a.iter().chain(&h.b) {
                owner[v] = i;
            }
            BitSet::from_iter_with(n, h.a.iter().chain(&h.b).copied())
        })
        .collect();
    let all = sides.iter().fold(BitSet::new(n), |acc, s| acc.union(s));

    // greedy maximal, then single augmentations x–y–z–w that trade one pair for two
    let mut mate: Vec<Option<usize>> = vec![None; n];
    let mut used_pairs = std::collections::BTreeSet::new();
    let key = |x: usize, y: usize| (owner[x].min(owner[y]), owner[x].max(owner[y]));
    for x in all.iter() {
        if mate[x].is_some() {
            continue;
        }
        for y in g.neighbors(x).intersection(&all).iter() {
            if owner[y] != owner[x] && mate[y].is_none() && !used_pairs.contains(&key(x, y)) {
                used_pairs.insert(key(x, y));
                mate[x] = Some(y);
                mate[y] = Some(x);
                break;
            }
        }
    }
    let mut improved = true;
    while improved {
        improved = false;
        'outer: for x in all.iter().filter(|&x| mate[x].is_none()) {
            for y in g.neighbors(x).intersection(&all).iter() {
                let Some(z) = mate[y] else { continue };
                if owner[y] == owner[x] || used_pairs.contains(&key(x, y)) {
                    continue;
                }
                for w in g.neighbors(z).intersection(&all).iter() {
                    if w == x || mate[w].is_some() || owner[w] == owner[z] {
                        continue;
                    }
                    let (old, new1, new2) = (key(y, z), key(x, y), key(z, w));
                    if new1 == new2 || (used_pairs.contains(&new2) && new2 != old) {
                        continue;
                    }
                    used_pairs.remove(&old);
                    used_pairs.insert(new1);
                    used_pairs.insert(new2);
                    mate[x] = Some(y);
                    mate[y] = Some(x);
                    mate[z] = Some(w);
                    mate[w] = Some(z);
                    improved = true;
                    break 'outer;
                }
            }
        }
    }
    let cross_matching: Vec<(usize, usize)> = (0..n)
        .filter_map(|x| mate[x].filter(|&y| y > x).map(|y| (x, y)))
        .collect();
    let h1_edges: Vec<(usize, usize)> = used_pairs.iter().copied().collect();
    let mut deg = vec![0usize; l];
    for &(i, j) in &h1_edges {
        deg[i] += 1;
        deg[j] += 1;
    }
    let cap = (ell as f64).powf(1.0 - 3.0 * eps) / eps;
    let h2_vertices: Vec<usize> = (0..l).filter(|&i| deg[i] as f64 <= cap).collect();
    let need = (2.0 * (ell as f64).powf(eps) - 1e-9).ceil() as usize;
    let mut h3_edges = Vec::new();
    let mut small_matchings = Vec::new();
    for (p, &i) in h2_vertices.iter().enumerate() {
        for &j in &h2_vertices[p + 1..] {
            if g.edges_between(&sides[i], &sides[j]) == 0 {
                continue;
            }
            let left = sides[i].to_vec();
            let m = max_bipartite_matching(g, &left, &sides[j]);
            if m.len() >= need {
                h3_edges.push((i, j));
            } else {
                let both = sides[i].union(&sides[j]);
                let maximal: Vec<(usize, usize)> = greedy_matching_within(
                    &g.filter_edges(|x, y| {
                        both.contains(x) && both.contains(y) && owner[x] != owner[y]
                    }),
                    &both,
                );
                small_matchings.push(((i, j), maximal));
            }
        }
    }
    InterHub {
        cross_matching,
        h1_edges,
        h2_vertices,
        h3_edges,
        small_matchings,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityParams {
    pub eps: f64,
    pub eta: f64,
    pub seed: u64,
    pub hubs: HubPartitionParams,
    /// Exact `α` check on inputs up to this order.
    pub exact_alpha_order: usize,
}

impl Default for StabilityParams {
    fn default() -> Self {
        StabilityParams {
            eps: 0.05,
            eta: 0.1,
            seed: 0,
            hubs: HubPartitionParams::default(),
            exact_alpha_order: MIS_EXACT_LIMIT,
        }
    }
}

/// The individual conclusions of the decomposition, each checked exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionChecks {
    /// `⌈(1−η)ℓ⌉ ≤ |V_i| ≤ ℓ`.
    pub sizes: bool,
    /// `δ(G[V_i]) ≥ ⌈(1−η)ℓ⌉`.
    pub min_degree: bool,
    /// `|∪V_i| ≥ (1−η)N`.
    pub coverage: bool,
    pub no_cross_edges: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub hubs: usize,
    pub parity_broken: usize,
    pub parity_exceptions: usize,
    /// Broken hubs cover at least `(1−3ε)N` vertices, so the hub-based vertex set is used.
    pub hub_stage_met: bool,
    pub h1_edges: usize,
    pub h2_order: usize,
    pub h3_edges: usize,
    pub removed_by_small_matchings: usize,
    pub components: usize,
    /// Components with `d(C) ≤ (1−ε^{1/2})ℓ`; reported, not removed.
    pub sparse_components: usize,
    /// Minimum-degree threshold used for each block.
    pub core_thresholds: Vec<usize>,
    pub alpha_ok: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueDecomposition {
    pub blocks: Vec<Vec<usize>>,
    pub leftover: Vec<usize>,
    pub eta: f64,
    pub guarantee_met: bool,
    pub checks: DecompositionChecks,
    pub report: StabilityReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum StabilityOutcome {
    Decomposition(CliqueDecomposition),
    /// A block of order at least `ℓ` contained an `ℓ`-cycle.
    FoundCycle {
        cycle: Cycle,
    },
}

/// Near-clique blocks `V_1 … V_s` and a leftover.
///
/// Hubs are located, parity broken, and cross-hub edges with small matchings
/// are cut. When the broken hubs cover less than `(1−3ε)N` vertices (always
/// the case at small scale) the whole vertex set is used instead. Each
/// component then contributes the components of its
/// `⌈(1−η/2)ℓ⌉`-core, or of its `⌈(1−η)ℓ⌉`-core when the first is empty.
/// A block of order `≥ ℓ` is searched for an `ℓ`-cycle.
pub fn stability_decomposition(
    g: &Graph,
    ell: usize,
    n: usize,
    params: &StabilityParams,
) -> Result<StabilityOutcome> {
    let (eps, eta) = (params.eps, params.eta);
    if ell < 3 || n < 1 {
        return invalid(format!("need ℓ ≥ 3 and n ≥ 1, got ℓ = {ell}, n = {n}"));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return invalid(format!("eta must lie in (0,1), got {eta}"));
    }
    let order = g.order();
    let l = ell as f64;
    let alpha_ok = (order <= params.exact_alpha_order.min(MIS_EXACT_LIMIT))
        .then(|| independence_number(g).map(|a| a < n))
        .transpose()?;

    let part = hub_partition(g, ell, eps, params.seed, &params.hubs)?;
    let pb = parity_break_all(g, part.hubs, n.saturating_sub(1));
    let inter = inter_hub_graphs(g, &pb.broken, ell, eps);
    let mut u_prime = BitSet::new(order);
    for &i in &inter.h2_vertices {
        let h = &pb.broken[i];
        for &v in h.a.iter().chain(&h.b) {
            u_prime.insert(v);
        }
    }
    let mut removed = BitSet::new(order);
    for (_, m) in &inter.small_matchings {
        for &(x, y) in m {
            removed.insert(x);
            removed.insert(y);
        }
    }
    u_prime.difference_with(&removed);
    let hub_stage_met = u_prime.len() as f64 >= (1.0 - 3.0 * eps) * order as f64;
    if !hub_stage_met {
        u_prime = g.vertex_set();
    }

    let comps = g.components_within(&u_prime);
    let sparse_cut = (1.0 - eps.sqrt()) * l;
    let mut sparse_components = 0;
    let k_hi = ((1.0 - eta / 2.0) * l - 1e-9).ceil() as usize;
    let k_lo = ((1.0 - eta) * l - 1e-9).ceil() as usize;
    let mut blocks = Vec::new();
    let mut core_thresholds = Vec::new();
    for comp in &comps {
        let set = BitSet::from_iter_with(order, comp.iter().copied());
        if 2.0 * g.edges_within(&set) as f64 <= sparse_cut * comp.len() as f64 {
            sparse_components += 1;
        }
        let (mut core, mut k) = (k_core_set(g, &set, k_hi), k_hi);
        if core.is_empty() {
            core = k_core_set(g, &set, k_lo);
            k = k_lo;
        }
        for block in g.components_within(&core) {
            if block.len() >= ell {
                if let Some(c) = cycle_in_block(g, &block, ell)? {
                    return Ok(StabilityOutcome::FoundCycle { cycle: c });
                }
            }
            blocks.push(block);
            core_thresholds.push(k);
        }
    }
    let mut order_idx: Vec<usize> = (0..blocks.len()).collect();
    order_idx.sort_by_key(|&i| blocks[i][0]);
    let blocks: Vec<Vec<usize>> = order_idx.iter().map(|&i| blocks[i].clone()).collect();
    let core_thresholds: Vec<usize> = order_idx.iter().map(|&i| core_thresholds[i]).collect();

    let covered = BitSet::from_iter_with(order, blocks.iter().flatten().copied());
    let leftover = covered.complement().to_vec();
    let checks = check_conclusions(g, &blocks, ell, eta);
    let report = StabilityReport {
        hubs: pb.broken.len() + pb.exceptions.len(),
        parity_broken: pb.broken.len(),
        parity_exceptions: pb.exceptions.len(),
        hub_stage_met,
        h1_edges: inter.h1_edges.len(),
        h2_order: inter.h2_vertices.len(),
        h3_edges: inter.h3_edges.len(),
        removed_by_small_matchings: removed.len(),
        components: comps.len(),
        sparse_components,
        core_thresholds,
        alpha_ok,
    };
    let guarantee_met =
        checks.sizes && checks.min_degree && checks.coverage && checks.no_cross_edges;
    Ok(StabilityOutcome::Decomposition(CliqueDecomposition {
        blocks,
        leftover,
        eta,
        guarantee_met,
        checks,
        report,
    }))
}

/// Exact check of every decomposition conclusion.
pub fn check_conclusions(
    g: &Graph,
    blocks: &[Vec<usize>],
    ell: usize,
    eta: f64,
) -> DecompositionChecks {
    let order = g.order();
    let lo = ((1.0 - eta) * ell as f64 - 1e-9).ceil() as usize;
    let sets: Vec<BitSet> = blocks
        .iter()
        .map(|b| BitSet::from_iter_with(order, b.iter().copied()))
        .collect();
    let sizes = blocks.iter().all(|b| b.len() >= lo && b.len() <= ell);
    let min_degree = blocks
        .iter()
        .zip(&sets)
        .all(|(b, s)| b.iter().all(|&v| g.neighbors(v).intersection_len(s) >= lo));
    let covered: usize = blocks.iter().map(Vec::len).sum();
    let coverage = covered as f64 >= (1.0 - eta) * order as f64 - 1e-9;
    let mut no_cross_edges = true;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].intersects(&sets[j]) || g.edges_between(&sets[i], &sets[j]) > 0 {
                no_cross_edges = false;
            }
        }
    }
    DecompositionChecks {
        sizes,
        min_degree,
        coverage,
        no_cross_edges,
    }
}

/// Dirac/Bondy on the block, then a budgeted exact search.
pub(crate) fn cycle_in_block(g: &Graph, block: &[usize], ell: usize) -> Result<Option<Cycle>> {
    let set = BitSet::from_iter_with(g.order(), block.iter().copied());
    let (sub, map) = g.induced_on(&set);
    if let Ok(Pancyclic::Found(c)) = pancyclic_cycle(&sub, ell) {
        return Ok(Some(c.mapped(&map)));
    }
    let cfg = CycleOracleConfig {
        dfs_budget: 2_000_000,
        max_color_work: 5e8,
        ..Default::default()
    };
    match find_cycle_exact_with(&sub, ell, &cfg) {
        Ok(c) => Ok(c.map(|c| c.mapped(&map))),
        Err(crate::Error::Capacity { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hubs::{build_hub, HubParams};
    use crate::witness::chvatal_harary;

    #[test]
    fn chvatal_harary_blocks_recovered() {
        for ell in 8..=16 {
            for n in 3..=6 {
                let red = chvatal_harary(ell, n).unwrap().red;
                let prm = StabilityParams {
                    eta: 0.25,
                    ..Default::default()
                };
                let StabilityOutcome::Decomposition(d) =
                    stability_decomposition(&red, ell, n, &prm).unwrap()
                else {
                    panic!("no cycle exists in the construction")
                };
                let expected: Vec<Vec<usize>> = (0..n - 1)
                    .map(|i| ((ell - 1) * i..(ell - 1) * (i + 1)).collect())
                    .collect();
                assert_eq!(d.blocks, expected, "ℓ = {ell}, n = {n}");
                assert!(d.leftover.is_empty());
                assert!(d.guarantee_met, "ℓ = {ell}, n = {n}: {:?}", d.checks);
            }
        }
    }

    #[test]
    fn clique_above_ell_gives_cycle() {
        let g = Graph::complete(12);
        match stability_decomposition(&g, 10, 2, &StabilityParams::default()).unwrap() {
            StabilityOutcome::FoundCycle { cycle } => {
                assert_eq!(cycle.len(), 10);
                cycle.validate(&g).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sparse_random_graph_best_effort() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let g = Graph::gnp(60, 0.05, &mut rng);
        let StabilityOutcome::Decomposition(d) =
            stability_decomposition(&g, 10, 5, &StabilityParams::default()).unwrap()
        else {
            panic!()
        };
        assert!(!d.guarantee_met);
        assert_eq!(d.checks, check_conclusions(&g, &d.blocks, 10, 0.1));
    }

    #[test]
    fn parity_split() {
        let base = Graph::complete_bipartite(64, 64);
        let hub = build_hub(&base, 16, 0.75, 1, &HubParams::default()).unwrap();
        // second hub on a shifted copy, with its A side made a clique
        let map = crate::graph::Relabel {
            to_host: (0..128).map(|v| v + 128).collect(),
            from_host: vec![],
        };
        let other = hub.mapped(&map);
        let mut edges = Graph::disjoint_union(&[base.clone(), base]).edge_list();
        for (i, &x) in other.a.iter().enumerate() {
            for &y in &other.a[i + 1..] {
                edges.push((x, y));
            }
        }
        let g = Graph::from_edges(256, &edges).unwrap();
        let pb = parity_break_all(&g, vec![hub.clone(), other.clone()], 3);
        assert_eq!(pb.broken.len(), 1);
        assert_eq!(pb.broken[0].a, other.a);
        assert_eq!(pb.exceptions[0].a, hub.a);
        let m = pb.broken[0].parity_matching.as_ref().unwrap();
        assert!(m.len() >= crate::hubs::parity_threshold(16, 0.75));
        assert!(m.iter().all(|&(x, y)| g.has_edge(x, y)));
    }

    #[test]
    fn matching_across_sets() {
        // five independent triples, consecutive ones joined completely
        let sets: Vec<Vec<usize>> = (0..5).map(|i| (3 * i..3 * i + 3).collect()).collect();
        let mut edges = Vec::new();
        for i in 0..4 {
            for &x in &sets[i] {
                for &y in &sets[i + 1] {
                    edges.push((x, y));
                }
            }
        }
        let g = Graph::from_edges(15, &edges).unwrap();
        let out = matching_across_independent_sets(&g, &sets, 1).unwrap();
        let f = out.found.unwrap();
        assert_eq!(f.sets.len(), 2);
        let (x, y) = f.edges[0];
        assert!(g.has_edge(x, y) && sets[f.sets[0]].contains(&x) && sets[f.sets[1]].contains(&y));

        let empty = Graph::empty(15);
        let out = matching_across_independent_sets(&empty, &sets, 1).unwrap();
        assert_eq!(out.found, None);
        assert_eq!(out.alpha_hypothesis, Some(false));
    }

    #[test]
    fn inter_hub_matchings() {
        let u = 16;
        let base = Graph::complete_bipartite(4 * u, 4 * u);
        let hub = build_hub(&base, u, 0.75, 1, &HubParams::default()).unwrap();
        let map = crate::graph::Relabel {
            to_host: (0..8 * u).map(|v| v + 8 * u).collect(),
            from_host: vec![],
        };
        let other = hub.mapped(&map);
        let two = Graph::disjoint_union(&[base.clone(), base]);
        let none = inter_hub_graphs(&two, &[hub.clone(), other.clone()], 16, 0.25);
        assert!(none.h1_edges.is_empty() && none.h3_edges.is_empty());
        // join the A sides by a perfect matching: 16 ≥ ⌈2·16^0.25⌉ = 4
        let mut edges = two.edge_list();
        edges.extend(hub.a.iter().zip(&other.a).map(|(&x, &y)| (x, y)));
        let g = Graph::from_edges(16 * u, &edges).unwrap();
        let ih = inter_hub_graphs(&g, &[hub, other], 16, 0.25);
        assert_eq!(ih.h1_edges, vec![(0, 1)]);
        assert_eq!(ih.h3_edges, vec![(0, 1)]);
        assert_eq!(ih.cross_matching.len(), 1);
    }
}
