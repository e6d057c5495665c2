//! Long path or dense subgraph, dense subgraphs under an independence bound,
//! and the partition into small dense blocks.

use crate::bfs::{decompose_within, log_gamma, DecompTriple};
use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use crate::graph::{k_core_set, Cycle, Graph, Path};
use crate::oracles::{independence_number, MIS_EXACT_LIMIT};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum PathOrDense {
    /// A path of length exactly `D` from the start vertex.
    Path { path: Path },
    /// The vertex set of the stuck walk; every neighbour of its last vertex lies inside.
    Dense {
        vertices: Vec<usize>,
        last: usize,
        edges: usize,
    },
}

/// Greedy walk from `start`, each step taking the unused neighbour of the
/// current end with most neighbours already on the walk (lowest index on
/// ties).
pub fn path_or_dense(g: &Graph, start: usize, d: usize) -> Result<PathOrDense> {
    if start >= g.order() {
        return invalid(format!("start {start} outside [0,{})", g.order()));
    }
    if d == 0 {
        return invalid("D must be at least 1");
    }
    Ok(walk(g, &g.vertex_set(), start, d))
}

/// The walk inside `G[within]`; `start` must lie in `within`.
pub(crate) fn walk(g: &Graph, within: &BitSet, start: usize, d: usize) -> PathOrDense {
    let n = g.order();
    let mut on = BitSet::new(n);
    on.insert(start);
    let mut path = vec![start];
    while path.len() <= d {
        let last = *path.last().unwrap();
        let mut cand = g.neighbors(last).intersection(within);
        cand.difference_with(&on);
        let next = cand
            .iter()
            .max_by_key(|&x| (g.neighbors(x).intersection_len(&on), std::cmp::Reverse(x)));
        match next {
            Some(x) => {
                on.insert(x);
                path.push(x);
            }
            None => {
                let edges = g.edges_within(&on);
                return PathOrDense::Dense {
                    vertices: on.to_vec(),
                    last,
                    edges,
                };
            }
        }
    }
    PathOrDense::Path {
        path: Path::unchecked(path),
    }
}

/// `C(k, 2)`.
pub fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaCheck {
    /// `α(g) ≤ N/d` is computed exactly (order at most 64).
    Exact,
    /// The caller vouches for `α(g) ≤ N/d`; results are labelled as resting on it.
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseOptions {
    /// Target cycle length `ℓ`; the graph is meant to be `C_ℓ`-free.
    pub ell: usize,
    /// Reject inputs violating `3 log_γ N ≤ ℓ ≤ D` or `d ≥ 8γ²`.
    pub enforce_hypotheses: bool,
    pub alpha_check: AlphaCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub log_bound_ok: bool,
    pub ell_le_d: bool,
    pub d_ok: bool,
    /// `Some(true/false)` when checked exactly, `None` when assumed.
    pub alpha_ok: Option<bool>,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.log_bound_ok && self.ell_le_d && self.d_ok && self.alpha_ok != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DenseOutcome {
    Dense {
        vertices: Vec<usize>,
        edges: usize,
        /// `d²/(2⁹γ⁴)`.
        threshold: f64,
        meets_threshold: bool,
        hypotheses: HypothesisReport,
    },
    /// An `ℓ`-cycle assembled from two tree paths and a long path: the input was not `C_ℓ`-free.
    Cycle {
        cycle: Cycle,
        hypotheses: HypothesisReport,
    },
}

/// A subgraph with at most `D` vertices and at least `d²/(2⁹γ⁴)` edges in a
/// `C_ℓ`-free graph with `α ≤ N/d`, or an `ℓ`-cycle showing the graph was not
/// `C_ℓ`-free.
pub fn dense_under_indep_bound(
    g: &Graph,
    d_len: usize,
    gamma: f64,
    d: f64,
    opts: &DenseOptions,
) -> Result<DenseOutcome> {
    let n = g.order();
    if gamma.is_nan() || gamma <= 1.0 {
        return invalid(format!("gamma must exceed 1, got {gamma}"));
    }
    if d_len == 0 || opts.ell < 3 || d <= 0.0 {
        return invalid("need D >= 1, ell >= 3 and d > 0");
    }
    let alpha_ok = match opts.alpha_check {
        AlphaCheck::Exact => {
            if n > MIS_EXACT_LIMIT {
                return Err(Error::Capacity {
                    what: "order for an exact independence check",
                    limit: MIS_EXACT_LIMIT,
                    got: n,
                });
            }
            let ok = independence_number(g)? as f64 <= n as f64 / d;
            if !ok {
                return Err(Error::AssumptionViolation(format!(
                    "alpha exceeds N/d = {:.3}",
                    n as f64 / d
                )));
            }
            Some(true)
        }
        AlphaCheck::Assumed => None,
    };
    let hyp = HypothesisReport {
        log_bound_ok: 3.0 * log_gamma(n.max(1) as f64, gamma) <= opts.ell as f64,
        ell_le_d: opts.ell <= d_len,
        d_ok: d >= 8.0 * gamma * gamma,
        alpha_ok,
    };
    if opts.enforce_hypotheses && !hyp.all_hold() {
        return Err(Error::GuaranteeUnavailable(format!(
            "hypotheses failed: {hyp:?}"
        )));
    }
    let threshold = d * d / (512.0 * gamma.powi(4));

    let xs = decompose_within(g, &g.vertex_set(), gamma);
    let x_set = union_of(n, &xs);
    let ys = decompose_within(g, &x_set, gamma);
    let y_set = union_of(n, &ys);
    let dy = 2.0 * g.edges_within(&y_set) as f64 / y_set.len().max(1) as f64;
    let core = k_core_set(g, &y_set, (dy / 2.0).ceil() as usize);

    let mut long_paths = Vec::new();
    for start in core.iter() {
        match walk(g, &core, start, d_len) {
            PathOrDense::Dense {
                vertices, edges, ..
            } => {
                return Ok(DenseOutcome::Dense {
                    vertices,
                    edges,
                    threshold,
                    meets_threshold: edges as f64 >= threshold,
                    hypotheses: hyp,
                });
            }
            PathOrDense::Path { path } => long_paths.push(path),
        }
    }
    for p in &long_paths {
        if let Some(cycle) = assemble_cycle(g, &xs, &ys, p, opts.ell) {
            return Ok(DenseOutcome::Cycle {
                cycle,
                hypotheses: hyp,
            });
        }
    }
    Err(Error::GuaranteeUnavailable(
        "every walk reached length D and no cycle of the target length could be assembled".into(),
    ))
}

fn union_of(n: usize, ts: &[DecompTriple]) -> BitSet {
    BitSet::from_iter_with(n, ts.iter().flat_map(|t| t.set.iter().copied()))
}

/// `y_j → z_0` in the outer tree, `z_0 … z_{ℓ2}` along the path, then
/// `z_{ℓ2} → y_j` in the inner tree.
fn assemble_cycle(
    g: &Graph,
    xs: &[DecompTriple],
    ys: &[DecompTriple],
    p: &Path,
    ell: usize,
) -> Option<Cycle> {
    let z0 = p.start();
    let inner = ys.iter().find(|t| t.set.contains(&z0))?;
    if inner.depth == 0 {
        return None;
    }
    let yj = inner.root;
    let outer = xs.iter().find(|t| t.set.contains(&yj))?;
    let p1 = tree_path(outer, yj, z0)?;
    let l1 = p1.len() - 1;
    let l2 = ell.checked_sub(l1 + inner.depth)?;
    if l2 == 0 || l2 > p.len() {
        return None;
    }
    let zl = p.vertices[l2];
    let p3 = inner.path_to_root(zl);
    if p3.len() - 1 != inner.depth {
        return None;
    }
    let mut cyc = p1;
    cyc.pop();
    cyc.extend_from_slice(&p.vertices[..=l2]);
    cyc.extend_from_slice(&p3[1..p3.len() - 1]);
    let c = Cycle::unchecked(cyc);
    (c.len() == ell && c.validate(g).is_ok()).then_some(c)
}

fn tree_path(t: &DecompTriple, a: usize, b: usize) -> Option<Vec<usize>> {
    let pa = t.path_to_root(a);
    let pb = t.path_to_root(b);
    if pa.last() != Some(&t.root) || pb.last() != Some(&t.root) {
        return None;
    }
    let (mut i, mut j) = (pa.len(), pb.len());
    while i > 0 && j > 0 && pa[i - 1] == pb[j - 1] {
        i -= 1;
        j -= 1;
    }
    let mut out = pa[..=i].to_vec();
    out.extend(pb[..j].iter().rev());
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensePartition {
    pub blocks: Vec<Vec<usize>>,
    pub leftover: Vec<usize>,
    /// Every block has fewer than `ℓ` vertices and more than `ℓ^{2−ε}` edges (always true of returned blocks) and `|W| ≤ εN`.
    pub guarantee_met: bool,
}

/// Repeatedly extracts a block with fewer than `ℓ` vertices and more than
/// `ℓ^{2−ε}` edges, then stops when no remaining component yields one.
pub fn dense_partition(g: &Graph, ell: usize, eps: f64) -> Result<DensePartition> {
    if ell < 3 {
        return invalid(format!("ell must be at least 3, got {ell}"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("eps must lie in (0,1), got {eps}"));
    }
    let n = g.order();
    let min_edges = (ell as f64).powf(2.0 - eps);
    let mut rest = g.vertex_set();
    let mut blocks = Vec::new();
    'scan: loop {
        for comp in g.components_within(&rest) {
            let cset = BitSet::from_iter_with(n, comp.iter().copied());
            if choose2(comp.len().min(ell - 1)) as f64 <= min_edges {
                continue;
            }
            for &start in &comp {
                let PathOrDense::Dense { vertices, .. } = walk(g, &cset, start, ell - 1) else {
                    continue;
                };
                let block = grow_block(g, &rest, vertices, ell);
                if g.edges_within(&block) as f64 > min_edges {
                    rest.difference_with(&block);
                    blocks.push(block.to_vec());
                    continue 'scan;
                }
            }
        }
        break;
    }
    let leftover = rest.to_vec();
    let guarantee_met = leftover.len() as f64 <= eps * n as f64;
    Ok(DensePartition {
        blocks,
        leftover,
        guarantee_met,
    })
}

/// Adds outside vertices with at least half their remaining neighbours in
/// the block, while the block stays below `ℓ` vertices.
fn grow_block(g: &Graph, rest: &BitSet, seed: Vec<usize>, ell: usize) -> BitSet {
    let n = g.order();
    let mut block = BitSet::from_iter_with(n, seed);
    loop {
        if block.len() + 1 >= ell {
            return block;
        }
        let mut outside = g.neighborhood_of(&block);
        outside.intersect_with(rest);
        outside.difference_with(&block);
        let pick = outside.iter().find(|&v| {
            let total = g.neighbors(v).intersection_len(rest);
            2 * g.neighbors(v).intersection_len(&block) >= total
        });
        match pick {
            Some(v) => {
                block.insert(v);
            }
            None => return block,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::find_cycle_exact;
    use crate::witness::chvatal_harary;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_contract(g: &Graph, start: usize, d: usize, r: &PathOrDense) {
        match r {
            PathOrDense::Path { path } => {
                assert_eq!(path.len(), d);
                assert_eq!(path.start(), start);
                path.validate(g).unwrap();
            }
            PathOrDense::Dense {
                vertices,
                last,
                edges,
            } => {
                let s = BitSet::from_iter_with(g.order(), vertices.iter().copied());
                assert!(vertices.len() <= d);
                assert!(g.neighbors(*last).is_subset(&s));
                assert_eq!(*edges, g.edges_within(&s));
                assert!(*edges >= choose2(g.min_degree() + 1));
            }
        }
    }

    #[test]
    fn walk_examples() {
        let k5 = Graph::complete(5);
        let r = path_or_dense(&k5, 2, 10).unwrap();
        assert!(matches!(&r, PathOrDense::Dense { edges: 10, .. }));
        check_contract(&k5, 2, 10, &r);
        let c = Graph::cycle(20);
        let r = path_or_dense(&c, 0, 10).unwrap();
        assert!(matches!(&r, PathOrDense::Path { .. }));
        check_contract(&c, 0, 10, &r);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = Graph::gnp(60, 0.5, &mut rng);
        check_contract(&g, 0, 60, &path_or_dense(&g, 0, 60).unwrap());
    }

    #[test]
    fn indep_bound_on_chvatal_harary() {
        let red = chvatal_harary(8, 6).unwrap().red;
        let opts = DenseOptions {
            ell: 8,
            enforce_hypotheses: false,
            alpha_check: AlphaCheck::Exact,
        };
        // α = 5 = 35/7
        match dense_under_indep_bound(&red, 8, 1.3, 7.0, &opts).unwrap() {
            DenseOutcome::Dense {
                vertices,
                edges,
                meets_threshold,
                hypotheses,
                ..
            } => {
                // two rounds of layer selection leave five vertices of one K_7
                assert_eq!(vertices.len(), 5);
                assert!(vertices.iter().all(|&v| v / 7 == vertices[0] / 7));
                assert_eq!(edges, 10);
                assert!(meets_threshold);
                assert!(!hypotheses.all_hold());
            }
            other => panic!("{other:?}"),
        }
        let strict = DenseOptions {
            enforce_hypotheses: true,
            ..opts
        };
        assert!(matches!(
            dense_under_indep_bound(&red, 8, 1.3, 7.0, &strict),
            Err(Error::GuaranteeUnavailable(_))
        ));
    }

    #[test]
    fn indep_bound_alpha_violation() {
        let opts = DenseOptions {
            ell: 4,
            enforce_hypotheses: false,
            alpha_check: AlphaCheck::Exact,
        };
        assert!(matches!(
            dense_under_indep_bound(&Graph::empty(10), 4, 2.0, 5.0, &opts),
            Err(Error::AssumptionViolation(_))
        ));
    }

    #[test]
    fn clique_qualifies() {
        let opts = DenseOptions {
            ell: 3,
            enforce_hypotheses: false,
            alpha_check: AlphaCheck::Assumed,
        };
        match dense_under_indep_bound(&Graph::complete(9), 9, 1.5, 9.0, &opts).unwrap() {
            DenseOutcome::Dense {
                vertices, edges, ..
            } => {
                assert!(vertices.len() <= 9);
                assert!(edges >= choose2(vertices.len()).min(1));
            }
            DenseOutcome::Cycle { cycle, .. } => assert_eq!(cycle.len(), 3),
        }
    }

    #[test]
    fn surfaces_a_cycle() {
        // long cycle: every greedy walk reaches length D, so a cycle of the target length is assembled
        let g = Graph::cycle(40);
        let opts = DenseOptions {
            ell: 40,
            enforce_hypotheses: false,
            alpha_check: AlphaCheck::Assumed,
        };
        if let Ok(DenseOutcome::Cycle { cycle, .. }) =
            dense_under_indep_bound(&g, 40, 2.0, 2.0, &opts)
        {
            assert_eq!(cycle.len(), 40);
            cycle.validate(&g).unwrap();
            assert!(find_cycle_exact(&g, 40).unwrap().is_some());
        }
    }

    #[test]
    fn partition_examples() {
        for ell in 9..=12 {
            for n in 3..=5 {
                let red = chvatal_harary(ell, n).unwrap().red;
                let p = dense_partition(&red, ell, 0.5).unwrap();
                let mut got: Vec<Vec<usize>> = p.blocks.clone();
                got.sort();
                let want: Vec<Vec<usize>> = (0..n - 1)
                    .map(|i| ((ell - 1) * i..(ell - 1) * (i + 1)).collect())
                    .collect();
                assert_eq!(got, want);
                assert!(p.leftover.is_empty() && p.guarantee_met);
            }
        }
        let e = dense_partition(&Graph::empty(12), 9, 0.5).unwrap();
        assert!(e.blocks.is_empty());
        assert_eq!(e.leftover.len(), 12);

        let mut two =
            Graph::disjoint_union(&[Graph::complete(10), Graph::complete(10)]).edge_list();
        two.push((9, 10));
        let g = Graph::from_edges(20, &two).unwrap();
        let p = dense_partition(&g, 11, 0.5).unwrap();
        let mut got = p.blocks.clone();
        got.sort();
        assert_eq!(got, vec![(0..10).collect::<Vec<_>>(), (10..20).collect()]);
    }

    proptest! {
        #[test]
        fn dichotomy_contract(n in 1usize..50, p in 0.0f64..1.0, seed in any::<u64>(), d in 1usize..30) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = Graph::gnp(n, p, &mut rng);
            let start = (seed as usize) % n;
            check_contract(&g, start, d, &path_or_dense(&g, start, d).unwrap());
        }

        #[test]
        fn partition_is_a_partition(n in 1usize..50, p in 0.0f64..1.0, seed in any::<u64>(), ell in 3usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = Graph::gnp(n, p, &mut rng);
            let part = dense_partition(&g, ell, 0.5).unwrap();
            let mut seen = BitSet::new(n);
            for b in &part.blocks {
                prop_assert!(b.len() < ell);
                let s = BitSet::from_iter_with(n, b.iter().copied());
                prop_assert!(g.edges_within(&s) as f64 > (ell as f64).powf(1.5));
                for &v in b { prop_assert!(seen.insert(v)); }
            }
            for &v in &part.leftover { prop_assert!(seen.insert(v)); }
            prop_assert_eq!(seen.len(), n);
        }
    }
}
