//! Canonical labelling for small graphs by partition refinement and
//! individualisation.
//!
//! Every leaf of the individualisation tree yields a discrete ordered
//! partition; the code is the lexicographically least upper-triangle bit
//! string over all leaves. When the leaf count would exceed `leaf_cap` the
//! search stops early and the code of the first leaf is used. That code is
//! still a valid labelling of the graph, just not canonical, so callers that
//! deduplicate by it may keep isomorphic copies but never lose a class.

use crate::graph::Graph;

pub(crate) const DEFAULT_LEAF_CAP: usize = 5040;

/// Returns the code and the ordering `perm` (position → vertex) that realises it.
pub(crate) fn canonical_code(g: &Graph, leaf_cap: usize) -> (Vec<u64>, Vec<usize>) {
    let n = g.order();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| g.has_edge(u, v)).collect())
        .collect();
    let start = refine(&adj, vec![(0..n).collect()]);
    let mut st = State {
        adj: &adj,
        best: None,
        leaves: 0,
        leaf_cap,
    };
    st.search(start);
    st.best.unwrap_or_else(|| (Vec::new(), Vec::new()))
}

/// The graph relabelled by its canonical ordering.
pub(crate) fn canonical_form(g: &Graph) -> (Vec<u64>, Graph) {
    let (code, perm) = canonical_code(g, DEFAULT_LEAF_CAP);
    let mut pos = vec![0; g.order()];
    for (i, &v) in perm.iter().enumerate() {
        pos[v] = i;
    }
    let edges: Vec<(usize, usize)> = g
        .edge_list()
        .into_iter()
        .map(|(u, v)| (pos[u], pos[v]))
        .collect();
    (
        code,
        Graph::from_edges(g.order(), &edges).expect("relabelled graph is simple"),
    )
}

struct State<'a> {
    adj: &'a [Vec<bool>],
    best: Option<(Vec<u64>, Vec<usize>)>,
    leaves: usize,
    leaf_cap: usize,
}

impl State<'_> {
    fn search(&mut self, part: Vec<Vec<usize>>) {
        if self.leaves >= self.leaf_cap && self.best.is_some() {
            return;
        }
        let Some(ci) = part.iter().position(|c| c.len() > 1) else {
            self.leaves += 1;
            let perm: Vec<usize> = part.iter().map(|c| c[0]).collect();
            let code = encode(self.adj, &perm);
            if self.best.as_ref().is_none_or(|(b, _)| code < *b) {
                self.best = Some((code, perm));
            }
            return;
        };
        for &v in &part[ci] {
            let mut next = part[..ci].to_vec();
            next.push(vec![v]);
            next.push(part[ci].iter().copied().filter(|&w| w != v).collect());
            next.extend_from_slice(&part[ci + 1..]);
            let refined = refine(self.adj, next);
            self.search(refined);
        }
    }
}

fn encode(adj: &[Vec<bool>], perm: &[usize]) -> Vec<u64> {
    let n = perm.len();
    let mut out = vec![0u64; (n * n.saturating_sub(1) / 2).div_ceil(64).max(1)];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if adj[perm[i]][perm[j]] {
                // most significant first so Vec ordering is lexicographic on bits
                out[k / 64] |= 1u64 << (63 - k % 64);
            }
            k += 1;
        }
    }
    out
}

/// Equitable refinement: split cells by neighbour counts into every cell,
/// keeping sub-cells in increasing signature order.
fn refine(adj: &[Vec<bool>], mut part: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = adj.len();
    loop {
        let mut cell_of = vec![0; n];
        for (i, c) in part.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        let k = part.len();
        let mut next = Vec::with_capacity(n);
        for c in &part {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = c
                .iter()
                .map(|&v| {
                    let mut sig = vec![0usize; k];
                    for w in 0..n {
                        if adj[v][w] {
                            sig[cell_of[w]] += 1;
                        }
                    }
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut i = 0;
            while i < keyed.len() {
                let mut j = i;
                while j < keyed.len() && keyed[j].0 == keyed[i].0 {
                    j += 1;
                }
                next.push(keyed[i..j].iter().map(|x| x.1).collect());
                i = j;
            }
        }
        if next.len() == part.len() {
            return next;
        }
        part = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn permuted(g: &Graph, perm: &[usize]) -> Graph {
        let e: Vec<_> = g
            .edge_list()
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v]))
            .collect();
        Graph::from_edges(g.order(), &e).unwrap()
    }

    #[test]
    fn isomorphic_cycles_share_code() {
        let a = Graph::cycle(6);
        let b = permuted(&a, &[3, 0, 4, 1, 5, 2]);
        assert_eq!(canonical_form(&a).0, canonical_form(&b).0);
        let two_triangles = Graph::disjoint_union(&[Graph::complete(3), Graph::complete(3)]);
        assert_ne!(canonical_form(&a).0, canonical_form(&two_triangles).0);
    }

    proptest! {
        #[test]
        fn code_is_invariant_under_relabelling(n in 1usize..8, p in 0.0f64..1.0, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = Graph::gnp(n, p, &mut rng);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = permuted(&g, &perm);
            let (cg, fg) = canonical_form(&g);
            let (ch, fh) = canonical_form(&h);
            prop_assert_eq!(cg, ch);
            prop_assert_eq!(fg, fh);
        }
    }
}
