//! Matchings used by the stability pipeline.

use crate::bitset::BitSet;
use crate::graph::Graph;

/// Maximum matching between `left` and `right` using edges of `g`
/// (augmenting paths, left vertices in the given order, lowest neighbour first).
/// `left` and `right` must be disjoint. Pairs are `(left, right)`.
pub(crate) fn max_bipartite_matching(
    g: &Graph,
    left: &[usize],
    right: &BitSet,
) -> Vec<(usize, usize)> {
    let n = g.order();
    let mut mate_of_right: Vec<Option<usize>> = vec![None; n];
    for &x in left {
        let mut seen = BitSet::new(n);
        augment(g, x, right, &mut mate_of_right, &mut seen);
    }
    let mut out: Vec<(usize, usize)> = (0..n)
        .filter_map(|y| mate_of_right[y].map(|x| (x, y)))
        .collect();
    out.sort_unstable();
    out
}

fn augment(
    g: &Graph,
    x: usize,
    right: &BitSet,
    mate: &mut [Option<usize>],
    seen: &mut BitSet,
) -> bool {
    for y in g.neighbors(x).intersection(right).iter() {
        if !seen.insert(y) {
            continue;
        }
        if mate[y].is_none_or(|x2| augment(g, x2, right, mate, seen)) {
            mate[y] = Some(x);
            return true;
        }
    }
    false
}

/// Greedy maximal matching inside `set`, lowest vertices first.
pub(crate) fn greedy_matching_within(g: &Graph, set: &BitSet) -> Vec<(usize, usize)> {
    let mut free = set.clone();
    let mut m = Vec::new();
    for x in set.iter() {
        if !free.contains(x) {
            continue;
        }
        let mut cand = g.neighbors(x).intersection(&free);
        cand.remove(x);
        if let Some(y) = cand.first() {
            free.remove(x);
            free.remove(y);
            m.push((x, y));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartite_matching_sizes() {
        let g = Graph::complete_bipartite(5, 7);
        let left: Vec<usize> = (0..5).collect();
        let right = BitSet::from_iter_with(12, 5..12);
        assert_eq!(max_bipartite_matching(&g, &left, &right).len(), 5);
        // a path 0-5-1-6: greedy would match 0-5 then fail on 1 without augmenting
        let p = Graph::from_edges(8, &[(0, 5), (1, 5), (1, 6), (0, 7)]).unwrap();
        let m = max_bipartite_matching(&p, &[1, 0], &BitSet::from_iter_with(8, [5, 6, 7]));
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn greedy_is_maximal() {
        let g = Graph::path(6);
        let m = greedy_matching_within(&g, &g.vertex_set());
        assert_eq!(m, vec![(0, 1), (2, 3), (4, 5)]);
    }
}
