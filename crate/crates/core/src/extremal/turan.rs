use crate::bitset::BitSet;
use crate::graph::Graph;

/// Greedy independent set of size at least `⌈N/(d(G)+1)⌉`.
///
/// Repeatedly takes a vertex of minimum degree in what remains (lowest index
/// on ties) and deletes it together with its neighbours.
pub fn turan_independent_set(g: &Graph) -> BitSet {
    let n = g.order();
    let mut alive = BitSet::full(n);
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut out = BitSet::new(n);
    while let Some(v) = alive.iter().min_by_key(|&v| (deg[v], v)) {
        out.insert(v);
        let mut gone = g.neighbors(v).intersection(&alive);
        gone.insert(v);
        alive.difference_with(&gone);
        for x in gone.iter() {
            for y in g.neighbors(x).intersection(&alive).iter() {
                deg[y] -= 1;
            }
        }
    }
    out
}

/// `⌈N/(d+1)⌉` with `d` the average degree, computed in integers.
pub fn turan_bound(g: &Graph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    // N/(2e/N + 1) = N²/(2e + N)
    (n * n).div_ceil(2 * g.edge_count() + n)
}
