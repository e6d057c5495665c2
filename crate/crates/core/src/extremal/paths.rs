use super::posa::{closing_cycle, Grower};
use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use crate::graph::{k_core_set, Cycle, Graph, Path};
use crate::oracles::find_cycle_exact;

/// Orders at or below this get an exhaustive backtracking fallback in [`long_path`].
pub const LONG_PATH_EXACT_ORDER: usize = 20;

/// A path of length at least `k`.
///
/// Guaranteed when `d(g) > k−1`: deleting vertices of degree below `⌈k/2⌉`
/// keeps the average degree above `k−1`, so some component of the
/// `⌈k/2⌉`-core has more than `k` vertices, and path growth in a graph of
/// minimum degree `⌈k/2⌉` cannot stall below `k+1` vertices there.
/// Otherwise best effort, exhaustive for small orders.
pub fn long_path(g: &Graph, k: usize) -> Result<Option<Path>> {
    let n = g.order();
    if n == 0 {
        return Ok(None);
    }
    if k == 0 {
        return Ok(Some(Path::unchecked(vec![0])));
    }
    let guaranteed = g.average_degree() > (k - 1) as f64;
    let core = k_core_set(g, &g.vertex_set(), k.div_ceil(2));
    let mut comps = g.components_within(&core);
    comps.sort_by(|a, b| {
        let da = density(g, a);
        let db = density(g, b);
        db.partial_cmp(&da).unwrap().then(a[0].cmp(&b[0]))
    });
    for comp in comps.iter().filter(|c| c.len() > k) {
        let allowed = BitSet::from_iter_with(n, comp.iter().copied());
        if let Some(p) = grow(g, &allowed, comp[0], k) {
            return Ok(Some(p));
        }
    }
    if guaranteed {
        return Err(Error::GuaranteeViolated(format!(
            "no path of length {k} found although d = {:.3} > {}",
            g.average_degree(),
            k - 1
        )));
    }
    let all = g.vertex_set();
    for comp in g.components().iter().filter(|c| c.len() > k) {
        if let Some(p) = grow(g, &all, comp[0], k) {
            return Ok(Some(p));
        }
    }
    if n <= LONG_PATH_EXACT_ORDER {
        return Ok(backtrack_path(g, k).map(Path::unchecked));
    }
    Ok(None)
}

fn density(g: &Graph, comp: &[usize]) -> f64 {
    let s = BitSet::from_iter_with(g.order(), comp.iter().copied());
    g.edges_within(&s) as f64 / comp.len() as f64
}

fn grow(g: &Graph, allowed: &BitSet, start: usize, k: usize) -> Option<Path> {
    let mut gr = Grower::new(g, allowed, start);
    gr.grow_to(k + 1);
    let p = gr.into_path();
    (p.len() > k).then(|| Path::unchecked(p))
}

fn backtrack_path(g: &Graph, k: usize) -> Option<Vec<usize>> {
    fn rec(g: &Graph, k: usize, path: &mut Vec<usize>, used: &mut BitSet) -> bool {
        if path.len() > k {
            return true;
        }
        let last = *path.last().unwrap();
        for w in g.neighbors(last).difference(used).iter() {
            path.push(w);
            used.insert(w);
            if rec(g, k, path, used) {
                return true;
            }
            path.pop();
            used.remove(w);
        }
        false
    }
    for s in 0..g.order() {
        let mut path = vec![s];
        let mut used = BitSet::new(g.order());
        used.insert(s);
        if rec(g, k, &mut path, &mut used) {
            return Some(path);
        }
    }
    None
}

fn dirac_gate(g: &Graph) -> Result<()> {
    let n = g.order();
    if n < 3 || 2 * g.min_degree() < n {
        return Err(Error::GuaranteeUnavailable(format!(
            "minimum degree {} below order/2 = {}",
            g.min_degree(),
            n as f64 / 2.0
        )));
    }
    Ok(())
}

/// A Hamilton cycle of a graph with `δ ≥ order/2`.
pub fn hamilton_cycle(g: &Graph) -> Result<Cycle> {
    dirac_gate(g)?;
    let n = g.order();
    let all = g.vertex_set();
    let mut gr = Grower::new(g, &all, 0);
    gr.grow_to(n);
    match gr.closing_cycle() {
        Some(c) if c.len() == n => Ok(Cycle::unchecked(c)),
        _ => Err(Error::GuaranteeViolated(
            "rotation-extension stalled below a Hamilton cycle under the degree condition".into(),
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pancyclic {
    Found(Cycle),
    /// The graph is complete bipartite and has no cycle of the requested length.
    BipartiteException,
}

/// An `ell`-cycle in a graph with `δ ≥ order/2`, or the complete bipartite
/// exception.
pub fn pancyclic_cycle(g: &Graph, ell: usize) -> Result<Pancyclic> {
    let n = g.order();
    if ell < 3 || ell > n {
        return invalid(format!("cycle length {ell} outside [3,{n}]"));
    }
    dirac_gate(g)?;
    if g.is_complete_bipartite() {
        let (left, right) = bipartite_sides(g);
        let half = ell / 2;
        if ell % 2 == 1 || half > left.len().min(right.len()) {
            return Ok(Pancyclic::BipartiteException);
        }
        let c: Vec<usize> = (0..half).flat_map(|i| [left[i], right[i]]).collect();
        return Ok(Pancyclic::Found(Cycle::unchecked(c)));
    }
    let ham = hamilton_cycle(g)?;
    if ell == n {
        return Ok(Pancyclic::Found(ham));
    }
    let h = &ham.vertices;
    for i in 0..n {
        let j = (i + ell - 1) % n;
        if g.has_edge(h[i], h[j]) {
            let c: Vec<usize> = (0..ell).map(|t| h[(i + t) % n]).collect();
            return Ok(Pancyclic::Found(Cycle::unchecked(c)));
        }
    }
    match find_cycle_exact(g, ell)? {
        Some(c) => Ok(Pancyclic::Found(c)),
        None => Err(Error::GuaranteeViolated(format!(
            "no {ell}-cycle in a non-bipartite graph with δ ≥ order/2"
        ))),
    }
}

fn bipartite_sides(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    let n = g.order();
    let mut side = vec![usize::MAX; n];
    for s in 0..n {
        if side[s] != usize::MAX {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v).iter() {
                if side[w] == usize::MAX {
                    side[w] = 1 - side[v];
                    stack.push(w);
                }
            }
        }
    }
    let left = (0..n).filter(|&v| side[v] == 0).collect();
    let right = (0..n).filter(|&v| side[v] == 1).collect();
    (left, right)
}

/// Closes `path` into a cycle on its own vertex set if a closing edge or a
/// crossing pair exists.
pub fn close_path(g: &Graph, path: &Path) -> Option<Cycle> {
    closing_cycle(g, &path.vertices).map(Cycle::unchecked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn long_path_examples() {
        let p = long_path(&Graph::complete(6), 5).unwrap().unwrap();
        assert_eq!(p.len(), 5);
        let matching = Graph::from_edges(10, &[(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)]).unwrap();
        assert_eq!(long_path(&matching, 2).unwrap(), None);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Graph::gnp(40, 0.4, &mut rng);
        assert!(g.average_degree() > 12.0);
        let p = long_path(&g, 12).unwrap().unwrap();
        assert!(p.len() >= 12);
        p.validate(&g).unwrap();
    }

    #[test]
    fn long_path_guarantee_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = 5 + (rand::Rng::gen_range(&mut rng, 0..40));
            let p: f64 = rand::Rng::gen_range(&mut rng, 0.05..0.9);
            let g = Graph::gnp(n, p, &mut rng);
            let d = g.average_degree();
            let k = (d.ceil() as usize).max(1);
            if d > (k - 1) as f64 {
                let path = long_path(&g, k).unwrap().unwrap();
                assert!(path.len() >= k);
                path.validate(&g).unwrap();
            }
        }
    }

    #[test]
    fn hamilton_examples() {
        assert_eq!(hamilton_cycle(&Graph::complete(4)).unwrap().len(), 4);
        assert!(matches!(
            hamilton_cycle(&Graph::cycle(5)),
            Err(Error::GuaranteeUnavailable(_))
        ));
        let k = Graph::complete_bipartite(5, 5);
        let c = hamilton_cycle(&k).unwrap();
        assert_eq!(c.len(), 10);
        c.validate(&k).unwrap();
    }

    #[test]
    fn pancyclic_examples() {
        let k33 = Graph::complete_bipartite(3, 3);
        assert_eq!(
            pancyclic_cycle(&k33, 5).unwrap(),
            Pancyclic::BipartiteException
        );
        match pancyclic_cycle(&k33, 4).unwrap() {
            Pancyclic::Found(c) => c.validate(&k33).unwrap(),
            _ => panic!(),
        }
        let k5 = Graph::complete(5);
        for ell in 3..=5 {
            match pancyclic_cycle(&k5, ell).unwrap() {
                Pancyclic::Found(c) => {
                    assert_eq!(c.len(), ell);
                    c.validate(&k5).unwrap();
                }
                _ => panic!(),
            }
        }
    }
}
