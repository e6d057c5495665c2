use super::absorb::{block_path, AbsorbedPath, AbsorptionState, BlockState};
use crate::bfs::cycle_in_range;
use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use crate::graph::{Cycle, Graph};
use crate::matching::max_bipartite_matching;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Closed block walks tried before giving up on one connector family.
const WALK_BUDGET: usize = 4000;
/// Longest block cycle the connector search explores.
const MAX_WALK_BLOCKS: usize = 5;

/// A path `x, interior…, y` leaving block `from` at `x ∈ A_from` and
/// entering block `to` at `y ∈ A_to`, its interior outside both blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connector {
    pub from: usize,
    pub x: usize,
    pub to: usize,
    pub y: usize,
    pub interior: Vec<usize>,
}

impl Connector {
    fn reversed(&self) -> Connector {
        let mut interior = self.interior.clone();
        interior.reverse();
        Connector {
            from: self.to,
            x: self.y,
            to: self.from,
            y: self.x,
            interior,
        }
    }
}

/// Closes a cycle of exactly `ell` vertices from connectors `c_1 … c_k`
/// forming a closed walk over distinct blocks, joining consecutive
/// connectors inside each block by `block_path`.
pub fn close_through_blocks(
    g: &Graph,
    blocks: &[BlockState],
    connectors: &[Connector],
    ell: usize,
) -> Result<Option<Cycle>> {
    let n = g.order();
    let mut by_block: Vec<Vec<Connector>> = vec![Vec::new(); blocks.len()];
    for c in connectors {
        by_block[c.from].push(c.clone());
        if c.from != c.to {
            by_block[c.to].push(c.reversed());
        }
    }
    let wsets: Vec<BitSet> = blocks.iter().map(|b| b.vertex_set(n)).collect();
    let mut tried = 0;
    for start in 0..blocks.len() {
        let mut walk = Vec::new();
        if let Some(c) = walk_from(
            g, blocks, &wsets, &by_block, start, ell, &mut walk, &mut tried,
        )? {
            return Ok(Some(c));
        }
        if tried >= WALK_BUDGET {
            break;
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn walk_from(
    g: &Graph,
    blocks: &[BlockState],
    wsets: &[BitSet],
    by_block: &[Vec<Connector>],
    start: usize,
    ell: usize,
    walk: &mut Vec<Connector>,
    tried: &mut usize,
) -> Result<Option<Cycle>> {
    let here = walk.last().map_or(start, |c| c.to);
    for c in &by_block[here] {
        if *tried >= WALK_BUDGET {
            return Ok(None);
        }
        // blocks after the start are visited once; the start only through the closing connector
        if c.to < start || (c.to != start && walk.iter().any(|w| w.to == c.to)) {
            continue;
        }
        let clash = walk.iter().any(|w| {
            w.interior.iter().any(|v| c.interior.contains(v))
                || w.x == c.x
                || w.y == c.y
                || w.x == c.y
                || w.y == c.x
        });
        if clash {
            continue;
        }
        walk.push(c.clone());
        if c.to == start {
            *tried += 1;
            if let Some(cycle) = realise(g, blocks, wsets, walk, ell)? {
                return Ok(Some(cycle));
            }
        } else if walk.len() < MAX_WALK_BLOCKS {
            if let Some(cycle) = walk_from(g, blocks, wsets, by_block, start, ell, walk, tried)? {
                return Ok(Some(cycle));
            }
        }
        walk.pop();
    }
    Ok(None)
}

fn realise(
    g: &Graph,
    blocks: &[BlockState],
    wsets: &[BitSet],
    walk: &[Connector],
    ell: usize,
) -> Result<Option<Cycle>> {
    let k = walk.len();
    let used: Vec<usize> = walk.iter().map(|c| c.to).collect();
    if walk.iter().any(|c| {
        c.interior
            .iter()
            .any(|&v| used.iter().any(|&b| wsets[b].contains(v)))
    }) {
        return Ok(None);
    }
    // leg j runs inside block walk[j].to from walk[j].y to walk[j+1].x
    let spent: usize = walk.iter().map(|c| c.interior.len() + 1).sum();
    let Some(mut rest) = ell.checked_sub(spent) else {
        return Ok(None);
    };
    let caps: Vec<usize> = used.iter().map(|&b| 2 * blocks[b].order() / 3).collect();
    if rest < 2 * k || rest > caps.iter().sum::<usize>() {
        return Ok(None);
    }
    let mut legs = vec![2; k];
    rest -= 2 * k;
    for j in 0..k {
        let add = (caps[j] - 2).min(rest);
        legs[j] += add;
        rest -= add;
    }
    let mut vs = Vec::with_capacity(ell);
    for j in 0..k {
        let c = &walk[j];
        let exit = walk[(j + 1) % k].x;
        match block_path(g, &blocks[c.to], c.y, exit, legs[j]) {
            Ok(p) => vs.extend_from_slice(&p.vertices[..p.vertices.len() - 1]),
            Err(Error::GuaranteeViolated(_))
            | Err(Error::GuaranteeUnavailable(_))
            | Err(Error::InvalidArgument(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
        let next = &walk[(j + 1) % k];
        vs.push(next.x);
        vs.extend_from_slice(&next.interior);
    }
    Ok(Cycle::new_in(g, vs).ok().filter(|c| c.len() == ell))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    /// `A'_i`: vertices of `A_i` with a neighbour in the remainder.
    pub a_prime: Vec<Vec<usize>>,
    /// `B_i = A_i \ A'_i`.
    pub b: Vec<Vec<usize>>,
    pub s: Vec<usize>,
    /// `T = {i : |A'_i| < ℓ^{2/3}}`.
    pub t: Vec<usize>,
    /// Stars of order `⌈ℓ^{1/2}⌉` removed from the remainder, then singletons.
    pub pieces: Vec<Vec<usize>>,
    /// Edges of the auxiliary bipartite graph between pieces and blocks.
    pub aux_edges: usize,
    /// `|T| ≥ s/2`.
    pub lemma_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SeparateOutcome {
    Split(Separation),
    FoundCycle { cycle: Cycle },
}

/// Splits the blocks by how many attachment vertices see the remainder.
///
/// The remainder is cut into stars and singletons (diameter at most 2);
/// piece `Q` and block `i` are adjacent in the auxiliary bipartite graph
/// when `Q` sees `A'_i`. Any cycle there that closes to length `ℓ` through
/// the blocks is returned instead of the split.
pub fn separate_remainder(
    g: &Graph,
    state: &AbsorptionState,
    ell: usize,
) -> Result<SeparateOutcome> {
    let n = g.order();
    let rem = BitSet::from_iter_with(n, state.remainder.iter().copied());
    let s_count = state.blocks.len();
    let reach = (0..n).filter(|&v| g.neighbors(v).intersects(&rem));
    let sees_rem = BitSet::from_iter_with(n, reach);
    let a_prime: Vec<Vec<usize>> = state
        .blocks
        .iter()
        .map(|b| {
            b.available
                .iter()
                .copied()
                .filter(|&v| sees_rem.contains(v))
                .collect()
        })
        .collect();
    let b: Vec<Vec<usize>> = state
        .blocks
        .iter()
        .map(|b| {
            b.available
                .iter()
                .copied()
                .filter(|&v| !sees_rem.contains(v))
                .collect()
        })
        .collect();
    let cut = (ell as f64).powf(2.0 / 3.0);
    let (t, s): (Vec<usize>, Vec<usize>) =
        (0..s_count).partition(|&i| (a_prime[i].len() as f64) < cut);
    let pieces = star_partition(g, &rem, (ell as f64).sqrt().ceil() as usize);

    let ap_sets: Vec<BitSet> = a_prime
        .iter()
        .map(|a| BitSet::from_iter_with(n, a.iter().copied()))
        .collect();
    let mut aux_edges = Vec::new();
    for (q, piece) in pieces.iter().enumerate() {
        for (i, ap) in ap_sets.iter().enumerate() {
            if piece.iter().any(|&v| g.neighbors(v).intersects(ap)) {
                aux_edges.push((q, i));
            }
        }
    }
    let mut connectors = Vec::new();
    let q_count = pieces.len();
    let aux = Graph::from_edges(
        q_count + s_count,
        &aux_edges
            .iter()
            .map(|&(q, i)| (q, q_count + i))
            .collect::<Vec<_>>(),
    )?;
    // a cycle of the auxiliary graph through the growth-cutoff argument when its density allows
    if aux.order() > 0 && aux.average_degree() >= 16.0 * 1.5 * 4.0 {
        if let Ok(c) = cycle_in_range(&aux, 4, 1.5) {
            let vs = &c.vertices;
            let offset = usize::from(vs[0] >= q_count);
            let m = vs.len();
            let mut seq = Vec::new();
            for j in (offset..m + offset).step_by(2) {
                let q = vs[j % m];
                let (bi, bj) = (vs[(j + m - 1) % m] - q_count, vs[(j + 1) % m] - q_count);
                if let Some(c) = piece_connector(g, &pieces[q], &ap_sets, bi, bj) {
                    seq.push(c);
                }
            }
            if let Some(cyc) = close_through_blocks(g, &state.blocks, &seq, ell)? {
                return Ok(SeparateOutcome::FoundCycle { cycle: cyc });
            }
        }
    }
    for piece in &pieces {
        for i in 0..s_count {
            for j in i..s_count {
                if let Some(c) = piece_connector(g, piece, &ap_sets, i, j) {
                    connectors.push(c);
                }
            }
        }
    }
    if let Some(cyc) = close_through_blocks(g, &state.blocks, &connectors, ell)? {
        return Ok(SeparateOutcome::FoundCycle { cycle: cyc });
    }
    Ok(SeparateOutcome::Split(Separation {
        lemma_holds: 2 * t.len() >= s_count,
        a_prime,
        b,
        s,
        t,
        pieces,
        aux_edges: aux_edges.len(),
    }))
}

/// Stars with `order − 1` leaves while some vertex has that many neighbours left, then singletons.
fn star_partition(g: &Graph, rem: &BitSet, order: usize) -> Vec<Vec<usize>> {
    let leaves = order.saturating_sub(1).max(1);
    let mut left = rem.clone();
    let mut out = Vec::new();
    while let Some(c) = left
        .iter()
        .find(|&v| g.neighbors(v).intersection_len(&left) >= leaves)
    {
        let mut star = vec![c];
        star.extend(g.neighbors(c).intersection(&left).iter().take(leaves));
        for &v in &star {
            left.remove(v);
        }
        out.push(star);
    }
    out.extend(left.iter().map(|v| vec![v]));
    out
}

/// A connector from block `i` to block `j` through one piece, lowest choices first.
fn piece_connector(
    g: &Graph,
    piece: &[usize],
    ap: &[BitSet],
    i: usize,
    j: usize,
) -> Option<Connector> {
    for &p in piece {
        for x in g.neighbors(p).intersection(&ap[i]).iter() {
            for &q in piece {
                let mut ys = g.neighbors(q).intersection(&ap[j]);
                ys.remove(x);
                let Some(y) = ys.first() else { continue };
                let interior = inside_path(g, piece, p, q)?;
                return Some(Connector {
                    from: i,
                    x,
                    to: j,
                    y,
                    interior,
                });
            }
        }
    }
    None
}

/// `p … q` inside a piece of diameter at most 2.
fn inside_path(g: &Graph, piece: &[usize], p: usize, q: usize) -> Option<Vec<usize>> {
    if p == q {
        return Some(vec![p]);
    }
    if g.has_edge(p, q) {
        return Some(vec![p, q]);
    }
    piece
        .iter()
        .find(|&&m| g.has_edge(p, m) && g.has_edge(m, q))
        .map(|&m| vec![p, m, q])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum NeighbourOutcome {
    /// `v ∈ D_{i*}` with its neighbours outside `W_{i*}`, each absorbable as a
    /// length-0 path with distinct attachments in `D_{i*}` while they last.
    Vertex {
        block: usize,
        v: usize,
        matching_sizes: Vec<usize>,
        witnesses: Vec<AbsorbedPath>,
        unattached: Vec<usize>,
    },
    FoundCycle {
        cycle: Cycle,
    },
    /// Whittling emptied `D_{i*}`.
    Unresolved {
        block: usize,
        matching_sizes: Vec<usize>,
    },
}

/// Picks the block whose free vertices have the fewest outside neighbours,
/// or closes a cycle through large matchings.
///
/// `ℳ_i` is a maximum matching between `B_i` and `V(G) \ W_i`. When every
/// `|ℳ_i|` with `i ∈ T` exceeds `ℓ^{1/3}`, random bipartitions of the blocks
/// (seeded, `retries` tries) supply cross connectors for a cycle through the
/// blocks. Otherwise `i*` minimises `|ℳ_i|` over `T`, `D = B_{i*}` loses
/// `N(x)` while some outside `x` has `1 ≤ d(x, D) ≤ 2ℓ^{1/3}`, and the
/// lowest survivor is returned.
pub fn absorb_neighbours(
    g: &Graph,
    state: &AbsorptionState,
    sep: &Separation,
    ell: usize,
    seed: u64,
    retries: usize,
) -> Result<NeighbourOutcome> {
    if sep.t.is_empty() {
        return invalid("T is empty");
    }
    let n = g.order();
    let wsets: Vec<BitSet> = state.blocks.iter().map(|b| b.vertex_set(n)).collect();
    let matchings: Vec<Vec<(usize, usize)>> = sep
        .b
        .iter()
        .zip(&wsets)
        .map(|(b, w)| max_bipartite_matching(g, b, &w.complement()))
        .collect();
    let matching_sizes: Vec<usize> = matchings.iter().map(Vec::len).collect();
    let small = (ell as f64).powf(1.0 / 3.0);
    if sep.t.iter().all(|&i| matching_sizes[i] as f64 > small) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..retries.max(1) {
            let side: Vec<bool> = (0..state.blocks.len()).map(|_| rng.gen()).collect();
            let conns = cross_connectors(g, state, &sep.b, &wsets, &side);
            if let Some(c) = close_through_blocks(g, &state.blocks, &conns, ell)? {
                return Ok(NeighbourOutcome::FoundCycle { cycle: c });
            }
        }
    }
    let i = *sep
        .t
        .iter()
        .min_by_key(|&&i| (matching_sizes[i], i))
        .unwrap();
    let w = &wsets[i];
    let cap = 2.0 * small;
    let mut d = BitSet::from_iter_with(n, sep.b[i].iter().copied());
    while let Some(x) = (0..n).find(|&x| {
        let k = g.neighbors(x).intersection_len(&d);
        !w.contains(x) && k >= 1 && k as f64 <= cap
    }) {
        d.difference_with(g.neighbors(x));
    }
    let Some(v) = d.first() else {
        return Ok(NeighbourOutcome::Unresolved {
            block: i,
            matching_sizes,
        });
    };
    let mut free = d.clone();
    let mut witnesses = Vec::new();
    let mut unattached = Vec::new();
    for u in g.neighbors(v).difference(w).iter() {
        let cand = g.neighbors(u).intersection(&free);
        let mut it = cand.iter();
        match (it.next(), it.next()) {
            (Some(a), Some(b)) => {
                free.remove(a);
                free.remove(b);
                witnesses.push(AbsorbedPath {
                    vertices: vec![u],
                    a,
                    b,
                });
            }
            _ => unattached.push(u),
        }
    }
    Ok(NeighbourOutcome::Vertex {
        block: i,
        v,
        matching_sizes,
        witnesses,
        unattached,
    })
}

/// Connectors between blocks on opposite sides: a direct edge between free
/// vertices, or a path through one vertex outside every block.
fn cross_connectors(
    g: &Graph,
    state: &AbsorptionState,
    b: &[Vec<usize>],
    wsets: &[BitSet],
    side: &[bool],
) -> Vec<Connector> {
    let n = g.order();
    let bsets: Vec<BitSet> = b
        .iter()
        .map(|x| BitSet::from_iter_with(n, x.iter().copied()))
        .collect();
    let outside = wsets
        .iter()
        .fold(BitSet::new(n), |acc, w| acc.union(w))
        .complement();
    let mut out = Vec::new();
    for i in 0..state.blocks.len() {
        for j in i + 1..state.blocks.len() {
            if side[i] == side[j] {
                continue;
            }
            for x in bsets[i].iter() {
                if let Some(y) = g.neighbors(x).intersection(&bsets[j]).first() {
                    out.push(Connector {
                        from: i,
                        x,
                        to: j,
                        y,
                        interior: vec![],
                    });
                }
                for z in g.neighbors(x).intersection(&outside).iter() {
                    if let Some(y) = g.neighbors(z).intersection(&bsets[j]).first() {
                        out.push(Connector {
                            from: i,
                            x,
                            to: j,
                            y,
                            interior: vec![z],
                        });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(blocks: Vec<BlockState>, remainder: Vec<usize>, ell: usize) -> AbsorptionState {
        AbsorptionState {
            ell,
            eta: 0.1,
            blocks,
            remainder,
            rejected: 0,
            small_absorbed: true,
            large_available: true,
        }
    }

    /// Disjoint cliques of order `v`, vertices `i·v ..`.
    fn cliques(count: usize, v: usize, order: usize, extra: &[(usize, usize)]) -> Graph {
        let mut edges = Vec::new();
        for c in 0..count {
            for x in c * v..(c + 1) * v {
                for y in x + 1..(c + 1) * v {
                    edges.push((x, y));
                }
            }
        }
        edges.extend_from_slice(extra);
        Graph::from_edges(order, &edges).unwrap()
    }

    fn blocks(count: usize, v: usize) -> Vec<BlockState> {
        (0..count)
            .map(|c| BlockState::new((c * v..(c + 1) * v).collect()))
            .collect()
    }

    #[test]
    fn empty_remainder_all_in_t() {
        let g = cliques(3, 7, 21, &[]);
        let st = state(blocks(3, 7), vec![], 8);
        let SeparateOutcome::Split(sep) = separate_remainder(&g, &st, 8).unwrap() else {
            panic!()
        };
        assert_eq!(sep.t, vec![0, 1, 2]);
        assert!(sep.a_prime.iter().all(Vec::is_empty));
        assert!(sep.lemma_holds);
        assert_eq!(sep.b[1], (7..14).collect::<Vec<_>>());
    }

    #[test]
    fn remainder_bridge_closes_cycle() {
        // two K_8 blocks, remainder vertices 16 and 17 each seeing both blocks
        let g = cliques(2, 8, 18, &[(16, 0), (16, 8), (17, 1), (17, 9)]);
        let st = state(blocks(2, 8), vec![16, 17], 12);
        match separate_remainder(&g, &st, 12).unwrap() {
            SeparateOutcome::FoundCycle { cycle } => {
                cycle.validate(&g).unwrap();
                assert_eq!(cycle.len(), 12);
                assert!(cycle.vertices.contains(&16) && cycle.vertices.contains(&17));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn star_pieces_have_small_diameter() {
        let g = Graph::star(8);
        let rem = g.vertex_set();
        let p = star_partition(&g, &rem, 3);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p.iter().map(Vec::len).sum::<usize>(), 9);
        for piece in &p {
            for &x in piece {
                for &y in piece {
                    assert!(inside_path(&g, piece, x, y).is_some());
                }
            }
        }
    }

    #[test]
    fn isolated_blocks_pick_lowest() {
        let g = cliques(3, 7, 21, &[]);
        let st = state(blocks(3, 7), vec![], 8);
        let SeparateOutcome::Split(sep) = separate_remainder(&g, &st, 8).unwrap() else {
            panic!()
        };
        match absorb_neighbours(&g, &st, &sep, 8, 0, 4).unwrap() {
            NeighbourOutcome::Vertex {
                block,
                v,
                matching_sizes,
                witnesses,
                ..
            } => {
                assert_eq!((block, v), (0, 0));
                assert_eq!(matching_sizes, vec![0, 0, 0]);
                assert!(witnesses.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn large_cross_matchings_close_cycle() {
        // three K_7 blocks joined pairwise by perfect matchings, ℓ = 9
        let mut extra = Vec::new();
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            extra.extend((0..7).map(|t| (7 * i + t, 7 * j + t)));
        }
        let g = cliques(3, 7, 21, &extra);
        let st = state(blocks(3, 7), vec![], 9);
        let SeparateOutcome::Split(sep) = separate_remainder(&g, &st, 9).unwrap() else {
            panic!()
        };
        match absorb_neighbours(&g, &st, &sep, 9, 5, 8).unwrap() {
            NeighbourOutcome::FoundCycle { cycle } => {
                cycle.validate(&g).unwrap();
                assert_eq!(cycle.len(), 9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_block_returned() {
        let g = cliques(1, 6, 8, &[(6, 0), (6, 1), (6, 2), (6, 3), (6, 4), (7, 6)]);
        let st = state(blocks(1, 6), vec![], 7);
        let sep = Separation {
            a_prime: vec![vec![]],
            b: vec![(0..6).collect()],
            s: vec![],
            t: vec![0],
            pieces: vec![],
            aux_edges: 0,
            lemma_holds: true,
        };
        match absorb_neighbours(&g, &st, &sep, 7, 0, 1).unwrap() {
            NeighbourOutcome::Vertex {
                block,
                v,
                witnesses,
                ..
            } => {
                assert_eq!((block, v), (0, 0));
                assert_eq!(
                    witnesses,
                    vec![AbsorbedPath {
                        vertices: vec![6],
                        a: 0,
                        b: 1
                    }]
                );
            }
            other => panic!("{other:?}"),
        }
        let empty = Separation { t: vec![], ..sep };
        assert!(matches!(
            absorb_neighbours(&g, &st, &empty, 7, 0, 1),
            Err(Error::InvalidArgument(_))
        ));
    }
}
