//! Simple undirected graphs, paths, cycles and the red/blue coloring wrapper.
//!
//! Adjacency is stored as one [`BitSet`] row per vertex so that degree and
//! common-neighbourhood queries cost `O(N / 64)` word operations. Graphs are
//! immutable once built; every reduction returns a fresh graph together with a
//! [`Relabel`] map back to the host.

use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<BitSet>,
    edges: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("order", &self.order())
            .field("edges", &self.edge_list())
            .finish()
    }
}

/// Vertex correspondence between a derived graph and its host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabel {
    /// `to_host[i]` is the host vertex behind derived vertex `i`.
    pub to_host: Vec<usize>,
    /// Inverse of `to_host`, indexed by host vertex.
    pub from_host: Vec<Option<usize>>,
}

impl Relabel {
    pub fn identity(n: usize) -> Self {
        Relabel {
            to_host: (0..n).collect(),
            from_host: (0..n).map(Some).collect(),
        }
    }

    pub fn host(&self, v: usize) -> usize {
        self.to_host[v]
    }

    pub fn map_all(&self, vs: &[usize]) -> Vec<usize> {
        vs.iter().map(|&v| self.to_host[v]).collect()
    }

    /// Compose: `self` maps into `outer`'s derived graph, result maps into `outer`'s host.
    pub fn then(&self, outer: &Relabel) -> Relabel {
        let to_host: Vec<usize> = self.to_host.iter().map(|&v| outer.to_host[v]).collect();
        let mut from_host = vec![None; outer.from_host.len()];
        for (i, &h) in to_host.iter().enumerate() {
            from_host[h] = Some(i);
        }
        Relabel { to_host, from_host }
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![BitSet::new(n); n],
            edges: 0,
        }
    }

    /// Builds a graph, rejecting self-loops, duplicates and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![BitSet::new(n); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u},{v}) outside [0,{n})"));
            }
            if u == v {
                return invalid(format!("self-loop at {u}"));
            }
            if !adj[u].insert(v) {
                return invalid(format!("duplicate edge ({u},{v})"));
            }
            adj[v].insert(u);
        }
        Ok(Graph {
            adj,
            edges: edges.len(),
        })
    }

    /// Builds from symmetric adjacency rows. Rows must be loop-free and symmetric.
    pub(crate) fn from_adjacency(adj: Vec<BitSet>) -> Self {
        let sum: usize = adj.iter().map(BitSet::len).sum();
        debug_assert!(adj.iter().enumerate().all(|(v, r)| !r.contains(v)));
        debug_assert_eq!(sum % 2, 0);
        Graph {
            adj,
            edges: sum / 2,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| {
                let mut r = BitSet::full(n);
                r.remove(v);
                r
            })
            .collect();
        Graph::from_adjacency(adj)
    }

    /// The cycle `0-1-…-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle edges are valid")
    }

    /// The path `0-1-…-(n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path edges are valid")
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("star edges are valid")
    }

    /// `K_{a,b}` with parts `[0,a)` and `[a,a+b)`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::with_capacity(a * b);
        for u in 0..a {
            for v in a..a + b {
                edges.push((u, v));
            }
        }
        Graph::from_edges(a + b, &edges).expect("bipartite edges are valid")
    }

    /// Petersen graph: outer 5-cycle on 0..5, spokes i–(i+5), inner pentagram on 5..10.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges).expect("petersen edges are valid")
    }

    /// Disjoint union, relabelling the parts consecutively.
    pub fn disjoint_union(parts: &[Graph]) -> Self {
        let n: usize = parts.iter().map(Graph::order).sum();
        let mut edges = Vec::new();
        let mut off = 0;
        for g in parts {
            edges.extend(g.edge_list().into_iter().map(|(u, v)| (u + off, v + off)));
            off += g.order();
        }
        Graph::from_edges(n, &edges).expect("union edges are valid")
    }

    /// Erdős–Rényi `G(n, p)`, edges decided in lexicographic pair order.
    pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut adj = vec![BitSet::new(n); n];
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p.clamp(0.0, 1.0)) {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
        }
        Graph::from_adjacency(adj)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].contains(v)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `d(G) = 2e(G)/v(G)`, zero for the empty graph.
    pub fn average_degree(&self) -> f64 {
        if self.order() == 0 {
            0.0
        } else {
            2.0 * self.edges as f64 / self.order() as f64
        }
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges);
        for u in 0..self.order() {
            for v in self.adj[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertex_set(&self) -> BitSet {
        BitSet::full(self.order())
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let adj = (0..n)
            .map(|v| {
                let mut r = self.adj[v].complement();
                r.remove(v);
                r
            })
            .collect();
        Graph::from_adjacency(adj)
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_within(&self, set: &BitSet) -> usize {
        set.iter()
            .map(|v| self.adj[v].intersection_len(set))
            .sum::<usize>()
            / 2
    }

    /// Number of edges between disjoint sets `a` and `b`.
    pub fn edges_between(&self, a: &BitSet, b: &BitSet) -> usize {
        a.iter().map(|v| self.adj[v].intersection_len(b)).sum()
    }

    /// `N(set) \ set`.
    pub fn neighborhood_of(&self, set: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.order());
        for v in set.iter() {
            out.union_with(&self.adj[v]);
        }
        out.difference_with(set);
        out
    }

    pub fn is_independent(&self, set: &BitSet) -> bool {
        set.iter().all(|v| !self.adj[v].intersects(set))
    }

    /// Connected components (each sorted), ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_within(&self.vertex_set())
    }

    /// Components of `G[set]`.
    pub fn components_within(&self, set: &BitSet) -> Vec<Vec<usize>> {
        let mut left = set.clone();
        let mut out = Vec::new();
        while let Some(s) = left.first() {
            let mut comp = BitSet::new(self.order());
            comp.insert(s);
            let mut frontier = vec![s];
            left.remove(s);
            while let Some(v) = frontier.pop() {
                let fresh = self.adj[v].intersection(&left);
                for w in fresh.iter() {
                    left.remove(w);
                    comp.insert(w);
                    frontier.push(w);
                }
            }
            out.push(comp.to_vec());
        }
        out
    }

    /// True if the graph is `K_{a,b}` (connected, bipartite, all cross pairs adjacent, a,b ≥ 1).
    pub fn is_complete_bipartite(&self) -> bool {
        let n = self.order();
        if n < 2 {
            return false;
        }
        let left = self.adj[0].complement();
        let right = self.adj[0].clone();
        if right.is_empty() {
            return false;
        }
        for v in 0..n {
            let expect = if left.contains(v) { &right } else { &left };
            let mut e = expect.clone();
            e.remove(v);
            if self.adj[v] != e {
                return false;
            }
        }
        true
    }

    /// Induced subgraph on `set`, relabelled in increasing vertex order.
    pub(crate) fn induced_on(&self, set: &BitSet) -> (Graph, Relabel) {
        let to_host = set.to_vec();
        let mut from_host = vec![None; self.order()];
        for (i, &h) in to_host.iter().enumerate() {
            from_host[h] = Some(i);
        }
        let k = to_host.len();
        let adj = to_host
            .iter()
            .map(|&h| {
                let mut row = BitSet::new(k);
                for w in self.adj[h].intersection(set).iter() {
                    row.insert(from_host[w].expect("inside set"));
                }
                row
            })
            .collect();
        (Graph::from_adjacency(adj), Relabel { to_host, from_host })
    }

    /// Spanning subgraph keeping only the edges of `self` that `keep` accepts.
    pub(crate) fn filter_edges<F: Fn(usize, usize) -> bool>(&self, keep: F) -> Graph {
        let n = self.order();
        let mut adj = vec![BitSet::new(n); n];
        for (u, v) in self.edge_list() {
            if keep(u, v) {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        Graph::from_adjacency(adj)
    }
}

/// `G[A]` together with the relabelling map.
pub fn induced_subgraph(g: &Graph, a: &[usize]) -> Result<(Graph, Relabel)> {
    let mut set = BitSet::new(g.order());
    for &v in a {
        if v >= g.order() {
            return invalid(format!("vertex {v} outside [0,{})", g.order()));
        }
        set.insert(v);
    }
    Ok(g.induced_on(&set))
}

/// The `k`-core: repeatedly delete the lowest-index vertex of degree `< k`.
/// Returns `None` when nothing survives.
pub fn min_degree_subgraph(g: &Graph, k: usize) -> Option<(Graph, Relabel)> {
    let alive = k_core_set(g, &g.vertex_set(), k);
    if alive.is_empty() {
        None
    } else {
        Some(g.induced_on(&alive))
    }
}

/// Vertex set of the `k`-core of `G[within]`.
pub(crate) fn k_core_set(g: &Graph, within: &BitSet, k: usize) -> BitSet {
    let mut alive = within.clone();
    let mut deg: Vec<usize> = (0..g.order())
        .map(|v| {
            if alive.contains(v) {
                g.neighbors(v).intersection_len(&alive)
            } else {
                0
            }
        })
        .collect();
    loop {
        let victim = alive.iter().find(|&v| deg[v] < k);
        match victim {
            None => break,
            Some(v) => {
                alive.remove(v);
                for w in g.neighbors(v).intersection(&alive).iter() {
                    deg[w] -= 1;
                }
            }
        }
    }
    alive
}

/// A bipartition and the spanning subgraph of crossing edges.
#[derive(Clone, Debug)]
pub struct BipartiteHalf {
    pub left: BitSet,
    pub right: BitSet,
    /// Same vertex labels as the input; only crossing edges kept.
    pub graph: Graph,
}

/// Bipartite subgraph with at least half the edges.
///
/// Greedy placement (each vertex joins the side holding fewer of its placed
/// neighbours), then single-vertex moves while some vertex has more neighbours
/// on its own side than across. Every move strictly increases the cut, so the
/// loop terminates, and at the fixpoint each vertex keeps at least half its edges.
pub fn bipartite_half(g: &Graph) -> BipartiteHalf {
    let n = g.order();
    let mut left = BitSet::new(n);
    let mut right = BitSet::new(n);
    for v in 0..n {
        let on_left = g.neighbors(v).intersection_len(&left);
        let on_right = g.neighbors(v).intersection_len(&right);
        if on_left <= on_right {
            left.insert(v);
        } else {
            right.insert(v);
        }
    }
    loop {
        let mut moved = false;
        for v in 0..n {
            let (own, other) = if left.contains(v) {
                (&left, &right)
            } else {
                (&right, &left)
            };
            let inside = g.neighbors(v).intersection_len(own);
            let across = g.neighbors(v).intersection_len(other);
            if inside > across {
                if left.contains(v) {
                    left.remove(v);
                    right.insert(v);
                } else {
                    right.remove(v);
                    left.insert(v);
                }
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let l = left.clone();
    let graph = g.filter_edges(|u, v| l.contains(u) != l.contains(v));
    BipartiteHalf { left, right, graph }
}

/// `e(G) ≤ C(k,2) + (v(G) − k)(k − 1)`.
pub fn edge_bound_check(g: &Graph, k: usize) -> Result<bool> {
    if k > g.order() {
        return invalid(format!("k = {k} exceeds order {}", g.order()));
    }
    let bound = k * k.saturating_sub(1) / 2 + (g.order() - k) * k.saturating_sub(1);
    Ok(g.edge_count() <= bound)
}

/// A path `x_0 x_1 … x_L` of distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    pub vertices: Vec<usize>,
}

impl Path {
    /// Checks distinctness and consecutive adjacency in `g`.
    pub fn new_in(g: &Graph, vertices: Vec<usize>) -> Result<Path> {
        let p = Path { vertices };
        p.validate(g)?;
        Ok(p)
    }

    pub(crate) fn unchecked(vertices: Vec<usize>) -> Path {
        Path { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("non-empty path")
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidArgument("empty path".into()));
        }
        check_distinct(g, &self.vertices)?;
        for w in self.vertices.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return invalid(format!("path step {}-{} is not an edge", w[0], w[1]));
            }
        }
        Ok(())
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.vertices.clone();
        v.reverse();
        Path { vertices: v }
    }
}

/// A cycle listed in cyclic order; at least three distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle {
    pub vertices: Vec<usize>,
}

impl Cycle {
    pub fn new_in(g: &Graph, vertices: Vec<usize>) -> Result<Cycle> {
        let c = Cycle { vertices };
        c.validate(g)?;
        Ok(c)
    }

    pub(crate) fn unchecked(vertices: Vec<usize>) -> Cycle {
        Cycle { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let k = self.vertices.len();
        if k < 3 {
            return invalid(format!("cycle needs at least 3 vertices, got {k}"));
        }
        check_distinct(g, &self.vertices)?;
        for i in 0..k {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
            if !g.has_edge(a, b) {
                return invalid(format!("cycle step {a}-{b} is not an edge"));
            }
        }
        Ok(())
    }

    /// Relabels through `map` (derived → host).
    pub fn mapped(&self, map: &Relabel) -> Cycle {
        Cycle {
            vertices: map.map_all(&self.vertices),
        }
    }
}

fn check_distinct(g: &Graph, vs: &[usize]) -> Result<()> {
    let mut seen = BitSet::new(g.order());
    for &v in vs {
        if v >= g.order() {
            return invalid(format!("vertex {v} outside [0,{})", g.order()));
        }
        if !seen.insert(v) {
            return invalid(format!("vertex {v} repeated"));
        }
    }
    Ok(())
}

/// A red/blue coloring of `K_N`; blue is the complement of `red`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    pub red: Graph,
}

impl EdgeColoring {
    pub fn new(red: Graph) -> Self {
        EdgeColoring { red }
    }

    pub fn order(&self) -> usize {
        self.red.order()
    }

    pub fn is_red(&self, u: usize, v: usize) -> bool {
        self.red.has_edge(u, v)
    }

    pub fn is_blue(&self, u: usize, v: usize) -> bool {
        u != v && u < self.order() && v < self.order() && !self.red.has_edge(u, v)
    }

    pub fn blue(&self) -> Graph {
        self.red.complement()
    }
}
