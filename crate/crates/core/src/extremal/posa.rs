//! Path growth by extension, crossing closure and rotation.
//!
//! A path is extended at either end while an end has a neighbour off the
//! path. When both ends are stuck, a crossing pair `x_i ~ x_last`,
//! `x_{i+1} ~ x_0` closes the path into a cycle on the same vertex set; any
//! off-path neighbour of a cycle vertex then gives a longer path. Rotations
//! (`x_0..x_i x_last..x_{i+1}`) supply fresh endpoints when neither works.
//!
//! Whenever the endpoint degrees add up to at least the path's vertex
//! count and all their neighbours lie on the path, a crossing pair exists,
//! so in a connected graph the path grows until it has
//! `min(2δ, order)` vertices, or spans the graph when `δ ≥ order/2`.

use crate::bitset::BitSet;
use crate::graph::Graph;

pub(crate) struct Grower<'a> {
    g: &'a Graph,
    allowed: &'a BitSet,
    path: Vec<usize>,
    on_path: BitSet,
    rotation_budget: usize,
}

impl<'a> Grower<'a> {
    pub(crate) fn new(g: &'a Graph, allowed: &'a BitSet, start: usize) -> Self {
        let mut on_path = BitSet::new(g.order());
        on_path.insert(start);
        Grower {
            g,
            allowed,
            path: vec![start],
            on_path,
            rotation_budget: 4 * g.order() + 16,
        }
    }

    pub(crate) fn into_path(self) -> Vec<usize> {
        self.path
    }

    fn off_path_neighbor(&self, v: usize) -> Option<usize> {
        let mut cand = self.g.neighbors(v).intersection(self.allowed);
        cand.difference_with(&self.on_path);
        cand.first()
    }

    fn push(&mut self, w: usize) {
        self.on_path.insert(w);
        self.path.push(w);
    }

    fn try_extend(&mut self) -> bool {
        if let Some(w) = self.off_path_neighbor(*self.path.last().unwrap()) {
            self.push(w);
            return true;
        }
        if let Some(w) = self.off_path_neighbor(self.path[0]) {
            self.path.reverse();
            self.push(w);
            return true;
        }
        false
    }

    /// Cyclic order of a cycle on exactly the path's vertices, if a closing
    /// edge or a crossing pair exists.
    pub(crate) fn closing_cycle(&self) -> Option<Vec<usize>> {
        closing_cycle(self.g, &self.path)
    }

    fn try_open_cycle(&mut self) -> bool {
        if self.path.len() < 3 {
            return false;
        }
        let Some(cyc) = self.closing_cycle() else {
            return false;
        };
        for (i, &c) in cyc.iter().enumerate() {
            if let Some(w) = self.off_path_neighbor(c) {
                let k = cyc.len();
                // w, c, then the rest of the cycle in reverse from c
                let mut p = Vec::with_capacity(k + 1);
                p.push(w);
                for j in 0..k {
                    p.push(cyc[(i + k - j) % k]);
                }
                self.on_path.insert(w);
                self.path = p;
                return true;
            }
        }
        false
    }

    /// Breadth-first search over rotations of the last endpoint for a path
    /// that can extend or reopen. Adopts the first such rotation.
    fn try_rotations(&mut self) -> bool {
        let mut seen_ends = BitSet::new(self.g.order());
        seen_ends.insert(*self.path.last().unwrap());
        let mut queue = std::collections::VecDeque::from([self.path.clone()]);
        let mut spent = 0;
        while let Some(p) = queue.pop_front() {
            let end = *p.last().unwrap();
            let k = p.len();
            for i in 0..k.saturating_sub(2) {
                if !self.g.has_edge(p[i], end) {
                    continue;
                }
                spent += 1;
                if spent > self.rotation_budget {
                    return false;
                }
                let new_end = p[i + 1];
                if !seen_ends.insert(new_end) {
                    continue;
                }
                let mut q = p[..=i].to_vec();
                q.extend(p[i + 1..].iter().rev());
                let open = self.off_path_neighbor(new_end).is_some()
                    || closing_cycle(self.g, &q)
                        .is_some_and(|c| c.iter().any(|&v| self.off_path_neighbor(v).is_some()));
                if open {
                    self.path = q;
                    return true;
                }
                queue.push_back(q);
            }
        }
        false
    }

    /// Grows until the path has `target` vertices or no move applies.
    pub(crate) fn grow_to(&mut self, target: usize) {
        while self.path.len() < target {
            if self.try_extend() || self.try_open_cycle() || self.try_rotations() {
                continue;
            }
            break;
        }
    }
}

pub(crate) fn closing_cycle(g: &Graph, path: &[usize]) -> Option<Vec<usize>> {
    let k = path.len();
    if k < 3 {
        return None;
    }
    let (first, last) = (path[0], path[k - 1]);
    if g.has_edge(first, last) {
        return Some(path.to_vec());
    }
    for i in 1..k - 2 {
        if g.has_edge(path[i], last) && g.has_edge(path[i + 1], first) {
            let mut c = path[..=i].to_vec();
            c.extend(path[i + 1..].iter().rev());
            return Some(c);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grows_hamilton_path_in_complete_graph() {
        let g = Graph::complete(9);
        let all = g.vertex_set();
        let mut gr = Grower::new(&g, &all, 4);
        gr.grow_to(9);
        let p = gr.into_path();
        assert_eq!(p.len(), 9);
    }

    #[test]
    fn crossing_closure() {
        // path 0-1-2-3 with chords 1~3 and 2~0 closes to 0 1 3 2
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (1, 3), (0, 2)]).unwrap();
        let c = closing_cycle(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(c, vec![0, 1, 3, 2]);
    }
}
