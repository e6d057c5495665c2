//! Exact maximum independent set for graphs of order at most 64.
//!
//! Branch and bound for a maximum clique in the complement, with vertex sets
//! packed in one `u64` and a greedy colouring of the candidate set as the
//! upper bound (a colour class of the complement is a clique of `g`, so this
//! is a greedy clique cover of `g`).

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MIS_EXACT_LIMIT: usize = 64;

pub fn max_independent_set(g: &Graph) -> Result<BitSet> {
    max_independent_set_with_limit(g, MIS_EXACT_LIMIT)
}

/// As [`max_independent_set`] with a caller-chosen limit, capped at 64.
pub fn max_independent_set_with_limit(g: &Graph, limit: usize) -> Result<BitSet> {
    let n = g.order();
    let limit = limit.min(MIS_EXACT_LIMIT);
    if n > limit {
        return Err(Error::Capacity {
            what: "order for exact independent set",
            limit,
            got: n,
        });
    }
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    // non-neighbours in g = neighbours in the complement
    let comp: Vec<u64> = (0..n)
        .map(|v| {
            let nb = g.neighbors(v).iter().fold(0u64, |m, w| m | (1 << w));
            full & !nb & !(1u64 << v)
        })
        .collect();
    let mut best = 0u64;
    // isolated vertices of g are in every maximum independent set
    let mut forced = 0u64;
    for v in 0..n {
        if g.degree(v) == 0 {
            forced |= 1 << v;
        }
    }
    let mut s = Search {
        comp: &comp,
        best: &mut best,
    };
    s.expand(forced, full & !forced);
    let mut out = BitSet::new(n);
    let mut b = best;
    while b != 0 {
        out.insert(b.trailing_zeros() as usize);
        b &= b - 1;
    }
    debug_assert!(g.is_independent(&out));
    Ok(out)
}

/// α(g), exact.
pub fn independence_number(g: &Graph) -> Result<usize> {
    Ok(max_independent_set(g)?.len())
}

struct Search<'a> {
    comp: &'a [u64],
    best: &'a mut u64,
}

impl Search<'_> {
    fn expand(&mut self, r: u64, p: u64) {
        if p == 0 {
            if r.count_ones() > self.best.count_ones() {
                *self.best = r;
            }
            return;
        }
        let (order, bounds) = self.color_sort(p);
        let mut p = p;
        for i in (0..order.len()).rev() {
            if r.count_ones() + bounds[i] <= self.best.count_ones() {
                return;
            }
            let v = order[i];
            self.expand(r | (1 << v), p & self.comp[v]);
            p &= !(1u64 << v);
        }
        if r.count_ones() > self.best.count_ones() {
            *self.best = r;
        }
    }

    /// Greedy sequential colouring of `p` in the complement. Returns vertices
    /// in colour order and, for each, the number of colours used so far.
    fn color_sort(&self, p: u64) -> (Vec<usize>, Vec<u32>) {
        let mut order = Vec::with_capacity(p.count_ones() as usize);
        let mut bounds = Vec::with_capacity(order.capacity());
        let mut uncolored = p;
        let mut color = 0u32;
        while uncolored != 0 {
            color += 1;
            let mut avail = uncolored;
            while avail != 0 {
                let v = avail.trailing_zeros() as usize;
                avail &= avail - 1;
                // colour class must be independent in the complement
                avail &= !self.comp[v];
                uncolored &= !(1u64 << v);
                order.push(v);
                bounds.push(color);
            }
        }
        (order, bounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn brute_alpha(g: &Graph) -> usize {
        let n = g.order();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let ok = (0..n)
                .all(|u| mask >> u & 1 == 0 || g.neighbors(u).iter().all(|w| mask >> w & 1 == 0));
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn small_known_values() {
        assert_eq!(independence_number(&Graph::complete(7)).unwrap(), 1);
        assert_eq!(independence_number(&Graph::cycle(5)).unwrap(), 2);
        assert_eq!(independence_number(&Graph::petersen()).unwrap(), 4);
        assert_eq!(brute_alpha(&Graph::petersen()), 4);
        assert_eq!(independence_number(&Graph::empty(64)).unwrap(), 64);
        assert_eq!(independence_number(&Graph::empty(0)).unwrap(), 0);
    }

    #[test]
    fn capacity_error_above_limit() {
        assert!(matches!(
            max_independent_set(&Graph::empty(65)),
            Err(Error::Capacity { .. })
        ));
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(n in 0usize..14, p in 0.0f64..1.0, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = Graph::gnp(n, p, &mut rng);
            let s = max_independent_set(&g).unwrap();
            prop_assert!(g.is_independent(&s));
            prop_assert_eq!(s.len(), brute_alpha(&g));
        }
    }
}
