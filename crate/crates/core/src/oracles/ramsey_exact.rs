//! Exhaustive computation of `r(C_ℓ, K_n)` at tiny orders.
//!
//! A colouring of `K_N` avoids both a red `C_ℓ` and a blue `K_n` exactly when
//! its red graph is `C_ℓ`-free with `α ≤ n−1`. Both properties are inherited
//! by induced subgraphs, so every good graph on `N` vertices arises from a
//! good graph on `N−1` vertices by adding one vertex. The search grows the
//! good graphs level by level, keeping one representative per isomorphism
//! class, and reports the first level that comes out empty.

use super::canon::canonical_form;
use super::cycle::find_cycle_exact;
use super::mis::independence_number;
use crate::error::{invalid, Result};
use crate::graph::Graph;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum RamseyExact {
    /// Every colouring of `K_value` has a red `C_ℓ` or a blue `K_n`.
    /// `extremal` is a canonical good red graph on `value − 1` vertices.
    Determined {
        value: usize,
        #[serde(skip)]
        extremal: Option<Graph>,
        classes_per_level: Vec<usize>,
    },
    /// Good graphs exist on every order up to `searched_up_to`, or the class budget ran out.
    Unknown {
        searched_up_to: usize,
        classes_per_level: Vec<usize>,
    },
}

impl RamseyExact {
    pub fn value(&self) -> Option<usize> {
        match self {
            RamseyExact::Determined { value, .. } => Some(*value),
            RamseyExact::Unknown { .. } => None,
        }
    }
}

/// Upper bound on isomorphism classes kept per level before giving up.
pub const DEFAULT_CLASS_BUDGET: usize = 2_000_000;

pub fn ramsey_exact(ell: usize, n: usize, n_max: usize) -> Result<RamseyExact> {
    ramsey_exact_with_budget(ell, n, n_max, DEFAULT_CLASS_BUDGET)
}

pub fn ramsey_exact_with_budget(
    ell: usize,
    n: usize,
    n_max: usize,
    class_budget: usize,
) -> Result<RamseyExact> {
    if ell < 3 || n < 1 {
        return invalid(format!("need ell >= 3 and n >= 1, got ell={ell}, n={n}"));
    }
    let mut level: Vec<Graph> = vec![Graph::empty(0)];
    let mut counts = vec![1usize];
    for order in 1..=n_max {
        let next = extend_level(&level, ell, n)?;
        counts.push(next.len());
        if next.is_empty() {
            return Ok(RamseyExact::Determined {
                value: order,
                extremal: level.into_iter().next(),
                classes_per_level: counts,
            });
        }
        if next.len() > class_budget {
            return Ok(RamseyExact::Unknown {
                searched_up_to: order,
                classes_per_level: counts,
            });
        }
        level = next;
    }
    Ok(RamseyExact::Unknown {
        searched_up_to: n_max,
        classes_per_level: counts,
    })
}

fn is_good(g: &Graph, ell: usize, n: usize) -> Result<bool> {
    if independence_number(g)? >= n {
        return Ok(false);
    }
    Ok(find_cycle_exact(g, ell)?.is_none())
}

/// Extensions keyed by canonical form.
type Keyed = Vec<(Vec<u64>, Graph)>;

fn extend_level(level: &[Graph], ell: usize, n: usize) -> Result<Vec<Graph>> {
    let parts: Vec<Result<Keyed>> = level
        .par_iter()
        .map(|g| {
            let k = g.order();
            let base = g.edge_list();
            let mut out = Vec::new();
            for mask in 0u64..(1u64 << k) {
                let mut edges = base.clone();
                edges.extend((0..k).filter(|&v| mask >> v & 1 == 1).map(|v| (v, k)));
                let h = Graph::from_edges(k + 1, &edges)?;
                if is_good(&h, ell, n)? {
                    out.push(canonical_form(&h));
                }
            }
            Ok(out)
        })
        .collect();
    let mut classes = BTreeMap::new();
    for part in parts {
        for (code, g) in part? {
            classes.entry(code).or_insert(g);
        }
    }
    Ok(classes.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_versus_triangle_is_six() {
        let r = ramsey_exact(3, 3, 8).unwrap();
        assert_eq!(r.value(), Some(6));
        // the unique good graph on five vertices is C_5
        if let RamseyExact::Determined {
            extremal: Some(g),
            classes_per_level,
            ..
        } = r
        {
            assert_eq!(classes_per_level[5], 1);
            assert_eq!(g.edge_count(), 5);
            assert!((0..5).all(|v| g.degree(v) == 2));
        } else {
            panic!("expected a determined value");
        }
    }

    #[test]
    fn four_cycle_versus_triangle_is_seven() {
        assert_eq!(ramsey_exact(4, 3, 9).unwrap().value(), Some(7));
    }

    #[test]
    fn n_two_and_n_one() {
        for ell in 3..=7 {
            assert_eq!(ramsey_exact(ell, 2, 9).unwrap().value(), Some(ell));
            assert_eq!(ramsey_exact(ell, 1, 9).unwrap().value(), Some(1));
        }
    }

    #[test]
    fn unknown_when_bound_too_small() {
        assert!(matches!(
            ramsey_exact(5, 3, 5).unwrap(),
            RamseyExact::Unknown {
                searched_up_to: 5,
                ..
            }
        ));
    }
}
