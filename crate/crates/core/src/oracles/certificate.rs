//! Certificates for the cycle-versus-clique question and their verifier.
//!
//! The verifier re-checks adjacency directly on the colouring and shares no
//! code with any search routine.

use crate::error::{invalid, Error, Result};
use crate::graph::EdgeColoring;
use serde::{Deserialize, Serialize};

/// A red `ell`-cycle or a blue independent `n`-set of the red graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    RedCycle { vertices: Vec<usize>, ell: usize },
    BlueIndependentSet { vertices: Vec<usize>, n: usize },
}

impl Certificate {
    pub fn vertices(&self) -> &[usize] {
        match self {
            Certificate::RedCycle { vertices, .. } => vertices,
            Certificate::BlueIndependentSet { vertices, .. } => vertices,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// True iff `cert` is a red `ell`-cycle or a blue `K_n` in `c`.
pub fn verify_certificate(
    c: &EdgeColoring,
    cert: &Certificate,
    ell: usize,
    n: usize,
) -> Result<bool> {
    let order = c.order();
    if let Some(&v) = cert.vertices().iter().find(|&&v| v >= order) {
        return invalid(format!("certificate vertex {v} outside [0,{order})"));
    }
    let vs = cert.vertices();
    let mut seen = vec![false; order];
    for &v in vs {
        if std::mem::replace(&mut seen[v], true) {
            return Ok(false);
        }
    }
    Ok(match cert {
        Certificate::RedCycle { ell: e, .. } => {
            *e == ell
                && vs.len() == ell
                && ell >= 3
                && (0..ell).all(|i| c.is_red(vs[i], vs[(i + 1) % ell]))
        }
        Certificate::BlueIndependentSet { n: k, .. } => {
            *k == n
                && vs.len() == n
                && (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| c.is_blue(vs[i], vs[j])))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::witness::chvatal_harary;

    #[test]
    fn cycle_and_set_checks() {
        let c = EdgeColoring::new(Graph::cycle(5));
        let cyc = Certificate::RedCycle {
            vertices: vec![0, 1, 2, 3, 4],
            ell: 5,
        };
        assert!(verify_certificate(&c, &cyc, 5, 3).unwrap());
        let small = Certificate::BlueIndependentSet {
            vertices: vec![0, 1],
            n: 3,
        };
        assert!(!verify_certificate(&c, &small, 5, 3).unwrap());
        let ok = Certificate::BlueIndependentSet {
            vertices: vec![0, 2],
            n: 2,
        };
        assert!(verify_certificate(&c, &ok, 5, 2).unwrap());
        let bad = Certificate::RedCycle {
            vertices: vec![0, 9, 2],
            ell: 3,
        };
        assert!(verify_certificate(&c, &bad, 3, 2).is_err());
    }

    #[test]
    fn chvatal_harary_transversals() {
        // (ell=4, n=3): two red triangles {0,1,2}, {3,4,5}
        let w = chvatal_harary(4, 3).unwrap();
        let c = EdgeColoring::new(w.red.clone());
        for a in 0..3 {
            for b in 3..6 {
                let cert = Certificate::BlueIndependentSet {
                    vertices: vec![a, b],
                    n: 2,
                };
                assert!(verify_certificate(&c, &cert, 4, 2).unwrap());
            }
        }
        let same = Certificate::BlueIndependentSet {
            vertices: vec![0, 1],
            n: 2,
        };
        assert!(!verify_certificate(&c, &same, 4, 2).unwrap());
        let three = Certificate::BlueIndependentSet {
            vertices: vec![0, 3, 4],
            n: 3,
        };
        assert!(!verify_certificate(&c, &three, 4, 3).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let cert = Certificate::RedCycle {
            vertices: vec![3, 1, 2],
            ell: 3,
        };
        let s = cert.to_json();
        assert_eq!(s, r#"{"kind":"RedCycle","vertices":[3,1,2],"ell":3}"#);
        assert_eq!(Certificate::from_json(&s).unwrap(), cert);
        let b = Certificate::BlueIndependentSet {
            vertices: vec![0, 4],
            n: 2,
        };
        assert_eq!(
            Certificate::from_json(&b.to_json()).unwrap().to_json(),
            b.to_json()
        );
    }
}
