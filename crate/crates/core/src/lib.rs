//! Algorithms around the cycle-versus-clique Ramsey numbers `r(C_ℓ, K_n)`.

pub mod bfs;
pub mod bitset;
pub mod cli;
pub mod dense;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod hubs;
pub mod io;
mod matching;
pub mod oracles;
pub mod stability;
pub mod witness;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use graph::{Cycle, EdgeColoring, Graph, Path, Relabel};
