//! Constructive versions of the classical extremal tools.

mod drc;
mod paths;
mod posa;
mod turan;

pub(crate) use drc::drc_with_threshold;
pub use drc::{dependent_random_choice, DrcParams, DrcResult};
pub use paths::{
    close_path, hamilton_cycle, long_path, pancyclic_cycle, Pancyclic, LONG_PATH_EXACT_ORDER,
};
pub use turan::{turan_bound, turan_independent_set};
