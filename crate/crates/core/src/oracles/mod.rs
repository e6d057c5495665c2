//! Exact ground truth used to certify every other module's output.

pub(crate) mod canon;
mod certificate;
mod cycle;
mod mis;
mod ramsey_exact;

pub use certificate::{verify_certificate, Certificate};
pub use cycle::{
    color_coding_trials, find_cycle_exact, find_cycle_exact_with, short_cycles, CycleOracleConfig,
    SUBSET_DP_MAX_ORDER,
};
pub use mis::{
    independence_number, max_independent_set, max_independent_set_with_limit, MIS_EXACT_LIMIT,
};
pub use ramsey_exact::{ramsey_exact, ramsey_exact_with_budget, RamseyExact, DEFAULT_CLASS_BUDGET};
