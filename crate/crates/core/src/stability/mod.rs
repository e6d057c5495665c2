//! The stability pipeline: near-clique decomposition, absorption of the
//! remainder, and the end-to-end search for a red cycle or blue clique.

mod absorb;
mod decomposition;
mod search;
mod separate;

pub use absorb::{
    absorb_remainder, block_cycle, block_path, AbsorbOutcome, AbsorbedPath, AbsorptionState,
    BlockState,
};
pub use decomposition::{
    check_conclusions, inter_hub_graphs, matching_across_independent_sets, parity_break_all,
    stability_decomposition, AcrossSetsOutcome, CliqueDecomposition, DecompositionChecks,
    IndependentSetMatching, InterHub, PairMatching, ParityBreak, StabilityOutcome, StabilityParams,
    StabilityReport,
};
pub use search::{
    ramsey_search, random_coloring, RunParams, RunReport, SearchOutcome, SearchResult, StageRecord,
};
pub use separate::{
    absorb_neighbours, close_through_blocks, separate_remainder, Connector, NeighbourOutcome,
    SeparateOutcome, Separation,
};
