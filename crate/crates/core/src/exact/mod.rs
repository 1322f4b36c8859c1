//! Exact equilibrium computations on the symmetry-reduced chain.

mod chain;
mod equilibrium;
mod params;
mod regime;
mod report;

pub use chain::{
    build_full, build_full_row, build_reduced, ReducedChain, ReducedStructure, SignVariant,
};
pub use equilibrium::{
    equilibrium_stats_b, equilibrium_stats_mixture, equilibrium_stats_pattern, lambda_weights,
    voter_params, voter_variance_3x3, Equilibrium, ExactOptions, ExactSolver, DEFAULT_EXACT_CAP,
};
pub use params::{mixture_params, reflect_params, GameSpec, Params};
pub use regime::{classify_regime, RegimeTag};
pub use report::EquilibriumReport;
