//! Monte Carlo play on lattices of any size.

mod block;
mod grid;
mod rng;
mod run;

pub use block::{block_size, block_variance, BlockVariance};
pub use grid::{Grid, InitialState};
pub use rng::{task_rng, unit_cube, RngStreams};
pub use run::{
    coupled_paths, default_block_constant, default_warmup, mixing_warmup, simulate_game,
    simulate_game_traced, step, CoupledPaths, SimConfig, SimReport, SimResult, DEFAULT_WARMUP_EPS,
};
