//! Exact and simulated equilibrium profits of two-dimensional spatially
//! dependent Parrondo games.
//!
//! `M x N` players sit on a torus. On each turn a random player tosses coin
//! `m`, where `m` counts their winning nearest neighbours, and wins or loses
//! one unit. Game A uses fair coins, game B the five coins `p0..p4`, and game
//! C either mixes the two at random or plays them in a fixed `A^r B^s` pattern.
//!
//! * [`lattice`]: packed states, the torus symmetry group and its orbits.
//! * [`exact`]: reduced transition matrices and the mean/variance of profit.
//! * [`simulate`]: Monte Carlo play with block variance estimates.
//! * [`regions`]: Parrondo-region scans, volume estimates and ergodicity checks.
//!
//! The numerical core is generic over [`Scalar`]; the aliases below fix it to
//! `f64`.

pub mod error;
pub mod exact;
pub mod lattice;
pub mod linalg;
pub mod regions;
pub mod scalar;
pub mod simulate;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type ParamVector = exact::Params<f64>;
pub type EquilibriumStats = exact::Equilibrium<f64>;
pub type Game = exact::GameSpec<f64>;
pub type ReducedChainF64 = exact::ReducedChain<f64>;
