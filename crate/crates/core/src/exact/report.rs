use serde::{Deserialize, Serialize};

use super::equilibrium::Equilibrium;
use super::params::GameSpec;
use super::regime::RegimeTag;
use crate::lattice::LatticeDims;

/// JSON summary of an exact solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub game: String,
    pub params: [f64; 5],
    pub mu: f64,
    pub sigma2: f64,
    pub regime: RegimeTag,
    pub num_classes: usize,
    pub residual: f64,
}

impl EquilibriumReport {
    pub fn new(dims: LatticeDims, game: &GameSpec<f64>, eq: &Equilibrium<f64>) -> Self {
        Self {
            m: dims.m,
            n: dims.n,
            game: game.label(),
            params: game.params().0,
            mu: eq.mean,
            sigma2: eq.variance,
            regime: eq.regime,
            num_classes: eq.num_classes,
            residual: eq.residual,
        }
    }
}
