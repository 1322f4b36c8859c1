use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scan::GameC;
use crate::error::Result;
use crate::exact::{ExactOptions, ExactSolver, GameSpec, Params};
use crate::lattice::LatticeDims;
use crate::simulate::{simulate_game, SimConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ProbeMode {
    Exact,
    Simulate {
        n: u64,
        seed: u64,
        /// Defaults per lattice when absent.
        warmup: Option<u64>,
        block_constant: Option<f64>,
    },
}

/// Means of B and C on one lattice; standard errors for simulated rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub mu_b: f64,
    pub se_b: Option<f64>,
    pub mu_c: f64,
    pub se_c: Option<f64>,
}

/// `μ_B` and `μ_C` across lattice sizes, to judge how fast they settle.
pub fn convergence_probe(
    p: &Params<f64>,
    game_c: GameC,
    sizes: &[LatticeDims],
    mode: &ProbeMode,
    opts: ExactOptions,
) -> Result<Vec<ProbeRow>> {
    let b = GameSpec::B { p: *p };
    let c = game_c.with_params(*p);
    match mode {
        ProbeMode::Exact => sizes
            .iter()
            .map(|&dims| {
                let solver = ExactSolver::new(dims, opts)?;
                Ok(ProbeRow {
                    m: dims.m,
                    n: dims.n,
                    mu_b: solver.mean(&b)?,
                    se_b: None,
                    mu_c: solver.mean(&c)?,
                    se_c: None,
                })
            })
            .collect(),
        ProbeMode::Simulate {
            n,
            seed,
            warmup,
            block_constant,
        } => sizes
            .par_iter()
            .map(|&dims| {
                let mut cfg = SimConfig::new(dims, *n, *seed);
                if let Some(l) = warmup {
                    cfg.warmup = *l;
                }
                if let Some(c) = block_constant {
                    cfg.block_constant = *c;
                }
                let rb = simulate_game(dims, &b, &cfg)?;
                let rc = simulate_game(dims, &c, &cfg)?;
                Ok(ProbeRow {
                    m: dims.m,
                    n: dims.n,
                    mu_b: rb.mean_hat,
                    se_b: Some(rb.std_error),
                    mu_c: rc.mean_hat,
                    se_c: Some(rc.std_error),
                })
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn game_a_is_zero_everywhere() {
        let sizes = [
            LatticeDims::new(3, 3).unwrap(),
            LatticeDims::new(3, 4).unwrap(),
        ];
        let exact = ProbeMode::Exact;
        let o = ExactOptions::default();
        for row in convergence_probe(
            &Params::game_a(),
            GameC::Pattern { r: 2, s: 2 },
            &sizes,
            &exact,
            o,
        )
        .unwrap()
        {
            assert!(row.mu_b.abs() < 1e-12 && row.mu_c.abs() < 1e-12);
        }
        let sim = ProbeMode::Simulate {
            n: 100_000,
            seed: 1,
            warmup: None,
            block_constant: None,
        };
        for row in convergence_probe(
            &Params::game_a(),
            GameC::Mixture { gamma: 0.5 },
            &sizes,
            &sim,
            o,
        )
        .unwrap()
        {
            assert!(row.mu_b.abs() < 4.0 * row.se_b.unwrap() + 1e-3);
            assert!(row.mu_c.abs() < 4.0 * row.se_c.unwrap() + 1e-3);
        }
    }
}
