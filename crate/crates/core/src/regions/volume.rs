use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::conditions::{Proportion, CHUNK};
use super::scan::{evaluate_cell, GameC, RegionClass};
use crate::error::{Error, Result};
use crate::exact::{ExactOptions, ExactSolver, Params};
use crate::lattice::LatticeDims;
use crate::simulate::{task_rng, unit_cube};

/// Monte Carlo volumes of the Parrondo and anti-Parrondo regions in the
/// `(p1, p2, p3)` cube at fixed `p0`, `p4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub p0: f64,
    pub p4: f64,
    pub game: String,
    pub samples: u64,
    pub vol_parrondo: f64,
    pub se_parrondo: f64,
    pub vol_anti: f64,
    pub se_anti: f64,
    /// Samples at which a mean was undefined.
    pub undefined: u64,
}

pub fn estimate_region_volume(
    dims: LatticeDims,
    p0: f64,
    p4: f64,
    game_c: GameC,
    samples: u64,
    seed: u64,
    opts: ExactOptions,
) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    for (name, v) in [("p0", p0), ("p4", p4)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParams(format!(
                "{name} = {v} is outside [0, 1]"
            )));
        }
    }
    game_c.with_params(Params::game_a()).validate()?;
    let solver = ExactSolver::new(dims, opts)?;
    let chunks = samples.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<[u64; 3]> {
            let mut rng = task_rng(seed, c);
            let mut counts = [0u64; 3];
            for _ in 0..CHUNK.min(samples - c * CHUNK) {
                let [p1, p3, p2] = unit_cube::<3, _>(&mut rng);
                let p = Params([p0, p1, p2, p3, p4]);
                match evaluate_cell(&solver, p, game_c)?.class {
                    RegionClass::Parrondo => counts[0] += 1,
                    RegionClass::AntiParrondo => counts[1] += 1,
                    RegionClass::Undefined => counts[2] += 1,
                    RegionClass::Neither => {}
                }
            }
            Ok(counts)
        })
        .try_reduce(
            || [0; 3],
            |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]]),
        )?;
    let par = Proportion::new(counts[0], samples);
    let anti = Proportion::new(counts[1], samples);
    Ok(VolumeEstimate {
        p0,
        p4,
        game: game_c.label(),
        samples,
        vol_parrondo: par.fraction,
        se_parrondo: par.std_error,
        vol_anti: anti.fraction,
        se_anti: anti.std_error,
        undefined: counts[2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_reproducible_and_consistent() {
        let dims = LatticeDims::new(3, 3).unwrap();
        let run = |seed| {
            estimate_region_volume(
                dims,
                0.1,
                0.9,
                GameC::Mixture { gamma: 0.5 },
                4000,
                seed,
                ExactOptions::default(),
            )
            .unwrap()
        };
        let a = run(3);
        assert_eq!(a, run(3));
        assert_eq!(a.samples, 4000);
        assert_eq!(a.undefined, 0);
        assert!(a.vol_parrondo + a.vol_anti <= 1.0);
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json["game"], "mix:0.5");
    }

    #[test]
    fn rejects_bad_inputs() {
        let dims = LatticeDims::new(3, 3).unwrap();
        let g = GameC::Mixture { gamma: 0.5 };
        let o = ExactOptions::default();
        assert!(estimate_region_volume(dims, 0.1, 0.9, g, 0, 1, o).is_err());
        assert!(estimate_region_volume(dims, -0.1, 0.9, g, 10, 1, o).is_err());
        let big = LatticeDims::new(5, 5).unwrap();
        assert!(estimate_region_volume(big, 0.1, 0.9, g, 10, 1, o)
            .unwrap_err()
            .is_capacity());
    }
}
