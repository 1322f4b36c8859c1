use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{mixture_params, Params};
use crate::simulate::{task_rng, unit_cube};

/// Samples drawn from one generator stream in the parallel estimators.
pub(crate) const CHUNK: u64 = 1 << 14;

/// Largest difference between coins with adjacent neighbour counts is below `1/4`.
pub fn check_basic_estimate(p: &Params<f64>) -> bool {
    p.0.windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max)
        < 0.25
}

/// Left-hand side of the annihilating-duality condition.
pub fn annihilating_lhs(p: &Params<f64>) -> f64 {
    let [p0, p1, p2, p3, p4] = p.0;
    (p0 + 4.0 * p1 + 6.0 * p2 + 4.0 * p3 + p4 - 8.0).abs()
        + 4.0 * (p0 + 2.0 * p1 - 2.0 * p3 - p4).abs()
        + 6.0 * (p0 - 2.0 * p2 + p4).abs()
        + 4.0 * (p0 - 2.0 * p1 + 2.0 * p3 - p4).abs()
        + (p0 - 4.0 * p1 + 6.0 * p2 - 4.0 * p3 + p4).abs()
}

/// Annihilating-duality sufficient condition for ergodicity: LHS `< 8`.
pub fn check_annihilating(p: &Params<f64>) -> bool {
    annihilating_lhs(p) < 8.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Basic,
    Annihilating,
    Either,
}

impl Condition {
    pub fn holds(&self, p: &Params<f64>) -> bool {
        match self {
            Condition::Basic => check_basic_estimate(p),
            Condition::Annihilating => check_annihilating(p),
            Condition::Either => check_basic_estimate(p) || check_annihilating(p),
        }
    }
}

impl std::str::FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(Condition::Basic),
            "annihilating" => Ok(Condition::Annihilating),
            "either" => Ok(Condition::Either),
            _ => Err(Error::InvalidConfig(format!(
                "unknown condition {s:?} (basic, annihilating, either)"
            ))),
        }
    }
}

/// Game whose coins are tested: B itself or the half-and-half mixture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionGame {
    B,
    HalfMixture,
}

impl std::str::FromStr for ConditionGame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" | "b" => Ok(ConditionGame::B),
            "half-mixture" | "half_mixture" | "mix:0.5" => Ok(ConditionGame::HalfMixture),
            _ => Err(Error::InvalidConfig(format!(
                "unknown game {s:?} (B, half-mixture)"
            ))),
        }
    }
}

/// Sample proportion with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub samples: u64,
    pub hits: u64,
    pub fraction: f64,
    pub std_error: f64,
}

impl Proportion {
    pub fn new(hits: u64, samples: u64) -> Self {
        let fraction = hits as f64 / samples as f64;
        let std_error = (fraction * (1.0 - fraction) / samples as f64).sqrt();
        Self {
            samples,
            hits,
            fraction,
            std_error,
        }
    }
}

/// Counts `pred` over `samples` uniform points of `[0,1]^D`, split into
/// fixed chunks with one generator stream each so the result does not depend
/// on scheduling.
pub(crate) fn count_uniform<const D: usize, F>(samples: u64, seed: u64, pred: F) -> u64
where
    F: Fn([f64; D]) -> bool + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = task_rng(seed, c);
            let len = CHUNK.min(samples - c * CHUNK);
            (0..len)
                .filter(|_| pred(unit_cube::<D, _>(&mut rng)))
                .count() as u64
        })
        .sum()
}

/// Fraction of the unit parameter cube where `condition` holds.
pub fn estimate_condition_fraction(
    condition: Condition,
    game: ConditionGame,
    samples: u64,
    seed: u64,
) -> Result<Proportion> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let hits = count_uniform::<5, _>(samples, seed, |x| {
        let p = Params(x);
        let p = match game {
            ConditionGame::B => p,
            ConditionGame::HalfMixture => mixture_params(&p, 0.5).expect("γ = 1/2"),
        };
        condition.holds(&p)
    });
    Ok(Proportion::new(hits, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::reflect_params;

    #[test]
    fn basic_estimate_examples() {
        assert!(check_basic_estimate(&Params([0.3; 5])));
        assert!(!check_basic_estimate(&Params([0.0, 0.25, 0.5, 0.75, 1.0])));
        assert!(!check_basic_estimate(&Params([
            0.05,
            0.15,
            8.0 / 13.0,
            0.75,
            0.9
        ])));
        assert!(check_basic_estimate(&Params([0.0, 0.24, 0.48, 0.72, 0.96])));
    }

    #[test]
    fn annihilating_examples() {
        assert!(annihilating_lhs(&Params([0.5; 5])).abs() < 1e-15);
        assert!((annihilating_lhs(&Params([1.0; 5])) - 8.0).abs() < 1e-15);
        assert!(check_annihilating(&Params([0.5; 5])));
        assert!(!check_annihilating(&Params([1.0; 5])));
        assert!(!check_annihilating(&Params([0.0; 5])));
    }

    #[test]
    fn conditions_symmetric_under_reflection() {
        let mut rng = task_rng(99, 0);
        for _ in 0..10_000 {
            let p = Params(unit_cube::<5, _>(&mut rng));
            let r = reflect_params(&p);
            assert_eq!(check_basic_estimate(&p), check_basic_estimate(&r));
            assert!((annihilating_lhs(&p) - annihilating_lhs(&r)).abs() < 1e-12);
        }
    }

    #[test]
    fn fraction_is_deterministic() {
        let a =
            estimate_condition_fraction(Condition::Either, ConditionGame::B, 50_000, 1).unwrap();
        let b =
            estimate_condition_fraction(Condition::Either, ConditionGame::B, 50_000, 1).unwrap();
        assert_eq!(a, b);
        assert!(estimate_condition_fraction(Condition::Basic, ConditionGame::B, 0, 1).is_err());
    }
}
