//! Boundary parameter regimes where the chain is not irreducible.

use serde::{Deserialize, Serialize};

use super::params::Params;
use crate::error::{Error, Result};
use crate::lattice::LatticeDims;
use crate::scalar::Scalar;

/// Ergodicity regime of game B for a parameter vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeTag {
    /// `0 < p_m < 1` for every coin.
    Ergodic,
    /// `p0 = 1, 0 < p4 < 1`: the all-losers state is transient.
    RestrictedErgodicDrop0,
    /// `p0 = 0, p4 < 1`: absorption at all-losers, mean `-1`.
    AbsorbAllZeros,
    /// `0 < p0 < 1, p4 = 0`: the all-winners state is transient.
    RestrictedErgodicDrop1,
    /// `p0 > 0, p4 = 1`: absorption at all-winners, mean `+1`.
    AbsorbAllOnes,
    /// `p0 = 1, p4 = 0` with `M`, `N` even: absorbing checkerboards, mean `0`.
    Checkerboard,
    /// `p0 = 1, p4 = 0` with `M` or `N` odd: treated as irreducible on the
    /// remaining states without proof.
    Case5OddConjectured,
    /// `p0 = 0, p4 = 1`: two absorbing states, the mean depends on the start.
    MeanUndefined,
    /// Some of `p1, p2, p3` is 0 or 1 and the chain restricted to its unique
    /// recurrent class was found ergodic numerically.
    AccessibleClass,
}

impl RegimeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeTag::Ergodic => "ergodic",
            RegimeTag::RestrictedErgodicDrop0 => "restricted_ergodic_drop0",
            RegimeTag::AbsorbAllZeros => "absorb_all_zeros",
            RegimeTag::RestrictedErgodicDrop1 => "restricted_ergodic_drop1",
            RegimeTag::AbsorbAllOnes => "absorb_all_ones",
            RegimeTag::Checkerboard => "checkerboard",
            RegimeTag::Case5OddConjectured => "case5_odd_conjectured",
            RegimeTag::MeanUndefined => "mean_undefined",
            RegimeTag::AccessibleClass => "accessible_class",
        }
    }
}

impl std::fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies `p` by the values of the extreme coins `p0` and `p4`.
///
/// Requires `0 < p1, p2, p3 < 1`; otherwise returns
/// [`Error::UnsupportedBoundary`] and the caller must fall back on a numerical
/// recurrence analysis.
pub fn classify_regime<T: Scalar>(p: &Params<T>, dims: LatticeDims) -> Result<RegimeTag> {
    let (zero, one) = (T::zero(), T::one());
    if (1..4).any(|m| p.p(m) <= zero || p.p(m) >= one) {
        return Err(Error::UnsupportedBoundary);
    }
    let (p0, p4) = (p.p(0), p.p(4));
    let interior = |v: T| v > zero && v < one;
    let tag = if interior(p0) && interior(p4) {
        RegimeTag::Ergodic
    } else if p0 == zero && p4 == one {
        RegimeTag::MeanUndefined
    } else if p0 == zero {
        RegimeTag::AbsorbAllZeros
    } else if p4 == one {
        RegimeTag::AbsorbAllOnes
    } else if p0 == one && p4 == zero {
        if dims.m.is_multiple_of(2) && dims.n.is_multiple_of(2) {
            RegimeTag::Checkerboard
        } else {
            RegimeTag::Case5OddConjectured
        }
    } else if p0 == one {
        RegimeTag::RestrictedErgodicDrop0
    } else {
        RegimeTag::RestrictedErgodicDrop1
    };
    Ok(tag)
}
