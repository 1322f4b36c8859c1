use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Heads-probabilities of coins 0..=4; coin `m` is tossed by a player with
/// `m` winning neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Params<T>(pub [T; 5]);

impl<T: Scalar> Params<T> {
    pub fn new(p: [T; 5]) -> Result<Self> {
        for (m, &v) in p.iter().enumerate() {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::InvalidParams(format!(
                    "p{m} = {v} is outside [0, 1]"
                )));
            }
        }
        Ok(Self(p))
    }

    /// All coins fair.
    pub fn game_a() -> Self {
        Self([T::from_f64_lossy(0.5); 5])
    }

    #[inline]
    pub fn p(&self, m: usize) -> T {
        self.0[m]
    }

    #[inline]
    pub fn q(&self, m: usize) -> T {
        T::one() - self.0[m]
    }

    pub fn as_array(&self) -> [T; 5] {
        self.0
    }

    pub fn is_game_a(&self) -> bool {
        let half = T::from_f64_lossy(0.5);
        self.0.iter().all(|&v| v == half)
    }

    /// `p0 <= p1 <= ... <= p4`.
    pub fn is_monotone(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn cast<U: Scalar>(&self) -> Params<U> {
        Params(self.0.map(|v| U::from(v).expect("probability converts")))
    }
}

impl<T: Scalar> fmt::Display for Params<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Parameters of the random mixture `γA + (1-γ)B`, i.e. `p'_m = γ/2 + (1-γ) p_m`.
pub fn mixture_params<T: Scalar>(p: &Params<T>, gamma: T) -> Result<Params<T>> {
    if !(gamma >= T::zero() && gamma <= T::one()) {
        return Err(Error::InvalidParams(format!(
            "mixing weight {gamma} outside [0, 1]"
        )));
    }
    let half = T::from_f64_lossy(0.5);
    Ok(Params(p.0.map(|pm| gamma * half + (T::one() - gamma) * pm)))
}

/// The reflection `(p0..p4) -> (q4, q3, q2, q1, q0)`, under which every mean
/// profit changes sign.
pub fn reflect_params<T: Scalar>(p: &Params<T>) -> Params<T> {
    let q = |m: usize| T::one() - p.0[m];
    Params([q(4), q(3), q(2), q(1), q(0)])
}

/// Which game is played on every turn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "lowercase")]
pub enum GameSpec<T> {
    B {
        p: Params<T>,
    },
    /// `γA + (1-γ)B`.
    Mixture {
        p: Params<T>,
        gamma: T,
    },
    /// `r` turns of game A followed by `s` turns of game B, repeated.
    Pattern {
        p: Params<T>,
        r: usize,
        s: usize,
    },
}

impl<T: Scalar> GameSpec<T> {
    pub fn params(&self) -> &Params<T> {
        match self {
            GameSpec::B { p } | GameSpec::Mixture { p, .. } | GameSpec::Pattern { p, .. } => p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        Params::new(self.params().0)?;
        match *self {
            GameSpec::Mixture { gamma, .. } if !(gamma > T::zero() && gamma < T::one()) => Err(
                Error::InvalidParams(format!("mixing weight {gamma} must lie in (0, 1)")),
            ),
            GameSpec::Pattern { r, s, .. } if r == 0 || s == 0 => Err(Error::InvalidParams(
                format!("pattern A^{r}B^{s} needs r, s >= 1"),
            )),
            _ => Ok(()),
        }
    }

    /// Same game with reflected coin probabilities.
    pub fn reflected(&self) -> Self {
        let mut out = *self;
        match &mut out {
            GameSpec::B { p } | GameSpec::Mixture { p, .. } | GameSpec::Pattern { p, .. } => {
                *p = reflect_params(p)
            }
        }
        out
    }

    /// Short tag used in file outputs: `B`, `mix:γ`, `pat:r,s`.
    pub fn label(&self) -> String {
        match self {
            GameSpec::B { .. } => "B".into(),
            GameSpec::Mixture { gamma, .. } => format!("mix:{gamma}"),
            GameSpec::Pattern { r, s, .. } => format!("pat:{r},{s}"),
        }
    }
}
