use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice dimensions {m}x{n}: both sides must be at least 3")]
    InvalidDims { m: usize, n: usize },
    #[error("lattice has {mn} sites, above the exact-path cap of {cap}")]
    CapExceeded { mn: usize, cap: usize },
    #[error("site ({i}, {j}) outside a {m}x{n} lattice")]
    SiteOutOfRange {
        i: usize,
        j: usize,
        m: usize,
        n: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("transposition requires a square lattice, got {m}x{n}")]
    TransposeNonSquare { m: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("mean undefined: {0}")]
    MeanUndefined(String),
    #[error("regime not ergodic: {0}")]
    RegimeNotErgodic(String),
    #[error("unsupported boundary: p1, p2 or p3 is 0 or 1")]
    UnsupportedBoundary,
    #[error("linear solver did not converge (residual {residual:.3e})")]
    SolverDidNotConverge { residual: f64 },
    #[error("block size {b} exceeds sample length {n}")]
    BlockTooLarge { b: usize, n: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Errors caused by the parameter regime rather than by size or usage.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_)
                | Error::MeanUndefined(_)
                | Error::RegimeNotErgodic(_)
                | Error::UnsupportedBoundary
        )
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
