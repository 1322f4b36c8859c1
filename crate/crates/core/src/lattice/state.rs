use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest lattice whose states fit the packed `u32` representation.
pub const MAX_PACKED_SITES: usize = 25;

/// Shape of an `M x N` toroidal lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeDims {
    pub m: usize,
    pub n: usize,
}

impl LatticeDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 3 || n < 3 {
            return Err(Error::InvalidDims { m, n });
        }
        Ok(Self { m, n })
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.m * self.n
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    /// Number of states `2^{MN}`; only meaningful for packable lattices.
    pub fn num_states(&self) -> u64 {
        1u64 << self.sites()
    }

    /// Fails unless `MN <= cap` (and the packed representation can hold it).
    pub fn check_cap(&self, cap: usize) -> Result<()> {
        let mn = self.sites();
        let cap = cap.min(MAX_PACKED_SITES);
        if mn > cap {
            return Err(Error::CapExceeded { mn, cap });
        }
        Ok(())
    }

    #[inline]
    pub fn site(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    /// The four nearest neighbours of `(i, j)` with periodic wrap, as site indices.
    #[inline]
    pub fn neighbors(&self, i: usize, j: usize) -> [usize; 4] {
        let (m, n) = (self.m, self.n);
        let up = if i == 0 { m - 1 } else { i - 1 };
        let down = if i + 1 == m { 0 } else { i + 1 };
        let left = if j == 0 { n - 1 } else { j - 1 };
        let right = if j + 1 == n { 0 } else { j + 1 };
        [
            self.site(down, j),
            self.site(up, j),
            self.site(i, right),
            self.site(i, left),
        ]
    }
}

impl fmt::Display for LatticeDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

impl std::str::FromStr for LatticeDims {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("dims must look like 3x4, got {s:?}"));
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let m = a.trim().parse().map_err(|_| bad())?;
        let n = b.trim().parse().map_err(|_| bad())?;
        LatticeDims::new(m, n)
    }
}

/// Winner/loser flags of every player, packed row-major into one word.
///
/// Site `(i, j)` (0-based) lives in bit `i * N + j`; a set bit marks a winner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeState {
    bits: u32,
    dims: LatticeDims,
}

impl LatticeState {
    pub fn new(bits: u32, dims: LatticeDims) -> Result<Self> {
        dims.check_cap(MAX_PACKED_SITES)?;
        if dims.sites() < 32 && bits >> dims.sites() != 0 {
            return Err(Error::InvalidConfig(format!(
                "state {bits:#x} has bits above site {}",
                dims.sites()
            )));
        }
        Ok(Self { bits, dims })
    }

    /// Builds a state from rows of 0/1 entries.
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let dims = LatticeDims::new(m, n)?;
        let mut bits = 0u32;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::InvalidConfig(format!("entry {v} is not 0/1")));
                }
                bits |= (v as u32) << dims.site(i, j);
            }
        }
        Self::new(bits, dims)
    }

    pub fn zeros(dims: LatticeDims) -> Self {
        Self { bits: 0, dims }
    }

    pub fn ones(dims: LatticeDims) -> Self {
        Self {
            bits: full_mask(dims),
            dims,
        }
    }

    #[inline]
    pub(crate) fn from_bits_unchecked(bits: u32, dims: LatticeDims) -> Self {
        Self { bits, dims }
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn dims(&self) -> LatticeDims {
        self.dims
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        ((self.bits >> self.dims.site(i, j)) & 1) as u8
    }

    #[inline]
    pub fn flip(&self, site: usize) -> Self {
        Self {
            bits: self.bits ^ (1 << site),
            dims: self.dims,
        }
    }

    pub fn winners(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Number of winners among the four wrapped nearest neighbours of `(i, j)`.
    ///
    /// Indices are 0-based.
    pub fn neighbor_count(&self, i: usize, j: usize) -> Result<u8> {
        let LatticeDims { m, n } = self.dims;
        if i >= m || j >= n {
            return Err(Error::SiteOutOfRange { i, j, m, n });
        }
        Ok(self.neighbor_count_unchecked(i, j))
    }

    #[inline]
    pub(crate) fn neighbor_count_unchecked(&self, i: usize, j: usize) -> u8 {
        self.dims
            .neighbors(i, j)
            .iter()
            .map(|&s| ((self.bits >> s) & 1) as u8)
            .sum()
    }
}

impl fmt::Display for LatticeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dims.m {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.dims.n {
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn full_mask(dims: LatticeDims) -> u32 {
    if dims.sites() >= 32 {
        u32::MAX
    } else {
        (1u32 << dims.sites()) - 1
    }
}
