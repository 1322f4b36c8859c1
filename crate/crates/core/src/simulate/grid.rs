use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Params;
use crate::lattice::{LatticeDims, LatticeState, MAX_PACKED_SITES};

/// Winner/loser flags of an arbitrary-size lattice, one byte per site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    dims: LatticeDims,
    cells: Vec<u8>,
    neighbors: Vec<[u32; 4]>,
}

impl Grid {
    pub fn zeros(dims: LatticeDims) -> Self {
        Self::from_cells(dims, vec![0; dims.sites()]).expect("sizes agree")
    }

    pub fn ones(dims: LatticeDims) -> Self {
        Self::from_cells(dims, vec![1; dims.sites()]).expect("sizes agree")
    }

    /// Row-major 0/1 cells.
    pub fn from_cells(dims: LatticeDims, cells: Vec<u8>) -> Result<Self> {
        if cells.len() != dims.sites() {
            return Err(Error::DimensionMismatch(format!(
                "{} cells for a {dims} lattice",
                cells.len()
            )));
        }
        if cells.iter().any(|&c| c > 1) {
            return Err(Error::InvalidConfig("cells must be 0 or 1".into()));
        }
        let mut neighbors = Vec::with_capacity(dims.sites());
        for i in 0..dims.m {
            for j in 0..dims.n {
                neighbors.push(dims.neighbors(i, j).map(|s| s as u32));
            }
        }
        Ok(Self {
            dims,
            cells,
            neighbors,
        })
    }

    pub fn from_state(state: &LatticeState) -> Self {
        let dims = state.dims();
        let cells = (0..dims.sites())
            .map(|b| ((state.bits() >> b) & 1) as u8)
            .collect();
        Self::from_cells(dims, cells).expect("sizes agree")
    }

    pub fn to_state(&self) -> Result<LatticeState> {
        self.dims.check_cap(MAX_PACKED_SITES)?;
        let bits = self
            .cells
            .iter()
            .enumerate()
            .fold(0u32, |acc, (b, &c)| acc | (u32::from(c) << b));
        LatticeState::new(bits, self.dims)
    }

    pub fn dims(&self) -> LatticeDims {
        self.dims
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn winners(&self) -> usize {
        self.cells.iter().map(|&c| c as usize).sum()
    }

    #[inline]
    pub fn neighbor_count(&self, site: usize) -> usize {
        let nb = &self.neighbors[site];
        nb.iter().map(|&s| self.cells[s as usize] as usize).sum()
    }

    /// The player at `site` tosses coin `m` (their winning-neighbour count)
    /// and wins iff `u <= p_m`. Returns the profit.
    #[inline]
    pub fn play(&mut self, site: usize, p: &Params<f64>, u: f64) -> i8 {
        let m = self.neighbor_count(site);
        if u <= p.0[m] {
            self.cells[site] = 1;
            1
        } else {
            self.cells[site] = 0;
            -1
        }
    }
}

/// Starting configuration of a simulation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    #[default]
    AllZeros,
    AllOnes,
    /// Row-major 0/1 cells.
    Cells(Vec<u8>),
}

impl InitialState {
    pub fn build(&self, dims: LatticeDims) -> Result<Grid> {
        match self {
            InitialState::AllZeros => Ok(Grid::zeros(dims)),
            InitialState::AllOnes => Ok(Grid::ones(dims)),
            InitialState::Cells(cells) => Grid::from_cells(dims, cells.clone()),
        }
    }
}
