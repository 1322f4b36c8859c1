//! Lattice states, the torus symmetry group and its orbits.

mod group;
mod lumpability;
mod orbits;
mod state;

pub use group::{apply_permutation, generators, SitePermutation, SymmetryGroup};
pub use lumpability::verify_lumpability;
pub use orbits::{enumerate_orbits, OrbitTable};
pub use state::{LatticeDims, LatticeState, MAX_PACKED_SITES};
