use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use super::group::SymmetryGroup;
use super::state::{LatticeDims, LatticeState, MAX_PACKED_SITES};
use crate::error::{Error, Result};

/// Equivalence classes of `{0,1}^{MN}` under a [`SymmetryGroup`].
///
/// Classes are indexed in increasing order of their representative, which is
/// the smallest bits-value in the orbit.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    group: Arc<SymmetryGroup>,
    representatives: Vec<u32>,
    sizes: Vec<u64>,
}

impl OrbitTable {
    pub fn dims(&self) -> LatticeDims {
        self.group.dims()
    }

    pub fn group(&self) -> &SymmetryGroup {
        &self.group
    }

    pub fn num_classes(&self) -> usize {
        self.representatives.len()
    }

    pub fn representative(&self, class: usize) -> LatticeState {
        LatticeState::from_bits_unchecked(self.representatives[class], self.dims())
    }

    pub fn representative_bits(&self) -> &[u32] {
        &self.representatives
    }

    pub fn class_size(&self, class: usize) -> u64 {
        self.sizes[class]
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Class index of an arbitrary state.
    pub fn class_of(&self, x: &LatticeState) -> Result<usize> {
        let canon = self.group.canonicalize(x)?;
        Ok(self.class_of_bits(canon.bits()))
    }

    #[inline]
    pub(crate) fn class_of_canonical(&self, canonical_bits: u32) -> usize {
        self.representatives
            .binary_search(&canonical_bits)
            .expect("canonical form is a representative")
    }

    #[inline]
    pub(crate) fn class_of_bits(&self, bits: u32) -> usize {
        self.class_of_canonical(self.group.canonical_bits(bits))
    }

    /// CSV with header `class_index,representative_bits_hex,class_size`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "class_index,representative_bits_hex,class_size")?;
        for (k, (rep, size)) in self.representatives.iter().zip(&self.sizes).enumerate() {
            writeln!(out, "{k},{rep:#x},{size}")?;
        }
        Ok(())
    }
}

/// Enumerates all orbits of the `dims` lattice by a single pass over the
/// state space, keeping every state that is its own canonical form.
pub fn enumerate_orbits(dims: LatticeDims, use_transpose: bool) -> Result<OrbitTable> {
    let mn = dims.sites();
    if mn > MAX_PACKED_SITES {
        return Err(Error::CapExceeded {
            mn,
            cap: MAX_PACKED_SITES,
        });
    }
    let group = Arc::new(SymmetryGroup::new(dims, use_transpose)?);
    let total = 1u64 << mn;
    const CHUNK: u64 = 1 << 16;
    let chunks = total.div_ceil(CHUNK);

    let representatives: Vec<u32> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let g = &group;
            (lo..hi)
                .map(|b| b as u32)
                .filter(move |&b| g.is_canonical(b))
                .collect::<Vec<_>>()
        })
        .collect();

    let order = group.order() as u64;
    let sizes: Vec<u64> = representatives
        .par_iter()
        .map(|&b| order / group.stabilizer_order(b) as u64)
        .collect();

    Ok(OrbitTable {
        group,
        representatives,
        sizes,
    })
}
