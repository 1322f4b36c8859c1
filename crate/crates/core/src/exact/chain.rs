//! Transition matrices of the full and symmetry-reduced chains.

use std::sync::Arc;

use rayon::prelude::*;

use super::params::Params;
use crate::error::Result;
use crate::lattice::{enumerate_orbits, LatticeDims, LatticeState, OrbitTable};
use crate::linalg::CsrMatrix;
use crate::scalar::Scalar;

/// Which payoff weighting is applied to the transition probabilities.
///
/// `Dot` negates every loss probability `q_m` (the profit-weighted matrix);
/// `Ddot` negates twice and therefore coincides with `Plain`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignVariant {
    Plain,
    Dot,
    Ddot,
}

impl SignVariant {
    #[inline]
    fn loss_sign<T: Scalar>(self) -> T {
        match self {
            SignVariant::Dot => -T::one(),
            SignVariant::Plain | SignVariant::Ddot => T::one(),
        }
    }
}

/// One row of the full `2^{MN}`-state transition matrix, sorted by target
/// state, diagonal included.
pub fn build_full_row<T: Scalar>(
    x: &LatticeState,
    p: &Params<T>,
    variant: SignVariant,
) -> Vec<(u32, T)> {
    let dims = x.dims();
    let scale = T::one() / T::from_usize_lossy(dims.sites());
    let sign = variant.loss_sign::<T>();
    let mut diag = T::zero();
    let mut row = Vec::with_capacity(dims.sites() + 1);
    for i in 0..dims.m {
        for j in 0..dims.n {
            let m = x.neighbor_count_unchecked(i, j) as usize;
            let site = dims.site(i, j);
            let target = x.flip(site).bits();
            if x.get(i, j) == 0 {
                row.push((target, p.p(m) * scale));
                diag += sign * p.q(m) * scale;
            } else {
                row.push((target, sign * p.q(m) * scale));
                diag += p.p(m) * scale;
            }
        }
    }
    row.push((x.bits(), diag));
    row.sort_by_key(|&(t, _)| t);
    row
}

/// Full `2^{MN}` chain as a sparse matrix (small lattices only).
pub fn build_full<T: Scalar>(
    dims: LatticeDims,
    p: &Params<T>,
    variant: SignVariant,
) -> Result<CsrMatrix<T>> {
    dims.check_cap(crate::lattice::MAX_PACKED_SITES)?;
    let total = dims.num_states() as usize;
    let rows = (0..total).map(|b| {
        build_full_row(
            &LatticeState::from_bits_unchecked(b as u32, dims),
            p,
            variant,
        )
    });
    Ok(CsrMatrix::from_rows(total, rows))
}

/// Symbolic entry of the reduced matrix: integer multiplicities of each
/// `p_m` (slots 0..5) and each `q_m` (slots 5..10), all scaled by `1/MN`.
pub(crate) type Coefficients = [u16; 10];

/// Parameter-independent structure of the reduced chain for one lattice.
///
/// Assembling a numeric matrix for a given parameter vector only evaluates
/// the stored linear forms, so scans over many parameter vectors reuse it.
#[derive(Debug)]
pub struct ReducedStructure {
    orbits: OrbitTable,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    coeffs: Vec<Coefficients>,
    // number of sites of each class representative with m winning neighbours
    site_counts: Vec<[u16; 5]>,
}

impl ReducedStructure {
    pub fn new(dims: LatticeDims, use_transpose: bool) -> Result<Self> {
        Ok(Self::from_orbits(enumerate_orbits(dims, use_transpose)?))
    }

    pub fn from_orbits(orbits: OrbitTable) -> Self {
        let dims = orbits.dims();
        let per_class: Vec<(Vec<(u32, Coefficients)>, [u16; 5])> = (0..orbits.num_classes())
            .into_par_iter()
            .map(|c| {
                let x = orbits.representative(c);
                let mut entries: Vec<(u32, Coefficients)> = Vec::with_capacity(dims.sites() + 1);
                let mut diag = [0u16; 10];
                let mut counts = [0u16; 5];
                for i in 0..dims.m {
                    for j in 0..dims.n {
                        let m = x.neighbor_count_unchecked(i, j) as usize;
                        counts[m] += 1;
                        let target = orbits.class_of_bits(x.flip(dims.site(i, j)).bits()) as u32;
                        let slot = match entries.iter_mut().find(|(t, _)| *t == target) {
                            Some((_, k)) => k,
                            None => {
                                entries.push((target, [0; 10]));
                                &mut entries.last_mut().unwrap().1
                            }
                        };
                        if x.get(i, j) == 0 {
                            slot[m] += 1;
                            diag[5 + m] += 1;
                        } else {
                            slot[5 + m] += 1;
                            diag[m] += 1;
                        }
                    }
                }
                entries.push((c as u32, diag));
                entries.sort_by_key(|&(t, _)| t);
                (entries, counts)
            })
            .collect();

        let mut row_ptr = Vec::with_capacity(per_class.len() + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut coeffs = Vec::new();
        let mut site_counts = Vec::with_capacity(per_class.len());
        for (entries, counts) in per_class {
            for (t, k) in entries {
                cols.push(t);
                coeffs.push(k);
            }
            row_ptr.push(cols.len());
            site_counts.push(counts);
        }
        Self {
            orbits,
            row_ptr,
            cols,
            coeffs,
            site_counts,
        }
    }

    pub fn orbits(&self) -> &OrbitTable {
        &self.orbits
    }

    pub fn dims(&self) -> LatticeDims {
        self.orbits.dims()
    }

    pub fn num_classes(&self) -> usize {
        self.orbits.num_classes()
    }

    pub(crate) fn site_counts(&self, class: usize) -> [u16; 5] {
        self.site_counts[class]
    }

    /// Numeric reduced matrix for `p` under the given payoff weighting.
    pub fn assemble<T: Scalar>(&self, p: &Params<T>, variant: SignVariant) -> CsrMatrix<T> {
        let scale = T::one() / T::from_usize_lossy(self.dims().sites());
        let sign = variant.loss_sign::<T>();
        let mut weights = [T::zero(); 10];
        for m in 0..5 {
            weights[m] = p.p(m) * scale;
            weights[5 + m] = sign * p.q(m) * scale;
        }
        let vals = self
            .coeffs
            .iter()
            .map(|k| {
                k.iter()
                    .zip(&weights)
                    .filter(|(&c, _)| c != 0)
                    .map(|(&c, &w)| T::from_usize_lossy(c as usize) * w)
                    .sum()
            })
            .collect();
        CsrMatrix::from_parts(
            self.num_classes(),
            self.row_ptr.clone(),
            self.cols.clone(),
            vals,
        )
    }
}

/// Lumped chain on orbit classes for one parameter vector.
#[derive(Clone, Debug)]
pub struct ReducedChain<T> {
    structure: Arc<ReducedStructure>,
    params: Params<T>,
    plain: CsrMatrix<T>,
    dot: CsrMatrix<T>,
}

impl<T: Scalar> ReducedChain<T> {
    pub fn new(structure: Arc<ReducedStructure>, params: Params<T>) -> Self {
        let plain = structure.assemble(&params, SignVariant::Plain);
        let dot = structure.assemble(&params, SignVariant::Dot);
        Self {
            structure,
            params,
            plain,
            dot,
        }
    }

    pub fn structure(&self) -> &Arc<ReducedStructure> {
        &self.structure
    }

    pub fn params(&self) -> &Params<T> {
        &self.params
    }

    pub fn num_classes(&self) -> usize {
        self.plain.dim()
    }

    pub fn matrix(&self, variant: SignVariant) -> &CsrMatrix<T> {
        match variant {
            SignVariant::Plain | SignVariant::Ddot => &self.plain,
            SignVariant::Dot => &self.dot,
        }
    }
}

/// Builds the reduced chain for `p` from scratch (orbit enumeration included).
pub fn build_reduced<T: Scalar>(
    dims: LatticeDims,
    p: &Params<T>,
    use_transpose: bool,
    cap: usize,
) -> Result<ReducedChain<T>> {
    dims.check_cap(cap)?;
    let structure = Arc::new(ReducedStructure::new(dims, use_transpose)?);
    Ok(ReducedChain::new(structure, *p))
}
