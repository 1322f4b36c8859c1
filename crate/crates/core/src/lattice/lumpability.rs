use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::group::{apply_permutation, SitePermutation, SymmetryGroup};
use super::state::{LatticeDims, LatticeState};
use crate::exact::{build_full_row, Params, SignVariant};

/// States up to which the check runs over every `(x, σ)` pair.
const EXHAUSTIVE_STATES: u64 = 1 << 12;

/// Checks `P(x_σ, y_σ) = P(x, y)` for the group's elements.
///
/// Exhaustive over all states and group elements when the lattice has at most
/// 4096 states; otherwise `samples` random `(x, σ)` pairs are drawn. Rows are
/// compared as whole sparse vectors, so zero entries are covered too.
pub fn verify_lumpability(
    group: &SymmetryGroup,
    p: &Params<f64>,
    samples: usize,
    seed: u64,
) -> bool {
    lumpable_under(group.elements(), group.dims(), p, samples, seed)
}

pub(crate) fn lumpable_under(
    perms: &[SitePermutation],
    dims: LatticeDims,
    p: &Params<f64>,
    samples: usize,
    seed: u64,
) -> bool {
    let total = dims.num_states();
    let check = |x: LatticeState, sigma: &SitePermutation| {
        let xs = apply_permutation(&x, sigma).expect("same dims");
        let mut mapped: Vec<(u32, f64)> = build_full_row(&x, p, SignVariant::Plain)
            .into_iter()
            .map(|(y, v)| (sigma.apply_bits(y), v))
            .collect();
        mapped.sort_by_key(|&(y, _)| y);
        let image_row = build_full_row(&xs, p, SignVariant::Plain);
        mapped.len() == image_row.len()
            && mapped
                .iter()
                .zip(&image_row)
                .all(|(a, b)| a.0 == b.0 && (a.1 - b.1).abs() <= 1e-15)
    };
    if total <= EXHAUSTIVE_STATES {
        (0..total).all(|b| {
            let x = LatticeState::from_bits_unchecked(b as u32, dims);
            perms.iter().all(|sigma| check(x, sigma))
        })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).all(|_| {
            let x = LatticeState::from_bits_unchecked(rng.gen_range(0..total) as u32, dims);
            let sigma = perms.choose(&mut rng).expect("nonempty group");
            check(x, sigma)
        })
    }
}
