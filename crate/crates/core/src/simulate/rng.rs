use rand::distributions::{Distribution, Open01, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::LatticeDims;

const ROW_STREAM: u64 = 0;
const COL_STREAM: u64 = 1;
const COIN_STREAM: u64 = 2;

/// Three independent generators driving a simulation: the row and column of
/// the chosen player and the uniform compared against the coin.
///
/// All three share the ChaCha key derived from the seed and differ in stream
/// number, so they never overlap.
#[derive(Clone, Debug)]
pub struct RngStreams {
    rows: ChaCha8Rng,
    cols: ChaCha8Rng,
    coins: ChaCha8Rng,
    row_dist: Uniform<usize>,
    col_dist: Uniform<usize>,
    n: usize,
}

impl RngStreams {
    pub fn new(seed: u64, dims: LatticeDims) -> Self {
        let stream = |k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            rng
        };
        Self {
            rows: stream(ROW_STREAM),
            cols: stream(COL_STREAM),
            coins: stream(COIN_STREAM),
            row_dist: Uniform::new(0, dims.m),
            col_dist: Uniform::new(0, dims.n),
            n: dims.n,
        }
    }

    /// Row-major index of the next chosen player.
    #[inline]
    pub fn next_site(&mut self) -> usize {
        let i = self.row_dist.sample(&mut self.rows);
        let j = self.col_dist.sample(&mut self.cols);
        i * self.n + j
    }

    /// Next uniform on the open interval (0, 1).
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        self.coins.sample(Open01)
    }
}

/// Generator for the `index`-th independent task of a seeded batch.
pub fn task_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform draw from the unit cube `[0, 1)^D`.
pub fn unit_cube<const D: usize, R: Rng>(rng: &mut R) -> [f64; D] {
    std::array::from_fn(|_| rng.gen::<f64>())
}
