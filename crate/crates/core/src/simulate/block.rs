use crate::error::{Error, Result};

/// Streaming overlapping-block variance estimator.
///
/// With block sums `s_i` of `b` consecutive profits and overall mean `ξ̄`, the
/// estimate is `b / (n - b + 1) · Σ_i (s_i / b - ξ̄)²`. Only the last `b`
/// profits are kept, and the block sums are accumulated exactly.
#[derive(Clone, Debug)]
pub struct BlockVariance {
    b: usize,
    window: Vec<i8>,
    head: usize,
    n: u64,
    total: i64,
    current: i64,
    blocks: u64,
    sum: i128,
    sum_sq: i128,
}

impl BlockVariance {
    pub fn new(b: usize) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidConfig("block size must be at least 1".into()));
        }
        Ok(Self {
            b,
            window: vec![0; b],
            head: 0,
            n: 0,
            total: 0,
            current: 0,
            blocks: 0,
            sum: 0,
            sum_sq: 0,
        })
    }

    pub fn block_size(&self) -> usize {
        self.b
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn total(&self) -> i64 {
        self.total
    }

    #[inline]
    pub fn push(&mut self, xi: i8) {
        let old = std::mem::replace(&mut self.window[self.head], xi);
        self.head += 1;
        if self.head == self.b {
            self.head = 0;
        }
        self.n += 1;
        self.total += i64::from(xi);
        self.current += i64::from(xi);
        if self.n > self.b as u64 {
            self.current -= i64::from(old);
        }
        if self.n >= self.b as u64 {
            let s = i128::from(self.current);
            self.blocks += 1;
            self.sum += s;
            self.sum_sq += s * s;
        }
    }

    pub fn estimate(&self) -> Result<f64> {
        if (self.b as u64) > self.n {
            return Err(Error::BlockTooLarge {
                b: self.b,
                n: self.n,
            });
        }
        let k = self.blocks as i128;
        let b = self.b as f64;
        let kf = self.blocks as f64;
        // Σ (s_i - s̄)² = (K Σ s_i² - (Σ s_i)²) / K, exact in integers
        let spread = (k * self.sum_sq - self.sum * self.sum) as f64 / kf;
        let block_mean = self.sum as f64 / kf;
        let target = b * self.total as f64 / self.n as f64;
        let centered = spread + kf * (block_mean - target).powi(2);
        Ok(centered / (b * kf))
    }
}

/// Block estimate over a finished sequence of profits.
pub fn block_variance(profits: impl IntoIterator<Item = i8>, b: usize) -> Result<f64> {
    let mut est = BlockVariance::new(b)?;
    profits.into_iter().for_each(|x| est.push(x));
    est.estimate()
}

/// `⌊c · n^{1/3}⌋`, at least 1.
pub fn block_size(n: u64, c: f64) -> usize {
    ((c * (n as f64).cbrt()).floor() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(xs: &[i8], b: usize) -> f64 {
        let n = xs.len();
        let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / n as f64;
        let k = n - b + 1;
        let ss: f64 = (0..k)
            .map(|i| {
                let s: f64 = xs[i..i + b].iter().map(|&x| x as f64).sum();
                (s / b as f64 - mean).powi(2)
            })
            .sum();
        b as f64 / k as f64 * ss
    }

    #[test]
    fn matches_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(n, b) in &[(1usize, 1usize), (10, 3), (500, 17), (2000, 100), (64, 64)] {
            let xs: Vec<i8> = (0..n)
                .map(|_| if rng.gen_bool(0.3) { 1 } else { -1 })
                .collect();
            let got = block_variance(xs.iter().copied(), b).unwrap();
            assert!((got - naive(&xs, b)).abs() < 1e-9, "n={n} b={b}");
        }
    }

    #[test]
    fn constant_sequence_has_zero_variance() {
        assert_eq!(
            block_variance(std::iter::repeat_n(1, 1000), 10).unwrap(),
            0.0
        );
        assert_eq!(
            block_variance(std::iter::repeat_n(-1, 1000), 10).unwrap(),
            0.0
        );
    }

    #[test]
    fn fair_signs_have_unit_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs = (0..1_000_000).map(|_| if rng.gen::<bool>() { 1 } else { -1 });
        let v = block_variance(xs, 100).unwrap();
        assert!((v - 1.0).abs() < 0.05, "{v}");
    }

    #[test]
    fn block_longer_than_sample_fails() {
        assert_eq!(
            block_variance([1i8, -1, 1], 4),
            Err(Error::BlockTooLarge { b: 4, n: 3 })
        );
        assert!(BlockVariance::new(0).is_err());
    }

    #[test]
    fn block_size_rule() {
        assert_eq!(block_size(1_000_000, 10.0), 1000);
        assert_eq!(block_size(100_000_000, 10.0), 4641);
        assert_eq!(block_size(1, 0.1), 1);
    }
}
