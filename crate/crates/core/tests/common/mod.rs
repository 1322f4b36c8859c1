//! Brute-force reference computations on the full `2^{MN}`-state chain,
//! written without any of the library's lattice or chain code.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

pub const TABLE_P: [f64; 5] = [1.0 / 20.0, 3.0 / 20.0, 8.0 / 13.0, 0.75, 0.9];

fn winning_neighbours(x: usize, m: usize, n: usize, i: usize, j: usize) -> usize {
    let bit = |r: usize, c: usize| (x >> (r * n + c)) & 1;
    bit((i + 1) % m, j) + bit((i + m - 1) % m, j) + bit(i, (j + 1) % n) + bit(i, (j + n - 1) % n)
}

/// Win and loss parts of the one-turn transition matrix.
pub struct Dense {
    pub win: DMatrix<f64>,
    pub lose: DMatrix<f64>,
}

impl Dense {
    pub fn new(m: usize, n: usize, p: &[f64; 5]) -> Self {
        let states = 1usize << (m * n);
        let mut win = DMatrix::zeros(states, states);
        let mut lose = DMatrix::zeros(states, states);
        let w = 1.0 / (m * n) as f64;
        for x in 0..states {
            for i in 0..m {
                for j in 0..n {
                    let b = 1usize << (i * n + j);
                    let pm = p[winning_neighbours(x, m, n, i, j)];
                    win[(x, x | b)] += w * pm;
                    lose[(x, x & !b)] += w * (1.0 - pm);
                }
            }
        }
        Self { win, lose }
    }

    pub fn plain(&self) -> DMatrix<f64> {
        &self.win + &self.lose
    }

    pub fn dot(&self) -> DMatrix<f64> {
        &self.win - &self.lose
    }
}

/// Stationary row vector of a stochastic matrix with one closed class.
pub fn stationary(p: &DMatrix<f64>) -> DVector<f64> {
    let k = p.nrows();
    let mut a = DMatrix::<f64>::identity(k, k) - p.transpose();
    for j in 0..k {
        a[(k - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(k);
    b[k - 1] = 1.0;
    a.lu().solve(&b).expect("irreducible chain")
}

/// `(I - P + 1π)^{-1}`.
pub fn fundamental(p: &DMatrix<f64>, pi: &DVector<f64>) -> DMatrix<f64> {
    let k = p.nrows();
    let one_pi = DMatrix::from_fn(k, k, |_, j| pi[j]);
    (DMatrix::<f64>::identity(k, k) - p + one_pi)
        .try_inverse()
        .expect("fundamental matrix exists")
}

/// Mean and variance from the full chain with an explicit fundamental matrix.
pub fn full_stats(m: usize, n: usize, p: &[f64; 5]) -> (f64, f64) {
    let d = Dense::new(m, n, p);
    let plain = d.plain();
    let dot = d.dot();
    let pi = stationary(&plain);
    let ones = DVector::from_element(plain.nrows(), 1.0);
    let g = &dot * &ones;
    let mu = pi.dot(&g);
    let z = fundamental(&plain, &pi);
    let one_pi = DMatrix::from_fn(pi.len(), pi.len(), |_, j| pi[j]);
    let h = (z - one_pi) * &g;
    let pi_dot = dot.transpose() * &pi;
    (mu, 1.0 - mu * mu + 2.0 * pi_dot.dot(&h))
}

/// Mean and variance from the chain of (state, last profit) pairs, whose
/// per-turn profit is a function of the current state. Also returns the
/// stationary mass of the two unreachable pairs.
pub fn augmented_stats(m: usize, n: usize, p: &[f64; 5]) -> (f64, f64, f64) {
    let d = Dense::new(m, n, p);
    let s = d.win.nrows();
    // index 2x + e, e = 1 for a win
    let mut aug = DMatrix::zeros(2 * s, 2 * s);
    for x in 0..s {
        for e in 0..2 {
            for y in 0..s {
                aug[(2 * x + e, 2 * y + 1)] = d.win[(x, y)];
                aug[(2 * x + e, 2 * y)] = d.lose[(x, y)];
            }
        }
    }
    let f = DVector::from_fn(2 * s, |k, _| if k % 2 == 1 { 1.0 } else { -1.0 });
    let pi = stationary(&aug);
    let mu = pi.dot(&f);
    let centered = f.map(|v| v - mu);
    let z = fundamental(&aug, &pi);
    let zf = &z * &centered;
    let var =
        2.0 * pi.component_mul(&centered).dot(&zf) - pi.dot(&centered.component_mul(&centered));
    let dead = pi[1] + pi[2 * (s - 1)];
    (mu, var, dead)
}

/// Per-turn mean and variance of the pattern `A^r B^s`, treating each
/// period as one step of the chain `Q = A^r B^s` with a path-dependent
/// block profit.
pub fn pattern_block_stats(m: usize, n: usize, p: &[f64; 5], r: usize, s: usize) -> (f64, f64) {
    let a = Dense::new(m, n, &[0.5; 5]);
    let b = Dense::new(m, n, p);
    let turns: Vec<(DMatrix<f64>, DMatrix<f64>)> = (0..r)
        .map(|_| (a.plain(), a.dot()))
        .chain((0..s).map(|_| (b.plain(), b.dot())))
        .collect();
    let len = turns.len();
    let k = a.win.nrows();
    let ones = DVector::from_element(k, 1.0);
    // product of plain matrices for turns lo..hi
    let span = |lo: usize, hi: usize| {
        let mut out = DMatrix::<f64>::identity(k, k);
        for t in lo..hi {
            out = &out * &turns[t].0;
        }
        out
    };
    let q = span(0, len);
    // mean_k = E[ξ_k | X_0]; m_y = Σ_k E[ξ_k; X_L = y | X_0]
    let mut h = DVector::zeros(k);
    let mut joint = DMatrix::zeros(k, k);
    let mut second = DVector::from_element(k, len as f64);
    for t in 0..len {
        let before = span(0, t);
        let with_dot = &before * &turns[t].1;
        h += &with_dot * &ones;
        joint += &with_dot * span(t + 1, len);
        for u in t + 1..len {
            let pair = &with_dot * span(t + 1, u) * &turns[u].1;
            second += 2.0 * (&pair * &ones);
        }
    }
    let rho = stationary(&q);
    let mu_y = rho.dot(&h);
    let z = fundamental(&q, &rho);
    let one_rho = DMatrix::from_fn(k, k, |_, j| rho[j]);
    let tail = (z - one_rho) * &h;
    let cross = (joint.transpose() * &rho).dot(&tail);
    let var_y = rho.dot(&second) - mu_y * mu_y + 2.0 * cross;
    (mu_y / len as f64, var_y / len as f64)
}

/// Mean of the pattern `A^r B^s` by power iteration on the full chain,
/// using sparse per-site updates; feasible up to `MN = 16`.
pub fn pattern_mean_sparse(m: usize, n: usize, p: &[f64; 5], r: usize, s: usize) -> f64 {
    let states = 1usize << (m * n);
    let sites = m * n;
    let w = 1.0 / sites as f64;
    let counts: Vec<Vec<u8>> = (0..states)
        .map(|x| {
            (0..sites)
                .map(|b| winning_neighbours(x, m, n, b / n, b % n) as u8)
                .collect()
        })
        .collect();
    // one turn: returns the new row vector and the expected profit
    let step = |v: &[f64], coins: &[f64; 5]| {
        let mut out = vec![0.0; states];
        let mut profit = 0.0;
        for x in 0..states {
            let mass = v[x];
            if mass == 0.0 {
                continue;
            }
            for b in 0..sites {
                let pm = coins[counts[x][b] as usize];
                out[x | (1 << b)] += mass * w * pm;
                out[x & !(1 << b)] += mass * w * (1.0 - pm);
                profit += mass * w * (2.0 * pm - 1.0);
            }
        }
        (out, profit)
    };
    let half = [0.5; 5];
    let mut v = vec![1.0 / states as f64; states];
    let mut last = f64::NAN;
    for _ in 0..100_000 {
        let mut total = 0.0;
        for t in 0..r + s {
            let coins = if t < r { &half } else { p };
            let (next, profit) = step(&v, coins);
            v = next;
            total += profit;
        }
        let mean = total / (r + s) as f64;
        if (mean - last).abs() < 1e-15 {
            return mean;
        }
        last = mean;
    }
    last
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
