//! Sparse/dense linear algebra for the reduced chains.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Compressed sparse row matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Builds from per-row `(col, value)` lists; duplicate columns are summed.
    pub fn from_rows(n: usize, rows: impl IntoIterator<Item = Vec<(u32, T)>>) -> Self {
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let start = cols.len();
            for (c, v) in row {
                if cols.len() > start && *cols.last().unwrap() == c {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        assert_eq!(row_ptr.len(), n + 1, "row count mismatch");
        Self {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub(crate) fn from_parts(n: usize, row_ptr: Vec<usize>, cols: Vec<u32>, vals: Vec<T>) -> Self {
        debug_assert_eq!(row_ptr.len(), n + 1);
        debug_assert_eq!(cols.len(), vals.len());
        Self {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .zip(&self.vals[r])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.row(i)
            .find(|&(c, _)| c == j)
            .map_or(T::zero(), |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v).sum())
            .collect()
    }

    /// `y = A x` (column-vector action).
    pub fn mul_vec(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            let mut acc = T::zero();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            *yi = acc;
        }
    }

    /// `y = x A` (row-vector action).
    pub fn vec_mul(&self, x: &[T], y: &mut [T]) {
        y.iter_mut().for_each(|v| *v = T::zero());
        for (i, &xi) in x.iter().enumerate().take(self.n) {
            if xi == T::zero() {
                continue;
            }
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                y[self.cols[k] as usize] += xi * self.vals[k];
            }
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut d = DenseMatrix::zeros(self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[(i, j)] += v;
            }
        }
        d
    }

    /// Principal submatrix on `keep` (sorted indices).
    pub fn restrict(&self, keep: &[usize]) -> CsrMatrix<T> {
        let mut index = vec![u32::MAX; self.n];
        for (k, &i) in keep.iter().enumerate() {
            index[i] = k as u32;
        }
        let rows = keep.iter().map(|&i| {
            self.row(i)
                .filter(|&(j, _)| index[j] != u32::MAX)
                .map(|(j, v)| (index[j], v))
                .collect()
        });
        CsrMatrix::from_rows(keep.len(), rows)
    }
}

/// Row-major dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Self::zeros(n);
        for i in 0..n {
            d[(i, i)] = T::one();
        }
        d
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &DenseMatrix<T>) -> DenseMatrix<T> {
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                let src = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> DenseMatrix<T> {
        let mut out = DenseMatrix::identity(self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn mul_vec(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            *yi = self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum();
        }
    }

    pub fn vec_mul(&self, x: &[T], y: &mut [T]) {
        y.iter_mut().for_each(|v| *v = T::zero());
        for (i, &xi) in x.iter().enumerate().take(self.n) {
            if xi == T::zero() {
                continue;
            }
            for (yj, &a) in y.iter_mut().zip(self.row(i)) {
                *yj += xi * a;
            }
        }
    }

    pub fn transpose(&self) -> DenseMatrix<T> {
        let mut t = DenseMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Solves `A x = b` by LU with partial pivoting, consuming the matrix.
    pub fn solve(mut self, b: &[T]) -> Result<Vec<T>> {
        let n = self.n;
        let mut x = b.to_vec();
        let scale = self
            .data
            .iter()
            .fold(T::zero(), |m, &v| m.max(v.abs()))
            .max(T::min_positive_value());
        let tiny = scale * T::epsilon() * T::from_usize_lossy(n);
        for col in 0..n {
            let (piv, pmax) = (col..n)
                .map(|r| (r, self.data[r * n + col].abs()))
                .fold((col, T::zero()), |acc, c| if c.1 > acc.1 { c } else { acc });
            if pmax <= tiny {
                return Err(Error::RegimeNotErgodic(
                    "singular linear system (more than one recurrent class)".into(),
                ));
            }
            if piv != col {
                for j in 0..n {
                    self.data.swap(col * n + j, piv * n + j);
                }
                x.swap(col, piv);
            }
            let d = self.data[col * n + col];
            for r in col + 1..n {
                let f = self.data[r * n + col] / d;
                if f == T::zero() {
                    continue;
                }
                self.data[r * n + col] = T::zero();
                let (upper, lower) = self.data.split_at_mut(r * n);
                let src = &upper[col * n + col + 1..col * n + n];
                for (dst, &s) in lower[col + 1..n].iter_mut().zip(src) {
                    *dst -= f * s;
                }
                let xc = x[col];
                x[r] -= f * xc;
            }
        }
        for col in (0..n).rev() {
            let mut acc = x[col];
            for j in col + 1..n {
                acc -= self.data[col * n + j] * x[j];
            }
            x[col] = acc / self.data[col * n + col];
        }
        Ok(x)
    }
}

impl<T> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// A square linear map given by its action.
pub trait LinearOperator<T> {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[T], y: &mut [T]);
}

/// Settings for [`gmres`].
#[derive(Clone, Copy, Debug)]
pub struct GmresOptions<T> {
    pub restart: usize,
    pub max_iters: usize,
    pub tolerance: T,
}

impl<T: Scalar> Default for GmresOptions<T> {
    fn default() -> Self {
        Self {
            restart: 60,
            max_iters: 20_000,
            tolerance: T::default_tolerance(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GmresOutcome<T> {
    pub solution: Vec<T>,
    /// Final relative residual `||b - A x|| / ||b||`.
    pub residual: T,
    pub iterations: usize,
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm2<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Restarted GMRES with right Jacobi preconditioning.
pub fn gmres<T: Scalar, A: LinearOperator<T> + ?Sized>(
    op: &A,
    b: &[T],
    diag: Option<&[T]>,
    x0: Option<&[T]>,
    opts: GmresOptions<T>,
) -> GmresOutcome<T> {
    let n = op.dim();
    let m = opts.restart.max(1).min(n.max(1));
    let precond = |v: &[T], out: &mut [T]| match diag {
        Some(d) => {
            for ((o, &vi), &di) in out.iter_mut().zip(v).zip(d) {
                *o = if di != T::zero() { vi / di } else { vi };
            }
        }
        None => out.copy_from_slice(v),
    };

    let bnorm = norm2(b);
    let mut x = x0.map_or_else(|| vec![T::zero(); n], <[T]>::to_vec);
    if bnorm == T::zero() {
        return GmresOutcome {
            solution: vec![T::zero(); n],
            residual: T::zero(),
            iterations: 0,
        };
    }

    let mut r = vec![T::zero(); n];
    let mut tmp = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut iterations = 0;

    let residual = |x: &[T], r: &mut [T], tmp: &mut [T]| {
        op.apply(x, tmp);
        for ((ri, &bi), &ti) in r.iter_mut().zip(b).zip(tmp.iter()) {
            *ri = bi - ti;
        }
    };

    while iterations < opts.max_iters {
        residual(&x, &mut r, &mut tmp);
        let beta = norm2(&r);
        if beta / bnorm <= opts.tolerance {
            break;
        }
        let mut basis: Vec<Vec<T>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|&v| v / beta).collect());
        let mut h = vec![vec![T::zero(); m]; m + 1];
        let mut cs = vec![T::zero(); m];
        let mut sn = vec![T::zero(); m];
        let mut g = vec![T::zero(); m + 1];
        g[0] = beta;
        let mut k_used = 0;

        for k in 0..m {
            iterations += 1;
            precond(&basis[k], &mut z);
            let mut w = vec![T::zero(); n];
            op.apply(&z, &mut w);
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(&w, v);
                h[i][k] = hij;
                for (wj, &vj) in w.iter_mut().zip(v) {
                    *wj -= hij * vj;
                }
            }
            let wn = norm2(&w);
            h[k + 1][k] = wn;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = (h[k][k] * h[k][k] + h[k + 1][k] * h[k + 1][k]).sqrt();
            if denom == T::zero() {
                cs[k] = T::one();
                sn[k] = T::zero();
            } else {
                cs[k] = h[k][k] / denom;
                sn[k] = h[k + 1][k] / denom;
            }
            h[k][k] = cs[k] * h[k][k] + sn[k] * h[k + 1][k];
            h[k + 1][k] = T::zero();
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            k_used = k + 1;
            let est = g[k + 1].abs() / bnorm;
            if est <= opts.tolerance * T::from_f64_lossy(0.5) || wn == T::zero() {
                break;
            }
            basis.push(w.iter().map(|&v| v / wn).collect());
            if iterations >= opts.max_iters {
                break;
            }
        }

        // back substitution on the triangular system
        let mut y = vec![T::zero(); k_used];
        for i in (0..k_used).rev() {
            let mut acc = g[i];
            for j in i + 1..k_used {
                acc -= h[i][j] * y[j];
            }
            y[i] = acc / h[i][i];
        }
        let mut update = vec![T::zero(); n];
        for (yi, v) in y.iter().zip(&basis) {
            for (u, &vj) in update.iter_mut().zip(v) {
                *u += *yi * vj;
            }
        }
        precond(&update, &mut z);
        for (xi, &zi) in x.iter_mut().zip(&z) {
            *xi += zi;
        }
    }
    residual(&x, &mut r, &mut tmp);
    GmresOutcome {
        solution: x,
        residual: norm2(&r) / bnorm,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dense(DenseMatrix<f64>);
    impl LinearOperator<f64> for Dense {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            self.0.mul_vec(x, y)
        }
    }

    fn sample_matrix(n: usize) -> DenseMatrix<f64> {
        let mut a = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = ((i * 7 + j * 3) % 11) as f64 / 11.0 - 0.3;
            }
            a[(i, i)] += n as f64;
        }
        a
    }

    #[test]
    fn lu_solves_small_system() {
        let a = sample_matrix(12);
        let b: Vec<f64> = (0..12).map(|i| i as f64 - 4.0).collect();
        let x = a.clone().solve(&b).unwrap();
        let mut ax = vec![0.0; 12];
        a.mul_vec(&x, &mut ax);
        for (u, v) in ax.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn lu_reports_singular() {
        let mut a = DenseMatrix::<f64>::zeros(3);
        a[(0, 0)] = 1.0;
        a[(1, 1)] = 1.0;
        assert!(a.solve(&[1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn gmres_matches_lu() {
        let a = sample_matrix(40);
        let b: Vec<f64> = (0..40).map(|i| (i as f64).sin()).collect();
        let direct = a.clone().solve(&b).unwrap();
        let diag: Vec<f64> = (0..40).map(|i| a[(i, i)]).collect();
        let out = gmres(
            &Dense(a),
            &b,
            Some(&diag),
            None,
            GmresOptions {
                restart: 8,
                ..Default::default()
            },
        );
        assert!(out.residual < 1e-12);
        for (u, v) in out.solution.iter().zip(&direct) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn csr_products_agree_with_dense() {
        let rows = vec![
            vec![(0u32, 0.5), (2, 0.5)],
            vec![(1, 1.0)],
            vec![(0, 0.25), (1, 0.25), (2, 0.25), (2, 0.25)],
        ];
        let a = CsrMatrix::from_rows(3, rows);
        assert_eq!(a.get(2, 2), 0.5);
        let d = a.to_dense();
        let x = [1.0, 2.0, 3.0];
        let (mut y1, mut y2) = ([0.0; 3], [0.0; 3]);
        a.vec_mul(&x, &mut y1);
        d.vec_mul(&x, &mut y2);
        assert_eq!(y1, y2);
        a.mul_vec(&x, &mut y1);
        d.mul_vec(&x, &mut y2);
        assert_eq!(y1, y2);
        assert_eq!(a.row_sums(), vec![1.0, 1.0, 1.0]);
        let sub = a.restrict(&[0, 2]);
        assert_eq!(sub.get(1, 1), 0.5);
        assert_eq!(sub.get(1, 0), 0.25);
    }
}
