//! Stationary distributions and the SLLN/CLT mean and variance of the
//! per-turn collective profit, computed on the reduced chain.

use std::sync::Arc;

use log::warn;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use super::chain::{ReducedChain, ReducedStructure, SignVariant};
use super::params::{mixture_params, GameSpec, Params};
use super::regime::{classify_regime, RegimeTag};
use crate::error::{Error, Result};
use crate::lattice::LatticeDims;
use crate::linalg::{gmres, CsrMatrix, DenseMatrix, GmresOptions, LinearOperator};
use crate::scalar::Scalar;

/// Default largest `MN` handled by the exact path.
pub const DEFAULT_EXACT_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactOptions {
    /// Largest `MN` accepted (at most 25).
    pub cap: usize,
    /// Include transposition in the symmetry group when `M = N`.
    pub use_transpose: bool,
    /// Chains with at most this many classes are solved by dense LU.
    pub dense_limit: usize,
    /// Target relative residual of the iterative solves.
    pub tolerance: f64,
    /// Residual above which a solve is reported as failed.
    pub fail_tolerance: f64,
    pub restart: usize,
    pub max_iters: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_EXACT_CAP,
            use_transpose: true,
            dense_limit: 1000,
            tolerance: 1e-12,
            fail_tolerance: 1e-9,
            restart: 80,
            max_iters: 50_000,
        }
    }
}

/// Mean and CLT variance of the per-turn profit at equilibrium.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium<T> {
    pub mean: T,
    pub variance: T,
    /// Stationary distribution over orbit classes (zero off the recurrent class).
    pub stationary: Vec<T>,
    pub regime: RegimeTag,
    pub num_classes: usize,
    /// `max |π P - π|` of the returned stationary vector.
    pub residual: T,
}

/// Transition kernel acting on row and column vectors.
trait Kernel<T: Scalar> {
    fn dim(&self) -> usize;
    /// `y = x K`
    fn left(&self, x: &[T], y: &mut [T]);
    /// `y = K x`
    fn right(&self, x: &[T], y: &mut [T]);
    fn diag(&self) -> Vec<T>;

    fn dense(&self) -> DenseMatrix<T> {
        let n = self.dim();
        let mut d = DenseMatrix::zeros(n);
        let mut e = vec![T::zero(); n];
        let mut row = vec![T::zero(); n];
        for i in 0..n {
            e[i] = T::one();
            self.left(&e, &mut row);
            for (j, &v) in row.iter().enumerate() {
                d[(i, j)] = v;
            }
            e[i] = T::zero();
        }
        d
    }
}

impl<T: Scalar> Kernel<T> for CsrMatrix<T> {
    fn dim(&self) -> usize {
        CsrMatrix::dim(self)
    }
    fn left(&self, x: &[T], y: &mut [T]) {
        self.vec_mul(x, y)
    }
    fn right(&self, x: &[T], y: &mut [T]) {
        self.mul_vec(x, y)
    }
    fn diag(&self) -> Vec<T> {
        self.diagonal()
    }
    fn dense(&self) -> DenseMatrix<T> {
        self.to_dense()
    }
}

/// Product `K_1 K_2 ... K_n` of sparse kernels.
struct Product<'a, T> {
    factors: Vec<&'a CsrMatrix<T>>,
}

impl<T: Scalar> Kernel<T> for Product<'_, T> {
    fn dim(&self) -> usize {
        self.factors[0].dim()
    }
    fn left(&self, x: &[T], y: &mut [T]) {
        let mut cur = x.to_vec();
        for f in &self.factors {
            f.vec_mul(&cur, y);
            cur.copy_from_slice(y);
        }
    }
    fn right(&self, x: &[T], y: &mut [T]) {
        let mut cur = x.to_vec();
        for f in self.factors.iter().rev() {
            f.mul_vec(&cur, y);
            cur.copy_from_slice(y);
        }
    }
    fn diag(&self) -> Vec<T> {
        let n = self.dim();
        let mut e = vec![T::zero(); n];
        let mut y = vec![T::zero(); n];
        (0..n)
            .map(|i| {
                e[i] = T::one();
                self.left(&e, &mut y);
                e[i] = T::zero();
                y[i]
            })
            .collect()
    }
}

/// `x ↦ x (I - K + 1u)` with `u` uniform, in column form.
struct StationaryOp<'a, T, K: ?Sized> {
    kernel: &'a K,
    uniform: T,
}

impl<T: Scalar, K: Kernel<T> + ?Sized> LinearOperator<T> for StationaryOp<'_, T, K> {
    fn dim(&self) -> usize {
        self.kernel.dim()
    }
    fn apply(&self, x: &[T], y: &mut [T]) {
        self.kernel.left(x, y);
        let total: T = x.iter().copied().sum();
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = xi - *yi + self.uniform * total;
        }
    }
}

/// `h ↦ (I - K + 1π) h`.
struct FundamentalOp<'a, T, K: ?Sized> {
    kernel: &'a K,
    pi: &'a [T],
}

impl<T: Scalar, K: Kernel<T> + ?Sized> LinearOperator<T> for FundamentalOp<'_, T, K> {
    fn dim(&self) -> usize {
        self.kernel.dim()
    }
    fn apply(&self, x: &[T], y: &mut [T]) {
        self.kernel.right(x, y);
        let proj: T = self.pi.iter().zip(x).map(|(&a, &b)| a * b).sum();
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = xi - *yi + proj;
        }
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    crate::linalg::dot(a, b)
}

/// Exact equilibrium statistics for one lattice, reusing its reduced
/// structure across parameter vectors.
#[derive(Clone, Debug)]
pub struct ExactSolver {
    structure: Arc<ReducedStructure>,
    opts: ExactOptions,
}

impl ExactSolver {
    pub fn new(dims: LatticeDims, opts: ExactOptions) -> Result<Self> {
        dims.check_cap(opts.cap)?;
        let transpose = opts.use_transpose && dims.is_square();
        let structure = Arc::new(ReducedStructure::new(dims, transpose)?);
        Ok(Self { structure, opts })
    }

    pub fn from_structure(structure: Arc<ReducedStructure>, opts: ExactOptions) -> Self {
        Self { structure, opts }
    }

    pub fn structure(&self) -> &Arc<ReducedStructure> {
        &self.structure
    }

    pub fn dims(&self) -> LatticeDims {
        self.structure.dims()
    }

    pub fn num_classes(&self) -> usize {
        self.structure.num_classes()
    }

    pub fn options(&self) -> &ExactOptions {
        &self.opts
    }

    pub fn reduced_chain<T: Scalar>(&self, p: &Params<T>) -> ReducedChain<T> {
        ReducedChain::new(self.structure.clone(), *p)
    }

    fn gmres_options<T: Scalar>(&self) -> GmresOptions<T> {
        GmresOptions {
            restart: self.opts.restart,
            max_iters: self.opts.max_iters,
            tolerance: T::from_f64_lossy(self.opts.tolerance).max(T::default_tolerance()),
        }
    }

    fn check_residual<T: Scalar>(&self, residual: T, what: &str) -> Result<()> {
        let r = residual.to_f64().unwrap_or(f64::INFINITY);
        let fail = self
            .opts
            .fail_tolerance
            .max(T::default_tolerance().to_f64().unwrap() * 10.0);
        if !(r <= fail) {
            return Err(Error::SolverDidNotConverge { residual: r });
        }
        if r > self
            .opts
            .tolerance
            .max(T::default_tolerance().to_f64().unwrap())
        {
            warn!(
                "{what}: residual {r:.3e} above target {:.1e}",
                self.opts.tolerance
            );
        }
        Ok(())
    }

    /// Stationary row vector of `kernel`, assuming a unique recurrent class.
    fn stationary_of<T: Scalar, K: Kernel<T> + ?Sized>(&self, kernel: &K) -> Result<(Vec<T>, T)> {
        let n = kernel.dim();
        let mut pi = if n <= self.opts.dense_limit {
            // (I - K)^T π^T = 0 with the last balance equation replaced by Σπ = 1
            let k = kernel.dense();
            let mut a = DenseMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    let delta = if i == j { T::one() } else { T::zero() };
                    a[(j, i)] = delta - k[(i, j)];
                }
            }
            for j in 0..n {
                a[(n - 1, j)] = T::one();
            }
            let mut b = vec![T::zero(); n];
            b[n - 1] = T::one();
            a.solve(&b)?
        } else {
            let uniform = T::one() / T::from_usize_lossy(n);
            let op = StationaryOp { kernel, uniform };
            let diag: Vec<T> = kernel
                .diag()
                .iter()
                .map(|&d| T::one() - d + uniform)
                .collect();
            let b = vec![uniform; n];
            let out = gmres(&op, &b, Some(&diag), Some(&b), self.gmres_options());
            out.solution
        };
        for v in pi.iter_mut() {
            if *v < T::zero() {
                *v = T::zero();
            }
        }
        let total: T = pi.iter().copied().sum();
        pi.iter_mut().for_each(|v| *v /= total);

        let mut next = vec![T::zero(); n];
        kernel.left(&pi, &mut next);
        let residual = pi
            .iter()
            .zip(&next)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
        self.check_residual(residual, "stationary distribution")?;
        Ok((pi, residual))
    }

    /// `(Z - 1π) g` without forming the fundamental matrix `Z`.
    fn centered_fundamental<T: Scalar, K: Kernel<T> + ?Sized>(
        &self,
        kernel: &K,
        pi: &[T],
        g: &[T],
    ) -> Result<Vec<T>> {
        let n = kernel.dim();
        let mean = dot(pi, g);
        let rhs: Vec<T> = g.iter().map(|&v| v - mean).collect();
        if n <= self.opts.dense_limit {
            let k = kernel.dense();
            let mut a = DenseMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    let delta = if i == j { T::one() } else { T::zero() };
                    a[(i, j)] = delta - k[(i, j)] + pi[j];
                }
            }
            a.solve(&rhs)
        } else {
            let op = FundamentalOp { kernel, pi };
            let diag: Vec<T> = kernel
                .diag()
                .iter()
                .zip(pi)
                .map(|(&d, &p)| T::one() - d + p)
                .collect();
            let out = gmres(&op, &rhs, Some(&diag), Some(&rhs), self.gmres_options());
            let rnorm = crate::linalg::norm2(&rhs);
            self.check_residual(out.residual * rnorm.min(T::one()), "fundamental solve")?;
            Ok(out.solution)
        }
    }

    /// Stationary distribution of the reduced chain, restricted to its unique
    /// recurrent class when some coin is deterministic.
    pub fn stationary_distribution<T: Scalar>(&self, chain: &ReducedChain<T>) -> Result<Vec<T>> {
        if let Ok(RegimeTag::MeanUndefined) = classify_regime(chain.params(), self.dims()) {
            return Err(Error::RegimeNotErgodic(
                "both all-losers and all-winners states are absorbing".into(),
            ));
        }
        let support = self.recurrent_support(chain)?;
        let restricted = support.restrict(chain.matrix(SignVariant::Plain));
        let (pi, _) = self.stationary_of(&restricted)?;
        Ok(support.expand(&pi))
    }

    /// Finds the recurrent classes of the Plain matrix. Exactly one must be
    /// reachable for the equilibrium to be unique.
    fn recurrent_support<T: Scalar>(&self, chain: &ReducedChain<T>) -> Result<Support> {
        let p = chain.params();
        let all_interior = p.0.iter().all(|&v| v > T::zero() && v < T::one());
        if all_interior {
            return Ok(Support::All);
        }
        let classes = recurrent_classes(chain.matrix(SignVariant::Plain));
        match classes.len() {
            0 => unreachable!("a finite chain has a recurrent class"),
            1 => {
                let class = classes.into_iter().next().unwrap();
                if class.len() == chain.num_classes() {
                    Ok(Support::All)
                } else {
                    Ok(Support::Subset(class))
                }
            }
            _ => Ok(Support::Several(classes)),
        }
    }

    fn b_stats_on<T: Scalar>(
        &self,
        plain: &CsrMatrix<T>,
        dot_m: &CsrMatrix<T>,
        with_variance: bool,
    ) -> Result<(T, T, Vec<T>, T)> {
        if period(plain) > 1 {
            return Err(Error::RegimeNotErgodic(
                "recurrent class is periodic".into(),
            ));
        }
        let (pi, residual) = self.stationary_of(plain)?;
        let g = dot_m.row_sums();
        let mean = dot(&pi, &g);
        if !with_variance {
            return Ok((mean, T::nan(), pi, residual));
        }
        let second: T = dot(&pi, &plain.row_sums());
        let h = self.centered_fundamental(plain, &pi, &g)?;
        let mut pi_dot = vec![T::zero(); pi.len()];
        dot_m.vec_mul(&pi, &mut pi_dot);
        let two = T::from_f64_lossy(2.0);
        let variance = second - mean * mean + two * dot(&pi_dot, &h);
        Ok((mean, variance, pi, residual))
    }

    /// Mean and variance for repeated play of game B.
    pub fn stats_b<T: Scalar>(&self, p: &Params<T>) -> Result<Equilibrium<T>> {
        self.b_equilibrium(p, true)
    }

    fn b_equilibrium<T: Scalar>(
        &self,
        p: &Params<T>,
        with_variance: bool,
    ) -> Result<Equilibrium<T>> {
        Params::new(p.0)?;
        let regime = match classify_regime(p, self.dims()) {
            Ok(RegimeTag::MeanUndefined) => {
                return Err(Error::MeanUndefined(
                    "p0 = 0 and p4 = 1 make both constant states absorbing".into(),
                ))
            }
            Ok(tag) => tag,
            Err(Error::UnsupportedBoundary) => RegimeTag::AccessibleClass,
            Err(e) => return Err(e),
        };
        let chain = self.reduced_chain(p);
        let plain = chain.matrix(SignVariant::Plain);
        let dot_m = chain.matrix(SignVariant::Dot);
        let k = chain.num_classes();

        let support = self.recurrent_support(&chain)?;
        let (mean, variance, pi, residual) = match &support {
            Support::All => self.b_stats_on(plain, dot_m, with_variance)?,
            Support::Subset(idx) => {
                let (m, v, pi, r) =
                    self.b_stats_on(&plain.restrict(idx), &dot_m.restrict(idx), with_variance)?;
                (m, v, support.expand(&pi), r)
            }
            Support::Several(classes) => {
                // the limit of S_n / n is random unless every class agrees
                let mut results = Vec::with_capacity(classes.len());
                for idx in classes {
                    results.push(self.b_stats_on(
                        &plain.restrict(idx),
                        &dot_m.restrict(idx),
                        with_variance,
                    )?);
                }
                let tol = T::from_f64_lossy(1e-9);
                let (m0, v0, _, r0) = &results[0];
                if results
                    .iter()
                    .any(|(m, v, _, _)| (*m - *m0).abs() > tol || (*v - *v0).abs() > tol)
                {
                    return Err(Error::MeanUndefined(format!(
                        "{} recurrent classes with different equilibrium profits",
                        classes.len()
                    )));
                }
                // equal weights over the agreeing classes
                let w = T::one() / T::from_usize_lossy(classes.len());
                let mut pi = vec![T::zero(); k];
                for (idx, (_, _, sub, _)) in classes.iter().zip(&results) {
                    for (&i, &v) in idx.iter().zip(sub) {
                        pi[i] += w * v;
                    }
                }
                (*m0, *v0, pi, *r0)
            }
        };
        Ok(Equilibrium {
            mean,
            variance: variance.max(T::zero()),
            stationary: pi,
            regime,
            num_classes: k,
            residual,
        })
    }

    /// Random mixture `γA + (1-γ)B`, solved as game B with blended coins.
    pub fn stats_mixture<T: Scalar>(&self, p: &Params<T>, gamma: T) -> Result<Equilibrium<T>> {
        GameSpec::Mixture { p: *p, gamma }.validate()?;
        self.stats_b(&mixture_params(p, gamma)?)
    }

    /// Periodic pattern `A^r B^s`.
    pub fn stats_pattern<T: Scalar>(
        &self,
        p: &Params<T>,
        r: usize,
        s: usize,
    ) -> Result<Equilibrium<T>> {
        self.pattern_equilibrium(p, r, s, true)
    }

    fn pattern_equilibrium<T: Scalar>(
        &self,
        p: &Params<T>,
        r: usize,
        s: usize,
        with_variance: bool,
    ) -> Result<Equilibrium<T>> {
        GameSpec::Pattern { p: *p, r, s }.validate()?;
        let a_plain = self
            .structure
            .assemble(&Params::game_a(), SignVariant::Plain);
        let a_dot = self.structure.assemble(&Params::game_a(), SignVariant::Dot);
        let b_plain = self.structure.assemble(p, SignVariant::Plain);
        let b_dot = self.structure.assemble(p, SignVariant::Dot);
        let n = a_plain.dim();

        let mut factors = vec![&a_plain; r];
        factors.extend(std::iter::repeat_n(&b_plain, s));
        let cycle = Product { factors };
        let (pi, residual) = self.stationary_of(&cycle)?;

        let period_len = T::from_usize_lossy(r + s);
        let two = T::from_f64_lossy(2.0);
        let mut tmp = vec![T::zero(); n];

        // alpha[u] = π A^u for u = 0..=r; beta[v] = π A^r B^v for v = 0..s
        let mut alpha = vec![pi.clone()];
        for _ in 0..r {
            a_plain.vec_mul(alpha.last().unwrap(), &mut tmp);
            alpha.push(tmp.clone());
        }
        let mut beta = vec![alpha[r].clone()];
        for _ in 1..s {
            b_plain.vec_mul(beta.last().unwrap(), &mut tmp);
            beta.push(tmp.clone());
        }

        // t[v] = B^v g with g = Ḃ 1
        let g = b_dot.row_sums();
        let mut t = vec![g.clone()];
        for _ in 1..s {
            b_plain.mul_vec(t.last().unwrap(), &mut tmp);
            t.push(tmp.clone());
        }
        let step_means: Vec<T> = beta.iter().map(|b| dot(b, &g)).collect();
        let mean = step_means.iter().copied().sum::<T>() / period_len;
        if !with_variance {
            return Ok(Equilibrium {
                mean,
                variance: T::nan(),
                stationary: pi,
                regime: RegimeTag::Ergodic,
                num_classes: n,
                residual,
            });
        }
        let squares: T = step_means.iter().map(|&m| m * m).sum();

        let ones = vec![T::one(); n];

        // rho[u] = π A^u Ȧ A^{r-u-1}
        let rho: Vec<Vec<T>> = (0..r)
            .map(|u| {
                let mut row = vec![T::zero(); n];
                a_dot.vec_mul(&alpha[u], &mut row);
                for _ in 0..r - u - 1 {
                    a_plain.vec_mul(&row, &mut tmp);
                    row.copy_from_slice(&tmp);
                }
                row
            })
            .collect();
        let a_dot_mass: Vec<T> = (0..r)
            .map(|u| {
                a_dot.vec_mul(&alpha[u], &mut tmp);
                dot(&tmp, &ones)
            })
            .collect();

        // within-period covariances, A turn then B turn
        let mut within = T::zero();
        for u in 0..r {
            for v in 0..s {
                within += dot(&rho[u], &t[v]) - a_dot_mass[u] * step_means[v];
            }
        }
        // within-period covariances between two B turns
        let b_rows: Vec<Vec<T>> = (0..s)
            .map(|u| {
                let mut row = vec![T::zero(); n];
                b_dot.vec_mul(&beta[u], &mut row);
                row
            })
            .collect();
        for u in 0..s {
            let mass = dot(&b_rows[u], &ones);
            let mut row = b_rows[u].clone();
            for v in u + 1..s {
                within += dot(&row, &g) - mass * step_means[v];
                b_plain.vec_mul(&row, &mut tmp);
                row.copy_from_slice(&tmp);
            }
        }

        // across-period terms share h = (Z - 1π) Σ_v A^r B^v g
        let mut w = vec![T::zero(); n];
        for tv in &t {
            let mut col = tv.clone();
            for _ in 0..r {
                a_plain.mul_vec(&col, &mut tmp);
                col.copy_from_slice(&tmp);
            }
            for (wi, &c) in w.iter_mut().zip(&col) {
                *wi += c;
            }
        }
        let h = self.centered_fundamental(&cycle, &pi, &w)?;
        // bh[k] = B^k h
        let mut bh = vec![h];
        for _ in 0..s {
            b_plain.mul_vec(bh.last().unwrap(), &mut tmp);
            bh.push(tmp.clone());
        }
        let mut across = T::zero();
        for row in &rho {
            across += dot(row, &bh[s]);
        }
        for (u, row) in b_rows.iter().enumerate() {
            across += dot(row, &bh[s - u - 1]);
        }

        let variance = T::one() - squares / period_len + two / period_len * (within + across);
        Ok(Equilibrium {
            mean,
            variance: variance.max(T::zero()),
            stationary: pi,
            regime: RegimeTag::Ergodic,
            num_classes: n,
            residual,
        })
    }

    pub fn stats<T: Scalar>(&self, game: &GameSpec<T>) -> Result<Equilibrium<T>> {
        match *game {
            GameSpec::B { p } => self.stats_b(&p),
            GameSpec::Mixture { p, gamma } => self.stats_mixture(&p, gamma),
            GameSpec::Pattern { p, r, s } => self.stats_pattern(&p, r, s),
        }
    }

    /// Mean profit only, skipping the variance solve.
    pub fn mean<T: Scalar>(&self, game: &GameSpec<T>) -> Result<T> {
        let eq = match *game {
            GameSpec::B { p } => self.b_equilibrium(&p, false)?,
            GameSpec::Mixture { p, gamma } => {
                game.validate()?;
                self.b_equilibrium(&mixture_params(&p, gamma)?, false)?
            }
            GameSpec::Pattern { p, r, s } => self.pattern_equilibrium(&p, r, s, false)?,
        };
        Ok(eq.mean)
    }

    /// Equilibrium law of the number of winning neighbours of a fixed site.
    pub fn lambda_weights<T: Scalar>(&self, p: &Params<T>) -> Result<[T; 5]> {
        let eq = self.stats_b(p)?;
        Ok(self.lambda_from_stationary(&eq.stationary))
    }

    pub(crate) fn lambda_from_stationary<T: Scalar>(&self, pi: &[T]) -> [T; 5] {
        // the translations act transitively on sites, so the law at one site
        // is the site average within each class
        let mn = T::from_usize_lossy(self.dims().sites());
        let mut lambda = [T::zero(); 5];
        for (c, &w) in pi.iter().enumerate() {
            let counts = self.structure.site_counts(c);
            for m in 0..5 {
                lambda[m] += w * T::from_usize_lossy(counts[m] as usize) / mn;
            }
        }
        lambda
    }
}

enum Support {
    All,
    Subset(Vec<usize>),
    Several(Vec<Vec<usize>>),
}

impl Support {
    fn restrict<T: Scalar>(&self, m: &CsrMatrix<T>) -> CsrMatrix<T> {
        match self {
            Support::All => m.clone(),
            Support::Subset(idx) => m.restrict(idx),
            Support::Several(_) => m.clone(),
        }
    }

    fn expand<T: Scalar>(&self, pi: &[T]) -> Vec<T> {
        match self {
            Support::Subset(idx) => {
                let n = idx.iter().max().map_or(0, |&i| i + 1).max(pi.len());
                let mut full = vec![T::zero(); n];
                for (&i, &v) in idx.iter().zip(pi) {
                    full[i] = v;
                }
                full
            }
            _ => pi.to_vec(),
        }
    }
}

/// Closed communicating classes (sorted index lists) of the positive-entry graph.
pub(crate) fn recurrent_classes<T: Scalar>(m: &CsrMatrix<T>) -> Vec<Vec<usize>> {
    let n = m.dim();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, m.nnz());
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for (j, v) in m.row(i) {
            if i != j && v > T::zero() {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let sccs = tarjan_scc(&graph);
    let mut component = vec![0usize; n];
    for (c, scc) in sccs.iter().enumerate() {
        for v in scc {
            component[v.index()] = c;
        }
    }
    let mut out: Vec<Vec<usize>> = sccs
        .iter()
        .enumerate()
        .filter(|(c, scc)| {
            scc.iter().all(|v| {
                m.row(v.index())
                    .all(|(j, val)| val <= T::zero() || component[j] == *c)
            })
        })
        .map(|(_, scc)| {
            let mut idx: Vec<usize> = scc.iter().map(|v| v.index()).collect();
            idx.sort_unstable();
            idx
        })
        .collect();
    out.sort();
    out
}

/// Period of an irreducible chain (1 when any diagonal entry is positive).
pub(crate) fn period<T: Scalar>(m: &CsrMatrix<T>) -> usize {
    let n = m.dim();
    if (0..n).any(|i| m.get(i, i) > T::zero()) {
        return 1;
    }
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut g = 0usize;
    while let Some(u) = queue.pop_front() {
        for (v, val) in m.row(u) {
            if val <= T::zero() {
                continue;
            }
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                let diff = (level[u] + 1).abs_diff(level[v]);
                g = gcd(g, diff);
            }
        }
    }
    g.max(1)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Game-B statistics on a fresh solver with default options.
pub fn equilibrium_stats_b(dims: LatticeDims, p: &Params<f64>) -> Result<Equilibrium<f64>> {
    ExactSolver::new(dims, ExactOptions::default())?.stats_b(p)
}

pub fn equilibrium_stats_mixture(
    dims: LatticeDims,
    p: &Params<f64>,
    gamma: f64,
) -> Result<Equilibrium<f64>> {
    ExactSolver::new(dims, ExactOptions::default())?.stats_mixture(p, gamma)
}

pub fn equilibrium_stats_pattern(
    dims: LatticeDims,
    p: &Params<f64>,
    r: usize,
    s: usize,
) -> Result<Equilibrium<f64>> {
    ExactSolver::new(dims, ExactOptions::default())?.stats_pattern(p, r, s)
}

pub fn lambda_weights(dims: LatticeDims, p: &Params<f64>) -> Result<[f64; 5]> {
    ExactSolver::new(dims, ExactOptions::default())?.lambda_weights(p)
}

/// Closed-form game-B variance on the 3x3 lattice for the near-voter-model
/// vector `(ε, (1/2+ε)/2, 1/2, (3/2-ε)/2, 1-ε)`.
pub fn voter_variance_3x3(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::InvalidParams(format!(
            "ε = {eps} must lie in (0, 1/2]"
        )));
    }
    let num = 9.0 - 17.0 * eps + 12.0 * eps * eps + 4.0 * eps.powi(3);
    let den = eps * (1.0 + 16.0 * eps - 4.0 * eps * eps);
    Ok(num / den)
}

/// The near-voter-model parameter vector for `ε`.
pub fn voter_params(eps: f64) -> Params<f64> {
    Params([eps, (0.5 + eps) / 2.0, 0.5, (1.5 - eps) / 2.0, 1.0 - eps])
}
