//! Linear-algebra helpers: a compressed sparse row matrix, dense symmetric
//! eigensolves, and a Lanczos solver for the leading eigenpairs of large
//! sparse symmetric operators.
//!
//! Dense symmetric eigenproblems are delegated to `faer`; everything else
//! (storage, small solves, SVDs) uses `nalgebra`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Entries whose magnitude does not exceed this are dropped when a sparse
/// matrix is compressed (they are floating-point cancellation residue).
pub const DROP_TOL: f64 = 1e-14;

/// Above this side length [`top_eigenvalues`] switches from a dense solve to
/// Lanczos iteration.
pub const DENSE_LIMIT: usize = 600;

/// Compressed sparse row matrix of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed
    /// and entries with `|v| <= DROP_TOL` after summation are dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        let mut indptr = vec![0usize; nrows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut k = 0;
        for row in 0..nrows {
            while k < triplets.len() && triplets[k].0 == row {
                let col = triplets[k].1;
                let mut v = 0.0;
                while k < triplets.len() && triplets[k].0 == row && triplets[k].1 == col {
                    v += triplets[k].2;
                    k += 1;
                }
                if v.abs() > DROP_TOL {
                    indices.push(col);
                    values.push(v);
                }
            }
            indptr[row + 1] = indices.len();
        }
        assert!(k == triplets.len(), "triplet row index out of range");
        SparseMatrix { nrows, ncols, indptr, indices, values }
    }

    /// Sparse copy of a dense matrix.
    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let mut t = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != 0.0 {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), t)
    }

    /// Identity of side `n`.
    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// The stored `(col, value)` pairs of one row.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.indptr[i]..self.indptr[i + 1];
        self.indices[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    /// Entry `(i, j)` (zero if not stored).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.indptr[i]..self.indptr[i + 1];
        match self.indices[r.clone()].binary_search(&j) {
            Ok(p) => self.values[r.start + p],
            Err(_) => 0.0,
        }
    }

    /// All stored triplets in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        (0..self.nrows).flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v))).collect()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.nrows) {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    /// Transposed copy.
    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.triplets().into_iter().map(|(i, j, v)| (j, i, v)).collect())
    }

    /// Dense copy.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    /// Scales every entry.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        self.triplets()
            .into_iter()
            .map(|(i, j, v)| (v - self.get(j, i)).abs())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &SparseMatrix) -> f64 {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let a = self.triplets().into_iter().map(|(i, j, v)| (v - other.get(i, j)).abs());
        let b = other.triplets().into_iter().map(|(i, j, v)| (v - self.get(i, j)).abs());
        a.chain(b).fold(0.0, f64::max)
    }

    /// Sparse product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut t = Vec::new();
        for i in 0..self.nrows {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    t.push((i, j, a * b));
                }
            }
        }
        SparseMatrix::from_triplets(self.nrows, other.ncols, t)
    }

    /// Entrywise linear combination `a*self + b*other`.
    pub fn lincomb(&self, a: f64, other: &SparseMatrix, b: f64) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut t: Vec<_> = self.triplets().into_iter().map(|(i, j, v)| (i, j, a * v)).collect();
        t.extend(other.triplets().into_iter().map(|(i, j, v)| (i, j, b * v)));
        SparseMatrix::from_triplets(self.nrows, self.ncols, t)
    }
}

/// Eigenvalues of a real symmetric matrix in descending order.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let fm = faer::Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let mut ev: Vec<f64> = fm
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::Internal(format!("symmetric eigensolver failed: {e:?}")))?
        .into_iter()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Eigen-decomposition of a real symmetric matrix: eigenvalues descending and
/// the matching orthonormal eigenvectors as columns.
pub fn sym_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let fm = faer::Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let evd = fm
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Internal(format!("symmetric eigensolver failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let vals = order.iter().map(|&k| s[k]).collect();
    let vecs = DMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok((vals, vecs))
}

/// The `k` largest eigenvalues (descending, with multiplicity) of a symmetric
/// sparse matrix. Dense for small sides, Lanczos with locking otherwise.
pub fn top_eigenvalues(m: &SparseMatrix, k: usize) -> Result<Vec<f64>> {
    let n = m.nrows();
    let k = k.min(n);
    if n <= DENSE_LIMIT {
        let mut ev = sym_eigenvalues(&m.to_dense())?;
        ev.truncate(k);
        return Ok(ev);
    }
    Ok(top_eigenpairs(&|x: &[f64], y: &mut [f64]| m.matvec(x, y), n, k)?.into_iter().map(|(v, _)| v).collect())
}

const LANCZOS_TOL: f64 = 1e-11;
const LANCZOS_MAX_ITER: usize = 1500;

/// Leading `k` eigenpairs of a symmetric linear operator, found one at a time
/// by Lanczos iteration with full reorthogonalisation against both the Krylov
/// basis and all previously locked eigenvectors (so degenerate eigenvalues
/// are reported with their multiplicity).
pub fn top_eigenpairs(op: &dyn Fn(&[f64], &mut [f64]), n: usize, k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1a2c_0500);
    let mut locked: Vec<(f64, Vec<f64>)> = Vec::new();
    for _ in 0..k.min(n) {
        let start: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let pair = lanczos_top(op, n, start, &locked, &mut rng)?;
        locked.push(pair);
    }
    locked.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(locked)
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(v, q);
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn lanczos_top(
    op: &dyn Fn(&[f64], &mut [f64]),
    n: usize,
    start: Vec<f64>,
    locked: &[(f64, Vec<f64>)],
    rng: &mut ChaCha8Rng,
) -> Result<(f64, Vec<f64>)> {
    let lock_vecs: Vec<Vec<f64>> = locked.iter().map(|(_, v)| v.clone()).collect();
    let avail = n - lock_vecs.len();
    let max_iter = avail.min(LANCZOS_MAX_ITER);
    let mut q = start;
    orthogonalize(&mut q, &lock_vecs);
    let nq = norm(&q);
    q.iter_mut().for_each(|x| *x /= nq);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    loop {
        let j = basis.len() - 1;
        op(&basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alphas.push(a);
        orthogonalize(&mut w, &lock_vecs);
        orthogonalize(&mut w, &basis);
        let b = norm(&w);
        let m = alphas.len();
        // Relative breakdown threshold: below it the new direction is
        // dominated by rounding noise and would spoil orthogonality.
        let breakdown = b < 1e-9 * a.abs().max(1.0);
        // Each check costs a dense eigensolve of the m×m tridiagonal matrix, so
        // checks are spaced geometrically once m is large.
        let check = m == max_iter || breakdown || (m % 10 == 0 && (m <= 100 || m % (m / 50 * 10) == 0));
        if check {
            let t = DMatrix::from_fn(m, m, |r, c| {
                if r == c {
                    alphas[r]
                } else if r + 1 == c {
                    betas[r]
                } else if c + 1 == r {
                    betas[c]
                } else {
                    0.0
                }
            });
            let eig = nalgebra::SymmetricEigen::new(t);
            let (top, _) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .fold((0usize, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
            let theta = eig.eigenvalues[top];
            let s = eig.eigenvectors.column(top);
            let resid = (b * s[m - 1]).abs();
            let done = resid <= LANCZOS_TOL * theta.abs().max(1.0) || m == max_iter;
            if done {
                if resid > 1e-8 * theta.abs().max(1.0) {
                    return Err(Error::Internal(format!("Lanczos did not converge: residual {resid:e} after {m} steps")));
                }
                let mut y = vec![0.0; n];
                for (c, qv) in basis.iter().enumerate().take(m) {
                    y.iter_mut().zip(qv).for_each(|(yi, qi)| *yi += s[c] * qi);
                }
                orthogonalize(&mut y, &lock_vecs);
                let ny = norm(&y);
                y.iter_mut().for_each(|x| *x /= ny);
                return Ok((theta, y));
            }
            if breakdown {
                // Invariant Krylov subspace reached before convergence of the
                // wanted pair: continue from a fresh orthogonal direction.
                let mut fresh: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
                orthogonalize(&mut fresh, &lock_vecs);
                orthogonalize(&mut fresh, &basis);
                let nf = norm(&fresh);
                if nf < 1e-10 {
                    return Err(Error::Internal("Lanczos restart failed: space exhausted".into()));
                }
                fresh.iter_mut().for_each(|x| *x /= nf);
                betas.push(0.0);
                basis.push(fresh);
                continue;
            }
        }
        betas.push(b);
        let mut next: Vec<f64> = w.iter().map(|x| x / b).collect();
        orthogonalize(&mut next, &lock_vecs);
        orthogonalize(&mut next, &basis);
        let nn = norm(&next);
        next.iter_mut().for_each(|x| *x /= nn);
        basis.push(next);
    }
}

/// Orthonormal basis (as columns) of the column span of `m`, via SVD with a
/// relative rank tolerance.
pub fn orthonormal_basis(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cols: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > tol * smax.max(1.0)).collect();
    DMatrix::from_fn(m.nrows(), cols.len(), |i, j| u[(i, cols[j])])
}

/// Largest principal angle (radians) between the column spans of two
/// matrices with orthonormal columns of equal count.
pub fn max_principal_angle(u: &DMatrix<f64>, v: &DMatrix<f64>) -> f64 {
    if u.ncols() == 0 && v.ncols() == 0 {
        return 0.0;
    }
    if u.ncols() != v.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    // The sine of the largest angle is the spectral norm of the component of
    // `u` orthogonal to `v`; this stays accurate for tiny angles, unlike
    // recovering it from the cosines.
    let resid = u - v * (v.transpose() * u);
    let s = resid.svd(false, false).singular_values;
    s.iter().cloned().fold(0.0, f64::max).min(1.0).asin()
}

/// Dense vector helper.
pub fn dvec(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}
