//! Small dense complex-matrix helpers shared by the other modules.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);

/// Largest entry magnitude.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Frobenius norm.
pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn is_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `max |A - A*|`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

/// `max |A*A - I|`; zero for matrices with orthonormal columns.
pub fn isometry_deviation(a: &CMatrix) -> f64 {
    max_abs(&(a.adjoint() * a - identity(a.ncols())))
}

/// Builds a matrix from real entries, row-major.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| C64::new(entries[i * cols + j], 0.0))
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// nonincreasing order. Column `k` of the returned matrix is the eigenvector
/// of eigenvalue `k`.
pub fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            n,
            h.ncols()
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    if !is_finite(h) {
        return Err(Error::NonFinite("Hermitian matrix"));
    }
    // symmetric_eigen only reads one triangle, so symmetrize first.
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or(Error::NoConvergence)?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, idx[j])]);
    Ok((values, vectors))
}

/// Applies a real function to the spectrum of a Hermitian matrix:
/// `V diag(f(λ)) V*`.
pub fn hermitian_function(h: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(h)?;
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let fj = f(lambda);
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    Ok(scaled * vectors.adjoint())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &CMatrix) -> Result<f64> {
    let (values, _) = hermitian_eigen(h)?;
    Ok(values.last().copied().unwrap_or(0.0))
}

/// Extends `k` orthonormal columns in dimension `n` to an `n x n` unitary
/// whose first `k` columns are exactly the input.
pub fn complete_unitary(thin: &CMatrix) -> CMatrix {
    let (n, k) = thin.shape();
    if k >= n {
        return thin.clone();
    }
    let mut augmented = CMatrix::zeros(n, k + n);
    augmented.columns_mut(0, k).copy_from(thin);
    augmented.columns_mut(k, n).copy_from(&identity(n));
    let q = augmented.qr().q();
    let mut full = CMatrix::zeros(n, n);
    full.columns_mut(0, k).copy_from(thin);
    full.columns_mut(k, n - k).copy_from(&q.columns(k, n - k));
    full
}

/// `exp(K)` for skew-Hermitian `K`, through the Hermitian matrix `iK`.
pub fn expm_skew_hermitian(k: &CMatrix) -> Result<CMatrix> {
    let h = k.map(|z| z * C64::i());
    let (values, vectors) = hermitian_eigen(&h)?;
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        // K = -i H, so exp(K) = V diag(exp(-i λ)) V*.
        let phase = C64::from_polar(1.0, -lambda);
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    Ok(scaled * vectors.adjoint())
}

/// Column norms.
pub fn column_norms(a: &CMatrix) -> Vec<f64> {
    a.column_iter().map(|c| c.norm()).collect()
}

/// Diagonal matrix from real entries.
pub fn real_diagonal(d: &[f64]) -> CMatrix {
    let n = d.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { C64::new(d[i], 0.0) } else { ZERO })
}
