//! SVD with an explicit rank decision, pseudo-inverse square roots of
//! Hermitian PSD matrices, and the projector onto a column space.
//!
//! Every function of a Hermitian matrix goes through a full
//! eigendecomposition; the matrices here are small and exact handling of the
//! null space matters more than speed.

use crate::error::{Error, Result};
use crate::linalg::{
    complete_unitary, hermitian_deviation, hermitian_function, is_finite, isometry_deviation,
    max_abs, CMatrix, C64,
};

/// Default relative rank tolerance: singular values at or below
/// `DEFAULT_RANK_TOL * sigma_max` count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Allowed Hermiticity defect for inputs to the spectral functions.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Full singular value decomposition `A = U Σ V*`.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    /// `n x n` unitary.
    pub u: CMatrix,
    /// `min(n, m)` singular values, nonincreasing.
    pub sigma: Vec<f64>,
    /// `m x m` unitary.
    pub v: CMatrix,
    /// Number of singular values above the rank threshold.
    pub rank: usize,
}

impl SvdFactors {
    pub fn nrows(&self) -> usize {
        self.u.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.v.nrows()
    }

    /// `n x m` diagonal matrix of singular values.
    pub fn sigma_matrix(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.nrows(), self.ncols());
        for (i, &x) in self.sigma.iter().enumerate() {
            s[(i, i)] = C64::new(x, 0.0);
        }
        s
    }

    /// `U Σ V*`.
    pub fn reconstruct(&self) -> CMatrix {
        &self.u * self.sigma_matrix() * self.v.adjoint()
    }

    /// First `k` left singular vectors.
    pub fn u_leading(&self, k: usize) -> CMatrix {
        self.u.columns(0, k).into_owned()
    }

    /// First `k` right singular vectors.
    pub fn v_leading(&self, k: usize) -> CMatrix {
        self.v.columns(0, k).into_owned()
    }

    /// Sum of the first `k` transjectors `|u_i><v_i|`, i.e. `U Z_k V*`.
    pub fn transjector_sum(&self, k: usize) -> CMatrix {
        self.u_leading(k) * self.v_leading(k).adjoint()
    }

    /// Sum of the retained singular values.
    pub fn sigma_sum(&self) -> f64 {
        self.sigma[..self.rank].iter().sum()
    }
}

/// Counts singular values strictly above `rel_tol * sigma_max`.
pub fn rank_from_singular_values(sigma: &[f64], rel_tol: f64) -> usize {
    let max = sigma.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rel_tol * max).count()
}

pub(crate) fn check_rel_tol(rel_tol: f64) -> Result<()> {
    if rel_tol > 0.0 && rel_tol < 1.0 {
        Ok(())
    } else {
        Err(Error::Tolerance(rel_tol))
    }
}

/// Full SVD of `a`, rank decided against `rel_tol * sigma_1`.
pub fn svd(a: &CMatrix, rel_tol: f64) -> Result<SvdFactors> {
    check_rel_tol(rel_tol)?;
    let (n, m) = a.shape();
    if n == 0 || m == 0 {
        return Err(Error::Empty("matrix"));
    }
    if !is_finite(a) {
        return Err(Error::NonFinite("matrix"));
    }
    let (dec, u_thin, v_thin) = checked_svd(a)?;
    let k = dec.singular_values.len();

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| dec.singular_values[y].total_cmp(&dec.singular_values[x]));
    let sigma: Vec<f64> = order
        .iter()
        .map(|&i| dec.singular_values[i].max(0.0))
        .collect();
    let u_sorted = CMatrix::from_fn(n, k, |i, j| u_thin[(i, order[j])]);
    let v_sorted = CMatrix::from_fn(m, k, |i, j| v_thin[(i, order[j])]);

    let rank = rank_from_singular_values(&sigma, rel_tol);
    Ok(SvdFactors {
        u: complete_unitary(&u_sorted),
        sigma,
        v: complete_unitary(&v_sorted),
        rank,
    })
}

/// Convergence thresholds tried in order. The complex SVD occasionally
/// returns a wrong factorization for a particular threshold on
/// rank-deficient input, so each attempt is checked by reconstruction.
const SVD_EPSILONS: [f64; 4] = [1e-15, 1e-14, 0.0, 1e-13];

type ThinSvd = (
    nalgebra::linalg::SVD<C64, nalgebra::Dyn, nalgebra::Dyn>,
    CMatrix,
    CMatrix,
);

fn checked_svd(a: &CMatrix) -> Result<ThinSvd> {
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale * (a.nrows().max(a.ncols()) as f64);
    for eps in SVD_EPSILONS {
        let Some(dec) = a.clone().try_svd(true, true, eps, 10_000) else {
            continue;
        };
        let (Some(u), Some(v_t)) = (dec.u.clone(), dec.v_t.clone()) else {
            continue;
        };
        let v = v_t.adjoint();
        let sigma = CMatrix::from_diagonal(&dec.singular_values.map(|x| C64::new(x, 0.0)));
        let sound = max_abs(&(&u * sigma * v.adjoint() - a)) <= tol
            && isometry_deviation(&u) <= 1e-10
            && isometry_deviation(&v) <= 1e-10;
        if sound {
            return Ok((dec, u, v));
        }
    }
    Err(Error::NoConvergence)
}

fn check_hermitian(h: &CMatrix) -> Result<()> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    if !is_finite(h) {
        return Err(Error::NonFinite("Hermitian matrix"));
    }
    let scale = h.iter().fold(1.0f64, |acc, z| acc.max(z.norm()));
    let deviation = hermitian_deviation(h);
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Moore-Penrose pseudo-inverse of the PSD square root, `((h)^{1/2})^†`.
///
/// Eigenvalues above `rel_tol * lambda_max` map to `1/sqrt(λ)`; all others,
/// including negative round-off, map to zero.
pub fn pinv_sqrt(h: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    check_rel_tol(rel_tol)?;
    check_hermitian(h)?;
    let lambda_max = crate::linalg::hermitian_eigen(h)?
        .0
        .first()
        .copied()
        .unwrap_or(0.0);
    let cutoff = rel_tol * lambda_max.max(0.0);
    hermitian_function(h, |l| {
        if l > cutoff && l > 0.0 {
            1.0 / l.sqrt()
        } else {
            0.0
        }
    })
}

/// PSD square root `h^{1/2}`. Eigenvalues within the round-off floor
/// `n * eps * lambda_max` are treated as zero, so a rank-deficient input
/// gets an exactly rank-deficient root instead of `sqrt(eps)`-sized noise.
pub fn sqrt_psd(h: &CMatrix) -> Result<CMatrix> {
    check_hermitian(h)?;
    let lambda_max = crate::linalg::hermitian_eigen(h)?
        .0
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(0.0);
    let floor = h.nrows() as f64 * f64::EPSILON * lambda_max;
    hermitian_function(h, |l| if l > floor { l.sqrt() } else { 0.0 })
}

/// Projector onto the span of the first `rank` left singular vectors.
pub fn projector(f: &SvdFactors) -> CMatrix {
    let ur = f.u_leading(f.rank);
    &ur * ur.adjoint()
}

/// Orthogonal projector onto the column space of `a`.
pub fn column_space_projector(a: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    Ok(projector(&svd(a, rel_tol)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, isometry_deviation, max_abs, real_matrix};

    fn two_state_phi() -> CMatrix {
        let r3 = 3f64.sqrt();
        real_matrix(2, 2, &[1.0, -0.5, 0.0, r3 / 2.0])
    }

    fn gu_phi() -> CMatrix {
        real_matrix(
            4,
            4,
            &[
                1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, -1.0,
                1.0,
            ],
        )
        .scale(0.5)
    }

    #[test]
    fn two_state_singular_values() {
        let f = svd(&two_state_phi(), DEFAULT_RANK_TOL).unwrap();
        assert!((f.sigma[0] - 1.5f64.sqrt()).abs() < 1e-12);
        assert!((f.sigma[1] - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(f.rank, 2);
    }

    #[test]
    fn identity_svd() {
        let f = svd(&identity(3), DEFAULT_RANK_TOL).unwrap();
        assert!(f.sigma.iter().all(|s| (s - 1.0).abs() < 1e-14));
        assert_eq!(f.rank, 3);
    }

    #[test]
    fn gu_singular_values_and_projector_trace() {
        let phi = gu_phi();
        let f = svd(&phi, DEFAULT_RANK_TOL).unwrap();
        let expected = [2f64.sqrt(), 1.0, 1.0, 0.0];
        for (s, e) in f.sigma.iter().zip(expected) {
            assert!((s - e).abs() < 1e-12, "{s} vs {e}");
        }
        assert_eq!(f.rank, 3);
        let p = projector(&f);
        assert!((p.trace().re - 3.0).abs() < 1e-8);
        assert!(max_abs(&(&p * &p - &p)) < 1e-10);
        assert!(max_abs(&(&p * &phi - &phi)) < 1e-9);
        assert!(max_abs(&(f.reconstruct() - phi)) < 1e-12);
        assert!(isometry_deviation(&f.u) < 1e-10);
        assert!(isometry_deviation(&f.v) < 1e-10);
    }

    #[test]
    fn wide_and_tall_shapes() {
        let wide = CMatrix::from_fn(2, 5, |i, j| C64::new((i + j) as f64, (i * j) as f64 * 0.5));
        let f = svd(&wide, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(f.u.shape(), (2, 2));
        assert_eq!(f.v.shape(), (5, 5));
        assert_eq!(f.sigma.len(), 2);
        assert!(max_abs(&(f.reconstruct() - &wide)) < 1e-12);
        let tall = wide.adjoint();
        let f = svd(&tall, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(f.u.shape(), (5, 5));
        assert!(max_abs(&(f.reconstruct() - &tall)) < 1e-12);
    }

    #[test]
    fn single_state_projector() {
        let a = real_matrix(3, 1, &[1.0, 0.0, 0.0]);
        let p = projector(&svd(&a, DEFAULT_RANK_TOL).unwrap());
        let expected = real_matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(max_abs(&(p - expected)) < 1e-14);
    }

    #[test]
    fn pinv_sqrt_two_state_gram() {
        let s = real_matrix(2, 2, &[1.0, -0.5, -0.5, 1.0]);
        let p = pinv_sqrt(&s, DEFAULT_RANK_TOL).unwrap();
        assert!((p[(0, 0)].re - 1.12).abs() < 5e-3);
        assert!((p[(0, 1)].re - 0.30).abs() < 5e-3);
        assert!((p[(1, 0)].re - 0.30).abs() < 5e-3);
        assert!((p[(1, 1)].re - 1.12).abs() < 5e-3);
    }

    #[test]
    fn pinv_sqrt_identity_and_projector() {
        assert!(max_abs(&(pinv_sqrt(&identity(3), 1e-10).unwrap() - identity(3))) < 1e-14);
        let s = 0.5f64.sqrt();
        let e = real_matrix(2, 1, &[s, s]);
        let proj = &e * e.adjoint();
        assert!(max_abs(&(pinv_sqrt(&proj, 1e-10).unwrap() - &proj)) < 1e-12);
    }

    #[test]
    fn pinv_sqrt_rejects_non_hermitian() {
        let a = real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            pinv_sqrt(&a, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn svd_rejects_nan() {
        let a = real_matrix(1, 2, &[1.0, f64::NAN]);
        assert!(matches!(svd(&a, 1e-10), Err(Error::NonFinite(_))));
    }

    #[test]
    fn rank_counts_strictly_above_threshold() {
        assert_eq!(
            rank_from_singular_values(&[2.0, 1.0, 3e-10, 1e-12], 1e-10),
            3
        );
        assert_eq!(rank_from_singular_values(&[0.0, 0.0], 1e-10), 0);
    }
}
