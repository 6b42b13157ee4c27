//! Rank-one measurements built from a state set: the least-squares
//! measurement (LSM), its orthogonal and weighted variants, and the
//! square-root measurement (SRM), together with their residual errors.
//!
//! A measurement is stored as an `n x m` matrix `M` whose column `i` is the
//! measurement vector `|μ_i>`; the POVM elements are `|μ_i><μ_i|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{projector, sqrt_psd, svd, SvdFactors, DEFAULT_RANK_TOL};
use crate::linalg::{frobenius, isometry_deviation, max_abs, CMatrix};
use crate::stateset::{check_weights, StateSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementKind {
    Lsm,
    OrthogonalLsm,
    Wlsm,
    Srm,
    GuSrm,
    BinarySrm,
    CyclicSrm,
    Custom,
}

impl MeasurementKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Lsm => "lsm",
            Self::OrthogonalLsm => "orthogonal_lsm",
            Self::Wlsm => "wlsm",
            Self::Srm => "srm",
            Self::GuSrm => "gu_srm",
            Self::BinarySrm => "binary_srm",
            Self::CyclicSrm => "cyclic_srm",
            Self::Custom => "custom",
        }
    }
}

/// Construction parameters recorded alongside the matrix.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    /// Factor list of the group used by a group-based construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_factors: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Measurement {
    pub matrix: CMatrix,
    pub kind: MeasurementKind,
    pub rank_used: usize,
    pub metadata: Metadata,
}

impl Measurement {
    pub fn new(matrix: CMatrix, kind: MeasurementKind, rank_used: usize) -> Self {
        Self {
            matrix,
            kind,
            rank_used,
            metadata: Metadata::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn len(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column(&self, i: usize) -> CMatrix {
        self.matrix.columns(i, 1).into_owned()
    }

    /// POVM element `|μ_i><μ_i|`.
    pub fn element(&self, i: usize) -> CMatrix {
        let mu = self.column(i);
        &mu * mu.adjoint()
    }

    /// `Σ_i |μ_i><μ_i| = M M*`.
    pub fn povm_sum(&self) -> CMatrix {
        &self.matrix * self.matrix.adjoint()
    }

    /// Deviation from this kind's structural invariant: `max|M M* - P_U|`,
    /// or `max|M*M - I|` for the orthogonal LSM.
    pub fn invariant_residual(&self, s: &StateSet) -> Result<f64> {
        check_dims(s, self)?;
        if self.kind == MeasurementKind::OrthogonalLsm {
            return Ok(isometry_deviation(&self.matrix));
        }
        let p = projector(&svd(s.states(), DEFAULT_RANK_TOL)?);
        Ok(max_abs(&(self.povm_sum() - p)))
    }
}

pub(crate) fn check_dims(s: &StateSet, meas: &Measurement) -> Result<()> {
    if s.states().shape() != meas.matrix.shape() {
        return Err(Error::DimensionMismatch(format!(
            "states are {}x{} but the measurement is {}x{}",
            s.dim(),
            s.len(),
            meas.dim(),
            meas.len()
        )));
    }
    Ok(())
}

/// Completeness on the state span: `max|P_U M M* P_U - P_U|`.
///
/// The compression to the span is what makes outcome probabilities sum to
/// one for every state in the span; it is zero both for POVMs with
/// `M M* = P_U` and for orthogonal realizations that extend beyond the span.
pub fn completeness_residual(s: &StateSet, meas: &Measurement) -> Result<f64> {
    check_dims(s, meas)?;
    let p = projector(&svd(s.states(), DEFAULT_RANK_TOL)?);
    Ok(max_abs(&(&p * meas.povm_sum() * &p - &p)))
}

/// Least-squares measurement with the default rank tolerance.
pub fn lsm(s: &StateSet) -> Measurement {
    lsm_with_tol(s, DEFAULT_RANK_TOL).expect("state sets are finite and nonempty")
}

/// `M̂ = Σ_{i<=r} |u_i><v_i| = U Z_r V*`.
pub fn lsm_with_tol(s: &StateSet, rank_tol: f64) -> Result<Measurement> {
    let f = svd(s.states(), rank_tol)?;
    Ok(Measurement::new(
        f.transjector_sum(f.rank),
        MeasurementKind::Lsm,
        f.rank,
    ))
}

/// Square-root measurement. Numerically identical to the LSM; priors are not
/// folded in, callers wanting the weighted SRM use [`wlsm`] with
/// `w_i = sqrt(p_i)`.
pub fn srm(s: &StateSet) -> Measurement {
    let mut m = lsm(s);
    m.kind = MeasurementKind::Srm;
    m
}

/// Orthogonal LSM `M̃ = U Z_m V*`: orthonormal measurement vectors, the
/// free directions `i > r` taken as `|u_i>`.
pub fn orthogonal_lsm(s: &StateSet) -> Result<Measurement> {
    orthogonal_lsm_with_tol(s, DEFAULT_RANK_TOL)
}

pub fn orthogonal_lsm_with_tol(s: &StateSet, rank_tol: f64) -> Result<Measurement> {
    let (n, m) = (s.dim(), s.len());
    if m > n {
        return Err(Error::TooManyStates { count: m, dim: n });
    }
    let f = svd(s.states(), rank_tol)?;
    Ok(Measurement::new(
        f.transjector_sum(m),
        MeasurementKind::OrthogonalLsm,
        f.rank,
    ))
}

fn require_independent_normalized(s: &StateSet, rank_tol: f64) -> Result<SvdFactors> {
    if !s.is_normalized() {
        return Err(Error::Unnormalized);
    }
    let f = svd(s.states(), rank_tol)?;
    if f.rank < s.len() {
        return Err(Error::RankDeficient {
            rank: f.rank,
            count: s.len(),
        });
    }
    Ok(f)
}

/// Weighted LSM `M̂_w = Φ_w (Φ_w* Φ_w)^{-1/2}` with `Φ_w = Φ W`, computed as
/// the transjector sum of the SVD of `Φ_w`.
pub fn wlsm(s: &StateSet, w: &[f64]) -> Result<Measurement> {
    wlsm_with_tol(s, w, DEFAULT_RANK_TOL)
}

pub fn wlsm_with_tol(s: &StateSet, w: &[f64], rank_tol: f64) -> Result<Measurement> {
    check_weights(w, s.len())?;
    require_independent_normalized(s, rank_tol)?;
    let fw = svd(s.apply_weights(w)?.states(), rank_tol)?;
    if fw.rank < s.len() {
        return Err(Error::RankDeficient {
            rank: fw.rank,
            count: s.len(),
        });
    }
    let mut meas = Measurement::new(fw.transjector_sum(fw.rank), MeasurementKind::Wlsm, fw.rank);
    meas.metadata.weights = Some(w.to_vec());
    Ok(meas)
}

/// Gram-Schmidt of the states in the given order; a comparison baseline, not
/// an optimal measurement. Dependent columns become zero vectors.
pub fn gram_schmidt_baseline(s: &StateSet) -> Measurement {
    let (n, m) = (s.dim(), s.len());
    let scale = s
        .states()
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let mut basis: Vec<CMatrix> = Vec::new();
    let mut out = CMatrix::zeros(n, m);
    for j in 0..m {
        let mut v = s.column(j);
        for _ in 0..2 {
            for b in &basis {
                let c = b.column(0).dotc(&v.column(0));
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm > 1e-10 * scale.max(f64::MIN_POSITIVE) {
            v /= nalgebra::Complex::new(norm, 0.0);
            out.set_column(j, &v.column(0));
            basis.push(v);
        }
    }
    let mut meas = Measurement::new(out, MeasurementKind::Custom, basis.len());
    meas.metadata.construction = Some("gram_schmidt".into());
    meas
}

/// Direct squared error `E = tr((Φ - M)*(Φ - M))`.
pub fn residual_error(s: &StateSet, meas: &Measurement) -> Result<f64> {
    check_dims(s, meas)?;
    Ok(frobenius(&(s.states() - &meas.matrix)).powi(2))
}

/// Weighted squared error `Σ w_i <e_i|e_i>`.
pub fn weighted_error(s: &StateSet, meas: &Measurement, w: &[f64]) -> Result<f64> {
    check_dims(s, meas)?;
    check_weights(w, s.len())?;
    let e = s.states() - &meas.matrix;
    Ok(e.column_iter()
        .zip(w)
        .map(|(c, wi)| wi * c.norm_squared())
        .sum())
}

/// `r + m - 2 Σ_{i<=r} σ_i`, the LSM residual for normalized states.
pub fn closed_form_residual(sigma: &[f64], rank: usize, m: usize) -> f64 {
    rank as f64 + m as f64 - 2.0 * sigma[..rank].iter().sum::<f64>()
}

/// Minimal squared error `E_min` from the singular values.
pub fn residual_error_closed_form(s: &StateSet, f: &SvdFactors) -> Result<f64> {
    if !s.is_normalized() {
        return Err(Error::Unnormalized);
    }
    if f.ncols() != s.len() {
        return Err(Error::DimensionMismatch(
            "factors do not match the state set".into(),
        ));
    }
    Ok(closed_form_residual(&f.sigma, f.rank, s.len()))
}

/// `E_min` for a normalized set.
pub fn min_residual_error(s: &StateSet) -> Result<f64> {
    residual_error_closed_form(s, &svd(s.states(), DEFAULT_RANK_TOL)?)
}

/// `Ẽ_min = E_min + m - r`, the residual of the orthogonal LSM.
pub fn orthogonal_residual(s: &StateSet) -> Result<f64> {
    if s.len() > s.dim() {
        return Err(Error::TooManyStates {
            count: s.len(),
            dim: s.dim(),
        });
    }
    let f = svd(s.states(), DEFAULT_RANK_TOL)?;
    let e = residual_error_closed_form(s, &f)?;
    Ok(e + (s.len() - f.rank) as f64)
}

/// `E^w_min = 2 Σ (w_i - σ^w_i)`, σ^w the singular values of `Φ W`.
pub fn weighted_residual(s: &StateSet, w: &[f64]) -> Result<f64> {
    check_weights(w, s.len())?;
    require_independent_normalized(s, DEFAULT_RANK_TOL)?;
    let fw = svd(s.apply_weights(w)?.states(), DEFAULT_RANK_TOL)?;
    Ok(2.0 * (w.iter().sum::<f64>() - fw.sigma.iter().sum::<f64>()))
}

/// `||M*Φ - (Φ*Φ)^{1/2}||_F`; zero exactly when `M` reproduces the square
/// root of the Gram matrix.
pub fn verify_srm_implicit(s: &StateSet, meas: &Measurement) -> Result<f64> {
    check_dims(s, meas)?;
    let root = sqrt_psd(s.gram().entries())?;
    Ok(frobenius(&(meas.matrix.adjoint() * s.states() - root)))
}

/// `max_i ||Π̂_i - P_U Π̃_i P_U||_F`: the LSM as the compression of the
/// orthogonal LSM to the state span.
pub fn neumark_check(s: &StateSet) -> Result<f64> {
    let tilde = orthogonal_lsm(s)?;
    let hat = lsm(s);
    let p = projector(&svd(s.states(), DEFAULT_RANK_TOL)?);
    Ok((0..s.len())
        .map(|i| frobenius(&(hat.element(i) - &p * tilde.element(i) * &p)))
        .fold(0.0, f64::max))
}
