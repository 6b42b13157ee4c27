//! Perturbation bounds on the residual squared error and the weight sweep.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{svd, DEFAULT_RANK_TOL};
use crate::format::format_sig;
use crate::linalg::{frobenius, hermitian_eigen, identity, isometry_deviation, CMatrix};
use crate::measurement::{closed_form_residual, weighted_residual};
use crate::stateset::StateSet;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationBound {
    /// `sqrt(tr(D*D))` with `D = S - I`.
    pub bound: f64,
    /// `max_i |σ_i^2 - 1|` over all `m` eigenvalues of `S`.
    pub worst_actual: f64,
}

/// Bound on how far the squared singular values of a normalized set stray
/// from 1, in terms of the off-diagonal Gram entries.
pub fn sv_perturbation_bound(s: &StateSet) -> Result<PerturbationBound> {
    if !s.is_normalized() {
        return Err(Error::Unnormalized);
    }
    let gram = s.gram().into_inner();
    let d = &gram - identity(s.len());
    let bound = frobenius(&d);
    let (eigenvalues, _) = hermitian_eigen(&gram)?;
    let worst_actual = eigenvalues
        .iter()
        .map(|l| (l - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(PerturbationBound {
        bound,
        worst_actual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingBoundsResult {
    pub lower: f64,
    pub upper: f64,
    /// `E'_min - E_min`.
    pub actual: f64,
    /// Smallest eigenvalue of `A A*`.
    pub lambda_min: f64,
    /// Largest eigenvalue of `A A*`.
    pub lambda_max: f64,
}

impl MixingBoundsResult {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower - tol <= self.actual && self.actual <= self.upper + tol
    }
}

/// Largest accepted condition number for a mixing matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// Compares `E_min` of `Φ` and of the mixed set `Φ' = Φ A*` against the
/// eigenvalue bounds `2(1 - sqrt(λ_1)) Σσ_i <= ΔE <= 2(1 - sqrt(λ_m)) Σσ_i`.
///
/// Both errors use the closed form `r + m - 2 Σσ_i`.
pub fn mixing_bounds(s: &StateSet, a: &CMatrix) -> Result<MixingBoundsResult> {
    let m = s.len();
    if a.shape() != (m, m) {
        return Err(Error::DimensionMismatch(format!(
            "mixing matrix is {}x{}, expected {m}x{m}",
            a.nrows(),
            a.ncols()
        )));
    }
    let fa = svd(a, DEFAULT_RANK_TOL)?;
    let smax = fa.sigma[0];
    let smin = *fa.sigma.last().unwrap();
    if smin <= 0.0 || smax / smin > MAX_CONDITION {
        return Err(Error::Singular {
            condition: if smin > 0.0 {
                smax / smin
            } else {
                f64::INFINITY
            },
        });
    }
    let f = svd(s.states(), DEFAULT_RANK_TOL)?;
    let fp = svd(&(s.states() * a.adjoint()), DEFAULT_RANK_TOL)?;
    let e = closed_form_residual(&f.sigma, f.rank, m);
    let e_mixed = closed_form_residual(&fp.sigma, fp.rank, m);
    let sum = f.sigma_sum();
    Ok(MixingBoundsResult {
        lower: 2.0 * (1.0 - smax) * sum,
        upper: 2.0 * (1.0 - smin) * sum,
        actual: e_mixed - e,
        lambda_min: smin * smin,
        lambda_max: smax * smax,
    })
}

/// Unitary mixing tolerance on `Q*Q - I`.
pub const UNITARY_TOL: f64 = 1e-9;

/// `|E_min(Φ Q*) - E_min(Φ)|` for unitary `Q`.
pub fn unitary_mixing_check(s: &StateSet, q: &CMatrix) -> Result<f64> {
    let m = s.len();
    if q.shape() != (m, m) {
        return Err(Error::DimensionMismatch(format!(
            "mixing matrix is {}x{}, expected {m}x{m}",
            q.nrows(),
            q.ncols()
        )));
    }
    let deviation = isometry_deviation(q);
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let f = svd(s.states(), DEFAULT_RANK_TOL)?;
    let fq = svd(&(s.states() * q.adjoint()), DEFAULT_RANK_TOL)?;
    Ok(
        (closed_form_residual(&fq.sigma, fq.rank, m) - closed_form_residual(&f.sigma, f.rank, m))
            .abs(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub e_w_min: f64,
}

/// `E^w_min` of a binary set for weights `(sqrt(p), sqrt(1 - p))` at each
/// grid point, in grid order.
pub fn weight_sweep(s: &StateSet, grid: &[f64]) -> Result<Vec<SweepRow>> {
    if s.len() != 2 {
        return Err(Error::StateCount {
            expected: 2,
            found: s.len(),
        });
    }
    if let Some(&bad) = grid.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
        return Err(Error::GridOutOfRange(bad));
    }
    grid.iter()
        .map(|&p| {
            Ok(SweepRow {
                p,
                e_w_min: weighted_residual(s, &[p.sqrt(), (1.0 - p).sqrt()])?,
            })
        })
        .collect()
}

/// CSV with header `p,E_w_min`, 12 significant digits.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("p,E_w_min\n");
    for row in rows {
        out.push_str(&format_sig(row.p, 12));
        out.push(',');
        out.push_str(&format_sig(row.e_w_min, 12));
        out.push('\n');
    }
    out
}

/// Parses `start:stop:step` into grid points `start + k*step <= stop`, each
/// rounded to 12 significant digits.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Malformed(format!(
            "grid {spec:?} is not start:stop:step"
        )));
    }
    let nums = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Malformed(format!("grid component {p:?} is not a number")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::Malformed(format!(
            "grid {spec:?} is empty or has a nonpositive step"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(Error::Malformed(format!(
            "grid {spec:?} has too many points"
        )));
    }
    Ok((0..count)
        .map(|k| crate::format::round_sig(start + k as f64 * step, 12))
        .collect())
}
