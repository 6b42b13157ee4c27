//! Detection performance: error probability, the Holevo/Yuen optimality
//! conditions for minimum-error detection, the Sasaki constant-diagonal
//! criterion, and two brute-force oracles (binary minimum error over
//! orthogonal measurements, and direct minimization of the squared error).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{sqrt_psd, svd, DEFAULT_RANK_TOL};
use crate::linalg::{expm_skew_hermitian, frobenius, min_eigenvalue, CMatrix, C64};
use crate::measurement::{check_dims, completeness_residual, Measurement};
use crate::stateset::StateSet;

/// Default tolerance for the optimality conditions.
pub const DEFAULT_HOLEVO_TOL: f64 = 1e-8;

/// Completeness residual above which an error probability is refused.
pub const COMPLETENESS_TOL: f64 = 1e-6;

/// Largest diagonal spread of `S^{1/2}` accepted as constant.
pub const SASAKI_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    VerifiedMpem,
    Inconclusive,
    Violated,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimalityReport {
    /// `max_{i,j} ||Π_i (W_j - W_i) Π_j||_F`.
    pub holevo_eq_residual: f64,
    /// `min_i λ_min(Γ - W_i)`, divided by `tr Γ`.
    pub holevo_psd_margin: f64,
    /// `||Γ - Γ*||_F`.
    pub gamma_hermiticity: f64,
    pub p_error: f64,
    /// Diagonal spread of `(Φ_w* Φ_w)^{1/2}` with `w_i = sqrt(p_i)`; absent
    /// for linearly dependent states.
    pub sasaki_spread: Option<f64>,
    pub verdict: Verdict,
}

/// `P_e = 1 - Σ_i p_i |<μ_i|φ_i>|^2`.
pub fn error_probability(s: &StateSet, meas: &Measurement) -> Result<f64> {
    let residual = completeness_residual(s, meas)?;
    if residual > COMPLETENESS_TOL {
        return Err(Error::IncompletePovm { residual });
    }
    Ok(raw_error_probability(s, meas))
}

fn raw_error_probability(s: &StateSet, meas: &Measurement) -> f64 {
    let correct: f64 = (0..s.len())
        .map(|i| s.priors()[i] * meas.matrix.column(i).dotc(&s.states().column(i)).norm_sqr())
        .sum();
    1.0 - correct
}

/// Evaluates the minimum-error optimality conditions for a rank-one
/// measurement: `Π_i (W_j - W_i) Π_j = 0` and `Γ - W_i >= 0` with
/// `W_i = p_i |φ_i><φ_i|`, `Π_i = |μ_i><μ_i|`, `Γ = Σ_j Π_j W_j`.
///
/// Violations are reported in the returned values, not as errors.
pub fn holevo_conditions(s: &StateSet, meas: &Measurement, tol: f64) -> Result<OptimalityReport> {
    check_dims(s, meas)?;
    let m = s.len();
    let p = s.priors();
    let phi = s.states();
    let mu = &meas.matrix;
    // overlap[(i, j)] = <μ_i|φ_j>
    let overlap = mu.adjoint() * phi;
    let mu_norms: Vec<f64> = mu.column_iter().map(|c| c.norm()).collect();

    // Π_i (W_j - W_i) Π_j = |μ_i> c_ij <μ_j| with
    // c_ij = p_j <μ_i|φ_j><φ_j|μ_j> - p_i <μ_i|φ_i><φ_i|μ_j>.
    let mut eq_residual = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let c = overlap[(i, j)] * overlap[(j, j)].conj() * p[j]
                - overlap[(i, i)] * overlap[(j, i)].conj() * p[i];
            eq_residual = eq_residual.max(c.norm() * mu_norms[i] * mu_norms[j]);
        }
    }

    let mut weighted = CMatrix::zeros(m, m);
    for j in 0..m {
        weighted[(j, j)] = overlap[(j, j)] * p[j];
    }
    let gamma = mu * weighted * phi.adjoint();
    let gamma_hermiticity = frobenius(&(&gamma - gamma.adjoint()));
    let gamma_h = (&gamma + gamma.adjoint()).scale(0.5);
    let trace = gamma_h.trace().re;

    let mut margin = f64::INFINITY;
    for (i, &p_i) in p.iter().enumerate().take(m) {
        let phi_i = s.column(i);
        let w_i = (&phi_i * phi_i.adjoint()).scale(p_i);
        margin = margin.min(min_eigenvalue(&(&gamma_h - w_i))?);
    }
    if trace > 0.0 {
        margin /= trace;
    }

    let sasaki_spread = match sasaki_criterion(s, true) {
        Ok(res) => Some(res.spread),
        Err(Error::RankDeficient { .. }) => None,
        Err(e) => return Err(e),
    };

    let loose = tol.sqrt();
    let verdict = if eq_residual <= tol && gamma_hermiticity <= tol && margin >= -tol {
        Verdict::VerifiedMpem
    } else if eq_residual > loose || gamma_hermiticity > loose || margin < -loose {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };

    Ok(OptimalityReport {
        holevo_eq_residual: eq_residual,
        holevo_psd_margin: margin,
        gamma_hermiticity,
        p_error: raw_error_probability(s, meas),
        sasaki_spread,
        verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SasakiResult {
    pub holds: bool,
    pub spread: f64,
}

/// Whether `(Φ_w* Φ_w)^{1/2}` has a constant diagonal, `w_i = sqrt(p_i)` when
/// `use_priors` is set and 1 otherwise. When it holds for linearly
/// independent states, the (weighted) SRM minimizes the error probability.
pub fn sasaki_criterion(s: &StateSet, use_priors: bool) -> Result<SasakiResult> {
    let rank = svd(s.states(), DEFAULT_RANK_TOL)?.rank;
    if rank < s.len() {
        return Err(Error::RankDeficient {
            rank,
            count: s.len(),
        });
    }
    let mut phi = s.states().clone();
    if use_priors {
        for (j, &p) in s.priors().iter().enumerate() {
            phi.column_mut(j).scale_mut(p.sqrt());
        }
    }
    let root = sqrt_psd(&(phi.adjoint() * &phi))?;
    let diag: Vec<f64> = (0..s.len()).map(|i| root[(i, i)].re).collect();
    let max = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = max - min;
    Ok(SasakiResult {
        holds: spread <= SASAKI_TOL,
        spread,
    })
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Brute-force minimum error probability for two states over orthogonal
/// measurements of their span: a grid over the basis angle and relative
/// phase, refined by alternating golden-section searches.
pub fn helstrom_oracle(s: &StateSet) -> Result<f64> {
    if s.len() != 2 {
        return Err(Error::StateCount {
            expected: 2,
            found: s.len(),
        });
    }
    let phi1 = s.column(0);
    let phi2 = s.column(1);
    let n1 = phi1.norm();
    if n1 == 0.0 {
        return Err(Error::Precondition("first state is zero".into()));
    }
    let e1 = &phi1 / C64::new(n1, 0.0);
    let proj = e1.column(0).dotc(&phi2.column(0));
    let rest = &phi2 - &e1 * proj;
    let c1 = [C64::new(n1, 0.0), C64::new(0.0, 0.0)];
    let c2 = [proj, C64::new(rest.norm(), 0.0)];
    let (p1, p2) = (s.priors()[0], s.priors()[1]);

    // Basis b1 = (cos t, e^{iχ} sin t), b2 = (-e^{-iχ} sin t, cos t).
    let success = |t: f64, chi: f64| {
        let (st, ct) = t.sin_cos();
        let e = C64::from_polar(1.0, chi);
        let b1 = [C64::new(ct, 0.0), e * st];
        let b2 = [-e.conj() * st, C64::new(ct, 0.0)];
        let amp = |b: &[C64; 2], c: &[C64; 2]| (b[0].conj() * c[0] + b[1].conj() * c[1]).norm_sqr();
        p1 * amp(&b1, &c1) + p2 * amp(&b2, &c2)
    };

    const STEPS: usize = 400;
    let dt = std::f64::consts::PI / STEPS as f64;
    let dchi = 2.0 * std::f64::consts::PI / STEPS as f64;
    let (mut t, mut chi, mut best) = (0.0, 0.0, f64::NEG_INFINITY);
    for a in 0..STEPS {
        for b in 0..STEPS {
            let (ta, cb) = (a as f64 * dt, b as f64 * dchi);
            let v = success(ta, cb);
            if v > best {
                (t, chi, best) = (ta, cb, v);
            }
        }
    }
    let (mut wt, mut wchi) = (dt, dchi);
    for _ in 0..60 {
        t = golden_max(|x| success(x, chi), t - wt, t + wt, 1e-12);
        chi = golden_max(|x| success(t, x), chi - wchi, chi + wchi, 1e-12);
        wt = (wt * 0.5).max(1e-6);
        wchi = (wchi * 0.5).max(1e-6);
    }
    Ok((1.0 - success(t, chi).max(best)).max(0.0))
}

/// Largest `m` and `n` accepted by [`brute_force_lsm_oracle`].
pub const ORACLE_MAX_SIZE: usize = 6;

/// Minimum iteration budget for [`brute_force_lsm_oracle`].
pub const ORACLE_MIN_TRIALS: usize = 10_000;

const ORACLE_RESTARTS: usize = 8;

/// Minimizes `||Φ - M||_F^2` directly over the feasible set
/// `M = U_r Y`, `Y Y* = I_r`, by Riemannian gradient ascent on the unitary
/// group with exponential-map steps and random restarts. `trials` is the
/// total iteration budget shared by the restarts.
pub fn brute_force_lsm_oracle(s: &StateSet, trials: usize, seed: u64) -> Result<f64> {
    let (n, m) = (s.dim(), s.len());
    if n > ORACLE_MAX_SIZE || m > ORACLE_MAX_SIZE {
        return Err(Error::SizeLimit { rows: n, cols: m });
    }
    if trials < ORACLE_MIN_TRIALS {
        return Err(Error::Precondition(format!(
            "oracle needs at least {ORACLE_MIN_TRIALS} trials, got {trials}"
        )));
    }
    let f = svd(s.states(), DEFAULT_RANK_TOL)?;
    let r = f.rank;
    let ur = f.u_leading(r);
    let phi = s.states();
    // Pad U_r* Φ to m x m so that f(W) = Re tr(W* G) = Re tr(M* Φ).
    let mut g = CMatrix::zeros(m, m);
    g.rows_mut(0, r).copy_from(&(ur.adjoint() * phi));
    let per_restart = trials / ORACLE_RESTARTS;

    let best = (0..ORACLE_RESTARTS as u64)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9).wrapping_add(k));
            let mut w = random_unitary(m, &mut rng);
            let objective = |w: &CMatrix| (w.adjoint() * &g).trace().re;
            let mut value = objective(&w);
            let mut step = 0.5;
            for _ in 0..per_restart {
                let b = w.adjoint() * &g;
                let dir = (&b - b.adjoint()).scale(0.5);
                if frobenius(&dir) < 1e-14 {
                    break;
                }
                let candidate = &w * expm_skew_hermitian(&dir.scale(step))?;
                let cv = objective(&candidate);
                if cv > value {
                    w = candidate;
                    value = cv;
                    step = (step * 1.5).min(4.0);
                } else {
                    step *= 0.5;
                    if step < 1e-14 {
                        break;
                    }
                }
            }
            let y = w.rows(0, r).into_owned();
            let meas = &ur * y;
            Ok(frobenius(&(phi - meas)).powi(2))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(best)
}

/// Haar-ish random unitary from the QR factorization of a complex Gaussian
/// matrix.
pub fn random_unitary(m: usize, rng: &mut impl rand::Rng) -> CMatrix {
    let z = CMatrix::from_fn(m, m, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut out = q;
    for j in 0..m {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        out.column_mut(j).iter_mut().for_each(|x| *x *= phase);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gu::{gu_srm, GroupSpec};
    use crate::linalg::{identity, real_matrix};
    use crate::measurement::{gram_schmidt_baseline, lsm, min_residual_error};

    fn two_state() -> StateSet {
        let r3 = 3f64.sqrt();
        StateSet::new(real_matrix(2, 2, &[1.0, -0.5, 0.0, r3 / 2.0]), None).unwrap()
    }

    fn gu_four() -> StateSet {
        StateSet::new(
            real_matrix(
                4,
                4,
                &[
                    1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0,
                    -1.0, 1.0,
                ],
            )
            .scale(0.5),
            None,
        )
        .unwrap()
    }

    fn helstrom_closed_form(s: &StateSet) -> f64 {
        let a = s.gram().into_inner()[(0, 1)].norm();
        let (p1, p2) = (s.priors()[0], s.priors()[1]);
        0.5 * (1.0 - (1.0 - 4.0 * p1 * p2 * a * a).sqrt())
    }

    #[test]
    fn error_probability_examples() {
        let orth = StateSet::new(identity(3), None).unwrap();
        assert!(error_probability(&orth, &lsm(&orth)).unwrap().abs() < 1e-12);

        let gu = gu_four();
        let g = GroupSpec::lexicographic(vec![2, 2]).unwrap();
        let pe = error_probability(&gu, &gu_srm(&gu, &g).unwrap()).unwrap();
        let w0 = (2.0 + 2f64.sqrt()) / 4.0;
        assert!((pe - (1.0 - w0 * w0)).abs() < 1e-12);
        assert!((pe - 0.2714).abs() < 1e-4);

        let s = two_state();
        let pe = error_probability(&s, &lsm(&s)).unwrap();
        assert!((pe - 0.0670).abs() < 1e-4, "{pe}");
    }

    #[test]
    fn incomplete_povm_is_refused() {
        let s = two_state();
        let half = crate::measurement::Measurement::new(
            lsm(&s).matrix.scale(0.5),
            crate::measurement::MeasurementKind::Custom,
            2,
        );
        assert!(matches!(
            error_probability(&s, &half),
            Err(Error::IncompletePovm { .. })
        ));
    }

    #[test]
    fn holevo_on_gu_and_binary() {
        let gu = gu_four();
        let g = GroupSpec::lexicographic(vec![2, 2]).unwrap();
        let report = holevo_conditions(&gu, &gu_srm(&gu, &g).unwrap(), 1e-8).unwrap();
        assert_eq!(report.verdict, Verdict::VerifiedMpem);
        assert!(report.sasaki_spread.is_none());

        let s = two_state();
        let report = holevo_conditions(&s, &lsm(&s), 1e-8).unwrap();
        assert_eq!(report.verdict, Verdict::VerifiedMpem);
        assert!(report.gamma_hermiticity < 1e-9);
    }

    #[test]
    fn gram_schmidt_baseline_is_not_optimal() {
        let s = two_state();
        let base = gram_schmidt_baseline(&s);
        let report = holevo_conditions(&s, &base, 1e-8).unwrap();
        assert_ne!(report.verdict, Verdict::VerifiedMpem);
        assert!(report.p_error > error_probability(&s, &lsm(&s)).unwrap());
    }

    #[test]
    fn sasaki_examples() {
        let s = two_state();
        let res = sasaki_criterion(&s, true).unwrap();
        assert!(res.holds && res.spread < 1e-10);
        let generic = StateSet::new(
            real_matrix(3, 3, &[1.0, 0.6, 0.0, 0.0, 0.8, 0.6, 0.0, 0.0, 0.8]),
            Some(vec![0.6, 0.3, 0.1]),
        )
        .unwrap();
        let res = sasaki_criterion(&generic, true).unwrap();
        assert!(!res.holds && res.spread > 1e-3);
        assert!(matches!(
            sasaki_criterion(&gu_four(), false),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn helstrom_examples() {
        let s = two_state();
        let oracle = helstrom_oracle(&s).unwrap();
        assert!((oracle - error_probability(&s, &lsm(&s)).unwrap()).abs() < 1e-6);
        assert!((oracle - helstrom_closed_form(&s)).abs() < 1e-9);

        let orth = StateSet::new(identity(2), None).unwrap();
        assert!(helstrom_oracle(&orth).unwrap() < 1e-12);

        let same = StateSet::new(real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]), None).unwrap();
        assert!((helstrom_oracle(&same).unwrap() - 0.5).abs() < 1e-12);

        let skew = s.with_priors(vec![0.8, 0.2]).unwrap();
        assert!((helstrom_oracle(&skew).unwrap() - helstrom_closed_form(&skew)).abs() < 1e-9);
        assert!(helstrom_oracle(&gu_four()).is_err());
    }

    #[test]
    fn lsm_oracle_examples() {
        let s = two_state();
        let e = min_residual_error(&s).unwrap();
        let star = brute_force_lsm_oracle(&s, 10_000, 7).unwrap();
        assert!(star >= e - 1e-6 && star <= e + 1e-4, "{star} vs {e}");

        let orth = StateSet::new(identity(3), None).unwrap();
        assert!(brute_force_lsm_oracle(&orth, 10_000, 1).unwrap() < 1e-6);

        let gu = gu_four();
        let e = min_residual_error(&gu).unwrap();
        let star = brute_force_lsm_oracle(&gu, 10_000, 3).unwrap();
        assert!(star >= e - 1e-6 && star <= e + 1e-4, "{star} vs {e}");
    }

    #[test]
    fn lsm_oracle_limits() {
        let big = StateSet::new(identity(7), None).unwrap();
        assert!(matches!(
            brute_force_lsm_oracle(&big, 10_000, 0),
            Err(Error::SizeLimit { .. })
        ));
        assert!(brute_force_lsm_oracle(&two_state(), 10, 0).is_err());
    }
}
