//! Geometrically uniform (GU) state sets: states generated from one seed by a
//! finite abelian group of unitaries. The Gram matrix of such a set is
//! group-circulant, the group Fourier matrix diagonalizes it, and the SRM
//! follows from the Fourier transform of the Gram fingerprint
//! `s(g) = <φ(0)|φ(g)>`.
//!
//! Group elements are mixed-radix tuples over `Z_{m_1} x ... x Z_{m_p}`.
//! The column order of the state matrix is given explicitly by
//! [`GroupSpec::order`].

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::factor::DEFAULT_RANK_TOL;
use crate::linalg::{identity, isometry_deviation, max_abs, real_diagonal, CMatrix, C64};
use crate::measurement::{Measurement, MeasurementKind};
use crate::stateset::StateSet;

/// Default tolerance for the group-circulant structure checks.
pub const DEFAULT_GU_TOL: f64 = 1e-9;

/// Tolerance on the group axioms for generator matrices.
pub const GENERATOR_TOL: f64 = 1e-9;

/// Negative or imaginary Fourier values of the fingerprint smaller than this
/// (relative to `s(0)`) are treated as round-off.
pub const SPECTRUM_TOL: f64 = 1e-10;

pub type GroupElement = Vec<usize>;

/// A finite abelian group `Z_{m_1} x ... x Z_{m_p}` with a labeling of state
/// columns by group elements, and optionally the unitary matrices that
/// realize the group on the state space.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    factors: Vec<usize>,
    order: Vec<GroupElement>,
    generators: Option<Vec<CMatrix>>,
    lookup: HashMap<GroupElement, usize>,
}

impl GroupSpec {
    pub fn new(factors: Vec<usize>, order: Vec<GroupElement>) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&f| f < 2) {
            return Err(Error::InvalidGroup(format!("factor {bad} is below 2")));
        }
        let m: usize = factors.iter().product();
        if order.len() != m {
            return Err(Error::InvalidGroup(format!(
                "order lists {} elements but the group has {}",
                order.len(),
                m
            )));
        }
        let mut lookup = HashMap::with_capacity(m);
        for (i, g) in order.iter().enumerate() {
            if g.len() != factors.len() {
                return Err(Error::InvalidGroup(format!(
                    "element {i} has {} components, expected {}",
                    g.len(),
                    factors.len()
                )));
            }
            if let Some((k, _)) = g
                .iter()
                .zip(&factors)
                .enumerate()
                .find(|(_, (x, f))| x >= f)
            {
                return Err(Error::InvalidGroup(format!(
                    "element {i} component {k} is out of range"
                )));
            }
            if lookup.insert(g.clone(), i).is_some() {
                return Err(Error::InvalidGroup(format!(
                    "element {g:?} is listed twice"
                )));
            }
        }
        Ok(Self {
            factors,
            order,
            generators: None,
            lookup,
        })
    }

    /// Elements in lexicographic order, last component fastest.
    pub fn lexicographic(factors: Vec<usize>) -> Result<Self> {
        let m: usize = factors.iter().product();
        let order = (0..m)
            .map(|mut idx| {
                let mut g = vec![0; factors.len()];
                for k in (0..factors.len()).rev() {
                    g[k] = idx % factors[k];
                    idx /= factors[k];
                }
                g
            })
            .collect();
        Self::new(factors, order)
    }

    /// `Z_m` with column `i` labeled `i`. `m = 1` gives the trivial group.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        if m == 1 {
            return Self::new(Vec::new(), vec![Vec::new()]);
        }
        Self::lexicographic(vec![m])
    }

    /// Attaches generator unitaries, `generators[i]` realizing `order[i]`.
    pub fn with_generators(mut self, generators: Vec<CMatrix>) -> Result<Self> {
        let m = self.len();
        if generators.len() != m {
            return Err(Error::InvalidGroup(format!(
                "{} generators for a group of order {m}",
                generators.len()
            )));
        }
        let n = generators[0].nrows();
        for (i, u) in generators.iter().enumerate() {
            if u.shape() != (n, n) {
                return Err(Error::InvalidGroup(format!("generator {i} is not {n}x{n}")));
            }
            let deviation = isometry_deviation(u);
            if deviation > GENERATOR_TOL {
                return Err(Error::InvalidGroup(format!(
                    "generator {i} is not unitary (deviation {deviation:e})"
                )));
            }
        }
        let zero = self.zero_index();
        if max_abs(&(&generators[zero] - identity(n))) > GENERATOR_TOL {
            return Err(Error::InvalidGroup(
                "generator of the zero element is not the identity".into(),
            ));
        }
        for i in 0..m {
            for j in 0..m {
                let prod = &generators[i] * &generators[j];
                let k = self.add_indices(i, j);
                if max_abs(&(&prod - &generators[k])) > GENERATOR_TOL {
                    return Err(Error::InvalidGroup(format!(
                        "generators {i} and {j} do not multiply like their group elements"
                    )));
                }
                if max_abs(&(&prod - &generators[j] * &generators[i])) > GENERATOR_TOL {
                    return Err(Error::InvalidGroup(format!(
                        "generators {i} and {j} do not commute"
                    )));
                }
            }
        }
        self.generators = Some(generators);
        Ok(self)
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> &[GroupElement] {
        &self.order
    }

    pub fn generators(&self) -> Option<&[CMatrix]> {
        self.generators.as_deref()
    }

    /// Group order `m`.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn index_of(&self, g: &[usize]) -> Option<usize> {
        self.lookup.get(g).copied()
    }

    pub fn zero_index(&self) -> usize {
        self.lookup[&vec![0; self.factors.len()]]
    }

    pub fn add(&self, a: &[usize], b: &[usize]) -> GroupElement {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), m)| (x + y) % m)
            .collect()
    }

    pub fn sub(&self, a: &[usize], b: &[usize]) -> GroupElement {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), m)| (x + m - y) % m)
            .collect()
    }

    /// Column index of `order[i] + order[j]`.
    pub fn add_indices(&self, i: usize, j: usize) -> usize {
        self.lookup[&self.add(&self.order[i], &self.order[j])]
    }

    /// Column index of `order[i] - order[j]`.
    pub fn sub_indices(&self, i: usize, j: usize) -> usize {
        self.lookup[&self.sub(&self.order[i], &self.order[j])]
    }

    /// Fourier kernel `<h, g> = Π_k exp(-2πi h_k g_k / m_k)`.
    pub fn kernel(&self, h: &[usize], g: &[usize]) -> C64 {
        let turns: f64 = h
            .iter()
            .zip(g)
            .zip(&self.factors)
            .map(|((a, b), m)| ((a * b) % m) as f64 / *m as f64)
            .sum();
        C64::from_polar(1.0, -2.0 * PI * turns.fract())
    }
}

/// A complex function on the group, indexed like [`GroupSpec::order`].
#[derive(Clone, Debug, PartialEq)]
pub struct GroupFunction {
    pub values: Vec<C64>,
}

impl GroupFunction {
    pub fn new(values: Vec<C64>) -> Self {
        Self { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Fourier matrix over the group, `F_{h,g} = <h, g> / sqrt(m)`, rows and
/// columns both in [`GroupSpec::order`].
pub fn ft_matrix(g: &GroupSpec) -> CMatrix {
    let m = g.len();
    let norm = 1.0 / (m as f64).sqrt();
    CMatrix::from_fn(m, m, |a, b| g.kernel(&g.order[a], &g.order[b]) * norm)
}

/// `φ̂ = F φ`.
pub fn fourier_transform(g: &GroupSpec, f: &GroupFunction) -> GroupFunction {
    let v = nalgebra::DVector::from_vec(f.values.clone());
    GroupFunction::new((ft_matrix(g) * v).iter().copied().collect())
}

/// `φ = F* φ̂`.
pub fn inverse_fourier_transform(g: &GroupSpec, f: &GroupFunction) -> GroupFunction {
    let v = nalgebra::DVector::from_vec(f.values.clone());
    GroupFunction::new((ft_matrix(g).adjoint() * v).iter().copied().collect())
}

/// Checks that `S_{g',g}` depends only on `g - g'` and returns the
/// fingerprint `s(g) = <φ(0)|φ(g)>`. With generators attached it also
/// checks `|φ(g)> = U_g |φ(0)>`.
pub fn check_gu(s: &StateSet, g: &GroupSpec, tol: f64) -> Result<GroupFunction> {
    if g.len() != s.len() {
        return Err(Error::DimensionMismatch(format!(
            "group of order {} for {} states",
            g.len(),
            s.len()
        )));
    }
    if !s.has_uniform_priors(1e-12) {
        return Err(Error::NonUniformPriors);
    }
    let gram = s.gram().into_inner();
    let zero = g.zero_index();
    let fingerprint: Vec<C64> = (0..g.len()).map(|i| gram[(zero, i)]).collect();

    let mut worst = (0, 0, 0.0f64);
    for row in 0..g.len() {
        for col in 0..g.len() {
            let expected = fingerprint[g.sub_indices(col, row)];
            let d = (gram[(row, col)] - expected).norm();
            if d > worst.2 {
                worst = (row, col, d);
            }
        }
    }
    if worst.2 > tol {
        return Err(Error::NotGeometricallyUniform {
            row: worst.0,
            col: worst.1,
            deviation: worst.2,
        });
    }

    if let Some(gens) = g.generators() {
        if gens[0].nrows() != s.dim() {
            return Err(Error::DimensionMismatch(format!(
                "generators act on dimension {}, states live in {}",
                gens[0].nrows(),
                s.dim()
            )));
        }
        let seed = s.column(zero);
        for (index, u) in gens.iter().enumerate() {
            let deviation = (u * &seed - s.column(index)).norm();
            if deviation > tol {
                return Err(Error::GeneratorMismatch { index, deviation });
            }
        }
    }
    Ok(GroupFunction::new(fingerprint))
}

/// Singular values `σ(h) = m^{1/4} sqrt(ŝ(h))` of a GU state matrix from its
/// fingerprint.
pub fn gu_singular_values(sfun: &GroupFunction, g: &GroupSpec) -> Result<GroupFunction> {
    if sfun.len() != g.len() {
        return Err(Error::DimensionMismatch(format!(
            "function of length {} on a group of order {}",
            sfun.len(),
            g.len()
        )));
    }
    let scale = sfun.values.iter().fold(1.0f64, |acc, z| acc.max(z.norm()));
    let hat = fourier_transform(g, sfun);
    let root_m = (g.len() as f64).powf(0.25);
    // Coefficients within the round-off floor are zero, as in `sqrt_psd`.
    let max_re = hat.values.iter().fold(0.0f64, |acc, z| acc.max(z.re));
    let floor = g.len() as f64 * f64::EPSILON * max_re;
    let mut sigma = Vec::with_capacity(g.len());
    for (index, z) in hat.values.iter().enumerate() {
        if z.im.abs() > SPECTRUM_TOL * scale || z.re < -SPECTRUM_TOL * scale {
            return Err(Error::NonPsdSpectrum {
                index,
                value: format!("{z}"),
            });
        }
        sigma.push(if z.re > floor {
            root_m * z.re.sqrt()
        } else {
            0.0
        });
    }
    Ok(GroupFunction::from_real(&sigma))
}

/// Overlap `w(0) = <μ(g)|φ(g)> = (1/m) Σ_h σ(h)`, common to all columns of
/// the GU SRM.
pub fn detection_overlap(sigma: &GroupFunction) -> f64 {
    sigma.values.iter().map(|z| z.re).sum::<f64>() / sigma.len() as f64
}

/// The SRM of a GU set, `M = Φ F Σ̄† F*`.
pub fn gu_srm(s: &StateSet, g: &GroupSpec) -> Result<Measurement> {
    gu_srm_with_tol(s, g, DEFAULT_GU_TOL, DEFAULT_RANK_TOL)
}

pub fn gu_srm_with_tol(
    s: &StateSet,
    g: &GroupSpec,
    gu_tol: f64,
    rank_tol: f64,
) -> Result<Measurement> {
    let sfun = check_gu(s, g, gu_tol)?;
    let sigma = gu_singular_values(&sfun, g)?.real_parts();
    let max = sigma.iter().cloned().fold(0.0, f64::max);
    let inv: Vec<f64> = sigma
        .iter()
        .map(|&x| if x > rank_tol * max { 1.0 / x } else { 0.0 })
        .collect();
    let rank = inv.iter().filter(|&&x| x != 0.0).count();
    let f = ft_matrix(g);
    let matrix = s.states() * &f * real_diagonal(&inv) * f.adjoint();
    let mut meas = Measurement::new(matrix, MeasurementKind::GuSrm, rank);
    meas.metadata.group_factors = Some(g.factors().to_vec());
    Ok(meas)
}

/// Coefficient matrix `C` of the binary SRM `M = Φ C` for a real inner
/// product `a = <φ1|φ2>`, from `σ(0)^2 = 1 + a`, `σ(1)^2 = 1 - a`.
pub fn binary_coefficients(a: f64) -> Result<CMatrix> {
    if !(a > -1.0 && a < 1.0) {
        return Err(Error::IdenticalStates);
    }
    let s0 = (1.0 + a).sqrt();
    let s1 = (1.0 - a).sqrt();
    let plus = 0.5 * (1.0 / s0 + 1.0 / s1);
    let minus = 0.5 * (1.0 / s0 - 1.0 / s1);
    Ok(crate::linalg::real_matrix(
        2,
        2,
        &[plus, minus, minus, plus],
    ))
}

/// `σ(1)` below this is reported as ill-conditioned.
pub const BINARY_CONDITION_WARN: f64 = 1e-6;

/// Closed-form SRM of two normalized states. The second state is phase
/// aligned first; the returned measurement is expressed for the states as
/// given.
pub fn binary_srm(s: &StateSet) -> Result<Measurement> {
    if s.len() != 2 {
        return Err(Error::StateCount {
            expected: 2,
            found: s.len(),
        });
    }
    if !s.is_normalized() {
        return Err(Error::Unnormalized);
    }
    let (aligned, phase) = s.phase_align_binary_with_phase()?;
    let a = aligned.gram().into_inner()[(0, 1)].re;
    if 1.0 - a <= 4.0 * f64::EPSILON {
        return Err(Error::IdenticalStates);
    }
    let coeffs = binary_coefficients(a)?;
    let mut matrix = aligned.states() * coeffs;
    let restored = matrix.column(1) * phase;
    matrix.set_column(1, &restored);

    let sigma1 = (1.0 - a).sqrt();
    let mut meas = Measurement::new(matrix, MeasurementKind::BinarySrm, 2);
    meas.metadata.group_factors = Some(vec![2]);
    if sigma1 < BINARY_CONDITION_WARN {
        meas.metadata
            .warnings
            .push(format!("ill-conditioned: sigma(1) = {sigma1:e}"));
    }
    Ok(meas)
}

/// SRM of a cyclic set, `G = Z_m` with column `i` labeled `i`.
pub fn cyclic_srm(s: &StateSet, q_order: usize) -> Result<Measurement> {
    if q_order != s.len() {
        return Err(Error::StateCount {
            expected: q_order,
            found: s.len(),
        });
    }
    let g = GroupSpec::cyclic(q_order)?;
    let mut meas = gu_srm(s, &g)?;
    meas.kind = MeasurementKind::CyclicSrm;
    Ok(meas)
}

/// `max ||U_{g'} |μ(g)> - |μ(g + g')>||` over all pairs.
pub fn symmetry_check(meas: &Measurement, g: &GroupSpec) -> Result<f64> {
    let gens = g.generators().ok_or(Error::MissingGenerators)?;
    if meas.len() != g.len() || gens[0].nrows() != meas.dim() {
        return Err(Error::DimensionMismatch(
            "measurement does not match the group".into(),
        ));
    }
    let mut worst = 0.0f64;
    for (j, u) in gens.iter().enumerate() {
        for i in 0..g.len() {
            let k = g.add_indices(i, j);
            worst = worst.max((u * meas.column(i) - meas.column(k)).norm());
        }
    }
    Ok(worst)
}

/// Reflection `R = I - 2|w><w| / <w|w>`, `|w> = |φ2> - |φ1>`, which swaps the
/// two states when their inner product is real.
pub fn binary_reflection(s: &StateSet) -> Result<CMatrix> {
    if s.len() != 2 {
        return Err(Error::StateCount {
            expected: 2,
            found: s.len(),
        });
    }
    let a = s.gram().into_inner()[(0, 1)];
    if a.im.abs() > 1e-12 {
        return Err(Error::Precondition(
            "inner product is not real; phase align the states first".into(),
        ));
    }
    let w = s.column(1) - s.column(0);
    let ww = w.norm_squared();
    if ww <= f64::EPSILON {
        return Err(Error::IdenticalStates);
    }
    Ok(identity(s.dim()) - (&w * w.adjoint()).scale(2.0 / ww))
}

/// Group spec `{I, R}` for a binary set with real inner product.
pub fn binary_group(s: &StateSet) -> Result<GroupSpec> {
    let r = binary_reflection(s)?;
    GroupSpec::cyclic(2)?.with_generators(vec![identity(s.dim()), r])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;
    use crate::measurement::lsm;

    fn hadamard_group() -> GroupSpec {
        GroupSpec::new(
            vec![2, 2],
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        )
        .unwrap()
    }

    fn diag(d: &[f64]) -> CMatrix {
        real_diagonal(d)
    }

    fn gu_generators() -> Vec<CMatrix> {
        let u2 = diag(&[-1.0, 1.0, -1.0, -1.0]);
        let u3 = diag(&[-1.0, -1.0, 1.0, -1.0]);
        let u4 = &u2 * &u3;
        vec![identity(4), u2, u3, u4]
    }

    fn gu_four() -> StateSet {
        let seed = real_matrix(4, 1, &[0.5, 0.5, 0.5, 0.5]);
        let gens = gu_generators();
        let mut phi = CMatrix::zeros(4, 4);
        for (i, u) in gens.iter().enumerate() {
            phi.set_column(i, &(u * &seed).column(0));
        }
        StateSet::new(phi, None).unwrap()
    }

    fn two_state() -> StateSet {
        let r3 = 3f64.sqrt();
        StateSet::new(real_matrix(2, 2, &[1.0, -0.5, 0.0, r3 / 2.0]), None).unwrap()
    }

    #[test]
    fn hadamard_fourier_matrix() {
        let f = ft_matrix(&hadamard_group());
        let expected = real_matrix(
            4,
            4,
            &[
                1.0, 1.0, 1.0, 1.0, 1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0, -1.0, -1.0,
                1.0,
            ],
        )
        .scale(0.5);
        assert!(max_abs(&(f - expected)) < 1e-15);
    }

    #[test]
    fn z2_and_zm_fourier_matrices() {
        let f = ft_matrix(&GroupSpec::cyclic(2).unwrap());
        let h = 0.5f64.sqrt();
        assert!(max_abs(&(f - real_matrix(2, 2, &[h, h, h, -h]))) < 1e-15);
        let m = 5;
        let f = ft_matrix(&GroupSpec::cyclic(m).unwrap());
        for a in 0..m {
            for b in 0..m {
                let dft = C64::from_polar(
                    1.0 / (m as f64).sqrt(),
                    -2.0 * PI * (a * b) as f64 / m as f64,
                );
                assert!((f[(a, b)] - dft).norm() < 1e-14);
            }
        }
        assert!(isometry_deviation(&f) < 1e-12);
    }

    #[test]
    fn gu_fingerprint_and_singular_values() {
        let g = hadamard_group();
        let s = check_gu(&gu_four(), &g, DEFAULT_GU_TOL).unwrap();
        let expected = [1.0, -0.5, -0.5, 0.0];
        for (z, e) in s.values.iter().zip(expected) {
            assert!((z - C64::new(e, 0.0)).norm() < 1e-15);
        }
        let sigma = gu_singular_values(&s, &g).unwrap().real_parts();
        let expected = [0.0, 1.0, 1.0, 2f64.sqrt()];
        for (x, e) in sigma.iter().zip(expected) {
            assert!((x - e).abs() < 1e-12, "{x} vs {e}");
        }
        assert!(
            (detection_overlap(&GroupFunction::from_real(&sigma)) - (2.0 + 2f64.sqrt()) / 4.0)
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn binary_fingerprint() {
        let g = GroupSpec::cyclic(2).unwrap();
        let raw = check_gu(&two_state(), &g, DEFAULT_GU_TOL).unwrap();
        assert!((raw.values[1] - C64::new(-0.5, 0.0)).norm() < 1e-15);
        let aligned = two_state().phase_align_binary().unwrap();
        let s = check_gu(&aligned, &g, DEFAULT_GU_TOL).unwrap();
        assert!((s.values[1] - C64::new(0.5, 0.0)).norm() < 1e-15);
        let sigma = gu_singular_values(&GroupFunction::from_real(&[1.0, 0.3]), &g)
            .unwrap()
            .real_parts();
        assert!((sigma[0].powi(2) - 1.3).abs() < 1e-12);
        assert!((sigma[1].powi(2) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_fingerprint_gives_unit_singular_values() {
        let g = GroupSpec::cyclic(4).unwrap();
        let sigma = gu_singular_values(&GroupFunction::from_real(&[1.0, 0.0, 0.0, 0.0]), &g)
            .unwrap()
            .real_parts();
        assert!(sigma.iter().all(|x| (x - 1.0).abs() < 1e-12));
        let s = StateSet::new(identity(4), None).unwrap();
        let m = gu_srm(&s, &g).unwrap();
        assert!(max_abs(&(m.matrix - identity(4))) < 1e-12);
    }

    #[test]
    fn non_gu_gram_is_rejected() {
        let s = StateSet::new(
            real_matrix(3, 3, &[1.0, 0.6, 0.0, 0.0, 0.8, 0.6, 0.0, 0.0, 0.8]),
            None,
        )
        .unwrap();
        let e = check_gu(&s, &GroupSpec::cyclic(3).unwrap(), DEFAULT_GU_TOL).unwrap_err();
        assert!(matches!(e, Error::NotGeometricallyUniform { .. }));
        assert_eq!(e.exit_code(), 4);
    }

    #[test]
    fn non_uniform_priors_are_rejected() {
        let s = two_state().with_priors(vec![0.3, 0.7]).unwrap();
        assert!(matches!(
            check_gu(&s, &GroupSpec::cyclic(2).unwrap(), 1e-9),
            Err(Error::NonUniformPriors)
        ));
    }

    #[test]
    fn gu_srm_reproduces_printed_matrix() {
        let r = 2f64.sqrt();
        let printed = real_matrix(
            4,
            4,
            &[
                1.0, -1.0, -1.0, 1.0, r, r, -r, -r, r, -r, r, -r, 1.0, -1.0, -1.0, 1.0,
            ],
        )
        .scale(1.0 / (2.0 * r));
        let g = hadamard_group().with_generators(gu_generators()).unwrap();
        let m = gu_srm(&gu_four(), &g).unwrap();
        assert_eq!(m.rank_used, 3);
        assert!(max_abs(&(&m.matrix - &printed)) < 1e-9);
        assert!(symmetry_check(&m, &g).unwrap() < 1e-9);
        let mu1 = real_matrix(4, 1, &[1.0, r, r, 1.0]).scale(1.0 / (2.0 * r));
        assert!(max_abs(&(m.column(0) - mu1)) < 1e-12);
    }

    #[test]
    fn generator_validation() {
        let mut gens = gu_generators();
        gens.swap(1, 2);
        // Swapping two order-2 elements is still an isomorphism.
        assert!(hadamard_group().with_generators(gens).is_ok());
        let mut gens = gu_generators();
        gens[3] = identity(4);
        assert!(hadamard_group().with_generators(gens).is_err());
        let mut gens = gu_generators();
        gens[1] = gens[1].scale(2.0);
        assert!(hadamard_group().with_generators(gens).is_err());
    }

    #[test]
    fn broken_order_is_rejected() {
        assert!(GroupSpec::new(
            vec![2, 2],
            vec![vec![0, 0], vec![0, 1], vec![0, 1], vec![1, 1]]
        )
        .is_err());
        assert!(GroupSpec::new(vec![2, 2], vec![vec![0, 0], vec![0, 1], vec![1, 0]]).is_err());
        assert!(GroupSpec::new(vec![3], vec![vec![0], vec![1], vec![3]]).is_err());
        assert!(GroupSpec::new(vec![1], vec![vec![0]]).is_err());
    }

    #[test]
    fn generator_state_mismatch() {
        let g = hadamard_group().with_generators(gu_generators()).unwrap();
        let mut phi = gu_four().states().clone();
        phi.swap_columns(1, 2);
        let s = StateSet::new(phi, None).unwrap();
        // Swapping two order-2 columns keeps the Gram pattern but breaks U_i φ = φ_i.
        assert!(matches!(
            check_gu(&s, &g, 1e-9),
            Err(Error::GeneratorMismatch { .. })
        ));
    }

    #[test]
    fn binary_closed_form() {
        let c = binary_coefficients(-0.5).unwrap();
        assert!((c[(0, 0)].re - 1.12).abs() < 5e-3);
        assert!((c[(0, 1)].re - 0.30).abs() < 5e-3);
        let s = two_state();
        let m = binary_srm(&s).unwrap();
        assert!(max_abs(&(&m.matrix - lsm(&s).matrix)) < 1e-9);
        let printed = [[0.97, -0.26], [0.26, 0.97]];
        for (i, row) in printed.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert!((m.matrix[(i, j)].re - x).abs() < 5e-3);
            }
        }
        let orth = StateSet::new(identity(2), None).unwrap();
        assert!(max_abs(&(binary_srm(&orth).unwrap().matrix - identity(2))) < 1e-12);
    }

    #[test]
    fn binary_edge_cases() {
        let same = StateSet::new(real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]), None).unwrap();
        assert!(matches!(binary_srm(&same), Err(Error::IdenticalStates)));
        let a: f64 = 0.999;
        let b = (1.0 - a * a).sqrt();
        let close = StateSet::new(real_matrix(2, 2, &[1.0, a, 0.0, b]), None).unwrap();
        let m = binary_srm(&close).unwrap();
        assert!(m.metadata.warnings.is_empty());
        assert!(max_abs(&(m.matrix - lsm(&close).matrix)) < 1e-9);
        let a: f64 = 1.0 - 1e-13;
        let b = (1.0 - a * a).sqrt();
        let closer = StateSet::new(real_matrix(2, 2, &[1.0, a, 0.0, b]), None).unwrap();
        assert!(!binary_srm(&closer).unwrap().metadata.warnings.is_empty());
    }

    #[test]
    fn complex_binary_set_restores_phase() {
        let states = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => C64::new(1.0, 0.0),
            (0, 1) => C64::new(0.3, 0.4),
            (1, 1) => C64::new(0.0, 0.75f64.sqrt()),
            _ => C64::new(0.0, 0.0),
        });
        let s = StateSet::new(states, None).unwrap();
        let m = binary_srm(&s).unwrap();
        assert!(max_abs(&(m.matrix - lsm(&s).matrix)) < 1e-9);
    }

    #[test]
    fn binary_reflection_symmetry() {
        let s = two_state();
        let r = binary_reflection(&s).unwrap();
        assert!(max_abs(&(&r * &r - identity(2))) < 1e-12);
        assert!((&r * s.column(0) - s.column(1)).norm() < 1e-12);
        let g = binary_group(&s).unwrap();
        assert!(symmetry_check(&lsm(&s), &g).unwrap() < 1e-9);
    }

    #[test]
    fn trivial_group() {
        let g = GroupSpec::cyclic(1)
            .unwrap()
            .with_generators(vec![identity(2)])
            .unwrap();
        let s = StateSet::new(real_matrix(2, 1, &[1.0, 0.0]), None).unwrap();
        let m = gu_srm(&s, &g).unwrap();
        assert_eq!(symmetry_check(&m, &g).unwrap(), 0.0);
        assert!(symmetry_check(&m, &GroupSpec::cyclic(1).unwrap()).is_err());
    }

    #[test]
    fn cyclic_two_matches_binary() {
        let s = two_state();
        let c = cyclic_srm(&s, 2).unwrap();
        assert!(max_abs(&(c.matrix - binary_srm(&s).unwrap().matrix)) < 1e-9);
        assert!(cyclic_srm(&s, 3).is_err());
    }

    #[test]
    fn ft_round_trip() {
        let g = GroupSpec::lexicographic(vec![2, 3]).unwrap();
        let x = GroupFunction::new((0..6).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect());
        let back = inverse_fourier_transform(&g, &fourier_transform(&g, &x));
        for (a, b) in back.values.iter().zip(&x.values) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
