//! Pure-state ensembles: the matrix of state columns plus prior
//! probabilities.

use crate::error::{Error, Result};
use crate::factor::{rank_from_singular_values, svd};
use crate::linalg::{column_norms, hermitian_deviation, min_eigenvalue, CMatrix, C64};

/// Default tolerance on `| ||φ_i|| - 1 |` for normalized sets.
pub const DEFAULT_NORM_TOL: f64 = 1e-9;

/// Allowed deviation of the priors' sum from 1.
pub const PRIOR_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
pub struct StateSetOptions {
    /// When false the column norms are not checked.
    pub normalized: bool,
    pub norm_tol: f64,
}

impl Default for StateSetOptions {
    fn default() -> Self {
        Self {
            normalized: true,
            norm_tol: DEFAULT_NORM_TOL,
        }
    }
}

/// `m` pure states in dimension `n`, stored as the columns of an `n x m`
/// matrix, with prior probabilities.
#[derive(Clone, Debug)]
pub struct StateSet {
    states: CMatrix,
    priors: Vec<f64>,
    normalized: bool,
}

impl StateSet {
    /// Normalized set; `None` priors means uniform.
    pub fn new(states: CMatrix, priors: Option<Vec<f64>>) -> Result<Self> {
        Self::with_options(states, priors, StateSetOptions::default())
    }

    /// Set whose columns are not required to have unit norm.
    pub fn unnormalized(states: CMatrix, priors: Option<Vec<f64>>) -> Result<Self> {
        Self::with_options(
            states,
            priors,
            StateSetOptions {
                normalized: false,
                ..Default::default()
            },
        )
    }

    pub fn with_options(
        states: CMatrix,
        priors: Option<Vec<f64>>,
        options: StateSetOptions,
    ) -> Result<Self> {
        let (n, m) = states.shape();
        if n == 0 {
            return Err(Error::Empty("state dimension"));
        }
        if m == 0 {
            return Err(Error::Empty("state set"));
        }
        if !crate::linalg::is_finite(&states) {
            return Err(Error::NonFinite("states"));
        }
        let priors = match priors {
            Some(p) => {
                validate_priors(&p, m)?;
                p
            }
            None => vec![1.0 / m as f64; m],
        };
        if options.normalized {
            for (column, norm) in column_norms(&states).into_iter().enumerate() {
                if (norm - 1.0).abs() > options.norm_tol {
                    return Err(Error::NormViolation {
                        column,
                        norm,
                        tol: options.norm_tol,
                    });
                }
            }
        }
        Ok(Self {
            states,
            priors,
            normalized: options.normalized,
        })
    }

    /// Normalized set from explicit columns.
    pub fn from_columns(columns: &[Vec<C64>], priors: Option<Vec<f64>>) -> Result<Self> {
        Self::new(columns_to_matrix(columns)?, priors)
    }

    /// The `n x m` state matrix.
    pub fn states(&self) -> &CMatrix {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn dim(&self) -> usize {
        self.states.nrows()
    }

    /// Number of states `m`.
    pub fn len(&self) -> usize {
        self.states.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn column(&self, i: usize) -> CMatrix {
        self.states.columns(i, 1).into_owned()
    }

    pub fn has_uniform_priors(&self, tol: f64) -> bool {
        let u = 1.0 / self.len() as f64;
        self.priors.iter().all(|p| (p - u).abs() <= tol)
    }

    /// Same states, new priors.
    pub fn with_priors(&self, priors: Vec<f64>) -> Result<Self> {
        validate_priors(&priors, self.len())?;
        Ok(Self {
            priors,
            ..self.clone()
        })
    }

    /// `S = Φ*Φ`.
    pub fn gram(&self) -> GramMatrix {
        GramMatrix(self.states.adjoint() * &self.states)
    }

    /// Number of singular values of `Φ` above `rel_tol * sigma_max`.
    pub fn numerical_rank(&self, rel_tol: f64) -> Result<usize> {
        let f = svd(&self.states, rel_tol)?;
        Ok(rank_from_singular_values(&f.sigma, rel_tol))
    }

    /// Rotates the second state by `e^{-iθ}`, `θ = arg<φ1|φ2>`, so that the
    /// inner product becomes `|<φ1|φ2>|`. Orthogonal pairs are returned
    /// unchanged.
    pub fn phase_align_binary(&self) -> Result<Self> {
        Ok(self.phase_align_binary_with_phase()?.0)
    }

    /// As [`StateSet::phase_align_binary`], also returning the removed phase
    /// factor `e^{iθ}`.
    pub fn phase_align_binary_with_phase(&self) -> Result<(Self, C64)> {
        if self.len() != 2 {
            return Err(Error::StateCount {
                expected: 2,
                found: self.len(),
            });
        }
        let a = self.states.column(0).dotc(&self.states.column(1));
        if a.norm() == 0.0 {
            return Ok((self.clone(), C64::new(1.0, 0.0)));
        }
        let phase = a / a.norm();
        let mut states = self.states.clone();
        let rotated = states.column(1) * phase.conj();
        states.set_column(1, &rotated);
        Ok((
            Self {
                states,
                priors: self.priors.clone(),
                normalized: self.normalized,
            },
            phase,
        ))
    }

    /// Scales column `g` by `w[g]`. The result is flagged unnormalized.
    pub fn apply_weights(&self, w: &[f64]) -> Result<Self> {
        check_weights(w, self.len())?;
        let mut states = self.states.clone();
        for (g, &wg) in w.iter().enumerate() {
            states.column_mut(g).scale_mut(wg);
        }
        Ok(Self {
            states,
            priors: self.priors.clone(),
            normalized: false,
        })
    }
}

pub(crate) fn check_weights(w: &[f64], m: usize) -> Result<()> {
    if w.len() != m {
        return Err(Error::WeightCount {
            expected: m,
            found: w.len(),
        });
    }
    for (index, &value) in w.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveWeight { index, value });
        }
    }
    Ok(())
}

fn validate_priors(p: &[f64], m: usize) -> Result<()> {
    if p.len() != m {
        return Err(Error::PriorCount {
            expected: m,
            found: p.len(),
        });
    }
    for (index, &value) in p.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite("priors"));
        }
        if value < 0.0 {
            return Err(Error::NegativePrior { index, value });
        }
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PRIOR_SUM_TOL {
        return Err(Error::PriorSum { sum });
    }
    Ok(())
}

pub(crate) fn columns_to_matrix(columns: &[Vec<C64>]) -> Result<CMatrix> {
    let m = columns.len();
    if m == 0 {
        return Err(Error::Empty("state set"));
    }
    let n = columns[0].len();
    for (column, c) in columns.iter().enumerate() {
        if c.len() != n {
            return Err(Error::ColumnLength {
                column,
                expected: n,
                found: c.len(),
            });
        }
    }
    Ok(CMatrix::from_fn(n, m, |i, j| columns[j][i]))
}

/// Gram matrix of inner products, `S_ij = <φ_i|φ_j>`.
#[derive(Clone, Debug)]
pub struct GramMatrix(pub CMatrix);

impl GramMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.0)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.0)
    }
}
