use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure classes. The CLI maps each class onto an exit code with
/// [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("column {column} has {found} amplitudes, expected {expected}")]
    ColumnLength {
        column: usize,
        expected: usize,
        found: usize,
    },

    #[error("prior {index} is negative ({value})")]
    NegativePrior { index: usize, value: f64 },

    #[error("priors sum to {sum}, expected 1")]
    PriorSum { sum: f64 },

    #[error("expected {expected} priors, found {found}")]
    PriorCount { expected: usize, found: usize },

    #[error("column {column} has norm {norm}, outside tolerance {tol} of 1")]
    NormViolation { column: usize, norm: f64, tol: f64 },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix has eigenvalue {eigenvalue:e} below the PSD tolerance")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("weight {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("expected {expected} weights, found {found}")]
    WeightCount { expected: usize, found: usize },

    #[error("invalid tolerance {0}")]
    Tolerance(f64),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("{0}")]
    Precondition(String),

    #[error("states are linearly dependent (rank {rank} < {count})")]
    RankDeficient { rank: usize, count: usize },

    #[error("operation requires normalized states")]
    Unnormalized,

    #[error("{count} orthonormal vectors do not fit in dimension {dim}")]
    TooManyStates { count: usize, dim: usize },

    #[error("operation requires {expected} states, found {found}")]
    StateCount { expected: usize, found: usize },

    #[error("priors are not uniform")]
    NonUniformPriors,

    #[error("states are identical up to phase; the binary closed form is singular")]
    IdenticalStates,

    #[error("matrix is singular or too ill-conditioned (condition number {condition:e})")]
    Singular { condition: f64 },

    #[error("measurement is not complete on the state span (residual {residual:e})")]
    IncompletePovm { residual: f64 },

    #[error("problem size {rows}x{cols} exceeds the brute-force limit")]
    SizeLimit { rows: usize, cols: usize },

    #[error("group spec has no generator matrices")]
    MissingGenerators,

    #[error("grid value {0} outside (0, 1)")]
    GridOutOfRange(f64),

    #[error(
        "Gram entry ({row}, {col}) deviates from the group-circulant pattern by {deviation:e}"
    )]
    NotGeometricallyUniform {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("generator {index} does not map the seed state onto column {index} (deviation {deviation:e})")]
    GeneratorMismatch { index: usize, deviation: f64 },

    #[error("Fourier transform of the Gram fingerprint is not a nonnegative real at index {index} ({value})")]
    NonPsdSpectrum { index: usize, value: String },

    #[error("factorization failed to converge")]
    NoConvergence,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}

impl Error {
    /// 2 for input validation, 3 for a failed precondition, 4 for a broken
    /// geometrically-uniform structure.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            NotGeometricallyUniform { .. } | GeneratorMismatch { .. } | NonPsdSpectrum { .. } => 4,
            Precondition(_)
            | RankDeficient { .. }
            | Unnormalized
            | TooManyStates { .. }
            | StateCount { .. }
            | NonUniformPriors
            | IdenticalStates
            | Singular { .. }
            | IncompletePovm { .. }
            | SizeLimit { .. }
            | MissingGenerators
            | GridOutOfRange(_)
            | NoConvergence => 3,
            _ => 2,
        }
    }
}
