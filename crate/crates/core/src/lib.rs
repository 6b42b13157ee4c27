//! Square-root and least-squares measurements for quantum state discrimination.
//!
//! A set of `m` pure states in `C^n` is held as the columns of an `n x m`
//! matrix `Φ`. The least-squares measurement is `M = U Z_r V*` from the SVD
//! `Φ = U Σ V*`, which coincides with the square-root measurement
//! `Φ (Φ*Φ)^{-1/2}`. Geometrically uniform sets admit a closed form through a
//! Fourier transform over a finite abelian group.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod factor;
pub mod format;
pub mod gu;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod optimality;
pub mod stateset;

pub use error::{Error, Result};
pub use factor::{pinv_sqrt, projector, svd, SvdFactors};
pub use gu::{check_gu, gu_srm, GroupFunction, GroupSpec};
pub use linalg::{CMatrix, C64};
pub use measurement::{
    lsm, orthogonal_lsm, residual_error, srm, wlsm, Measurement, MeasurementKind, Metadata,
};
pub use optimality::{error_probability, holevo_conditions, OptimalityReport, Verdict};
pub use stateset::{GramMatrix, StateSet, StateSetOptions};
