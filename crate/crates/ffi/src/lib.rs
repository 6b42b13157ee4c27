//! C ABI over `sqrtmeas`.
//!
//! State sets and measurements cross the boundary as opaque handles that the
//! caller frees with the matching `*_free` function. Every entry point
//! returns an [`SmStatus`]; on failure, [`sm_last_error_message`] describes
//! the most recent error on the calling thread. Matrices are passed as
//! separate real and imaginary arrays in column-major order. Strings
//! returned by the library are freed with [`sm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sqrtmeas::factor::DEFAULT_RANK_TOL;
use sqrtmeas::io::{load_group_spec, load_state_set, measurement_to_json};
use sqrtmeas::linalg::{CMatrix, C64};
use sqrtmeas::measurement::{lsm_with_tol, orthogonal_lsm_with_tol, wlsm_with_tol};
use sqrtmeas::optimality::{error_probability, holevo_conditions};
use sqrtmeas::{Error, Measurement, MeasurementKind, StateSet};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Precondition = 3,
    NotGeometricallyUniform = 4,
    Utf8 = 5,
    Panic = 6,
}

/// Opaque state set.
pub struct SmStateSet {
    inner: StateSet,
}

/// Opaque measurement.
pub struct SmMeasurement {
    inner: Measurement,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> SmStatus {
    match err.exit_code() {
        3 => SmStatus::Precondition,
        4 => SmStatus::NotGeometricallyUniform,
        _ => SmStatus::InvalidInput,
    }
}

struct Failure(SmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SmStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SmStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {msg}"));
            SmStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SmStatus::Utf8, format!("{what} is not valid UTF-8")))
}

unsafe fn state_ref<'a>(p: *const SmStateSet) -> Result<&'a StateSet, Failure> {
    p.as_ref()
        .map(|s| &s.inner)
        .ok_or_else(|| null("state set"))
}

unsafe fn meas_ref<'a>(p: *const SmMeasurement) -> Result<&'a Measurement, Failure> {
    p.as_ref()
        .map(|m| &m.inner)
        .ok_or_else(|| null("measurement"))
}

unsafe fn emit_measurement(out: *mut *mut SmMeasurement, m: Measurement) -> Result<(), Failure> {
    *out = Box::into_raw(Box::new(SmMeasurement { inner: m }));
    Ok(())
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(SmStatus::InvalidInput, "nul in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Parses a state-set JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_state_set_from_json(
    json: *const c_char,
    out: *mut *mut SmStateSet,
) -> SmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = load_state_set(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(SmStateSet { inner: s }));
        Ok(())
    })
}

/// Builds a normalized state set from `dim x count` column-major arrays.
/// `priors` may be null for uniform priors.
///
/// # Safety
/// `re` and `im` must hold `dim * count` values; `priors`, when not null,
/// `count` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_state_set_from_columns(
    dim: usize,
    count: usize,
    re: *const f64,
    im: *const f64,
    priors: *const f64,
    out: *mut *mut SmStateSet,
) -> SmStatus {
    guard(|| {
        if out.is_null() || re.is_null() || im.is_null() {
            return Err(null("out, re or im"));
        }
        let len = dim
            .checked_mul(count)
            .ok_or_else(|| Failure(SmStatus::InvalidInput, "size overflow".into()))?;
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let states = CMatrix::from_fn(dim, count, |i, j| {
            C64::new(re[j * dim + i], im[j * dim + i])
        });
        let priors =
            (!priors.is_null()).then(|| std::slice::from_raw_parts(priors, count).to_vec());
        let s = StateSet::new(states, priors)?;
        *out = Box::into_raw(Box::new(SmStateSet { inner: s }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sm_state_set_free(s: *mut SmStateSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a valid handle; `dim` and `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_state_set_shape(
    s: *const SmStateSet,
    dim: *mut usize,
    count: *mut usize,
) -> SmStatus {
    guard(|| {
        let s = state_ref(s)?;
        if dim.is_null() || count.is_null() {
            return Err(null("dim or count"));
        }
        *dim = s.dim();
        *count = s.len();
        Ok(())
    })
}

/// Least-squares measurement, rank tolerance `rank_tol` (0 for the default).
///
/// # Safety
/// `s` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_lsm(
    s: *const SmStateSet,
    rank_tol: f64,
    out: *mut *mut SmMeasurement,
) -> SmStatus {
    guard(|| {
        let s = state_ref(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        emit_measurement(out, lsm_with_tol(s, tol_or_default(rank_tol))?)
    })
}

/// Square-root measurement; the same matrix as [`sm_lsm`].
///
/// # Safety
/// As for [`sm_lsm`].
#[no_mangle]
pub unsafe extern "C" fn sm_srm(
    s: *const SmStateSet,
    rank_tol: f64,
    out: *mut *mut SmMeasurement,
) -> SmStatus {
    guard(|| {
        let s = state_ref(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut m = lsm_with_tol(s, tol_or_default(rank_tol))?;
        m.kind = MeasurementKind::Srm;
        emit_measurement(out, m)
    })
}

/// Orthogonal least-squares measurement (requires `count <= dim`).
///
/// # Safety
/// As for [`sm_lsm`].
#[no_mangle]
pub unsafe extern "C" fn sm_orthogonal_lsm(
    s: *const SmStateSet,
    rank_tol: f64,
    out: *mut *mut SmMeasurement,
) -> SmStatus {
    guard(|| {
        let s = state_ref(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        emit_measurement(out, orthogonal_lsm_with_tol(s, tol_or_default(rank_tol))?)
    })
}

/// Weighted least-squares measurement with `count` positive weights.
///
/// # Safety
/// `weights` must hold `len` values; otherwise as for [`sm_lsm`].
#[no_mangle]
pub unsafe extern "C" fn sm_wlsm(
    s: *const SmStateSet,
    weights: *const f64,
    len: usize,
    rank_tol: f64,
    out: *mut *mut SmMeasurement,
) -> SmStatus {
    guard(|| {
        let s = state_ref(s)?;
        if out.is_null() || weights.is_null() {
            return Err(null("out or weights"));
        }
        let w = std::slice::from_raw_parts(weights, len);
        emit_measurement(out, wlsm_with_tol(s, w, tol_or_default(rank_tol))?)
    })
}

/// Square-root measurement of a geometrically uniform set; `group_json` is a
/// group-spec document.
///
/// # Safety
/// `group_json` must be a nul-terminated string; otherwise as for [`sm_lsm`].
#[no_mangle]
pub unsafe extern "C" fn sm_gu_srm(
    s: *const SmStateSet,
    group_json: *const c_char,
    out: *mut *mut SmMeasurement,
) -> SmStatus {
    guard(|| {
        let s = state_ref(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = load_group_spec(read_str(group_json, "group_json")?)?;
        emit_measurement(out, sqrtmeas::gu::gu_srm(s, &g)?)
    })
}

fn tol_or_default(tol: f64) -> f64 {
    if tol == 0.0 {
        DEFAULT_RANK_TOL
    } else {
        tol
    }
}

/// # Safety
/// `m` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sm_measurement_free(m: *mut SmMeasurement) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a valid handle; `dim` and `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_measurement_shape(
    m: *const SmMeasurement,
    dim: *mut usize,
    count: *mut usize,
) -> SmStatus {
    guard(|| {
        let m = meas_ref(m)?;
        if dim.is_null() || count.is_null() {
            return Err(null("dim or count"));
        }
        *dim = m.dim();
        *count = m.len();
        Ok(())
    })
}

/// Copies the measurement matrix, column-major, into `re` and `im`, each of
/// length `len == dim * count`.
///
/// # Safety
/// `re` and `im` must be writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn sm_measurement_copy(
    m: *const SmMeasurement,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> SmStatus {
    guard(|| {
        let m = meas_ref(m)?;
        if re.is_null() || im.is_null() {
            return Err(null("re or im"));
        }
        let expected = m.dim() * m.len();
        if len != expected {
            return Err(Failure(
                SmStatus::InvalidInput,
                format!("buffer length {len}, expected {expected}"),
            ));
        }
        let re = std::slice::from_raw_parts_mut(re, len);
        let im = std::slice::from_raw_parts_mut(im, len);
        for (k, z) in m.matrix.iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// Measurement document as JSON; free with [`sm_string_free`].
///
/// # Safety
/// `m` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_measurement_to_json(
    m: *const SmMeasurement,
    out: *mut *mut c_char,
) -> SmStatus {
    guard(|| {
        let m = meas_ref(m)?;
        if out.is_null() {
            return Err(null("out"));
        }
        emit_string(out, measurement_to_json(m))
    })
}

/// Squared error `sum_i || phi_i - mu_i ||^2`.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_residual_error(
    s: *const SmStateSet,
    m: *const SmMeasurement,
    out: *mut f64,
) -> SmStatus {
    guard(|| {
        let (s, m) = (state_ref(s)?, meas_ref(m)?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = sqrtmeas::residual_error(s, m)?;
        Ok(())
    })
}

/// Probability of a detection error under the set's priors.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_error_probability(
    s: *const SmStateSet,
    m: *const SmMeasurement,
    out: *mut f64,
) -> SmStatus {
    guard(|| {
        let (s, m) = (state_ref(s)?, meas_ref(m)?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = error_probability(s, m)?;
        Ok(())
    })
}

/// Minimum-error optimality report as a JSON object; free with
/// [`sm_string_free`].
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_holevo_report_json(
    s: *const SmStateSet,
    m: *const SmMeasurement,
    tol: f64,
    out: *mut *mut c_char,
) -> SmStatus {
    guard(|| {
        let (s, m) = (state_ref(s)?, meas_ref(m)?);
        if out.is_null() {
            return Err(null("out"));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Tolerance(tol).into());
        }
        let report = holevo_conditions(s, m, tol)?;
        let json = serde_json::to_string(&report)
            .map_err(|e| Failure(SmStatus::InvalidInput, e.to_string()))?;
        emit_string(out, json)
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
