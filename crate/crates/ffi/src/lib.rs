//! C ABI over the `hqm` library.
//!
//! Every fallible function returns an [`HqmStatus`] and writes its result through an out
//! pointer. On failure a message is kept per thread and can be read with
//! [`hqm_last_error`]. Objects are opaque handles released by their `_free` function;
//! strings returned through out pointers are released with [`hqm_string_free`].
//! Rationals cross the boundary as text, `"n"` or `"n/d"`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hqm::characters::{f_mn, CharQuery};
use hqm::covercount::{counting_series, CountSeries};
use hqm::error::HqmError;
use hqm::exactq::{fmt_rational, parse_rational, Rational};
use hqm::fitting::{fit_connected, FitReport, WeightPolicy};
use hqm::partitions::Partition;
use hqm::phipoly::{build_phi_symbolic, YPoly};
use hqm::selftest::{run_all, suite_ok, Options};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HqmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    FitFailure = 4,
    Underdetermined = 5,
    DegreeBoundTooSmall = 6,
    OracleTooLarge = 7,
    InsufficientTruncation = 8,
    Parse = 9,
    Panic = 10,
}

/// `φ_m` as a polynomial in `Y_1..Y_m`.
pub struct HqmPhi(YPoly);

/// A counting series in q.
pub struct HqmSeries(CountSeries);

/// A fit of a connected counting function in `Q[E2, E4, E6]`.
pub struct HqmFit(FitReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(HqmStatus, String);

impl From<HqmError> for Failure {
    fn from(e: HqmError) -> Self {
        let status = match e {
            HqmError::InvalidArgument(_) => HqmStatus::InvalidArgument,
            HqmError::Precondition(_) => HqmStatus::Precondition,
            HqmError::FitFailure { .. } => HqmStatus::FitFailure,
            HqmError::Underdetermined { .. } => HqmStatus::Underdetermined,
            HqmError::DegreeBoundTooSmall { .. } => HqmStatus::DegreeBoundTooSmall,
            HqmError::OracleTooLarge { .. } => HqmStatus::OracleTooLarge,
            HqmError::InsufficientTruncation { .. } => HqmStatus::InsufficientTruncation,
            HqmError::Parse(_) => HqmStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> HqmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HqmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            HqmStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(HqmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(null("out pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).map_err(|_| Failure(HqmStatus::Parse, "string has nul".into()))?;
    if out.is_null() {
        return Err(null("out pointer"));
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> FfiResult<&'a [T]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn json<T: serde::Serialize>(v: &T) -> FfiResult<String> {
    serde_json::to_string(v).map_err(|e| Failure(HqmStatus::Parse, e.to_string()))
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn hqm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hqm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hqm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build `φ_m`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_phi_new(m: u32, out: *mut *mut HqmPhi) -> HqmStatus {
    guard(|| {
        let phi = build_phi_symbolic(m as usize)?;
        write_out(out, Box::into_raw(Box::new(HqmPhi(phi))))
    })
}

/// # Safety
/// `phi` must be null or a handle from [`hqm_phi_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hqm_phi_free(phi: *mut HqmPhi) {
    if !phi.is_null() {
        drop(Box::from_raw(phi));
    }
}

/// Number of variables `m` and of nonzero monomials.
///
/// # Safety
/// `phi` must be a live handle; the out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_phi_shape(
    phi: *const HqmPhi,
    out_nvars: *mut usize,
    out_terms: *mut usize,
) -> HqmStatus {
    guard(|| {
        let p = &handle(phi, "phi")?.0;
        write_out(out_nvars, p.nvars())?;
        write_out(out_terms, p.len())
    })
}

/// Coefficient of `Y_1^{e_1}..Y_m^{e_m}`; `exps` holds `nvars` exponents.
///
/// # Safety
/// `phi` must be a live handle, `exps` must point to `len` values, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_phi_coeff(
    phi: *const HqmPhi,
    exps: *const u32,
    len: usize,
    out: *mut *mut c_char,
) -> HqmStatus {
    guard(|| {
        let p = &handle(phi, "phi")?.0;
        let e = slice(exps, len, "exps")?;
        if e.len() != p.nvars() {
            return Err(Failure(
                HqmStatus::InvalidArgument,
                format!("expected {} exponents, got {}", p.nvars(), e.len()),
            ));
        }
        write_string(out, fmt_rational(&p.coeff(e)))
    })
}

/// Value of `φ_m` at `Y_1..Y_m` given as rational strings.
///
/// # Safety
/// `phi` must be a live handle, `ys` must point to `len` NUL-terminated strings, `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_phi_eval(
    phi: *const HqmPhi,
    ys: *const *const c_char,
    len: usize,
    out: *mut *mut c_char,
) -> HqmStatus {
    guard(|| {
        let p = &handle(phi, "phi")?.0;
        let ys: Vec<Rational> = slice(ys, len, "ys")?
            .iter()
            .map(|&s| {
                if s.is_null() {
                    return Err(null("ys entry"));
                }
                let text = CStr::from_ptr(s)
                    .to_str()
                    .map_err(|e| Failure(HqmStatus::Parse, e.to_string()))?;
                Ok(parse_rational(text)?)
            })
            .collect::<FfiResult<_>>()?;
        if ys.len() != p.nvars() {
            return Err(Failure(
                HqmStatus::InvalidArgument,
                format!("expected {} values, got {}", p.nvars(), ys.len()),
            ));
        }
        write_string(out, fmt_rational(&p.eval(&ys)))
    })
}

/// JSON document `{m, monomials}`.
///
/// # Safety
/// `phi` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_phi_to_json(phi: *const HqmPhi, out: *mut *mut c_char) -> HqmStatus {
    guard(|| {
        let p = &handle(phi, "phi")?.0;
        write_string(out, json(&p.to_json(p.nvars()))?)
    })
}

/// Shifted symmetric character ratio for `m`-cycles, `|C_m|·χ^λ(m-cycle)/dim λ`.
///
/// # Safety
/// `parts` must point to `len` weakly decreasing values; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_character(
    parts: *const u32,
    len: usize,
    m: u32,
    out: *mut *mut c_char,
) -> HqmStatus {
    guard(|| {
        let parts = slice(parts, len, "parts")?;
        let lambda = Partition::new(parts.iter().map(|&p| p as usize).collect())?;
        let q = CharQuery::new(lambda, m as usize)?;
        write_string(out, fmt_rational(&f_mn(&q)))
    })
}

/// Generating series of covers of genus `g` through `q^dmax`: connected (`F_g`) or the
/// disconnected block.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_series_counts(
    m: u32,
    g: i64,
    dmax: u32,
    connected: bool,
    out: *mut *mut HqmSeries,
) -> HqmStatus {
    guard(|| {
        let c = counting_series(m as usize, g, dmax as usize, connected)?;
        write_out(out, Box::into_raw(Box::new(HqmSeries(c))))
    })
}

/// # Safety
/// `s` must be null or a handle from [`hqm_series_counts`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hqm_series_free(s: *mut HqmSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Coefficient of `q^d`. Fails with `HQM_STATUS_PRECONDITION` beyond the known range.
///
/// # Safety
/// `s` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_series_coeff(
    s: *const HqmSeries,
    d: i64,
    out: *mut *mut c_char,
) -> HqmStatus {
    guard(|| {
        let series = &handle(s, "series")?.0.series;
        if d > series.q_known() {
            return Err(Failure(
                HqmStatus::Precondition,
                format!("q^{d} is beyond the known range q^{}", series.q_known()),
            ));
        }
        write_string(out, fmt_rational(&series.q_coeff(d)))
    })
}

/// JSON document `{m, g, b, kind, series}`.
///
/// # Safety
/// `s` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_series_to_json(
    s: *const HqmSeries,
    out: *mut *mut c_char,
) -> HqmStatus {
    guard(|| {
        let c = &handle(s, "series")?.0;
        write_string(out, json(&c.to_json())?)
    })
}

/// Fit `F_g^(m)` in `Q[E2, E4, E6]` from the coefficients through `q^dmax`.
/// `wmax = 0` selects the default weight search.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_fit_connected(
    m: u32,
    g: i64,
    dmax: u32,
    wmax: u32,
    margin: usize,
    out: *mut *mut HqmFit,
) -> HqmStatus {
    guard(|| {
        let policy = (wmax > 0).then(|| WeightPolicy::fixed(wmax));
        let r = fit_connected(m as usize, g, dmax as usize, policy, margin)?;
        write_out(out, Box::into_raw(Box::new(HqmFit(r))))
    })
}

/// # Safety
/// `fit` must be null or a handle from [`hqm_fit_connected`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hqm_fit_free(fit: *mut HqmFit) {
    if !fit.is_null() {
        drop(Box::from_raw(fit));
    }
}

/// Weight of the fitted polynomial when it is homogeneous.
///
/// # Safety
/// `fit` must be a live handle; the out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_fit_weight(
    fit: *const HqmFit,
    out_homogeneous: *mut bool,
    out_weight: *mut u32,
) -> HqmStatus {
    guard(|| {
        let w = handle(fit, "fit")?.0.homogeneous_weight();
        write_out(out_homogeneous, w.is_some())?;
        write_out(out_weight, w.unwrap_or(0))
    })
}

/// JSON fit report.
///
/// # Safety
/// `fit` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_fit_to_json(fit: *const HqmFit, out: *mut *mut c_char) -> HqmStatus {
    guard(|| {
        let r = &handle(fit, "fit")?.0;
        write_string(out, json(&r.to_json())?)
    })
}

/// Run the acceptance suite. `out_ok` is true when nothing failed beyond the recorded
/// deviation; `out_json` receives the per-check results.
///
/// # Safety
/// Both out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hqm_selftest(
    fit_dmax: u32,
    out_ok: *mut bool,
    out_json: *mut *mut c_char,
) -> HqmStatus {
    guard(|| {
        let opts = Options {
            fit_dmax: fit_dmax as usize,
            ..Options::default()
        };
        let results = run_all(&opts, |_| {});
        write_out(out_ok, suite_ok(&results))?;
        write_string(out_json, json(&results)?)
    })
}
