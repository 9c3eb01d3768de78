//! C ABI over `heilbronn`.
//!
//! Every fallible function returns an [`HbStatus`]; on failure the message
//! is available from [`hb_last_error`] on the same thread. Polynomials are
//! opaque [`HbPolynomial`] handles released with [`hb_polynomial_free`];
//! strings returned through `char **` are released with [`hb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heilbronn::config::RunConfig;
use heilbronn::criterion::{is_nth_power_residue, HeilbronnVerdict, InconclusiveReason};
use heilbronn::report::{self, Envelope};
use heilbronn::survey::{self, BoxKind, SurveyParams};
use heilbronn::{criterion_verdict, frobenius_decompose, Error, MonicIntPolynomial};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HbStatus {
    Ok = 0,
    InvalidArgument = 1,
    Precondition = 2,
    LimitExceeded = 3,
    NullPointer = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HbReason {
    /// The criterion applies; see the witness.
    None = 0,
    NoPrimePair = 1,
    AllPairsHaveRoots = 2,
    NoResidueAdmissibleU = 3,
    PTooSmall = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HbWitness {
    pub p: u64,
    pub n: u64,
    pub q1: u64,
    pub q2: u64,
    pub u: u64,
    pub v: u64,
    pub a: u64,
    pub b: u64,
    pub g: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HbVerdict {
    pub applies: bool,
    pub reason: HbReason,
    /// Zeroed unless `applies`.
    pub witness: HbWitness,
}

/// Opaque monic integer polynomial.
pub struct HbPolynomial(MonicIntPolynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HbStatus {
    match e {
        Error::InvalidArgument(_) => HbStatus::InvalidArgument,
        Error::Precondition(_) => HbStatus::Precondition,
        Error::LimitExceeded(_) => HbStatus::LimitExceeded,
        Error::Internal(_) => HbStatus::Internal,
    }
}

enum Fail {
    Core(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> HbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HbStatus::Ok
        }
        Ok(Err(Fail::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_last_error(format!("{what} is null"));
            HbStatus::NullPointer
        }
        Err(_) => {
            set_last_error("internal panic".into());
            HbStatus::Internal
        }
    }
}

fn out_ref<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    // SAFETY: callers pass either null or a pointer valid for writes.
    unsafe { p.as_mut() }.ok_or(Fail::Null(what))
}

fn poly_ref<'a>(p: *const HbPolynomial) -> Result<&'a MonicIntPolynomial, Fail> {
    // SAFETY: non-null handles come from hb_polynomial_parse/_from_coeffs.
    unsafe { p.as_ref() }.map(|h| &h.0).ok_or(Fail::Null("polynomial"))
}

fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Fail> {
    let slot = out_ref(out, "out")?;
    let c = CString::new(text).map_err(|e| Error::Internal(e.to_string()))?;
    *slot = c.into_raw();
    Ok(())
}

fn to_json<T: serde::Serialize>(command: &str, report: T) -> Result<String, Fail> {
    let config = RunConfig::default();
    serde_json::to_string(&Envelope::new(command, &config, report)).map_err(|e| Fail::Core(Error::Internal(e.to_string())))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hb_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Parses comma-separated coefficients `a0,a1,...,a_{n-1}` of a monic polynomial.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hb_polynomial_parse(text: *const c_char, out: *mut *mut HbPolynomial) -> HbStatus {
    guard(|| {
        if text.is_null() {
            return Err(Fail::Null("text"));
        }
        let slot = out_ref(out, "out")?;
        let s = CStr::from_ptr(text).to_str().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let f: MonicIntPolynomial = s.parse()?;
        *slot = Box::into_raw(Box::new(HbPolynomial(f)));
        Ok(())
    })
}

/// Builds a polynomial from `len` coefficients `a0..a_{len-1}`.
///
/// # Safety
/// `coeffs` must point to `len` readable values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hb_polynomial_from_coeffs(coeffs: *const i64, len: usize, out: *mut *mut HbPolynomial) -> HbStatus {
    guard(|| {
        if coeffs.is_null() {
            return Err(Fail::Null("coeffs"));
        }
        let slot = out_ref(out, "out")?;
        let f = MonicIntPolynomial::from_i64s(std::slice::from_raw_parts(coeffs, len))?;
        *slot = Box::into_raw(Box::new(HbPolynomial(f)));
        Ok(())
    })
}

/// # Safety
/// `poly` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hb_polynomial_free(poly: *mut HbPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Degree of `poly`, or 0 for a null handle.
///
/// # Safety
/// `poly` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hb_polynomial_degree(poly: *const HbPolynomial) -> usize {
    poly.as_ref().map_or(0, |h| h.0.degree())
}

/// # Safety
/// `poly` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hb_polynomial_is_eisenstein(poly: *const HbPolynomial, p: u64, out: *mut bool) -> HbStatus {
    guard(|| {
        let f = poly_ref(poly)?;
        *out_ref(out, "out")? = f.is_eisenstein_at(p);
        Ok(())
    })
}

/// # Safety
/// `poly` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hb_polynomial_has_root_mod(poly: *const HbPolynomial, q: u64, out: *mut bool) -> HbStatus {
    guard(|| {
        let f = poly_ref(poly)?;
        *out_ref(out, "out")? = f.has_root_mod(q)?;
        Ok(())
    })
}

/// Criterion verdict for `poly` at `p`, auxiliary primes up to `pair_bound`.
///
/// # Safety
/// `poly` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hb_check(poly: *const HbPolynomial, p: u64, pair_bound: u64, out: *mut HbVerdict) -> HbStatus {
    guard(|| {
        let f = poly_ref(poly)?;
        let slot = out_ref(out, "out")?;
        *slot = match criterion_verdict(f, p, pair_bound)? {
            HeilbronnVerdict::Applies { witness: w } => HbVerdict {
                applies: true,
                reason: HbReason::None,
                witness: HbWitness { p: w.p, n: w.n, q1: w.q1, q2: w.q2, u: w.u, v: w.v, a: w.a, b: w.b, g: w.g },
            },
            HeilbronnVerdict::Inconclusive { reason } => HbVerdict {
                applies: false,
                reason: match reason {
                    InconclusiveReason::NoPrimePair => HbReason::NoPrimePair,
                    InconclusiveReason::AllPairsHaveRoots => HbReason::AllPairsHaveRoots,
                    InconclusiveReason::NoResidueAdmissibleU => HbReason::NoResidueAdmissibleU,
                    InconclusiveReason::PTooSmall => HbReason::PTooSmall,
                },
                witness: HbWitness::default(),
            },
        };
        Ok(())
    })
}

/// Minimal `p = u*q1 + v*q2` with `q1 ∤ u`, `q2 ∤ v`; `*found` is false
/// when none exists.
///
/// # Safety
/// `found`, `u` and `v` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hb_decompose(p: u64, q1: u64, q2: u64, found: *mut bool, u: *mut u64, v: *mut u64) -> HbStatus {
    guard(|| {
        let (found, u, v) = (out_ref(found, "found")?, out_ref(u, "u")?, out_ref(v, "v")?);
        match frobenius_decompose(p, q1, q2)? {
            Some(d) => (*found, *u, *v) = (true, d.u, d.v),
            None => (*found, *u, *v) = (false, 0, 0),
        }
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hb_is_nth_power_residue(a: u64, p: u64, n: u64, out: *mut bool) -> HbStatus {
    guard(|| {
        *out_ref(out, "out")? = is_nth_power_residue(a, p, n)?;
        Ok(())
    })
}

/// JSON density report; free with [`hb_string_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hb_density_json(p: u64, n: u32, out: *mut *mut c_char) -> HbStatus {
    guard(|| write_string(out, to_json("density", report::density_report(p, n)?)?))
}

/// JSON lower-bound report; free with [`hb_string_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hb_bounds_json(p: u64, n: u32, out: *mut *mut c_char) -> HbStatus {
    guard(|| write_string(out, to_json("bounds", survey::lower_bound_report(p, n)?)?))
}

/// JSON survey over `(-x, x]^n`. `samples == 0` enumerates exhaustively
/// (up to `enumeration_cap` candidates); otherwise samples with `seed`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hb_survey_json(
    p: u64,
    n: u32,
    x: u64,
    pair_bound: u64,
    samples: u64,
    seed: u64,
    enumeration_cap: u64,
    out: *mut *mut c_char,
) -> HbStatus {
    guard(|| {
        let params = SurveyParams { p, n, x, pair_bound, box_kind: BoxKind::HalfOpen };
        let r = if samples == 0 {
            survey::exhaustive_survey(&params, enumeration_cap as u128)?
        } else {
            survey::montecarlo_survey(&params, seed, samples)?
        };
        write_string(out, to_json("survey", r)?)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
