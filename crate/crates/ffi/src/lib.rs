//! C ABI for `bspole`.
//!
//! Reports are opaque handles created by [`bspole_analyze`] and released with
//! [`bspole_report_free`]. Every fallible call returns a [`BspoleStatus`]; on failure
//! a message is kept per thread and can be read with [`bspole_last_error_message`].
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;

use bspole::criterion::PoleStatus;
use bspole::quadrature::Tolerances;
use bspole::report::{analyze, Report};
use bspole::{parse_poly, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BspoleStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The polynomial or options were rejected.
    Validation = 3,
    /// Numerical or internal failure.
    Numeric = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BspoleVerdict {
    Pole = 0,
    NotPoleSymmetry = 1,
    NotPoleNumeric = 2,
    Indeterminate = 3,
}

impl From<PoleStatus> for BspoleVerdict {
    fn from(s: PoleStatus) -> Self {
        match s {
            PoleStatus::Pole => BspoleVerdict::Pole,
            PoleStatus::NotPoleSymmetry => BspoleVerdict::NotPoleSymmetry,
            PoleStatus::NotPoleNumeric => BspoleVerdict::NotPoleNumeric,
            PoleStatus::Indeterminate => BspoleVerdict::Indeterminate,
        }
    }
}

/// Numerical options; start from [`bspole_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BspoleOptions {
    pub tol_rel: f64,
    pub zero_abs: f64,
    pub zero_rel: f64,
    /// Explicit type `(a, b; m)`; all zero to infer it.
    pub weight_a: u64,
    pub weight_b: u64,
    pub weight_m: u64,
}

/// One window root `s0 = s0_num / s0_den`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BspoleRoot {
    pub d: u64,
    pub s0_num: i64,
    pub s0_den: i64,
    pub verdict: BspoleVerdict,
    pub representation_count: u32,
}

/// Opaque analysis report.
pub struct BspoleReport {
    inner: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> Result<(), (BspoleStatus, String)>) -> BspoleStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BspoleStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {msg}"));
            BspoleStatus::Panic
        }
    }
}

fn classify(e: Error) -> (BspoleStatus, String) {
    let status = if e.is_validation() {
        BspoleStatus::Validation
    } else {
        BspoleStatus::Numeric
    };
    (status, e.to_string())
}

fn null(name: &str) -> (BspoleStatus, String) {
    (BspoleStatus::NullPointer, format!("`{name}` is null"))
}

#[no_mangle]
pub extern "C" fn bspole_options_default() -> BspoleOptions {
    let tol = Tolerances::default();
    BspoleOptions {
        tol_rel: tol.rel_err,
        zero_abs: tol.zero_abs,
        zero_rel: tol.zero_rel,
        weight_a: 0,
        weight_b: 0,
        weight_m: 0,
    }
}

/// Parses `poly`, validates it and classifies every window root.
///
/// # Safety
/// `poly` must be a NUL-terminated string; `options` may be null for defaults;
/// `out` must be writable. On success `*out` owns a report for [`bspole_report_free`].
#[no_mangle]
pub unsafe extern "C" fn bspole_analyze(poly: *const c_char, options: *const BspoleOptions, out: *mut *mut BspoleReport) -> BspoleStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if poly.is_null() {
            return Err(null("poly"));
        }
        let text = CStr::from_ptr(poly)
            .to_str()
            .map_err(|e| (BspoleStatus::InvalidUtf8, e.to_string()))?;
        let opts = if options.is_null() {
            bspole_options_default()
        } else {
            *options
        };
        let tol = Tolerances {
            rel_err: opts.tol_rel,
            zero_abs: opts.zero_abs,
            zero_rel: opts.zero_rel,
            ..Tolerances::default()
        };
        let weights = match (opts.weight_a, opts.weight_b, opts.weight_m) {
            (0, 0, 0) => None,
            (a, b, m) => Some(bspole::Weights::new(a, b, m).map_err(|e| classify(e.into()))?),
        };
        let f = parse_poly(text).map_err(|e| classify(e.into()))?;
        let inner = analyze(&f, weights, &tol).map_err(classify)?;
        *out = Box::into_raw(Box::new(BspoleReport { inner }));
        Ok(())
    })
}

/// # Safety
/// `report` must come from [`bspole_analyze`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bspole_report_free(report: *mut BspoleReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of roots in `(-1, 0)`; 0 for a null report.
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn bspole_report_root_count(report: *const BspoleReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.window_roots.len())
}

/// # Safety
/// `report` must be a live report and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bspole_report_root(report: *const BspoleReport, index: usize, out: *mut BspoleRoot) -> BspoleStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let roots = &report.inner.window_roots;
        let v = roots.get(index).ok_or_else(|| {
            (
                BspoleStatus::OutOfRange,
                format!("root index {index} out of range ({} roots)", roots.len()),
            )
        })?;
        let overflow = || (BspoleStatus::OutOfRange, format!("s0 = {} does not fit 64 bits", v.root.s0));
        *out = BspoleRoot {
            d: v.root.d,
            s0_num: v.root.s0.numer().to_i64().ok_or_else(overflow)?,
            s0_den: v.root.s0.denom().to_i64().ok_or_else(overflow)?,
            verdict: v.status.into(),
            representation_count: v.root.representations.len() as u32,
        };
        Ok(())
    })
}

/// The resolved type `(a, b; m)`.
///
/// # Safety
/// `report` must be a live report; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bspole_report_weights(report: *const BspoleReport, a: *mut u64, b: *mut u64, m: *mut u64) -> BspoleStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        if a.is_null() || b.is_null() || m.is_null() {
            return Err(null("a/b/m"));
        }
        let w = report.inner.input.weights;
        *a = w.a;
        *b = w.b;
        *m = w.m;
        Ok(())
    })
}

/// 1 when some verdict is indeterminate, 0 otherwise (or for a null report).
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn bspole_report_has_indeterminate(report: *const BspoleReport) -> i32 {
    report.as_ref().map_or(0, |r| r.inner.has_indeterminate() as i32)
}

/// The full report as JSON. Free with [`bspole_string_free`]; null on failure.
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn bspole_report_json(report: *const BspoleReport) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        let json = CString::new(report.inner.to_json()).map_err(|e| (BspoleStatus::Numeric, e.to_string()))?;
        result = json.into_raw();
        Ok(())
    });
    result
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bspole_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next call on the thread.
#[no_mangle]
pub extern "C" fn bspole_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn bspole_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
