//! C ABI over the frey library.
//!
//! Every call returns a `FreyStatus`. Objects come back through out-pointers as opaque
//! handles and are released with the matching `_free`. Strings returned by the library
//! are NUL-terminated and freed with `frey_string_free`. After a failed call,
//! `frey_last_error` describes what went wrong on the calling thread.

use frey::cli::{self, CliError, ProofTrace, ProveOptions, Verdict};
use frey::freycurves::{build_frey, conductor_profile, FreyError, FreyKind, FreyModel};
use frey::localfield;
use frey::newformdb::parse_rational_db;
use frey::sieve::{second_case_report, SignMode};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

/// Outcome of a call. The numeric values are stable.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreyStatus {
    Ok = 0,
    /// Bad arguments: null pointers, unknown kinds, degenerate pairs, inadmissible primes.
    InputError = 2,
    /// Missing or malformed data files, or a curve at a prime of bad reduction.
    DataError = 3,
    /// A computed step failed to verify.
    VerificationFailure = 4,
    /// A Rust panic was caught at the boundary.
    InternalError = 5,
}

/// Curve families, in the order W, E5, F5, E13, F13.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreyCurveKind {
    W = 0,
    E5 = 1,
    F5 = 2,
    E13 = 3,
    F13 = 4,
}

fn kind_from(k: i32) -> Result<FreyKind, Failure> {
    usize::try_from(k).ok().and_then(|i| FreyKind::ALL.get(i).copied()).ok_or_else(|| input(format!("unknown curve kind {k}")))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreyVerdict {
    Resolved = 0,
    ResolvedExceptListedP = 1,
    DataMissing = 2,
    Unresolved = 3,
}

impl From<Verdict> for FreyVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Resolved => FreyVerdict::Resolved,
            Verdict::ResolvedExceptListedP => FreyVerdict::ResolvedExceptListedP,
            Verdict::DataMissing => FreyVerdict::DataMissing,
            Verdict::Unresolved => FreyVerdict::Unresolved,
        }
    }
}

/// A Frey curve at a coprime pair.
pub struct FreyCurve {
    inner: FreyModel,
}

/// A proof trace with its text and JSON renderings.
pub struct FreyTrace {
    inner: ProofTrace,
    text: CString,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap());
}

struct Failure(FreyStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let st = match e.exit_code() {
            2 => FreyStatus::InputError,
            3 => FreyStatus::DataError,
            _ => FreyStatus::VerificationFailure,
        };
        Failure(st, e.to_string())
    }
}

impl From<FreyError> for Failure {
    fn from(e: FreyError) -> Self {
        CliError::from(e).into()
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure(FreyStatus::InputError, msg.into())
}

/// Runs `f` behind the panic boundary and records any failure.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FreyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FreyStatus::Ok
        }
        Ok(Err(Failure(st, msg))) => {
            set_error(msg);
            st
        }
        Err(p) => {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            set_error(format!("internal error: {}", msg.unwrap_or_default()));
            FreyStatus::InternalError
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| input("null output pointer"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| input("null handle"))
}

unsafe fn opt_str<'a>(p: *const c_char) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p).to_str().map(Some).map_err(|_| input("string is not UTF-8"))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap().into_raw()
}

/// Message for the last failed call on this thread; empty after a success. Owned by the library.
#[no_mangle]
pub extern "C" fn frey_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn frey_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the curve of `kind` (a `FreyCurveKind` value) at (a, b).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn frey_curve_new(kind: i32, a: i64, b: i64, out: *mut *mut FreyCurve) -> FreyStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let inner = build_frey(kind_from(kind)?, a, b)?;
        *out = Box::into_raw(Box::new(FreyCurve { inner }));
        Ok(())
    })
}

/// # Safety
/// `c` must come from `frey_curve_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn frey_curve_free(c: *mut FreyCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Which invariant `frey_curve_invariant` returns.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreyInvariant {
    C4 = 0,
    C6 = 1,
    Discriminant = 2,
    J = 3,
    Model = 4,
}

/// The invariant named by `which` (a `FreyInvariant` value) as text in the power basis of
/// the host field; free with `frey_string_free`.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn frey_curve_invariant(c: *const FreyCurve, which: i32, out: *mut *mut c_char) -> FreyStatus {
    guard(|| {
        let c = handle(c)?;
        let out = out_ref(out)?;
        let inv = &c.inner.invariants;
        let s = match which {
            x if x == FreyInvariant::C4 as i32 => inv.c4.to_string(),
            x if x == FreyInvariant::C6 as i32 => inv.c6.to_string(),
            x if x == FreyInvariant::Discriminant as i32 => inv.disc.to_string(),
            x if x == FreyInvariant::J as i32 => inv.j.to_string(),
            x if x == FreyInvariant::Model as i32 => c.inner.model.to_string(),
            _ => return Err(input(format!("unknown invariant {which}"))),
        };
        *out = to_c(s);
        Ok(())
    })
}

/// Trace of Frobenius at slot `index` above the prime `q`: a_𝔮 at good slots, ±1 at multiplicative ones, 0 at additive ones.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn frey_curve_trace(c: *const FreyCurve, q: u64, index: usize, out: *mut i64) -> FreyStatus {
    guard(|| {
        let c = handle(c)?;
        let out = out_ref(out)?;
        let slot = localfield::slot(c.inner.kind.field(), q, index).map_err(|e| input(e.to_string()))?;
        let (_, a) = frey::ellcurve::local_trace(&c.inner.model, &slot).map_err(|e| Failure(FreyStatus::DataError, e.to_string()))?;
        *out = a;
        Ok(())
    })
}

/// Conductor exponent at slot `index` above `q` for a solution with coefficient `d`; -1 when the tables leave it open.
/// Slots the tables do not list have exponent 0.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn frey_curve_conductor_exponent(c: *const FreyCurve, d: u64, q: u64, index: usize, out: *mut i32) -> FreyStatus {
    guard(|| {
        let c = handle(c)?;
        let out = out_ref(out)?;
        let p = &c.inner.pair;
        localfield::slot(c.inner.kind.field(), q, index).map_err(|e| input(e.to_string()))?;
        let prof = conductor_profile(c.inner.kind, p.a, p.b, d)?;
        *out = match prof.entry(q, index) {
            Some(e) => e.exponent().map_or(-1, |x| x as i32),
            None => 0,
        };
        Ok(())
    })
}

fn wrap_trace(t: ProofTrace) -> FreyTrace {
    let text = CString::new(t.render_text().replace('\0', " ")).unwrap();
    let json = CString::new(t.to_json().replace('\0', " ")).unwrap();
    FreyTrace { inner: t, text, json }
}

/// Runs the r = 5 or r = 13 pipeline for x^r + y^r = d z^p.
///
/// `data_dir` may be null; otherwise every .txt or .hilbert file in it is read as Hilbert
/// eigenvalue data. A trace is produced whatever the verdict; the status reflects loading
/// and argument errors only.
///
/// # Safety
/// `data_dir` must be null or a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn frey_prove(r: u32, d: u64, data_dir: *const c_char, strict_no_cited: bool, out: *mut *mut FreyTrace) -> FreyStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let forms = match opt_str(data_dir)? {
            Some(dir) => cli::load_hilbert_dir(Path::new(dir))?,
            None => Vec::new(),
        };
        let t = cli::prove(r, d, &forms, ProveOptions { strict_no_cited, sign_mode: SignMode::Permissive, assume_p7_congruence: false })?;
        *out = Box::into_raw(Box::new(wrap_trace(t)));
        Ok(())
    })
}

/// The second case (p | z) for d in {1, 2}. `curves_path` may be null to use the bundled tables.
///
/// # Safety
/// `curves_path` must be null or a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn frey_second_case(d: u64, curves_path: *const c_char, out: *mut *mut FreyTrace) -> FreyStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let text = match opt_str(curves_path)? {
            Some(p) => std::fs::read_to_string(p).map_err(|e| Failure(FreyStatus::DataError, format!("{p}: {e}")))?,
            None => cli::BUNDLED_CURVES.to_string(),
        };
        let db = parse_rational_db(&text).map_err(CliError::from)?;
        let rep = second_case_report(d, &db).map_err(CliError::from)?;
        let t = ProofTrace::new(5, d, rep.steps, Vec::new(), Vec::new(), false);
        *out = Box::into_raw(Box::new(wrap_trace(t)));
        Ok(())
    })
}

/// # Safety
/// `t` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn frey_trace_free(t: *mut FreyTrace) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn frey_trace_verdict(t: *const FreyTrace, out: *mut FreyVerdict) -> FreyStatus {
    guard(|| {
        *out_ref(out)? = handle(t)?.inner.verdict.into();
        Ok(())
    })
}

/// Number of computed or cited steps in the trace.
///
/// # Safety
/// `t` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn frey_trace_step_count(t: *const FreyTrace, out: *mut usize) -> FreyStatus {
    guard(|| {
        *out_ref(out)? = handle(t)?.inner.steps.len();
        Ok(())
    })
}

/// The text rendering, owned by the trace and valid until `frey_trace_free`.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn frey_trace_text(t: *const FreyTrace) -> *const c_char {
    t.as_ref().map_or(ptr::null(), |t| t.text.as_ptr())
}

/// The JSON rendering, owned by the trace and valid until `frey_trace_free`.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn frey_trace_json(t: *const FreyTrace) -> *const c_char {
    t.as_ref().map_or(ptr::null(), |t| t.json.as_ptr())
}

/// Process exit code the command-line tool would use for this trace.
///
/// # Safety
/// `t` must be a live handle or null (null gives 2).
#[no_mangle]
pub unsafe extern "C" fn frey_trace_exit_code(t: *const FreyTrace) -> i32 {
    t.as_ref().map_or(2, |t| t.inner.verdict.exit_code())
}
