//! C ABI for `dirmin`.
//!
//! Problems are opaque handles built from the same JSON accepted by the
//! command-line tool. Every fallible call returns a [`DmStatus`]; the message
//! of the last failure on the calling thread is available from
//! [`dm_last_error_message`]. Strings handed out by the library must be
//! released with [`dm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dirmin::cli::{execute, Command, Options};
use dirmin::problem::ProblemFile;
use dirmin::scalarize::{gerstewitz_value, ScalarizationContext};
use dirmin::{gallery, Error, HalfspaceCone, Vector};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidProblem = 4,
    UnknownCommand = 5,
    Computation = 6,
    Panic = 7,
}

/// Opaque problem handle.
pub struct DmProblem {
    file: ProblemFile,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn classify(e: &Error) -> DmStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => DmStatus::Parse,
        Error::DimensionMismatch { .. }
        | Error::Invalid(_)
        | Error::StrictOnGenerators
        | Error::ZeroVector
        | Error::NotInSet(_)
        | Error::NotFinitelyGenerated
        | Error::NotInterior
        | Error::Inadmissible(_)
        | Error::InvalidCertificate(_) => DmStatus::InvalidProblem,
        _ => DmStatus::Computation,
    }
}

fn fail(e: Error) -> DmStatus {
    let status = classify(&e);
    set_error(e.to_string());
    status
}

/// Runs `f`, turning panics into [`DmStatus::Panic`].
fn guard(f: impl FnOnce() -> DmStatus) -> DmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            DmStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, DmStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(DmStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        DmStatus::InvalidUtf8
    })
}

fn hand_out(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Parses a JSON problem file into a new handle stored in `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dm_problem_from_json(json: *const c_char, out: *mut *mut DmProblem) -> DmStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return DmStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match ProblemFile::from_json(text) {
            Ok(file) => {
                *out = Box::into_raw(Box::new(DmProblem { file }));
                DmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `p` must come from [`dm_problem_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dm_problem_free(p: *mut DmProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Runs a command (`"certify"`, `"kkt"`, ...) and stores the JSON report in
/// `*report` and the command-line exit code (0, 1 or 2) in `*exit_code`.
///
/// # Safety
/// `problem` must be a live handle; `command` a NUL-terminated string;
/// `report` and `exit_code` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn dm_run(
    problem: *const DmProblem,
    command: *const c_char,
    weak: bool,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> DmStatus {
    guard(|| {
        if problem.is_null() || report.is_null() || exit_code.is_null() {
            set_error("null pointer argument");
            return DmStatus::NullPointer;
        }
        *report = ptr::null_mut();
        let name = match read_str(command) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(cmd) = Command::from_name(name) else {
            set_error(format!("unknown command '{name}'"));
            return DmStatus::UnknownCommand;
        };
        let opts = Options {
            weak,
            ..Options::default()
        };
        match execute(cmd, &(*problem).file, &opts).and_then(|o| Ok((o.report_json()?, o.class))) {
            Ok((json, class)) => {
                *report = hand_out(json);
                *exit_code = class.code();
                DmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs a gallery example by name; outputs as in [`dm_run`].
///
/// # Safety
/// `name` must be a NUL-terminated string; `report` and `exit_code` valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn dm_gallery_run(
    name: *const c_char,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> DmStatus {
    guard(|| {
        if report.is_null() || exit_code.is_null() {
            set_error("null pointer argument");
            return DmStatus::NullPointer;
        }
        *report = ptr::null_mut();
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match gallery::run(name, &Options::default()).and_then(|o| Ok((o.report_json()?, o.class))) {
            Ok((json, class)) => {
                *report = hand_out(json);
                *exit_code = class.code();
                DmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Value of the scalarization `max_i (a_i·y)/(a_i·e)` for the cone with
/// `rows` row-major `n_rows × dim` coefficients.
///
/// # Safety
/// `rows` must hold `n_rows * dim` doubles, `e` and `y` `dim` doubles each,
/// and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dm_gerstewitz_value(
    rows: *const f64,
    n_rows: usize,
    dim: usize,
    e: *const f64,
    y: *const f64,
    out: *mut f64,
) -> DmStatus {
    guard(|| {
        if rows.is_null() || e.is_null() || y.is_null() || out.is_null() {
            set_error("null pointer argument");
            return DmStatus::NullPointer;
        }
        if n_rows == 0 || dim == 0 {
            set_error("empty cone");
            return DmStatus::InvalidProblem;
        }
        let flat = std::slice::from_raw_parts(rows, n_rows * dim);
        let e = std::slice::from_raw_parts(e, dim).to_vec();
        let y = std::slice::from_raw_parts(y, dim).to_vec();
        let value = (|| {
            let k = HalfspaceCone::from_rows(flat.chunks(dim).map(<[f64]>::to_vec).collect())?;
            let ctx = ScalarizationContext::new(k, Vector::new(e)?)?;
            gerstewitz_value(&ctx, &Vector::new(y)?)
        })();
        match value {
            Ok(v) => {
                *out = v;
                DmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Frees a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread (empty if none). Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn dm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
