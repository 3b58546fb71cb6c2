//! C ABI over `ssvsc`.
//!
//! Matrices cross the boundary as opaque `SsvscMatrix` handles. The caller
//! owns every handle it receives and releases it with `ssvsc_matrix_free`.
//! Fallible calls return an `SsvscStatus`; after a non-zero status,
//! `ssvsc_last_error` describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use ssvsc::encoding::{Status, Target};
use ssvsc::search::{prove, ProveOptions};
use ssvsc::solver::SolveBudget;
use ssvsc::methods::winner_report;
use ssvsc::{Error, Method, OrdinalMarginMatrix};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsvscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidMatrix = 2,
    InvalidArgument = 3,
    NotLinear = 4,
    TooLarge = 5,
    BufferTooSmall = 6,
    Solver = 7,
    VerificationFailed = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsvscMethod {
    Sc = 0,
    Ssv = 1,
    Sv = 2,
    SsvSe = 3,
    SsvPut = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsvscTarget {
    Counterexample = 0,
    MinimalCounterexample = 1,
    SingleScWinner = 2,
    SingleScWinnerMinimal = 3,
    ReversalSymmetry = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsvscSolveStatus {
    Sat = 10,
    Unsat = 20,
    Budget = 0,
}

/// Opaque margin matrix handle.
pub struct SsvscMatrix(OrdinalMarginMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SsvscStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidMatrix(_) | Error::NotTournament => SsvscStatus::InvalidMatrix,
            Error::NotLinear | Error::NotLinearDecoded(_) => SsvscStatus::NotLinear,
            Error::TooLarge { .. } | Error::BudgetExceeded { .. } => SsvscStatus::TooLarge,
            Error::MalformedSolverOutput(_) | Error::SolverSpawnFailure { .. } => SsvscStatus::Solver,
            Error::VerificationFailed(_) => SsvscStatus::VerificationFailed,
            Error::Io(_) | Error::Json(_) => SsvscStatus::Io,
            _ => SsvscStatus::InvalidArgument,
        };
        Failure(code, e.to_string())
    }
}

fn fail(code: SsvscStatus, msg: impl Into<String>) -> Failure {
    Failure(code, msg.into())
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SsvscStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SsvscStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic");
            SsvscStatus::Panic
        }
    }
}

unsafe fn matrix<'a>(m: *const SsvscMatrix) -> Result<&'a OrdinalMarginMatrix, Failure> {
    m.as_ref().map(|m| &m.0).ok_or_else(|| fail(SsvscStatus::NullPointer, "null matrix handle"))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| fail(SsvscStatus::NullPointer, "null output pointer"))
}

fn check_alt(m: &OrdinalMarginMatrix, a: usize) -> Result<(), Failure> {
    if a < m.n() {
        Ok(())
    } else {
        Err(Error::NoSuchAlternative(a, m.n()).into())
    }
}

fn boxed(m: OrdinalMarginMatrix) -> *mut SsvscMatrix {
    Box::into_raw(Box::new(SsvscMatrix(m)))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ssvsc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next `ssvsc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ssvsc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a matrix from `n * n` row-major weights.
///
/// # Safety
/// `weights` must point to `n * n` readable values and `out_m` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssvsc_matrix_new(n: usize, weights: *const i64, out_m: *mut *mut SsvscMatrix) -> SsvscStatus {
    guard(|| {
        let slot = out(out_m)?;
        *slot = ptr::null_mut();
        if weights.is_null() {
            return Err(fail(SsvscStatus::NullPointer, "null weights"));
        }
        let len = n.checked_mul(n).ok_or_else(|| fail(SsvscStatus::TooLarge, "n * n overflows"))?;
        let w = std::slice::from_raw_parts(weights, len).to_vec();
        *slot = boxed(OrdinalMarginMatrix::from_flat(n, w)?);
        Ok(())
    })
}

/// Reads a matrix JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out_m` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssvsc_matrix_load(path: *const c_char, out_m: *mut *mut SsvscMatrix) -> SsvscStatus {
    guard(|| {
        let slot = out(out_m)?;
        *slot = ptr::null_mut();
        if path.is_null() {
            return Err(fail(SsvscStatus::NullPointer, "null path"));
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| fail(SsvscStatus::InvalidArgument, "path is not UTF-8"))?;
        *slot = boxed(OrdinalMarginMatrix::load(path)?);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must be null or a handle from this library not already freed.
#[no_mangle]
pub unsafe extern "C" fn ssvsc_matrix_free(m: *mut SsvscMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle and `n` writable.
#[no_mangle]
pub unsafe extern "C" fn ssvsc_matrix_size(m: *const SsvscMatrix, n: *mut usize) -> SsvscStatus {
    guard(|| {
        *out(n)? = matrix(m)?.n();
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle and `w` writable.
#[no_mangle]
pub unsafe extern "C" fn ssvsc_matrix_weight(m: *const SsvscMatrix, a: usize, b: usize, w: *mut i64) -> SsvscStatus {
    guard(|| {
        let m = matrix(m)?;
        check_alt(m, a)?;
        check_alt(m, b)?;
        *out(w)? = m.weight(a, b);
        Ok(())
    })
}

/// Whether every off-diagonal pair has a distinct non-zero strength.
///
/// # Safety
/// `m` must be a live handle and `linear` writable.
#[no_mangle]
pub unsafe extern "C" fn ssvsc_matrix_is_linear(m: *const SsvscMatrix, linear: *mut bool) -> SsvscStatus {
    guard(|| {
        *out(linear)? = matrix(m)?.is_linear();
        Ok(())
    })
}

/// Whether `a` defeats `b` under Split Cycle.
///
/// # Safety
/// `m` must be a live handle and `defeats` writable.
#[no_mangle]
pub unsafe extern "C" fn ssvsc_sc_defeats(m: *const SsvscMatrix, a: usize, b: usize, defeats: *mut bool) -> SsvscStatus {
    guard(|| {
        let m = matrix(m)?;
        check_alt(m, a)?;
        check_alt(m, b)?;
        *out(defeats)? = ssvsc::sc_defeats(m, a, b).defeats;
        Ok(())
    })
}

/// Writes the winners (ascending) into `buf`, and their count into `len`.
/// If `cap` is too small nothing is written to `buf`, `len` still holds
/// the count and the status is `BufferTooSmall`.
///
/// # Safety
/// `m` must be a live handle, `buf` must have room for `cap` values (or be
/// null with `cap == 0`) and `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssvsc_winners(
    m: *const SsvscMatrix,
    method: SsvscMethod,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> SsvscStatus {
    guard(|| {
        let m = matrix(m)?;
        let len = out(len)?;
        let method = match method {
            SsvscMethod::Sc => Method::Sc,
            SsvscMethod::Ssv => Method::Ssv,
            SsvscMethod::Sv => Method::Sv,
            SsvscMethod::SsvSe => Method::SsvSe,
            SsvscMethod::SsvPut => Method::SsvPut,
        };
        let winners = winner_report(m, method)?.winners;
        *len = winners.len();
        if winners.len() > cap {
            return Err(fail(SsvscStatus::BufferTooSmall, format!("{} winners, buffer holds {cap}", winners.len())));
        }
        if buf.is_null() && !winners.is_empty() {
            return Err(fail(SsvscStatus::NullPointer, "null winner buffer"));
        }
        for (i, w) in winners.into_iter().enumerate() {
            *buf.add(i) = w;
        }
        Ok(())
    })
}

/// Builds and solves the encoding for `n` alternatives with symmetry
/// breaking. `solver_cmd` names an external DIMACS solver (the CNF path is
/// appended); null selects the built-in engine. `timeout_ms == 0` means no
/// wall-clock limit. On SAT, `model` (if non-null) receives the verified
/// matrix; otherwise it is set to null.
///
/// # Safety
/// `solver_cmd` must be null or NUL-terminated, `result` writable and
/// `model` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ssvsc_prove(
    n: usize,
    target: SsvscTarget,
    timeout_ms: u64,
    solver_cmd: *const c_char,
    result: *mut SsvscSolveStatus,
    model: *mut *mut SsvscMatrix,
) -> SsvscStatus {
    guard(|| {
        if let Some(m) = model.as_mut() {
            *m = ptr::null_mut();
        }
        let result = out(result)?;
        let mut budget = if solver_cmd.is_null() {
            SolveBudget::embedded()
        } else {
            let cmd =
                CStr::from_ptr(solver_cmd).to_str().map_err(|_| fail(SsvscStatus::InvalidArgument, "command is not UTF-8"))?;
            SolveBudget::external(cmd)
        };
        if timeout_ms > 0 {
            budget = budget.with_wall(Duration::from_millis(timeout_ms));
        }
        let target = match target {
            SsvscTarget::Counterexample => Target::Counterexample,
            SsvscTarget::MinimalCounterexample => Target::MinimalCounterexample,
            SsvscTarget::SingleScWinner => Target::SingleScWinner { minimal: false },
            SsvscTarget::SingleScWinnerMinimal => Target::SingleScWinner { minimal: true },
            SsvscTarget::ReversalSymmetry => Target::ReversalSymmetry,
        };
        let report = prove(&ProveOptions::new(n, target, budget))?;
        *result = match report.status {
            Status::Sat => SsvscSolveStatus::Sat,
            Status::Unsat => SsvscSolveStatus::Unsat,
            Status::Budget => SsvscSolveStatus::Budget,
        };
        if let (Some(slot), Some(v)) = (model.as_mut(), report.models.into_iter().next()) {
            *slot = boxed(v.matrix.into_matrix()?);
        }
        Ok(())
    })
}
