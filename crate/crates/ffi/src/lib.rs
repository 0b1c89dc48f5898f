//! C ABI over the `mclp` library.
//!
//! Every fallible function returns an [`MclpStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can
//! be read with [`mclp_last_error_message`]. Handles returned by this
//! library are owned by the caller and released with the matching `_free`
//! function; strings are released with [`mclp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use mclp::generator::{generate, GeneratorConfig};
use mclp::io::{parse_instance, serialize_instance, serialize_solution};
use mclp::{build_coverage, solve, Error, Instance, Solution, SolveStats, SolverConfig, SolverKind};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MclpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or a document of the wrong shape.
    ParseError = 3,
    /// Well-formed input that breaks a problem invariant.
    InvalidInstance = 4,
    /// Brute force would enumerate more subsets than allowed.
    SolverCap = 5,
    InvalidArgument = 6,
    /// A panic was caught at the boundary. Handles passed in are left untouched.
    Panic = 7,
}

pub const MCLP_SOLVER_DP: u32 = 0;
pub const MCLP_SOLVER_GREEDY: u32 = 1;
pub const MCLP_SOLVER_BRUTE: u32 = 2;

pub const MCLP_FLAG_DOMINANCE: u32 = 1;
pub const MCLP_FLAG_SYMMETRY: u32 = 2;
pub const MCLP_FLAG_GREEDY_BOUND: u32 = 4;
pub const MCLP_FLAG_ORDERING: u32 = 8;
pub const MCLP_FLAG_PREPROCESS: u32 = 16;
pub const MCLP_FLAG_ALL: u32 = 31;

/// Solver settings. Start from [`mclp_solve_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MclpSolveOptions {
    /// Bitwise OR of `MCLP_FLAG_*` values.
    pub flags: u32,
    /// Frontier size at which the DP truncates and reports inexact. Must be at least 1.
    pub state_limit: usize,
    /// Wall-clock limit in seconds; zero or negative means none.
    pub time_limit_seconds: f64,
}

/// A validated problem instance.
pub struct MclpInstance {
    inner: Instance,
}

/// A solver result with its statistics.
pub struct MclpSolution {
    solution: Solution,
    stats: SolveStats,
    total_weight: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

struct Failure(MclpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax(_) | Error::Schema { .. } => MclpStatus::ParseError,
            Error::Invariant { .. } | Error::InvalidConfig(_) => MclpStatus::InvalidInstance,
            Error::CombinationCap { .. } => MclpStatus::SolverCap,
            Error::Io(_) => MclpStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MclpStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body` behind a panic guard and records any failure.
fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> MclpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            MclpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            MclpStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(MclpStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("serialized JSON has no NUL bytes").into_raw()
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message for the most recent failure on this thread, or null after a
/// success. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn mclp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses an instance from a NUL-terminated JSON document.
///
/// # Safety
/// `json` must be null or a valid C string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mclp_instance_from_json(json: *const c_char, out: *mut *mut MclpInstance) -> MclpStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let inner = parse_instance(text.as_bytes())?;
        write_out(out, MclpInstance { inner });
        Ok(())
    })
}

/// Generates a seeded synthetic instance from a JSON generator config, for
/// example `{"n": 30, "m": 10, "budget": 4, "radius": 20, "seed": 7}`.
///
/// # Safety
/// Same contract as [`mclp_instance_from_json`].
#[no_mangle]
pub unsafe extern "C" fn mclp_instance_generate(config_json: *const c_char, out: *mut *mut MclpInstance) -> MclpStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(config_json, "config_json")?;
        let config: GeneratorConfig = serde_json::from_str(text).map_err(Error::from)?;
        let inner = generate(&config)?;
        write_out(out, MclpInstance { inner });
        Ok(())
    })
}

/// Writes the canonical JSON form of an instance. Free the string with
/// [`mclp_string_free`].
///
/// # Safety
/// `instance` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mclp_instance_to_json(instance: *const MclpInstance, out: *mut *mut c_char) -> MclpStatus {
    guarded(|| {
        let instance = instance.as_ref().ok_or_else(|| null("instance"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(serialize_instance(&instance.inner));
        Ok(())
    })
}

/// Number of demand points, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mclp_instance_demand_count(instance: *const MclpInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.n())
}

/// Number of candidate sites, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mclp_instance_site_count(instance: *const MclpInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.m())
}

/// # Safety
/// `instance` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mclp_instance_free(instance: *mut MclpInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// All reductions on, default state limit, no time limit.
#[no_mangle]
pub extern "C" fn mclp_solve_options_default() -> MclpSolveOptions {
    let config = SolverConfig::default();
    MclpSolveOptions {
        flags: MCLP_FLAG_ALL,
        state_limit: config.state_limit,
        time_limit_seconds: 0.0,
    }
}

fn solver_config(options: &MclpSolveOptions) -> Result<SolverConfig, Failure> {
    if options.flags & !MCLP_FLAG_ALL != 0 {
        return Err(Failure(MclpStatus::InvalidArgument, format!("unknown flag bits {:#x}", options.flags)));
    }
    let t = options.time_limit_seconds;
    let time_limit = match t > 0.0 {
        true => Some(
            Duration::try_from_secs_f64(t).map_err(|e| Failure(MclpStatus::InvalidArgument, format!("time limit: {e}")))?,
        ),
        false => None,
    };
    let config = SolverConfig {
        state_limit: options.state_limit,
        time_limit,
        ..SolverConfig::from_flag_bits(options.flags as u8)
    };
    config.validate().map_err(|e| Failure(MclpStatus::InvalidArgument, e.to_string()))?;
    Ok(config)
}

/// Solves `instance` with one of the `MCLP_SOLVER_*` solvers. A null
/// `options` means [`mclp_solve_options_default`].
///
/// # Safety
/// `instance` must be a live handle, `options` null or readable, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mclp_solve(
    instance: *const MclpInstance,
    solver: u32,
    options: *const MclpSolveOptions,
    out: *mut *mut MclpSolution,
) -> MclpStatus {
    guarded(|| {
        let instance = &instance.as_ref().ok_or_else(|| null("instance"))?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = match solver {
            MCLP_SOLVER_DP => SolverKind::Dp,
            MCLP_SOLVER_GREEDY => SolverKind::Greedy,
            MCLP_SOLVER_BRUTE => SolverKind::Brute,
            other => return Err(Failure(MclpStatus::InvalidArgument, format!("unknown solver {other}"))),
        };
        let options = options.as_ref().copied().unwrap_or_else(|| mclp_solve_options_default());
        let config = solver_config(&options)?;
        let coverage = build_coverage(instance);
        let (solution, stats) = solve(kind, instance, &coverage, &config)?;
        write_out(out, MclpSolution { solution, stats, total_weight: coverage.total_weight });
        Ok(())
    })
}

/// Covered weight, or NaN for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mclp_solution_objective(solution: *const MclpSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| s.solution.objective)
}

/// Covered weight as a percentage of total weight, or NaN for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mclp_solution_coverage_percent(solution: *const MclpSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| s.solution.coverage_percent(s.total_weight))
}

/// Whether the result is proven optimal. False for greedy and for
/// truncated DP runs.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mclp_solution_is_exact(solution: *const MclpSolution) -> bool {
    solution.as_ref().is_some_and(|s| s.stats.exact)
}

/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mclp_solution_selected_count(solution: *const MclpSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.solution.selected.len())
}

/// Copies up to `capacity` selected site ids (ascending) into `buffer` and
/// returns the total number selected, so a short buffer can be detected.
///
/// # Safety
/// `solution` must be null or a live handle; `buffer` must hold `capacity`
/// elements unless `capacity` is 0.
#[no_mangle]
pub unsafe extern "C" fn mclp_solution_copy_selected(
    solution: *const MclpSolution,
    buffer: *mut usize,
    capacity: usize,
) -> usize {
    let Some(s) = solution.as_ref() else { return 0 };
    let ids = &s.solution.selected;
    if !buffer.is_null() {
        let k = ids.len().min(capacity);
        ptr::copy_nonoverlapping(ids.as_ptr(), buffer, k);
    }
    ids.len()
}

/// Writes the solution in the same JSON layout as the command-line tool.
///
/// # Safety
/// `solution` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mclp_solution_to_json(solution: *const MclpSolution, out: *mut *mut c_char) -> MclpStatus {
    guarded(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(serialize_solution(&s.solution, &s.stats, s.total_weight));
        Ok(())
    })
}

/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mclp_solution_free(solution: *mut MclpSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mclp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
