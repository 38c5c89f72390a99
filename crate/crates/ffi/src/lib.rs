//! C ABI for the natopt toolkit.
//!
//! Conventions: every constructor hands back an opaque handle through an
//! out-pointer and returns a [`NatoptStatus`]; handles are released with
//! the matching `*_free` function; all strings are NUL-terminated UTF-8.
//! Handles are not thread-safe — callers must not share one handle across
//! threads without external synchronization.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use natopt::algorithms::{run, Algorithm, RunSpec};
use natopt::benchmarks::{problem_by_name, IslandFunctionParams, ProblemOptions};
use natopt::params::ParameterSet;
use natopt::problem::{ConstraintPolicy, Problem};
use natopt::record::RunRecord;
use natopt::rng::RandomStream;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NatoptStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument failed validation (bad JSON, bad bounds, bad budget).
    InvalidArgument = 3,
    /// An algorithm or problem name the toolkit does not know.
    UnknownName = 4,
    /// The operation failed at runtime.
    RuntimeError = 5,
    /// A panic was caught at the FFI boundary.
    Panic = 6,
}

/// Opaque optimization problem handle.
pub struct NatoptProblem {
    inner: Problem,
}

/// Opaque run-result handle.
pub struct NatoptRunResult {
    inner: RunRecord,
}

fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, NatoptStatus> {
    if ptr.is_null() {
        return Err(NatoptStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| NatoptStatus::InvalidUtf8)
}

fn status_of(err: &natopt::Error) -> NatoptStatus {
    use natopt::Error::*;
    match err {
        UnknownAlgorithm(_) | UnknownProblem(_) => NatoptStatus::UnknownName,
        Io(_) | BudgetExhausted => NatoptStatus::RuntimeError,
        _ => NatoptStatus::InvalidArgument,
    }
}

fn guarded(body: impl FnOnce() -> NatoptStatus) -> NatoptStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(NatoptStatus::Panic)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn natopt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn natopt_status_message(status: NatoptStatus) -> *const c_char {
    let text: &'static str = match status {
        NatoptStatus::Ok => "ok\0",
        NatoptStatus::NullPointer => "null pointer argument\0",
        NatoptStatus::InvalidUtf8 => "string argument is not valid UTF-8\0",
        NatoptStatus::InvalidArgument => "invalid argument\0",
        NatoptStatus::UnknownName => "unknown algorithm or problem name\0",
        NatoptStatus::RuntimeError => "runtime error\0",
        NatoptStatus::Panic => "internal panic\0",
    };
    text.as_ptr() as *const c_char
}

/// Create a benchmark problem by name (`sphere`, `rastrigin`, `ackley`,
/// `rosenbrock`) at the given dimension.
#[no_mangle]
pub extern "C" fn natopt_problem_new(
    name: *const c_char,
    dimension: usize,
    out: *mut *mut NatoptProblem,
) -> NatoptStatus {
    guarded(|| {
        if out.is_null() {
            return NatoptStatus::NullPointer;
        }
        let name = match read_str(name) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let options = ProblemOptions {
            dimension,
            ..ProblemOptions::default()
        };
        match problem_by_name(name, &options) {
            Ok(problem) => {
                unsafe { *out = Box::into_raw(Box::new(NatoptProblem { inner: problem })) };
                NatoptStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Create the constrained multi-island problem. `policy` is `"reject"` or
/// `"repair"`.
#[no_mangle]
pub extern "C" fn natopt_problem_island(
    grid_extent: i64,
    sharpness: f64,
    policy: *const c_char,
    out: *mut *mut NatoptProblem,
) -> NatoptStatus {
    guarded(|| {
        if out.is_null() {
            return NatoptStatus::NullPointer;
        }
        let policy = match read_str(policy).and_then(|s| {
            ConstraintPolicy::from_name(s).map_err(|_| NatoptStatus::InvalidArgument)
        }) {
            Ok(p) => p,
            Err(status) => return status,
        };
        let island = match IslandFunctionParams::new(grid_extent, sharpness) {
            Ok(p) => p,
            Err(_) => return NatoptStatus::InvalidArgument,
        };
        let options = ProblemOptions {
            dimension: 2,
            island,
            policy,
        };
        match problem_by_name("island", &options) {
            Ok(problem) => {
                unsafe { *out = Box::into_raw(Box::new(NatoptProblem { inner: problem })) };
                NatoptStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Decision-space dimension of a problem.
#[no_mangle]
pub extern "C" fn natopt_problem_dimension(problem: *const NatoptProblem) -> usize {
    if problem.is_null() {
        return 0;
    }
    unsafe { &*problem }.inner.dimension()
}

/// Release a problem handle. NULL is a no-op.
#[no_mangle]
pub extern "C" fn natopt_problem_free(problem: *mut NatoptProblem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Execute one seeded optimization run.
///
/// `algorithm` is one of `gd`, `de`, `pso`, `fa`, `ba`, `cs`, `fpa`, `ga`,
/// `sa`. `params_json` is an optional JSON object of parameter overrides
/// (e.g. `{"F": 0.9}`); pass NULL for the defaults. Identical
/// `(seed, stream_id)` pairs reproduce the run bit-exactly.
#[no_mangle]
pub extern "C" fn natopt_run(
    problem: *const NatoptProblem,
    algorithm: *const c_char,
    params_json: *const c_char,
    population: usize,
    budget: u64,
    seed: u64,
    stream_id: u64,
    out: *mut *mut NatoptRunResult,
) -> NatoptStatus {
    guarded(|| {
        if problem.is_null() || out.is_null() {
            return NatoptStatus::NullPointer;
        }
        let algorithm = match read_str(algorithm).and_then(|name| {
            Algorithm::from_name(name).map_err(|_| NatoptStatus::UnknownName)
        }) {
            Ok(a) => a,
            Err(status) => return status,
        };
        let params = if params_json.is_null() {
            ParameterSet::new()
        } else {
            let text = match read_str(params_json) {
                Ok(s) => s,
                Err(status) => return status,
            };
            match serde_json::from_str::<std::collections::BTreeMap<String, f64>>(text) {
                Ok(map) => map.into_iter().collect(),
                Err(_) => return NatoptStatus::InvalidArgument,
            }
        };
        let spec = RunSpec {
            algorithm,
            params,
            schedules: Vec::new(),
            population_size: population,
            budget,
        };
        let mut stream = RandomStream::new(seed, stream_id);
        match run(&spec, &unsafe { &*problem }.inner, &mut stream) {
            Ok(record) => {
                unsafe { *out = Box::into_raw(Box::new(NatoptRunResult { inner: record })) };
                NatoptStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Final best fitness of a run; NaN for a NULL handle.
#[no_mangle]
pub extern "C" fn natopt_result_best_fitness(result: *const NatoptRunResult) -> f64 {
    if result.is_null() {
        return f64::NAN;
    }
    unsafe { &*result }.inner.best_fitness
}

/// Objective evaluations the run actually spent.
#[no_mangle]
pub extern "C" fn natopt_result_evals_used(result: *const NatoptRunResult) -> u64 {
    if result.is_null() {
        return 0;
    }
    unsafe { &*result }.inner.evals_used
}

/// Dimension of the best position.
#[no_mangle]
pub extern "C" fn natopt_result_dimension(result: *const NatoptRunResult) -> usize {
    if result.is_null() {
        return 0;
    }
    unsafe { &*result }.inner.best_position.len()
}

/// Copy the best position into `buffer` (exactly `len` == dimension).
#[no_mangle]
pub extern "C" fn natopt_result_best_position(
    result: *const NatoptRunResult,
    buffer: *mut f64,
    len: usize,
) -> NatoptStatus {
    guarded(|| {
        if result.is_null() || buffer.is_null() {
            return NatoptStatus::NullPointer;
        }
        let position = &unsafe { &*result }.inner.best_position;
        if len != position.len() {
            return NatoptStatus::InvalidArgument;
        }
        unsafe { ptr::copy_nonoverlapping(position.as_slice().as_ptr(), buffer, len) };
        NatoptStatus::Ok
    })
}

/// Number of entries in the best-so-far trace.
#[no_mangle]
pub extern "C" fn natopt_result_trace_len(result: *const NatoptRunResult) -> usize {
    if result.is_null() {
        return 0;
    }
    unsafe { &*result }.inner.trace.len()
}

/// Read trace entry `index` as (evaluation count, best fitness so far).
#[no_mangle]
pub extern "C" fn natopt_result_trace_entry(
    result: *const NatoptRunResult,
    index: usize,
    evals_out: *mut u64,
    fitness_out: *mut f64,
) -> NatoptStatus {
    guarded(|| {
        if result.is_null() || evals_out.is_null() || fitness_out.is_null() {
            return NatoptStatus::NullPointer;
        }
        let trace = &unsafe { &*result }.inner.trace;
        match trace.get(index) {
            Some((evals, fitness)) => {
                unsafe {
                    *evals_out = *evals;
                    *fitness_out = *fitness;
                }
                NatoptStatus::Ok
            }
            None => NatoptStatus::InvalidArgument,
        }
    })
}

/// Release a run-result handle. NULL is a no-op.
#[no_mangle]
pub extern "C" fn natopt_result_free(result: *mut NatoptRunResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}
