//! C interface over traces, engines, and replay results. Opaque handles,
//! negative status codes, and a thread-local message for the last failure.
//!
//! Conventions: every fallible call returns `PD_OK` (0) or a negative
//! `PD_ERR_*` code and describes the failure via `pd_last_error()`. Handles
//! are created into `out` parameters and released with their `_free`
//! function; strings returned through `char **out` are heap-allocated and
//! released with `pd_string_free`. All functions tolerate NULL handles and
//! NULL out-pointers by failing with `PD_ERR_NULL_ARG`, never by crashing.
//! No call unwinds across the boundary: internal panics are caught and
//! reported as `PD_ERR_PANIC`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{CStr, CString};
use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use libc::{c_char, c_int};

use pathdyn::engine::{engines_for, new_engine, run_trace, Engine, ENGINE_NAMES};
use pathdyn::trace::{Answer, Op, TraceResult, UpdateTrace};

pub const PD_OK: c_int = 0;
pub const PD_ERR_NULL_ARG: c_int = -1;
pub const PD_ERR_UTF8: c_int = -2;
pub const PD_ERR_PARSE: c_int = -3;
pub const PD_ERR_ENGINE: c_int = -4;
pub const PD_ERR_BOUNDS: c_int = -5;
pub const PD_ERR_KIND: c_int = -6;
pub const PD_ERR_PANIC: c_int = -7;

pub struct PdTrace(UpdateTrace);

pub struct PdEngine {
    inner: Box<dyn Engine>,
    name: CString,
}

pub struct PdResult(TraceResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(code: c_int, msg: impl Display) -> c_int {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).unwrap_or_default();
    });
    code
}

fn guard(f: impl FnOnce() -> c_int) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => fail(PD_ERR_PANIC, "internal panic"),
    }
}

/// Message for the most recent failure on this thread. Empty string when
/// nothing failed yet. The pointer stays valid until the next failing call
/// on the same thread.
///
/// # Safety
/// The returned pointer must not be freed or written through.
#[no_mangle]
pub unsafe extern "C" fn pd_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
///
/// # Safety
/// The returned pointer must not be freed.
#[no_mangle]
pub unsafe extern "C" fn pd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Comma-separated list of all engine names, as a static string.
///
/// # Safety
/// The returned pointer must not be freed.
#[no_mangle]
pub unsafe extern "C" fn pd_engine_list() -> *const c_char {
    static LIST: OnceLock<CString> = OnceLock::new();
    LIST.get_or_init(|| CString::new(ENGINE_NAMES.join(",")).unwrap())
        .as_ptr()
}

/// Frees a string returned through a `char **out` parameter. NULL is a no-op.
///
/// # Safety
/// `s` must be a string obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, c_int> {
    if p.is_null() {
        return Err(fail(PD_ERR_NULL_ARG, "NULL string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(PD_ERR_UTF8, format!("invalid UTF-8: {e}")))
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> c_int {
    if out.is_null() {
        return fail(PD_ERR_NULL_ARG, "NULL out parameter");
    }
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            PD_OK
        }
        Err(e) => fail(PD_ERR_PARSE, format!("interior NUL in output: {e}")),
    }
}

/// Parses a trace from its JSONL text into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_trace_parse(text: *const c_char, out: *mut *mut PdTrace) -> c_int {
    guard(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(code) => return code,
        };
        if out.is_null() {
            return fail(PD_ERR_NULL_ARG, "NULL out parameter");
        }
        match UpdateTrace::load(text) {
            Ok(trace) => {
                *out = Box::into_raw(Box::new(PdTrace(trace)));
                PD_OK
            }
            Err(e) => fail(PD_ERR_PARSE, e),
        }
    })
}

/// Serializes a trace back to its JSONL text.
///
/// # Safety
/// `trace` must be a live trace handle; `out` receives a string for
/// `pd_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pd_trace_to_json(trace: *const PdTrace, out: *mut *mut c_char) -> c_int {
    guard(|| match trace.as_ref() {
        Some(t) => write_string(out, t.0.save()),
        None => fail(PD_ERR_NULL_ARG, "NULL trace handle"),
    })
}

/// Releases a trace handle. NULL is a no-op.
///
/// # Safety
/// `trace` must come from `pd_trace_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pd_trace_free(trace: *mut PdTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Vertex count of the trace header, or a negative error code.
///
/// # Safety
/// `trace` must be NULL or a live trace handle.
#[no_mangle]
pub unsafe extern "C" fn pd_trace_vertex_count(trace: *const PdTrace) -> i64 {
    match trace.as_ref() {
        Some(t) => t.0.header.n as i64,
        None => fail(PD_ERR_NULL_ARG, "NULL trace handle") as i64,
    }
}

/// Total op count, or a negative error code.
///
/// # Safety
/// `trace` must be NULL or a live trace handle.
#[no_mangle]
pub unsafe extern "C" fn pd_trace_op_count(trace: *const PdTrace) -> i64 {
    match trace.as_ref() {
        Some(t) => t.0.ops.len() as i64,
        None => fail(PD_ERR_NULL_ARG, "NULL trace handle") as i64,
    }
}

/// Query op count, or a negative error code.
///
/// # Safety
/// `trace` must be NULL or a live trace handle.
#[no_mangle]
pub unsafe extern "C" fn pd_trace_query_count(trace: *const PdTrace) -> i64 {
    match trace.as_ref() {
        Some(t) => t.0.query_count() as i64,
        None => fail(PD_ERR_NULL_ARG, "NULL trace handle") as i64,
    }
}

/// Comma-separated names of the engines able to replay this trace, baseline
/// first; empty string when none fit.
///
/// # Safety
/// `trace` must be a live trace handle; `out` receives a string for
/// `pd_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pd_engines_for(trace: *const PdTrace, out: *mut *mut c_char) -> c_int {
    guard(|| match trace.as_ref() {
        Some(t) => write_string(out, engines_for(&t.0).join(",")),
        None => fail(PD_ERR_NULL_ARG, "NULL trace handle"),
    })
}

/// Builds an engine for a trace. `name` NULL picks the trace's baseline
/// engine. `params_json` is NULL or a JSON object of numeric parameters,
/// e.g. {"dyadic.t":0.5}.
///
/// # Safety
/// `trace` must be a live trace handle; `out` must be a valid pointer;
/// `name` and `params_json` must be NULL or NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn pd_engine_new(
    name: *const c_char,
    trace: *const PdTrace,
    params_json: *const c_char,
    out: *mut *mut PdEngine,
) -> c_int {
    guard(|| {
        let trace = match trace.as_ref() {
            Some(t) => &t.0,
            None => return fail(PD_ERR_NULL_ARG, "NULL trace handle"),
        };
        if out.is_null() {
            return fail(PD_ERR_NULL_ARG, "NULL out parameter");
        }
        let name = if name.is_null() {
            match engines_for(trace).first() {
                Some(first) => first.to_string(),
                None => return fail(PD_ERR_ENGINE, "no engine fits this trace"),
            }
        } else {
            match read_str(name) {
                Ok(s) => s.to_string(),
                Err(code) => return code,
            }
        };
        let params: BTreeMap<String, f64> = if params_json.is_null() {
            BTreeMap::new()
        } else {
            let text = match read_str(params_json) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match serde_json::from_str(text) {
                Ok(map) => map,
                Err(e) => return fail(PD_ERR_PARSE, format!("bad params: {e}")),
            }
        };
        match new_engine(&name, trace, &params) {
            Ok(inner) => {
                let name = CString::new(inner.name()).unwrap();
                *out = Box::into_raw(Box::new(PdEngine { inner, name }));
                PD_OK
            }
            Err(e) => fail(PD_ERR_ENGINE, e),
        }
    })
}

/// Releases an engine handle. NULL is a no-op.
///
/// # Safety
/// `engine` must come from `pd_engine_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pd_engine_free(engine: *mut PdEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// The engine's name. The pointer stays valid while the handle lives.
///
/// # Safety
/// `engine` must be NULL or a live engine handle; the pointer must not be
/// freed.
#[no_mangle]
pub unsafe extern "C" fn pd_engine_name(engine: *const PdEngine) -> *const c_char {
    match engine.as_ref() {
        Some(e) => e.name.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Applies one op given as its JSON object, e.g.
/// {"op":"insert","u":0,"v":1,"w":5} or {"op":"query","kind":"st_dist"}.
/// For queries `*out_answer` receives the answer as JSON (an integer, null,
/// or an array of those) to free with `pd_string_free`; for updates it is
/// set to NULL. `out_answer` itself may be NULL to discard answers.
///
/// # Safety
/// `engine` must be a live engine handle; `op_json` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pd_engine_step_json(
    engine: *mut PdEngine,
    op_json: *const c_char,
    out_answer: *mut *mut c_char,
) -> c_int {
    guard(|| {
        let engine = match engine.as_mut() {
            Some(e) => e,
            None => return fail(PD_ERR_NULL_ARG, "NULL engine handle"),
        };
        let text = match read_str(op_json) {
            Ok(s) => s,
            Err(code) => return code,
        };
        let op: Op = match serde_json::from_str(text) {
            Ok(op) => op,
            Err(e) => return fail(PD_ERR_PARSE, format!("bad op: {e}")),
        };
        if !out_answer.is_null() {
            *out_answer = std::ptr::null_mut();
        }
        match engine.inner.step(op) {
            Ok(Some(answer)) if !out_answer.is_null() => {
                write_string(out_answer, serde_json::to_string(&answer).unwrap())
            }
            Ok(_) => PD_OK,
            Err(e) => fail(PD_ERR_ENGINE, e),
        }
    })
}

/// The engine's structure counters as a JSON object of name → count.
///
/// # Safety
/// `engine` must be a live engine handle; `out` receives a string for
/// `pd_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pd_engine_counters_json(
    engine: *const PdEngine,
    out: *mut *mut c_char,
) -> c_int {
    guard(|| match engine.as_ref() {
        Some(e) => {
            let counters: BTreeMap<&str, u64> = e.inner.counters().into_iter().collect();
            write_string(out, serde_json::to_string(&counters).unwrap())
        }
        None => fail(PD_ERR_NULL_ARG, "NULL engine handle"),
    })
}

/// Replays a whole trace through the engine, collecting one answer per
/// query. The engine keeps its final state; build a fresh engine to replay
/// from scratch again.
///
/// # Safety
/// `engine` and `trace` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_engine_run(
    engine: *mut PdEngine,
    trace: *const PdTrace,
    out: *mut *mut PdResult,
) -> c_int {
    guard(|| {
        let engine = match engine.as_mut() {
            Some(e) => e,
            None => return fail(PD_ERR_NULL_ARG, "NULL engine handle"),
        };
        let trace = match trace.as_ref() {
            Some(t) => &t.0,
            None => return fail(PD_ERR_NULL_ARG, "NULL trace handle"),
        };
        if out.is_null() {
            return fail(PD_ERR_NULL_ARG, "NULL out parameter");
        }
        match run_trace(engine.inner.as_mut(), trace) {
            Ok(result) => {
                *out = Box::into_raw(Box::new(PdResult(result)));
                PD_OK
            }
            Err(e) => fail(PD_ERR_ENGINE, e),
        }
    })
}

/// Releases a result handle. NULL is a no-op.
///
/// # Safety
/// `result` must come from `pd_engine_run` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pd_result_free(result: *mut PdResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Number of answers, or a negative error code.
///
/// # Safety
/// `result` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn pd_result_len(result: *const PdResult) -> i64 {
    match result.as_ref() {
        Some(r) => r.0.answers.len() as i64,
        None => fail(PD_ERR_NULL_ARG, "NULL result handle") as i64,
    }
}

unsafe fn answer_at<'a>(result: *const PdResult, idx: u64) -> Result<&'a Answer, c_int> {
    let result = result
        .as_ref()
        .ok_or_else(|| fail(PD_ERR_NULL_ARG, "NULL result handle"))?;
    result
        .0
        .answers
        .get(idx as usize)
        .ok_or_else(|| fail(PD_ERR_BOUNDS, format!("answer index {idx} out of range")))
}

/// 0 when answer `idx` is a scalar, 1 when it is a vector; negative on error.
///
/// # Safety
/// `result` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn pd_result_kind(result: *const PdResult, idx: u64) -> c_int {
    match answer_at(result, idx) {
        Ok(Answer::Scalar(_)) => 0,
        Ok(Answer::Vector(_)) => 1,
        Err(code) => code,
    }
}

/// Reads scalar answer `idx`. `*out_has` tells whether a value exists
/// (unreachable targets answer null); `*out_value` is written only when it
/// does.
///
/// # Safety
/// `result` must be a live result handle; `out_has` and `out_value` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pd_result_scalar(
    result: *const PdResult,
    idx: u64,
    out_has: *mut bool,
    out_value: *mut i64,
) -> c_int {
    if out_has.is_null() || out_value.is_null() {
        return fail(PD_ERR_NULL_ARG, "NULL out parameter");
    }
    match answer_at(result, idx) {
        Ok(Answer::Scalar(value)) => {
            *out_has = value.is_some();
            if let Some(v) = value {
                *out_value = *v;
            }
            PD_OK
        }
        Ok(Answer::Vector(_)) => fail(PD_ERR_KIND, format!("answer {idx} is a vector")),
        Err(code) => code,
    }
}

/// Length of vector answer `idx`, or a negative error code.
///
/// # Safety
/// `result` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn pd_result_vector_len(result: *const PdResult, idx: u64) -> i64 {
    match answer_at(result, idx) {
        Ok(Answer::Vector(values)) => values.len() as i64,
        Ok(Answer::Scalar(_)) => fail(PD_ERR_KIND, format!("answer {idx} is a scalar")) as i64,
        Err(code) => code as i64,
    }
}

/// Reads entry `j` of vector answer `idx`, with the same null convention as
/// `pd_result_scalar`.
///
/// # Safety
/// `result` must be a live result handle; `out_has` and `out_value` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pd_result_vector_get(
    result: *const PdResult,
    idx: u64,
    j: u64,
    out_has: *mut bool,
    out_value: *mut i64,
) -> c_int {
    if out_has.is_null() || out_value.is_null() {
        return fail(PD_ERR_NULL_ARG, "NULL out parameter");
    }
    match answer_at(result, idx) {
        Ok(Answer::Vector(values)) => match values.get(j as usize) {
            Some(value) => {
                *out_has = value.is_some();
                if let Some(v) = value {
                    *out_value = *v;
                }
                PD_OK
            }
            None => fail(PD_ERR_BOUNDS, format!("entry {j} out of range")),
        },
        Ok(Answer::Scalar(_)) => fail(PD_ERR_KIND, format!("answer {idx} is a scalar")),
        Err(code) => code,
    }
}

/// Serializes the result to JSONL, one {"answer": ...} line per query.
///
/// # Safety
/// `result` must be a live result handle; `out` receives a string for
/// `pd_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pd_result_to_json(result: *const PdResult, out: *mut *mut c_char) -> c_int {
    guard(|| match result.as_ref() {
        Some(r) => write_string(out, r.0.save()),
        None => fail(PD_ERR_NULL_ARG, "NULL result handle"),
    })
}

/// One-shot convenience: parse `trace_text`, build `engine_name` (NULL for
/// the baseline), replay, and return the result JSONL.
///
/// # Safety
/// `trace_text` must be a NUL-terminated string; `engine_name` and
/// `params_json` NULL or NUL-terminated; `out` receives a string for
/// `pd_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pd_replay_json(
    trace_text: *const c_char,
    engine_name: *const c_char,
    params_json: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    guard(|| {
        let mut trace: *mut PdTrace = std::ptr::null_mut();
        let code = pd_trace_parse(trace_text, &mut trace);
        if code != PD_OK {
            return code;
        }
        let mut engine: *mut PdEngine = std::ptr::null_mut();
        let code = pd_engine_new(engine_name, trace, params_json, &mut engine);
        if code != PD_OK {
            pd_trace_free(trace);
            return code;
        }
        let mut result: *mut PdResult = std::ptr::null_mut();
        let code = pd_engine_run(engine, trace, &mut result);
        let code = if code == PD_OK {
            let code = pd_result_to_json(result, out);
            pd_result_free(result);
            code
        } else {
            code
        };
        pd_engine_free(engine);
        pd_trace_free(trace);
        code
    })
}
