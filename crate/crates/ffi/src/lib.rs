//! C ABI over `unitfrac`.
//!
//! Every fallible call returns a [`UfStatus`]; on failure a message is
//! available from [`uf_last_error`] on the same thread. Handles are opaque
//! and must be released with their `_free` function. Strings returned by the
//! library are owned by the caller and released with [`uf_string_free`].
//! Numbers wider than 64 bits cross the boundary as decimal strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use unitfrac::harness::{parse_stages, Pipeline, PipelineConfig};
use unitfrac::oracle::count_solutions;
use unitfrac::parametric::parametric_search;
use unitfrac::{verify_triple, Decomposition, Error, UnitTriple};

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UfStatus {
    UF_OK = 0,
    /// Nothing found within the configured bounds, or a triple did not verify.
    UF_NOT_FOUND = 1,
    UF_INVALID_ARGUMENT = 2,
    /// Work budget, divisor cap or overflow; a larger budget may help.
    UF_RESOURCE_LIMIT = 3,
    /// A value does not fit the requested output type.
    UF_OUT_OF_RANGE = 4,
    UF_NULL_POINTER = 5,
    UF_INTERNAL = 6,
}

use UfStatus::*;

/// Pipeline settings.
pub struct UfConfig {
    inner: PipelineConfig,
}

/// A verified decomposition of 4/n.
pub struct UfDecomposition {
    inner: Decomposition,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> UfStatus {
    if e.is_resource_limit() {
        UF_RESOURCE_LIMIT
    } else {
        match e {
            Error::InvalidInput(_)
            | Error::Config(_)
            | Error::ResidueMismatch { .. }
            | Error::ConditionViolation { .. } => UF_INVALID_ARGUMENT,
            _ => UF_INTERNAL,
        }
    }
}

fn fail(status: UfStatus, msg: impl Into<String>) -> UfStatus {
    set_error(msg);
    status
}

/// Clears the last error, runs `f`, and turns panics into `UF_INTERNAL`.
fn guard(f: impl FnOnce() -> UfStatus) -> UfStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(UF_INTERNAL, "panic inside unitfrac"),
    }
}

fn try_lib<T>(r: unitfrac::Result<T>) -> Result<T, UfStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, UfStatus> {
    if s.is_null() {
        return Err(fail(UF_NULL_POINTER, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(UF_INVALID_ARGUMENT, format!("{what} is not UTF-8")))
}

unsafe fn read_u128(s: *const c_char, what: &str) -> Result<u128, UfStatus> {
    let s = read_str(s, what)?;
    s.trim().parse().map_err(|_| {
        fail(
            UF_INVALID_ARGUMENT,
            format!("{what} = {s:?} is not a decimal integer below 2^128"),
        )
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next `uf_*` call on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn uf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn uf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default settings: all stages, r1 <= 100, w5, u5 <= 1000.
#[no_mangle]
pub extern "C" fn uf_config_new() -> *mut UfConfig {
    Box::into_raw(Box::new(UfConfig {
        inner: PipelineConfig::default(),
    }))
}

/// Parses TOML settings into a new handle.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_config_from_toml(
    toml: *const c_char,
    out: *mut *mut UfConfig,
) -> UfStatus {
    guard(|| {
        if out.is_null() {
            return fail(UF_NULL_POINTER, "out is null");
        }
        let text = match read_str(toml, "toml") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match try_lib(PipelineConfig::from_toml_str(text)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(UfConfig { inner }));
                UF_OK
            }
            Err(s) => s,
        }
    })
}

/// # Safety
/// `cfg` must come from `uf_config_new`/`uf_config_from_toml` or be null.
#[no_mangle]
pub unsafe extern "C" fn uf_config_free(cfg: *mut UfConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Stage order as a comma list, e.g. `"split,multiplier"`.
///
/// # Safety
/// `cfg` must be a live handle and `methods` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn uf_config_set_methods(
    cfg: *mut UfConfig,
    methods: *const c_char,
) -> UfStatus {
    guard(|| {
        let Some(cfg) = cfg.as_mut() else {
            return fail(UF_NULL_POINTER, "cfg is null");
        };
        let stages = match read_str(methods, "methods").and_then(|s| try_lib(parse_stages(s))) {
            Ok(s) => s,
            Err(s) => return s,
        };
        cfg.inner.methods = stages;
        UF_OK
    })
}

/// Which numeric setting [`uf_config_set_bound`] changes.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UfBound {
    UF_BOUND_R1_MAX = 0,
    UF_BOUND_W5_MAX = 1,
    UF_BOUND_U5_MAX = 2,
    UF_BOUND_WORK_BUDGET = 3,
    UF_BOUND_ORACLE_MAX_N = 4,
}

/// Sets one search bound. `which` is a `UfBound` value (taken as an integer
/// so an out-of-range value is an error, not undefined behavior); `value`
/// must be at least 1.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn uf_config_set_bound(
    cfg: *mut UfConfig,
    which: u32,
    value: u64,
) -> UfStatus {
    guard(|| {
        let Some(cfg) = cfg.as_mut() else {
            return fail(UF_NULL_POINTER, "cfg is null");
        };
        if value < 1 {
            return fail(UF_INVALID_ARGUMENT, "bounds must be at least 1");
        }
        let c = &mut cfg.inner;
        let slot = match which {
            w if w == UfBound::UF_BOUND_R1_MAX as u32 => &mut c.r1_max,
            w if w == UfBound::UF_BOUND_W5_MAX as u32 => &mut c.w5_max,
            w if w == UfBound::UF_BOUND_U5_MAX as u32 => &mut c.u5_max,
            w if w == UfBound::UF_BOUND_WORK_BUDGET as u32 => &mut c.work_budget,
            w if w == UfBound::UF_BOUND_ORACLE_MAX_N as u32 => &mut c.oracle_max_n,
            _ => return fail(UF_INVALID_ARGUMENT, format!("unknown bound {which}")),
        };
        *slot = value;
        UF_OK
    })
}

/// 1 if 4/n = 1/x + 1/y + 1/z exactly, else 0 (including any zero argument).
#[no_mangle]
pub extern "C" fn uf_verify_u64(n: u64, x: u64, y: u64, z: u64) -> i32 {
    if n == 0 || x == 0 || y == 0 || z == 0 {
        return 0;
    }
    verify_triple(
        n as u128,
        &UnitTriple {
            x: x as u128,
            y: y as u128,
            z: z as u128,
        },
    ) as i32
}

/// [`uf_verify_u64`] for decimal strings up to 2^128 - 1. `UF_OK` with
/// `*holds` set to 1 or 0.
///
/// # Safety
/// All strings must be NUL-terminated; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_verify_str(
    n: *const c_char,
    x: *const c_char,
    y: *const c_char,
    z: *const c_char,
    holds: *mut i32,
) -> UfStatus {
    guard(|| {
        if holds.is_null() {
            return fail(UF_NULL_POINTER, "holds is null");
        }
        let vals = (|| {
            Ok::<_, UfStatus>([
                read_u128(n, "n")?,
                read_u128(x, "x")?,
                read_u128(y, "y")?,
                read_u128(z, "z")?,
            ])
        })();
        let [n, x, y, z] = match vals {
            Ok(v) => v,
            Err(s) => return s,
        };
        *holds =
            (n > 0 && x > 0 && y > 0 && z > 0 && verify_triple(n, &UnitTriple { x, y, z })) as i32;
        UF_OK
    })
}

unsafe fn solve_impl(cfg: *const UfConfig, n: u128, out: *mut *mut UfDecomposition) -> UfStatus {
    if out.is_null() {
        return fail(UF_NULL_POINTER, "out is null");
    }
    *out = ptr::null_mut();
    let cfg = cfg
        .as_ref()
        .map_or_else(PipelineConfig::default, |c| c.inner.clone());
    let report = match try_lib(Pipeline::new(cfg).and_then(|p| p.solve(n))) {
        Ok(r) => r,
        Err(s) => return s,
    };
    let inconclusive = report.inconclusive();
    match report.decomposition {
        Some(d) => {
            *out = Box::into_raw(Box::new(UfDecomposition { inner: d }));
            UF_OK
        }
        None if inconclusive => fail(
            UF_RESOURCE_LIMIT,
            format!("no decomposition of 4/{n}; some stages hit resource limits"),
        ),
        None => fail(
            UF_NOT_FOUND,
            format!("no decomposition of 4/{n} within the configured bounds"),
        ),
    }
}

/// Runs the solve pipeline. `cfg` may be null for defaults. On `UF_OK`,
/// `*out` holds a handle to free with `uf_decomposition_free`; otherwise it
/// is set to null.
///
/// # Safety
/// `cfg` must be a live handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_solve(
    cfg: *const UfConfig,
    n: u64,
    out: *mut *mut UfDecomposition,
) -> UfStatus {
    guard(|| solve_impl(cfg, n as u128, out))
}

/// [`uf_solve`] with `n` as a decimal string.
///
/// # Safety
/// As [`uf_solve`]; `n` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn uf_solve_str(
    cfg: *const UfConfig,
    n: *const c_char,
    out: *mut *mut UfDecomposition,
) -> UfStatus {
    guard(|| match read_u128(n, "n") {
        Ok(n) => solve_impl(cfg, n, out),
        Err(s) => s,
    })
}

/// # Safety
/// `d` must come from `uf_solve`/`uf_solve_str` or be null.
#[no_mangle]
pub unsafe extern "C" fn uf_decomposition_free(d: *mut UfDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// `n`, `x`, `y`, `z` as 64-bit values; `UF_OUT_OF_RANGE` if any is wider
/// (use `uf_decomposition_json` then). Output pointers may be null.
///
/// # Safety
/// `d` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_decomposition_values(
    d: *const UfDecomposition,
    n: *mut u64,
    x: *mut u64,
    y: *mut u64,
    z: *mut u64,
) -> UfStatus {
    guard(|| {
        let Some(d) = d.as_ref() else {
            return fail(UF_NULL_POINTER, "decomposition is null");
        };
        let t = d.inner.triple();
        let vals = [d.inner.n(), t.x, t.y, t.z];
        let Ok(vals) = vals
            .map(u64::try_from)
            .into_iter()
            .collect::<Result<Vec<_>, _>>()
        else {
            return fail(UF_OUT_OF_RANGE, "value exceeds 64 bits");
        };
        for (p, v) in [n, x, y, z].into_iter().zip(vals) {
            if !p.is_null() {
                *p = v;
            }
        }
        UF_OK
    })
}

/// Method tag such as `"identity:F4"` or `"multiplier-split"`. Free with `uf_string_free`.
///
/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn uf_decomposition_method(d: *const UfDecomposition) -> *mut c_char {
    match d.as_ref() {
        Some(d) => into_c_string(d.inner.method().to_string()),
        None => {
            set_error("decomposition is null");
            ptr::null_mut()
        }
    }
}

/// The JSON record `{"n", "x", "y", "z", "method", "params"}`. Free with `uf_string_free`.
///
/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn uf_decomposition_json(d: *const UfDecomposition) -> *mut c_char {
    match d.as_ref() {
        Some(d) => into_c_string(d.inner.to_json()),
        None => {
            set_error("decomposition is null");
            ptr::null_mut()
        }
    }
}

/// Number of canonical solutions `x <= y <= z` of 4/n.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_oracle_count(n: u64, out: *mut u64) -> UfStatus {
    guard(|| {
        if out.is_null() {
            return fail(UF_NULL_POINTER, "out is null");
        }
        if n < 2 {
            return fail(UF_INVALID_ARGUMENT, "n must be at least 2");
        }
        *out = count_solutions(n as u128);
        UF_OK
    })
}

/// Number of `(w5, u5)` witnesses with `w5 <= w5_max`, `u5 <= u5_max` for `p = 1 mod 4`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uf_parametric_count(
    p: u64,
    w5_max: u64,
    u5_max: u64,
    out: *mut u64,
) -> UfStatus {
    guard(|| {
        if out.is_null() {
            return fail(UF_NULL_POINTER, "out is null");
        }
        match try_lib(parametric_search(p as u128, w5_max as u128, u5_max as u128)) {
            Ok(ws) => {
                *out = ws.len() as u64;
                UF_OK
            }
            Err(s) => s,
        }
    })
}
