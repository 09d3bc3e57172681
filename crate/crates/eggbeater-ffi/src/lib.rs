//! C ABI for the egg-beater laboratory.
//!
//! All objects cross the boundary as opaque handles; all results are UTF-8
//! JSON strings allocated by this library and released with
//! [`eb_string_free`]. Every fallible call returns an [`EbStatus`]; on
//! failure a thread-local message is available via [`eb_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use eggbeater::bounds::{geometric_grid, growth_scan};
use eggbeater::geometry::ModelParams;
use eggbeater::rational::parse_rat;
use eggbeater::report::{build_floer_table, growth_to_json, word_analysis_json};
use eggbeater::word::FreeWord;
use eggbeater::Error;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Word or rational literal failed to parse.
    ParseError = 3,
    /// Parameters out of range (L, k, delta, grids).
    BadParams = 4,
    /// The computation failed (domain, degeneracy, singular system, ...).
    ComputationError = 5,
    /// An internal consistency check or oracle disagreed.
    InvariantViolation = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(e: &Error) -> EbStatus {
    let msg = CString::new(e.to_string()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
    match e {
        Error::Parse { .. } => EbStatus::ParseError,
        Error::BadParams(_) | Error::TrivialWord | Error::NotLong | Error::NotAPower => {
            EbStatus::BadParams
        }
        Error::InvariantViolation(_) | Error::TangentialCrossing => EbStatus::InvariantViolation,
        _ => EbStatus::ComputationError,
    }
}

fn set_error_text(status: EbStatus, msg: &str) -> EbStatus {
    let msg = CString::new(msg).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
    status
}

/// Message of the most recent error on this thread. The pointer stays valid
/// until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn eb_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// An opaque parsed word in the free group on V and H.
pub struct EbWord {
    word: FreeWord,
}

/// An opaque parameter set (L, k, delta).
pub struct EbParams {
    params: ModelParams,
}

/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, EbStatus> {
    if text.is_null() {
        return Err(set_error_text(EbStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| set_error_text(EbStatus::InvalidUtf8, "string argument is not UTF-8"))
}

fn emit_json(value: serde_json::Value, out: *mut *mut c_char) -> EbStatus {
    let text = serde_json::to_string_pretty(&value).expect("serializable document");
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            EbStatus::Ok
        }
        Err(_) => set_error_text(EbStatus::ComputationError, "embedded NUL in output"),
    }
}

/// Parses a word literal such as `"H^2 V^-1 H"` into a new handle.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eb_word_parse(text: *const c_char, out: *mut *mut EbWord) -> EbStatus {
    if out.is_null() {
        return set_error_text(EbStatus::NullArgument, "null output pointer");
    }
    *out = ptr::null_mut();
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match text.parse::<FreeWord>() {
        Ok(word) => {
            *out = Box::into_raw(Box::new(EbWord { word }));
            EbStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Releases a word handle. Null is ignored.
///
/// # Safety
/// `word` must come from [`eb_word_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn eb_word_free(word: *mut EbWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

/// Builds a parameter set from rational literals, e.g. `L = "5"`,
/// `delta = "1/8"`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eb_params_new(
    l: *const c_char,
    k: u64,
    delta: *const c_char,
    out: *mut *mut EbParams,
) -> EbStatus {
    if out.is_null() {
        return set_error_text(EbStatus::NullArgument, "null output pointer");
    }
    *out = ptr::null_mut();
    let (l, delta) = match (read_str(l), read_str(delta)) {
        (Ok(l), Ok(d)) => (l, d),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let build = || -> Result<ModelParams, Error> {
        ModelParams::new(parse_rat(l)?, k, parse_rat(delta)?)
    };
    match build() {
        Ok(params) => {
            *out = Box::into_raw(Box::new(EbParams { params }));
            EbStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Releases a parameter handle. Null is ignored.
///
/// # Safety
/// `params` must come from [`eb_params_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn eb_params_free(params: *mut EbParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Word analysis (schema `eggbeater.word-analysis.v1`) as a JSON string.
/// `k` selects the power used for the traced homotopy class.
///
/// # Safety
/// `word` must be a live handle; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eb_word_analysis_json(
    word: *const EbWord,
    k: u64,
    out_json: *mut *mut c_char,
) -> EbStatus {
    if word.is_null() || out_json.is_null() {
        return set_error_text(EbStatus::NullArgument, "null handle or output pointer");
    }
    *out_json = ptr::null_mut();
    match word_analysis_json(&(*word).word, k) {
        Ok(v) => emit_json(v, out_json),
        Err(e) => set_error(&e),
    }
}

/// Fixed-point census with Floer data (schema `eggbeater.floer-table.v1`)
/// as a JSON string.
///
/// # Safety
/// `word` and `params` must be live handles; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn eb_floer_table_json(
    word: *const EbWord,
    params: *const EbParams,
    out_json: *mut *mut c_char,
) -> EbStatus {
    if word.is_null() || params.is_null() || out_json.is_null() {
        return set_error_text(EbStatus::NullArgument, "null handle or output pointer");
    }
    *out_json = ptr::null_mut();
    let word = &(*word).word;
    let params = &(*params).params;
    let build = || -> Result<serde_json::Value, Error> {
        let balanced = eggbeater::word::to_balanced(word)?;
        let table = build_floer_table(&balanced, &word.to_string(), params)?;
        Ok(table.to_json())
    };
    match build() {
        Ok(v) => emit_json(v, out_json),
        Err(e) => set_error(&e),
    }
}

/// Hofer-bound growth scan over the geometric grid
/// `k_min * k_factor^i <= k_max` (schema `eggbeater.growth-scan.v1`) as a
/// JSON string. `l` and `delta` are rational literals.
///
/// # Safety
/// `word` must be a live handle; strings NUL-terminated; `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn eb_growth_scan_json(
    word: *const EbWord,
    k_min: u64,
    k_max: u64,
    k_factor: u64,
    l: *const c_char,
    delta: *const c_char,
    out_json: *mut *mut c_char,
) -> EbStatus {
    if word.is_null() || out_json.is_null() {
        return set_error_text(EbStatus::NullArgument, "null handle or output pointer");
    }
    *out_json = ptr::null_mut();
    let (l, delta) = match (read_str(l), read_str(delta)) {
        (Ok(l), Ok(d)) => (l, d),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let word = &(*word).word;
    let build = || -> Result<serde_json::Value, Error> {
        let grid = geometric_grid(k_min, k_max, k_factor)?;
        let scan = growth_scan(word, &grid, &parse_rat(l)?, &parse_rat(delta)?)?;
        Ok(growth_to_json(&scan))
    };
    match build() {
        Ok(v) => emit_json(v, out_json),
        Err(e) => set_error(&e),
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn eb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
