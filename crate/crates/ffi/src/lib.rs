//! C ABI for the cleaved planar algebra library.
//!
//! Handles are opaque pointers created and freed here; every fallible call
//! returns a status code and leaves a message for [`clv_last_error`] on
//! failure. Polynomials cross the boundary in the documented serialization:
//! a JSON list of [doubled-exponent, coefficient] pairs in ascending
//! exponent order.

use cleaved_core::braid::{braid_rep, BraidWord};
use cleaved_core::partition::{partition_map, PartitionMatrix};
use cleaved_core::ring::HalfLaurent;
use cleaved_core::tangle::TangleDiagram;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

/// Status codes returned by every fallible call.
pub const CLV_OK: i32 = 0;
pub const CLV_ERR_DOMAIN: i32 = 1;
pub const CLV_ERR_PARSE: i32 = 2;
pub const CLV_ERR_NULL: i32 = 3;
pub const CLV_ERR_UTF8: i32 = 4;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn clv_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// An opaque parsed tangle (a planar diagram is a crossing-free tangle).
pub struct ClvTangle(TangleDiagram);

/// An opaque exact matrix between cleaved-link modules.
pub struct ClvMatrix(PartitionMatrix);

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, i32> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(CLV_ERR_NULL);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        CLV_ERR_UTF8
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> i32 {
    if out.is_null() {
        set_error("null output pointer");
        return CLV_ERR_NULL;
    }
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            CLV_OK
        }
        Err(_) => {
            set_error("output contained an interior NUL");
            CLV_ERR_DOMAIN
        }
    }
}

fn poly_json(p: &HalfLaurent) -> String {
    let mut s = String::from("[");
    for (i, (e, c)) in p.to_pairs().into_iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&format!("[{},{}]", e, c));
    }
    s.push(']');
    s
}

/// Parse a tangle (or diagram) from its text format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn clv_tangle_parse(
    text: *const c_char,
    out: *mut *mut ClvTangle,
) -> i32 {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(code) => return code,
    };
    if out.is_null() {
        set_error("null output pointer");
        return CLV_ERR_NULL;
    }
    match TangleDiagram::parse(text) {
        Ok(t) => {
            *out = Box::into_raw(Box::new(ClvTangle(t)));
            CLV_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            CLV_ERR_PARSE
        }
    }
}

/// # Safety
/// `tangle` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn clv_tangle_free(tangle: *mut ClvTangle) {
    if !tangle.is_null() {
        drop(Box::from_raw(tangle));
    }
}

/// Serialize back to the text format.
///
/// # Safety
/// `tangle` must be a live handle; free the string with `clv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn clv_tangle_serialize(
    tangle: *const ClvTangle,
    out: *mut *mut c_char,
) -> i32 {
    if tangle.is_null() {
        set_error("null tangle handle");
        return CLV_ERR_NULL;
    }
    give_string((*tangle).0.serialize(), out)
}

/// Mirror image: every crossing flipped.
///
/// # Safety
/// `tangle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn clv_tangle_mirror(
    tangle: *const ClvTangle,
    out: *mut *mut ClvTangle,
) -> i32 {
    if tangle.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CLV_ERR_NULL;
    }
    *out = Box::into_raw(Box::new(ClvTangle((*tangle).0.mirror())));
    CLV_OK
}

/// Jones polynomial of a closed tangle as serialized pairs.
///
/// # Safety
/// `tangle` must be a live handle; free the string with `clv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn clv_jones(tangle: *const ClvTangle, out: *mut *mut c_char) -> i32 {
    if tangle.is_null() {
        set_error("null tangle handle");
        return CLV_ERR_NULL;
    }
    match (*tangle).0.jones_closed() {
        Ok(p) => give_string(poly_json(&p), out),
        Err(e) => {
            set_error(&e.to_string());
            CLV_ERR_DOMAIN
        }
    }
}

/// The partition matrix of a tangle.
///
/// # Safety
/// `tangle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn clv_tangle_partition(
    tangle: *const ClvTangle,
    out: *mut *mut ClvMatrix,
) -> i32 {
    if tangle.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CLV_ERR_NULL;
    }
    match (*tangle).0.partition_tangle() {
        Ok(z) => {
            *out = Box::into_raw(Box::new(ClvMatrix(z)));
            CLV_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            CLV_ERR_DOMAIN
        }
    }
}

/// The partition matrix of a crossing-free diagram given in text form.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn clv_diagram_partition(
    text: *const c_char,
    out: *mut *mut ClvMatrix,
) -> i32 {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(code) => return code,
    };
    if out.is_null() {
        set_error("null output pointer");
        return CLV_ERR_NULL;
    }
    let diagram = match cleaved_core::diagram::PlanarDiagram::parse(text) {
        Ok(d) => d,
        Err(e) => {
            set_error(&e.to_string());
            return CLV_ERR_PARSE;
        }
    };
    match partition_map(&diagram) {
        Ok(z) => {
            *out = Box::into_raw(Box::new(ClvMatrix(z)));
            CLV_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            CLV_ERR_DOMAIN
        }
    }
}

/// Representation matrix of a braid word such as "s1 s2^-1".
///
/// # Safety
/// `word` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn clv_braid_rep(
    strands: u32,
    word: *const c_char,
    out: *mut *mut ClvMatrix,
) -> i32 {
    let word = match read_str(word) {
        Ok(w) => w,
        Err(code) => return code,
    };
    if out.is_null() {
        set_error("null output pointer");
        return CLV_ERR_NULL;
    }
    let parsed = match BraidWord::parse(strands, word) {
        Ok(w) => w,
        Err(e) => {
            set_error(&e.to_string());
            return CLV_ERR_PARSE;
        }
    };
    match braid_rep(&parsed) {
        Ok(z) => {
            *out = Box::into_raw(Box::new(ClvMatrix(z)));
            CLV_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            CLV_ERR_DOMAIN
        }
    }
}

/// # Safety
/// `matrix` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn clv_matrix_free(matrix: *mut ClvMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// # Safety
/// `matrix` must be a live handle and `rows` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn clv_matrix_rows(matrix: *const ClvMatrix, rows: *mut u64) -> i32 {
    if matrix.is_null() || rows.is_null() {
        set_error("null pointer argument");
        return CLV_ERR_NULL;
    }
    *rows = (*matrix).0.rows() as u64;
    CLV_OK
}

/// # Safety
/// `matrix` must be a live handle and `cols` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn clv_matrix_cols(matrix: *const ClvMatrix, cols: *mut u64) -> i32 {
    if matrix.is_null() || cols.is_null() {
        set_error("null pointer argument");
        return CLV_ERR_NULL;
    }
    *cols = (*matrix).0.cols();
    CLV_OK
}

/// A single entry as serialized pairs; the zero polynomial is "[]".
///
/// # Safety
/// `matrix` must be a live handle; free the string with `clv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn clv_matrix_entry(
    matrix: *const ClvMatrix,
    row: u64,
    col: u64,
    out: *mut *mut c_char,
) -> i32 {
    if matrix.is_null() {
        set_error("null matrix handle");
        return CLV_ERR_NULL;
    }
    let m = &(*matrix).0;
    if row >= m.rows() as u64 || col >= m.cols() {
        set_error("matrix index out of range");
        return CLV_ERR_DOMAIN;
    }
    give_string(poly_json(&m.entry(row as usize, col)), out)
}

/// Number of generators of I_{2n}.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn clv_basis_size(n: u32, out: *mut u64) -> i32 {
    if out.is_null() {
        set_error("null output pointer");
        return CLV_ERR_NULL;
    }
    if n > 12 {
        set_error("basis dimension capped at n = 12");
        return CLV_ERR_DOMAIN;
    }
    *out = cleaved_core::cleaved::dimension(n);
    CLV_OK
}

/// # Safety
/// `s` must have been returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn clv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
