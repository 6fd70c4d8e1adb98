//! Exercise the C ABI the way a foreign binding would: through raw pointers
//! and status codes.

use cleaved_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_error() -> String {
    unsafe { CStr::from_ptr(clv_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn take_string(ptr: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(ptr) }.to_string_lossy().into_owned();
    unsafe { clv_string_free(ptr) };
    s
}

const TREFOIL: &str = include_str!("../../../diagrams/trefoil.tg");

#[test]
fn jones_through_the_boundary() {
    let text = CString::new(TREFOIL).unwrap();
    let mut tangle = ptr::null_mut();
    assert_eq!(unsafe { clv_tangle_parse(text.as_ptr(), &mut tangle) }, CLV_OK);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { clv_jones(tangle, &mut out) }, CLV_OK);
    assert_eq!(take_string(out), "[[2,1],[6,1],[10,1],[18,-1]]");
    unsafe { clv_tangle_free(tangle) };
}

#[test]
fn parse_errors_are_reported() {
    let text = CString::new("boundaries 1\narc 0:1-0:9\n").unwrap();
    let mut tangle = ptr::null_mut();
    assert_eq!(
        unsafe { clv_tangle_parse(text.as_ptr(), &mut tangle) },
        CLV_ERR_PARSE
    );
    assert!(last_error().contains("out of range"));
    assert_eq!(
        unsafe { clv_tangle_parse(ptr::null(), &mut tangle) },
        CLV_ERR_NULL
    );
}

#[test]
fn open_diagram_is_a_domain_error() {
    let text = CString::new("boundaries 1\narc 0:1-0:2\n").unwrap();
    let mut tangle = ptr::null_mut();
    assert_eq!(unsafe { clv_tangle_parse(text.as_ptr(), &mut tangle) }, CLV_OK);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { clv_jones(tangle, &mut out) }, CLV_ERR_DOMAIN);
    assert!(last_error().contains("boundary"));
    unsafe { clv_tangle_free(tangle) };
}

#[test]
fn braid_matrices_by_entry() {
    let word = CString::new("s1").unwrap();
    let mut matrix = ptr::null_mut();
    assert_eq!(unsafe { clv_braid_rep(2, word.as_ptr(), &mut matrix) }, CLV_OK);
    let (mut rows, mut cols) = (0u64, 0u64);
    assert_eq!(unsafe { clv_matrix_rows(matrix, &mut rows) }, CLV_OK);
    assert_eq!(unsafe { clv_matrix_cols(matrix, &mut cols) }, CLV_OK);
    assert_eq!((rows, cols), (2, 2));
    let mut entry = ptr::null_mut();
    assert_eq!(unsafe { clv_matrix_entry(matrix, 0, 0, &mut entry) }, CLV_OK);
    assert_eq!(take_string(entry), "[[2,1],[6,-1]]");
    assert_eq!(unsafe { clv_matrix_entry(matrix, 1, 1, &mut entry) }, CLV_OK);
    assert_eq!(take_string(entry), "[]");
    assert_eq!(
        unsafe { clv_matrix_entry(matrix, 5, 0, &mut entry) },
        CLV_ERR_DOMAIN
    );
    unsafe { clv_matrix_free(matrix) };

    let bad = CString::new("s7").unwrap();
    assert_eq!(
        unsafe { clv_braid_rep(2, bad.as_ptr(), &mut matrix) },
        CLV_ERR_PARSE
    );
}

#[test]
fn diagram_partition_and_basis_sizes() {
    let text = CString::new("boundaries 2\narc 0:1-0:4\narc 0:2-0:3\n").unwrap();
    let mut matrix = ptr::null_mut();
    assert_eq!(
        unsafe { clv_diagram_partition(text.as_ptr(), &mut matrix) },
        CLV_OK
    );
    let (mut rows, mut cols) = (0u64, 0u64);
    unsafe {
        clv_matrix_rows(matrix, &mut rows);
        clv_matrix_cols(matrix, &mut cols);
    }
    assert_eq!((rows, cols), (12, 1));
    unsafe { clv_matrix_free(matrix) };

    let mut size = 0u64;
    assert_eq!(unsafe { clv_basis_size(2, &mut size) }, CLV_OK);
    assert_eq!(size, 12);
    assert_eq!(unsafe { clv_basis_size(3, &mut size) }, CLV_OK);
    assert_eq!(size, 104);
}

#[test]
fn mirror_round_trip() {
    let text = CString::new(TREFOIL).unwrap();
    let mut tangle = ptr::null_mut();
    unsafe { clv_tangle_parse(text.as_ptr(), &mut tangle) };
    let mut mirrored = ptr::null_mut();
    assert_eq!(unsafe { clv_tangle_mirror(tangle, &mut mirrored) }, CLV_OK);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { clv_tangle_mirror(mirrored, &mut back) }, CLV_OK);
    let mut s1 = ptr::null_mut();
    let mut s2 = ptr::null_mut();
    unsafe {
        clv_tangle_serialize(tangle, &mut s1);
        clv_tangle_serialize(back, &mut s2);
    }
    assert_eq!(take_string(s1), take_string(s2));
    unsafe {
        clv_tangle_free(tangle);
        clv_tangle_free(mirrored);
        clv_tangle_free(back);
    }
}
