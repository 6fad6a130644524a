use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use qcoord_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Takes ownership of a returned string.
unsafe fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    qc_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = qc_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

unsafe fn algebra(n: usize, variant: QcVariant, order: QcOrder, ell: u32) -> *mut QcAlgebra {
    let mut a = ptr::null_mut();
    assert_eq!(qc_algebra_new(n, variant, order, ell, &mut a), QcStatus::Ok);
    a
}

#[test]
fn determinant_and_normal_forms() {
    unsafe {
        let a = algebra(2, QcVariant::M, QcOrder::RowMajor, 0);
        let mut out = ptr::null_mut();
        assert_eq!(qc_determinant(a, &mut out), QcStatus::Ok);
        assert_eq!(take(out), "t[1,1] t[2,2] - q t[1,2] t[2,1]");

        assert_eq!(
            qc_normal_form(a, cstr("t[2,2] t[1,1]").as_ptr(), &mut out),
            QcStatus::Ok
        );
        assert_eq!(take(out), "t[1,1] t[2,2] + (q^-1 - q) t[1,2] t[2,1]");

        assert_eq!(
            qc_multiply(
                a,
                cstr("t[1,2]").as_ptr(),
                cstr("t[1,1]").as_ptr(),
                &mut out
            ),
            QcStatus::Ok
        );
        assert_eq!(take(out), "q^-1 t[1,1] t[1,2]");
        qc_algebra_free(a);

        let sl = algebra(2, QcVariant::Sl, QcOrder::RowMajor, 0);
        assert_eq!(
            qc_normal_form(
                sl,
                cstr("t[1,1] t[2,2] - q t[1,2] t[2,1]").as_ptr(),
                &mut out
            ),
            QcStatus::Ok
        );
        assert_eq!(take(out), "1");
        qc_algebra_free(sl);

        let op = algebra(2, QcVariant::Gl, QcOrder::Opposite, 0);
        assert_eq!(
            qc_normal_form(op, cstr("t[1,2] t[2,1]").as_ptr(), &mut out),
            QcStatus::Ok
        );
        assert_eq!(take(out), "q t[2,2] t[1,1] - q D");
        qc_algebra_free(op);
    }
}

#[test]
fn root_of_unity_algebra() {
    unsafe {
        let a = algebra(2, QcVariant::M, QcOrder::RowMajor, 3);
        let mut out = ptr::null_mut();
        assert_eq!(
            qc_normal_form(a, cstr("q^3 - 1").as_ptr(), &mut out),
            QcStatus::Ok
        );
        assert_eq!(take(out), "0");
        qc_algebra_free(a);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(
            qc_algebra_new(2, QcVariant::M, QcOrder::RowMajor, 4, &mut a),
            QcStatus::InvalidArgument
        );
        assert!(a.is_null());
        assert!(last_error().contains("odd"));
        assert_eq!(
            qc_algebra_new(0, QcVariant::M, QcOrder::RowMajor, 0, &mut a),
            QcStatus::InvalidArgument
        );
        assert_eq!(
            qc_algebra_new(2, QcVariant::M, QcOrder::RowMajor, 0, ptr::null_mut()),
            QcStatus::NullPointer
        );

        let a = algebra(2, QcVariant::M, QcOrder::RowMajor, 0);
        let mut out = ptr::null_mut();
        assert_eq!(
            qc_normal_form(a, cstr("t[1,3]").as_ptr(), &mut out),
            QcStatus::Parse
        );
        assert!(out.is_null());
        assert!(last_error().contains("out of range"));
        assert_eq!(
            qc_normal_form(a, ptr::null(), &mut out),
            QcStatus::NullPointer
        );
        assert_eq!(
            qc_normal_form(ptr::null(), cstr("1").as_ptr(), &mut out),
            QcStatus::NullPointer
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            qc_normal_form(a, bad.as_ptr().cast(), &mut out),
            QcStatus::InvalidUtf8
        );
        assert_eq!(
            qc_algebra_check(a, cstr("bogus").as_ptr(), 3, &mut out),
            QcStatus::InvalidArgument
        );
        qc_algebra_free(a);

        // Freeing NULL is a no-op.
        qc_algebra_free(ptr::null_mut());
        qc_frobenius_free(ptr::null_mut());
        qc_string_free(ptr::null_mut());
    }
}

#[test]
fn algebra_checks_return_json_reports() {
    unsafe {
        let a = algebra(2, QcVariant::M, QcOrder::RowMajor, 0);
        let mut out = ptr::null_mut();
        assert_eq!(
            qc_algebra_check(a, cstr("central").as_ptr(), 0, &mut out),
            QcStatus::Ok
        );
        let json = take(out);
        assert!(json.contains("\"schema\": 1"));
        assert!(json.contains("\"check\": \"central\""));
        assert_eq!(
            qc_algebra_check(a, cstr("pbw-confluence").as_ptr(), 3, &mut out),
            QcStatus::Ok
        );
        take(out);
        assert_eq!(
            qc_algebra_check(a, cstr("iso").as_ptr(), 0, &mut out),
            QcStatus::Ok
        );
        take(out);
        // The stated reversed expansion differs from D_q.
        assert_eq!(
            qc_algebra_check(a, cstr("identities").as_ptr(), 2, &mut out),
            QcStatus::CheckFailed
        );
        assert!(take(out).contains("\"pass\": false"));
        qc_algebra_free(a);
    }
}

#[test]
fn frobenius_handle() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(qc_frobenius_new(2, QcVariant::M, 3, &mut f), QcStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(
            qc_phi(
                f,
                cstr("t[1,1]^2 t[1,2]^2 t[2,1]^2 t[2,2]^2").as_ptr(),
                &mut out
            ),
            QcStatus::Ok
        );
        assert_eq!(take(out), "1");
        assert_eq!(
            qc_phi(
                f,
                cstr("t[1,1]^5 t[1,2]^2 t[2,1]^2 t[2,2]^2").as_ptr(),
                &mut out
            ),
            QcStatus::Ok
        );
        assert_eq!(take(out), "tbar[1,1]");
        assert_eq!(
            qc_nakayama(f, cstr("t[1,1] t[2,2]").as_ptr(), &mut out),
            QcStatus::Ok
        );
        assert_eq!(take(out), "t[1,1] t[2,2]");
        assert_eq!(
            qc_frobenius_check(f, cstr("frobenius").as_ptr(), 0, &mut out),
            QcStatus::Ok
        );
        take(out);
        assert_eq!(
            qc_frobenius_check(f, cstr("nakayama").as_ptr(), 0, &mut out),
            QcStatus::CheckFailed
        );
        take(out);
        qc_frobenius_free(f);

        let mut g = ptr::null_mut();
        assert_eq!(
            qc_frobenius_new(2, QcVariant::Sl, 3, &mut g),
            QcStatus::Unsupported
        );
        assert!(g.is_null());
    }
}

#[test]
fn header_declares_the_interface_and_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/qcoord_ffi.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "qc_last_error",
        "qc_string_free",
        "qc_algebra_new",
        "qc_algebra_free",
        "qc_normal_form",
        "qc_multiply",
        "qc_determinant",
        "qc_algebra_check",
        "qc_frobenius_new",
        "qc_frobenius_free",
        "qc_phi",
        "qc_nakayama",
        "qc_frobenius_check",
        "QC_STATUS_CHECK_FAILED",
        "typedef struct QcAlgebra QcAlgebra",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    // Syntax check with the system C compiler when one is installed.
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        return;
    };
    assert!(status.success());
}
