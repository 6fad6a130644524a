//! C interface to `qcoord`.
//!
//! Handles are opaque and owned by the caller: free them with the matching
//! `*_free` function. Every string result is a NUL-terminated UTF-8 buffer
//! allocated here and released with [`qc_string_free`]. Functions return a
//! [`QcStatus`]; on failure [`qc_last_error`] describes the problem for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qcoord::cli::{eval, parse};
use qcoord::coeff::{CoeffRing, CycloRing, LaurentRing};
use qcoord::frobext::FrobeniusContext;
use qcoord::report::CheckReport;
use qcoord::rewrite::{Algebra, AlgebraConfig, Variant};
use qcoord::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Unsupported = 5,
    /// The check ran and at least one case failed.
    CheckFailed = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcVariant {
    M = 0,
    Gl = 1,
    Sl = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcOrder {
    RowMajor = 0,
    Opposite = 1,
}

enum Inner {
    Generic(Algebra<LaurentRing>),
    Root(Algebra<CycloRing>),
}

/// An algebra over `Z[q, q^-1]` or over `Z[q]/(phi_ell)`.
pub struct QcAlgebra {
    inner: Inner,
}

/// Frobenius data at an odd root of unity.
pub struct QcFrobenius {
    ctx: FrobeniusContext,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> QcStatus {
    match e {
        Error::Parse { .. } => QcStatus::Parse,
        Error::Unsupported(_) => QcStatus::Unsupported,
        _ => QcStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<QcStatus, (QcStatus, String)>) -> QcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            QcStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (QcStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (QcStatus, String)> {
    if p.is_null() {
        return Err((QcStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (QcStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn write_str(out: *mut *mut c_char, s: String) -> Result<QcStatus, (QcStatus, String)> {
    if out.is_null() {
        return Err((QcStatus::NullPointer, "null output pointer".into()));
    }
    let c = CString::new(s).map_err(|_| (QcStatus::Internal, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(QcStatus::Ok)
}

fn variant_of(v: QcVariant) -> Variant {
    match v {
        QcVariant::M => Variant::Mn,
        QcVariant::Gl => Variant::GLn,
        QcVariant::Sl => Variant::SLn,
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn qc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an algebra of size `n`. `ell = 0` keeps `q` generic; an odd
/// `ell >= 1` specializes `q` to a primitive `ell`-th root of unity.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_algebra_new(
    n: usize,
    variant: QcVariant,
    order: QcOrder,
    ell: u32,
    out: *mut *mut QcAlgebra,
) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err((QcStatus::NullPointer, "null output pointer".into()));
        }
        let v = variant_of(variant);
        let config = match order {
            QcOrder::RowMajor => AlgebraConfig::standard(n, v),
            QcOrder::Opposite => AlgebraConfig::opposite(n, v),
        }
        .map_err(lib_err)?;
        let inner = if ell == 0 {
            Inner::Generic(Algebra::new(config, LaurentRing))
        } else {
            if ell.is_multiple_of(2) {
                return Err((
                    QcStatus::InvalidArgument,
                    format!("ell must be odd, got {ell}"),
                ));
            }
            Inner::Root(Algebra::new(
                config,
                CycloRing::new(ell as i64).map_err(lib_err)?,
            ))
        };
        *out = Box::into_raw(Box::new(QcAlgebra { inner }));
        Ok(QcStatus::Ok)
    })
}

/// # Safety
/// `alg` must come from [`qc_algebra_new`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qc_algebra_free(alg: *mut QcAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

unsafe fn algebra<'a>(alg: *const QcAlgebra) -> Result<&'a QcAlgebra, (QcStatus, String)> {
    alg.as_ref()
        .ok_or_else(|| (QcStatus::NullPointer, "null algebra handle".into()))
}

fn normal_form<R: CoeffRing>(a: &Algebra<R>, exprs: &[&str]) -> Result<String, Error> {
    let mut acc = a.one();
    for src in exprs {
        let e = eval(a, &parse(src, a.n(), a.variant())?)?;
        acc = a.multiply(&acc, &e)?;
    }
    Ok(a.format(&acc))
}

fn with_algebra(
    alg: &QcAlgebra,
    generic: impl FnOnce(&Algebra<LaurentRing>) -> Result<String, Error>,
    root: impl FnOnce(&Algebra<CycloRing>) -> Result<String, Error>,
) -> Result<String, (QcStatus, String)> {
    match &alg.inner {
        Inner::Generic(a) => generic(a),
        Inner::Root(a) => root(a),
    }
    .map_err(lib_err)
}

/// Normal form of the expression `expr`, e.g. `"t[2,2] t[1,1]"`.
///
/// # Safety
/// Pointers must be valid; `expr` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qc_normal_form(
    alg: *const QcAlgebra,
    expr: *const c_char,
    out: *mut *mut c_char,
) -> QcStatus {
    guard(|| {
        let a = algebra(alg)?;
        let src = read_str(expr)?;
        let s = with_algebra(a, |g| normal_form(g, &[src]), |r| normal_form(r, &[src]))?;
        write_str(out, s)
    })
}

/// Normal form of the product `lhs * rhs`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qc_multiply(
    alg: *const QcAlgebra,
    lhs: *const c_char,
    rhs: *const c_char,
    out: *mut *mut c_char,
) -> QcStatus {
    guard(|| {
        let a = algebra(alg)?;
        let (l, r) = (read_str(lhs)?, read_str(rhs)?);
        let s = with_algebra(a, |g| normal_form(g, &[l, r]), |c| normal_form(c, &[l, r]))?;
        write_str(out, s)
    })
}

/// The quantum determinant expanded in ordered monomials.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qc_determinant(alg: *const QcAlgebra, out: *mut *mut c_char) -> QcStatus {
    guard(|| {
        let a = algebra(alg)?;
        let s = with_algebra(
            a,
            |g| Ok(g.format(&g.quantum_determinant())),
            |r| Ok(r.format(&r.quantum_determinant())),
        )?;
        write_str(out, s)
    })
}

fn finish_report(
    report: CheckReport,
    out: *mut *mut c_char,
) -> Result<QcStatus, (QcStatus, String)> {
    let passed = report.passed();
    unsafe { write_str(out, report.to_json())? };
    Ok(if passed {
        QcStatus::Ok
    } else {
        QcStatus::CheckFailed
    })
}

fn algebra_check<R: CoeffRing>(
    a: &Algebra<R>,
    name: &str,
    bound: u32,
) -> Result<CheckReport, (QcStatus, String)> {
    Ok(match name {
        "central" => a.check_central(),
        "pbw-confluence" => a.with_variant(Variant::Mn).check_confluence(bound as usize),
        "iso" => a.with_variant(Variant::GLn).check_iso(),
        "identities" => a.with_variant(Variant::GLn).check_identities(bound),
        other => {
            return Err((
                QcStatus::InvalidArgument,
                format!(
                    "unknown check {other:?}; expected central, pbw-confluence, iso or identities"
                ),
            ))
        }
    })
}

/// Runs a check (`central`, `pbw-confluence`, `iso`, `identities`) and writes
/// the JSON report to `out`. `bound` is the word length for `pbw-confluence`
/// and the monomial degree for `identities`. Returns `CheckFailed` when a case
/// fails; the report is written in that case too.
///
/// # Safety
/// Pointers must be valid; `name` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qc_algebra_check(
    alg: *const QcAlgebra,
    name: *const c_char,
    bound: u32,
    out: *mut *mut c_char,
) -> QcStatus {
    guard(|| {
        let a = algebra(alg)?;
        let name = read_str(name)?;
        let report = match &a.inner {
            Inner::Generic(g) => algebra_check(g, name, bound)?,
            Inner::Root(r) => algebra_check(r, name, bound)?,
        };
        finish_report(report, out)
    })
}

/// Frobenius data for `M_n` (`variant = M`) or `GL_n` at odd `ell`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_frobenius_new(
    n: usize,
    variant: QcVariant,
    ell: u32,
    out: *mut *mut QcFrobenius,
) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err((QcStatus::NullPointer, "null output pointer".into()));
        }
        let ctx = FrobeniusContext::new(n, ell as i64, variant_of(variant)).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(QcFrobenius { ctx }));
        Ok(QcStatus::Ok)
    })
}

/// # Safety
/// `f` must come from [`qc_frobenius_new`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn qc_frobenius_free(f: *mut QcFrobenius) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

unsafe fn frobenius<'a>(f: *const QcFrobenius) -> Result<&'a FrobeniusContext, (QcStatus, String)> {
    f.as_ref()
        .map(|f| &f.ctx)
        .ok_or_else(|| (QcStatus::NullPointer, "null Frobenius handle".into()))
}

/// `Phi(expr)`, a polynomial in the classical generators `tbar[i,j]`.
///
/// # Safety
/// Pointers must be valid; `expr` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qc_phi(
    f: *const QcFrobenius,
    expr: *const c_char,
    out: *mut *mut c_char,
) -> QcStatus {
    guard(|| {
        let ctx = frobenius(f)?;
        let alg = ctx.root().algebra();
        let src = read_str(expr)?;
        let e = parse(src, ctx.n(), alg.variant())
            .and_then(|x| eval(alg, &x))
            .map_err(lib_err)?;
        let p = ctx.phi(&e).map_err(lib_err)?;
        write_str(out, ctx.root().format_classical(&p))
    })
}

/// Image of `expr` under the Nakayama twist.
///
/// # Safety
/// Pointers must be valid; `expr` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qc_nakayama(
    f: *const QcFrobenius,
    expr: *const c_char,
    out: *mut *mut c_char,
) -> QcStatus {
    guard(|| {
        let ctx = frobenius(f)?;
        let alg = ctx.root().algebra();
        let src = read_str(expr)?;
        let e = parse(src, ctx.n(), alg.variant())
            .and_then(|x| eval(alg, &x))
            .map_err(lib_err)?;
        write_str(out, alg.format(&ctx.nakayama(&e)))
    })
}

/// Runs `frobenius` (centrality of the Frobenius image) or `nakayama` and
/// writes the JSON report. `pairs` bounds the pairing sample for `nakayama`
/// when the residue basis has more than 81 elements.
///
/// # Safety
/// Pointers must be valid; `name` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qc_frobenius_check(
    f: *const QcFrobenius,
    name: *const c_char,
    pairs: usize,
    out: *mut *mut c_char,
) -> QcStatus {
    guard(|| {
        let ctx = frobenius(f)?;
        let report = match read_str(name)? {
            "frobenius" => ctx.root().check_frobenius_central(),
            "nakayama" => ctx.check_nakayama(pairs),
            other => {
                return Err((
                    QcStatus::InvalidArgument,
                    format!("unknown check {other:?}; expected frobenius or nakayama"),
                ))
            }
        };
        finish_report(report, out)
    })
}
