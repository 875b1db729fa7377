//! C ABI over `assoc-totient`.
//!
//! Products and tables are opaque heap handles created by `at_*_new` style
//! constructors and released with the matching `*_free`. Every fallible call
//! returns an [`AtStatus`]; on failure `at_last_error()` describes the cause
//! for the calling thread. Results go through caller-owned out-pointers.
//! Abscissae are passed as exact fractions `num/den`.
//!
//! Safety, for every `unsafe` entry point: handle arguments are null or were
//! returned by this library and not yet freed; out-pointers are null or
//! valid for one write; strings are NUL-terminated.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use assoc_totient::coeffs::{Convention, Tables};
use assoc_totient::decomp::{decompose, f1_closed, g1, reduced_identity};
use assoc_totient::volterra::{residual, E2Eval, F1Eval, Grid, SolutionFamily};
use assoc_totient::{Abscissa, Constants, Error, EulerProductSpec, ValueWithBound};
use num_complex::Complex64;

/// Status codes. Values 2 to 7 match the CLI exit codes for the same class.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtStatus {
    Ok = 0,
    /// A verification ran and did not hold.
    VerificationFailed = 1,
    Parse = 2,
    InvalidSpec = 3,
    OutOfRange = 4,
    Numerical = 5,
    Unavailable = 6,
    Io = 7,
    NullPointer = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AtComplex {
    pub re: f64,
    pub im: f64,
}

/// A value and a radius it is known or estimated to lie within.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AtValue {
    pub re: f64,
    pub im: f64,
    pub bound: f64,
    /// 1 when the bound is rigorous, 0 when heuristic.
    pub rigorous: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AtDecomposition {
    pub e2: AtValue,
    pub x_f1: AtValue,
    pub half_g1: AtValue,
    pub residual: AtComplex,
    pub residual_bound: f64,
}

/// Opaque product handle.
pub struct AtProduct {
    spec: EulerProductSpec,
}

/// Opaque handle: float tables of one product plus its constants.
pub struct AtTables {
    tables: Tables<Complex64>,
    consts: Constants,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AtStatus {
    match e.exit_code() {
        2 => AtStatus::Parse,
        3 => AtStatus::InvalidSpec,
        4 => AtStatus::OutOfRange,
        5 => AtStatus::Numerical,
        6 => AtStatus::Unavailable,
        _ => AtStatus::Io,
    }
}

struct Fail(AtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(AtStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<AtStatus, Fail>) -> AtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            AtStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<AtStatus, Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(AtStatus::Ok)
}

fn abscissa(num: i64, den: i64) -> Result<Abscissa, Fail> {
    Ok(Abscissa::new(num.into(), den.into())?)
}

fn value(v: &ValueWithBound) -> AtValue {
    AtValue { re: v.value.re, im: v.value.im, bound: v.bound, rigorous: i32::from(v.kind == assoc_totient::BoundKind::Rigorous) }
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn at_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn at_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

fn boxed_product(spec: EulerProductSpec, out: *mut *mut AtProduct) -> Result<AtStatus, Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    unsafe { out.write(Box::into_raw(Box::new(AtProduct { spec }))) };
    Ok(AtStatus::Ok)
}

/// The Riemann zeta function as a product.
#[no_mangle]
pub unsafe extern "C" fn at_product_zeta(out: *mut *mut AtProduct) -> AtStatus {
    guard(|| boxed_product(EulerProductSpec::zeta(), out))
}

/// `L(s, (D|.))` for a fundamental-style discriminant `d`.
#[no_mangle]
pub unsafe extern "C" fn at_product_kronecker(d: i64, out: *mut *mut AtProduct) -> AtStatus {
    guard(|| boxed_product(EulerProductSpec::kronecker(d)?, out))
}

/// Parses a JSON product specification (NUL-terminated UTF-8).
#[no_mangle]
pub unsafe extern "C" fn at_product_from_json(json: *const c_char, out: *mut *mut AtProduct) -> AtStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| Fail(AtStatus::Parse, e.to_string()))?;
        boxed_product(EulerProductSpec::from_json(text)?, out)
    })
}

/// Releases a product; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn at_product_free(product: *mut AtProduct) {
    if !product.is_null() {
        drop(Box::from_raw(product));
    }
}

/// `gamma(p)` for a prime `p`.
#[no_mangle]
pub unsafe extern "C" fn at_product_gamma(product: *const AtProduct, p: u64, out: *mut AtComplex) -> AtStatus {
    guard(|| {
        let g = deref(product, "product")?.spec.gamma(p)?;
        write(out, AtComplex { re: g.re, im: g.im })
    })
}

/// `C(F)` from the product over primes up to `prime_cutoff`, with a tail bound.
#[no_mangle]
pub unsafe extern "C" fn at_c_constant(product: *const AtProduct, prime_cutoff: u64, out: *mut AtValue) -> AtStatus {
    guard(|| {
        let c = assoc_totient::products::c_constant(&deref(product, "product")?.spec, prime_cutoff)?;
        write(out, value(&c))
    })
}

/// Float tables up to `n` and the constants `C(F)`, `A_1`.
#[no_mangle]
pub unsafe extern "C" fn at_tables_new(
    product: *const AtProduct,
    n: usize,
    prime_cutoff: u64,
    a1_cutoff: u64,
    out: *mut *mut AtTables,
) -> AtStatus {
    guard(|| {
        let spec = &deref(product, "product")?.spec;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let tables = Tables::build(spec, n)?;
        let consts = Constants::compute(spec, prime_cutoff, a1_cutoff)?;
        out.write(Box::into_raw(Box::new(AtTables { tables, consts })));
        Ok(AtStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn at_tables_free(tables: *mut AtTables) {
    if !tables.is_null() {
        drop(Box::from_raw(tables));
    }
}

/// `E(x, F)`, or `E_2(x, F)` when `symmetric` is nonzero.
#[no_mangle]
pub unsafe extern "C" fn at_error_term(
    tables: *const AtTables,
    num: i64,
    den: i64,
    symmetric: i32,
    out: *mut AtValue,
) -> AtStatus {
    guard(|| {
        let t = deref(tables, "tables")?;
        let conv = if symmetric != 0 { Convention::Symmetric } else { Convention::Plain };
        let v = t.tables.error_term(&t.consts.c, &abscissa(num, den)?, conv)?;
        write(out, value(&v))
    })
}

/// `f_1(x, F)`.
#[no_mangle]
pub unsafe extern "C" fn at_f1(tables: *const AtTables, num: i64, den: i64, out: *mut AtValue) -> AtStatus {
    guard(|| {
        let t = deref(tables, "tables")?;
        let v = f1_closed(&t.tables.float_view(), &abscissa(num, den)?)?.eval(&t.consts);
        write(out, value(&v))
    })
}

/// `g_1(x, F)`.
#[no_mangle]
pub unsafe extern "C" fn at_g1(tables: *const AtTables, num: i64, den: i64, out: *mut AtValue) -> AtStatus {
    guard(|| {
        let t = deref(tables, "tables")?;
        let v = g1(&t.tables.float_view(), &abscissa(num, den)?)?.eval(&t.consts);
        write(out, value(&v))
    })
}

/// `E_2 = x f_1 + g_1/2` at `x >= 1`.
#[no_mangle]
pub unsafe extern "C" fn at_decompose(
    tables: *const AtTables,
    num: i64,
    den: i64,
    out: *mut AtDecomposition,
) -> AtStatus {
    guard(|| {
        let t = deref(tables, "tables")?;
        let r = decompose(&t.tables.float_view(), &t.consts, &abscissa(num, den)?)?;
        write(
            out,
            AtDecomposition {
                e2: value(&r.e2),
                x_f1: value(&r.arithmetic_part),
                half_g1: value(&r.analytic_part),
                residual: AtComplex { re: r.residual.re, im: r.residual.im },
                residual_bound: r.residual_bound,
            },
        )
    })
}

/// Checks the constant-free reduced identity at `x` in exact rational
/// arithmetic. Returns `Ok` when it holds and `VerificationFailed` otherwise.
#[no_mangle]
pub unsafe extern "C" fn at_verify_identity(product: *const AtProduct, num: i64, den: i64) -> AtStatus {
    guard(|| {
        let spec = &deref(product, "product")?.spec;
        if !spec.is_exact() {
            return Err(Error::ModeUnavailable("exact mode needs rational roots".into()).into());
        }
        let x = abscissa(num, den)?;
        let n = x.to_f64().ceil().max(1.0) as usize;
        let tables = Tables::<num_rational::BigRational>::build(spec, n)?;
        let id = reduced_identity(&tables.view(), &x)?;
        Ok(if id.holds() { AtStatus::Ok } else { AtStatus::VerificationFailed })
    })
}

/// Sup over the grid of `|F_1 - int_0^x F_1(t)/t dt - E_2|` for the family
/// member with parameter `a`, on `[0, x_end]` with step `h = 1/m`.
#[no_mangle]
pub unsafe extern "C" fn at_volterra_residual(
    tables: *const AtTables,
    x_end: f64,
    h: f64,
    a: AtComplex,
    sup: *mut f64,
) -> AtStatus {
    guard(|| {
        let t = deref(tables, "tables")?;
        let f1 = F1Eval::new(&t.tables, &t.consts);
        let e2 = E2Eval::new(&t.tables, &t.consts);
        if x_end > e2.max_x() {
            return Err(Error::XBeyondTable { x: x_end, n: e2.max_x() as u64 }.into());
        }
        let grid = Grid::new(x_end, h)?;
        let member = SolutionFamily { f1: &f1, a: Complex64::new(a.re, a.im) }.sample(&grid);
        let r = residual(&member, |x| e2.eval(x))?;
        write(sup, r.sup)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_set_message() {
        let mut p = ptr::null_mut();
        let s = unsafe { at_product_kronecker(7, &mut p) };
        assert_ne!(s, AtStatus::Ok);
        assert!(p.is_null());
        let msg = unsafe { CStr::from_ptr(at_last_error()) }.to_str().unwrap();
        assert!(!msg.is_empty());
    }

    #[test]
    fn null_handles_are_rejected() {
        let mut v = AtValue::default();
        assert_eq!(unsafe { at_f1(ptr::null(), 1, 1, &mut v) }, AtStatus::NullPointer);
        unsafe { at_tables_free(ptr::null_mut()) };
        unsafe { at_product_free(ptr::null_mut()) };
    }
}
