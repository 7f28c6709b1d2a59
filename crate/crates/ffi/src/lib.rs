//! C ABI over `nilorb`.
//!
//! Every fallible function returns a [`NilorbStatus`]; on failure the
//! message is kept per thread and read with [`nilorb_last_error_message`].
//! Objects are opaque handles released by their `_free` function, and
//! strings handed out by the library are released with [`nilorb_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nilorb::classify::classify;
use nilorb::finiteness::is_finite;
use nilorb::invariants::{builtin, evaluate, Builtin, SemiInvDatum};
use nilorb::linalg::{format_rat, parse_rat};
use nilorb::normal_form::normal_form;
use nilorb::patterns::enumerate;
use nilorb::poset::{hasse, to_dot, OrbitPoset};
use nilorb::{BlockData, Error, RatMatrix};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilorbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Shape = 4,
    Index = 5,
    Blocks = 6,
    Pattern = 7,
    NotNilpotent = 8,
    NotGeneric = 9,
    DimensionVector = 10,
    Datum = 11,
    Precondition = 12,
    Construction = 13,
    Panic = 14,
}

impl From<&Error> for NilorbStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Shape(_) => NilorbStatus::Shape,
            Error::Index(_) => NilorbStatus::Index,
            Error::Blocks(_) => NilorbStatus::Blocks,
            Error::Pattern(_) => NilorbStatus::Pattern,
            Error::NotNilpotent(_) => NilorbStatus::NotNilpotent,
            Error::NotGeneric(_) => NilorbStatus::NotGeneric,
            Error::DimensionVector(_) => NilorbStatus::DimensionVector,
            Error::Datum(_) => NilorbStatus::Datum,
            Error::Precondition(_) => NilorbStatus::Precondition,
            Error::Construction(_) => NilorbStatus::Construction,
            Error::Parse(_) => NilorbStatus::Parse,
        }
    }
}

/// Exact rational matrix.
pub struct NilorbMatrix(RatMatrix);

/// Block sizes of a parabolic subgroup.
pub struct NilorbBlocks(BlockData);

/// Orbit poset for fixed blocks.
pub struct NilorbPoset(OrbitPoset);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(NilorbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn null() -> Failure {
    Failure(NilorbStatus::NullPointer, "null pointer argument".into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NilorbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NilorbStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NilorbStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(NilorbStatus::InvalidUtf8, e.to_string()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(NilorbStatus::Parse, e.to_string()))?;
    put(out, c.into_raw())
}

unsafe fn put_box<T>(out: *mut *mut T, v: T) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(v)))
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn nilorb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a `rows x cols` matrix from row-major numerators and denominators.
/// `den` may be null for integer entries.
#[no_mangle]
pub unsafe extern "C" fn nilorb_matrix_new(
    rows: usize,
    cols: usize,
    num: *const i64,
    den: *const i64,
    out: *mut *mut NilorbMatrix,
) -> NilorbStatus {
    guard(|| {
        let len = rows.checked_mul(cols).ok_or_else(|| Failure(NilorbStatus::Shape, "size overflow".into()))?;
        if num.is_null() && len > 0 {
            return Err(null());
        }
        let nums = if len == 0 { &[][..] } else { std::slice::from_raw_parts(num, len) };
        let dens = if den.is_null() || len == 0 { None } else { Some(std::slice::from_raw_parts(den, len)) };
        let mut data = Vec::with_capacity(len);
        for (k, &a) in nums.iter().enumerate() {
            let b = dens.map_or(1, |d| d[k]);
            if b == 0 {
                return Err(Failure(NilorbStatus::Parse, format!("zero denominator at entry {k}")));
            }
            data.push(nilorb::linalg::ratio(a, b));
        }
        put_box(out, NilorbMatrix(RatMatrix::new(rows, cols, data)?))
    })
}

/// Parses `{"rows":..,"cols":..,"entries":[..]}` with entries as exact rational strings.
#[no_mangle]
pub unsafe extern "C" fn nilorb_matrix_from_json(json: *const c_char, out: *mut *mut NilorbMatrix) -> NilorbStatus {
    guard(|| put_box(out, NilorbMatrix(RatMatrix::from_json(text(json)?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_matrix_to_json(m: *const NilorbMatrix, out: *mut *mut c_char) -> NilorbStatus {
    guard(|| put_string(out, borrow(m)?.0.to_json()))
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_matrix_rows(m: *const NilorbMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_matrix_cols(m: *const NilorbMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Entry `(i, j)` (0-based) as a string such as `"-3/4"`.
#[no_mangle]
pub unsafe extern "C" fn nilorb_matrix_entry(
    m: *const NilorbMatrix,
    i: usize,
    j: usize,
    out: *mut *mut c_char,
) -> NilorbStatus {
    guard(|| {
        let m = &borrow(m)?.0;
        if i >= m.rows() || j >= m.cols() {
            return Err(Error::Index(format!("({i}, {j}) outside {}x{}", m.rows(), m.cols())).into());
        }
        put_string(out, format_rat(&m[(i, j)]))
    })
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_matrix_free(m: *mut NilorbMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_blocks_new(
    sizes: *const usize,
    len: usize,
    out: *mut *mut NilorbBlocks,
) -> NilorbStatus {
    guard(|| {
        if sizes.is_null() && len > 0 {
            return Err(null());
        }
        let sizes = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(sizes, len).to_vec() };
        put_box(out, NilorbBlocks(BlockData::new(sizes)?))
    })
}

/// Parses a comma separated list such as `"2,1,2"`.
#[no_mangle]
pub unsafe extern "C" fn nilorb_blocks_parse(s: *const c_char, out: *mut *mut NilorbBlocks) -> NilorbStatus {
    guard(|| put_box(out, NilorbBlocks(text(s)?.parse()?)))
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_blocks_n(b: *const NilorbBlocks) -> usize {
    b.as_ref().map_or(0, |b| b.0.n())
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_blocks_free(b: *mut NilorbBlocks) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Number of `P`-orbits on 2-nilpotent matrices.
#[no_mangle]
pub unsafe extern "C" fn nilorb_orbit_count(b: *const NilorbBlocks, out: *mut usize) -> NilorbStatus {
    guard(|| put(out, enumerate(&borrow(b)?.0).len()))
}

/// Enhanced oriented link pattern of a 2-nilpotent matrix, as JSON.
#[no_mangle]
pub unsafe extern "C" fn nilorb_classify(
    m: *const NilorbMatrix,
    b: *const NilorbBlocks,
    out: *mut *mut c_char,
) -> NilorbStatus {
    guard(|| put_string(out, classify(&borrow(m)?.0, &borrow(b)?.0)?.to_json()))
}

/// Finiteness verdict for `P` acting on `x`-nilpotent matrices. `json` may be
/// null; otherwise it receives the full verdict.
#[no_mangle]
pub unsafe extern "C" fn nilorb_is_finite(
    b: *const NilorbBlocks,
    x: usize,
    finite: *mut bool,
    json: *mut *mut c_char,
) -> NilorbStatus {
    guard(|| {
        let v = is_finite(&borrow(b)?.0, x)?;
        put(finite, v.finite)?;
        if !json.is_null() {
            let s = serde_json::to_string(&v).map_err(|e| Failure(NilorbStatus::Parse, e.to_string()))?;
            put_string(json, s)?;
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_hasse(b: *const NilorbBlocks, out: *mut *mut NilorbPoset) -> NilorbStatus {
    guard(|| put_box(out, NilorbPoset(hasse(&borrow(b)?.0))))
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_poset_len(p: *const NilorbPoset) -> usize {
    p.as_ref().map_or(0, |p| p.0.elements.len())
}

/// Whether element `j` lies in the closure of element `i`.
#[no_mangle]
pub unsafe extern "C" fn nilorb_poset_leq(p: *const NilorbPoset, i: usize, j: usize, out: *mut bool) -> NilorbStatus {
    guard(|| {
        let p = &borrow(p)?.0;
        let m = p.elements.len();
        if i >= m || j >= m {
            return Err(Error::Index(format!("({i}, {j}) outside a poset of {m} elements")).into());
        }
        put(out, p.relation[i][j])
    })
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_poset_to_json(p: *const NilorbPoset, out: *mut *mut c_char) -> NilorbStatus {
    guard(|| put_string(out, borrow(p)?.0.to_json()))
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_poset_to_dot(p: *const NilorbPoset, out: *mut *mut c_char) -> NilorbStatus {
    guard(|| put_string(out, to_dot(&borrow(p)?.0)))
}

#[no_mangle]
pub unsafe extern "C" fn nilorb_poset_free(p: *mut NilorbPoset) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Generic normal form `H = g N g^-1`. `g` may be null.
#[no_mangle]
pub unsafe extern "C" fn nilorb_normal_form(
    m: *const NilorbMatrix,
    b: *const NilorbBlocks,
    h: *mut *mut NilorbMatrix,
    g: *mut *mut NilorbMatrix,
) -> NilorbStatus {
    guard(|| {
        if h.is_null() {
            return Err(null());
        }
        let nf = normal_form(&borrow(m)?.0, &borrow(b)?.0)?;
        if !g.is_null() {
            put_box(g, NilorbMatrix(nf.g))?;
        }
        put_box(h, NilorbMatrix(nf.h))
    })
}

/// Evaluates a semi-invariant given either as datum JSON or, when `datum`
/// does not start with `{`, as a builtin name such as `"det_2"` or `"f_{3,1}"`.
/// The value is written as an exact rational string.
#[no_mangle]
pub unsafe extern "C" fn nilorb_invariant_eval(
    datum: *const c_char,
    m: *const NilorbMatrix,
    out: *mut *mut c_char,
) -> NilorbStatus {
    guard(|| {
        let spec = text(datum)?.trim();
        let m = &borrow(m)?.0;
        let d = if spec.starts_with('{') {
            SemiInvDatum::from_json(spec)?
        } else {
            builtin(spec.parse::<Builtin>()?, m.rows())?
        };
        put_string(out, format_rat(&evaluate(&d, m)?))
    })
}

/// Parses an exact rational and writes its normalized form; a cheap way for
/// callers to validate input.
#[no_mangle]
pub unsafe extern "C" fn nilorb_rational_normalize(s: *const c_char, out: *mut *mut c_char) -> NilorbStatus {
    guard(|| put_string(out, format_rat(&parse_rat(text(s)?)?)))
}
