//! C interface to `krull`.
//!
//! Objects cross the boundary as opaque heap handles (`KrullField`,
//! `KrullElement`, `KrullReport`) created by `*_new`/`*_parse`/`*_run`
//! functions and released with the matching `*_free`. Every fallible call
//! returns an `int32_t` status (`KRULL_OK` on success) and writes results
//! through out-pointers. Strings returned to C are owned by the caller and
//! must be released with [`krull_string_free`]. The message of the most
//! recent failure on the calling thread is available from
//! [`krull_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use krull::kummer::cyclotomic_data;
use krull::padic::{jr_integer_test, LocalField, LocalFieldElement, PadicNumber, Valuation};
use krull::report::VerificationReport;
use krull::suites::{run_suite, SuiteParams};
use krull::units::{p_rank, residue_of_p_over_uniformizer};
use krull::Error;

pub const KRULL_OK: i32 = 0;
pub const KRULL_ERR_NULL_POINTER: i32 = 1;
pub const KRULL_ERR_INVALID_UTF8: i32 = 2;
pub const KRULL_ERR_PANIC: i32 = 3;
pub const KRULL_ERR_PRECISION_EXHAUSTED: i32 = 10;
pub const KRULL_ERR_NOT_INTEGRAL: i32 = 11;
pub const KRULL_ERR_HENSEL_CONDITION_FAILED: i32 = 12;
pub const KRULL_ERR_NON_POSITIVE_ELEMENT: i32 = 13;
pub const KRULL_ERR_SIZE_LIMIT: i32 = 14;
pub const KRULL_ERR_ZETA_P_MISSING: i32 = 15;
pub const KRULL_ERR_Q_EQUALS_P: i32 = 16;
pub const KRULL_ERR_PRECONDITION_FAILED: i32 = 17;
pub const KRULL_ERR_REDUCIBLE: i32 = 18;
pub const KRULL_ERR_NOT_IN_MAXIMAL_IDEAL: i32 = 19;
pub const KRULL_ERR_WINDOW_EXHAUSTED: i32 = 20;
pub const KRULL_ERR_NO_COMPATIBLE_ROOT: i32 = 21;
pub const KRULL_ERR_DEPTH_EXHAUSTED: i32 = 22;
pub const KRULL_ERR_UNKNOWN_SUITE: i32 = 23;
pub const KRULL_ERR_PARSE: i32 = 24;
pub const KRULL_ERR_INVALID_FIELD: i32 = 25;
pub const KRULL_ERR_INVALID_GROUP: i32 = 26;
pub const KRULL_ERR_NOT_APPLICABLE: i32 = 27;
pub const KRULL_ERR_IO: i32 = 28;

/// Opaque local field.
pub struct KrullField(LocalField);

/// Opaque element of a [`KrullField`].
pub struct KrullElement(LocalFieldElement);

/// Opaque verification report.
pub struct KrullReport(VerificationReport);

/// Suite parameters; zero means "use the suite default" for `p`, `q`, `n`,
/// `precision` and `depth`; a null `field` means no field descriptor.
#[repr(C)]
pub struct KrullSuiteParams {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub precision: u32,
    pub depth: u32,
    pub seed: u64,
    pub field: *const c_char,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted(_) => KRULL_ERR_PRECISION_EXHAUSTED,
        Error::NotIntegral(_) => KRULL_ERR_NOT_INTEGRAL,
        Error::HenselConditionFailed { .. } => KRULL_ERR_HENSEL_CONDITION_FAILED,
        Error::NonPositiveElement => KRULL_ERR_NON_POSITIVE_ELEMENT,
        Error::SizeLimit { .. } => KRULL_ERR_SIZE_LIMIT,
        Error::ZetaPMissing(_) => KRULL_ERR_ZETA_P_MISSING,
        Error::QEqualsP(_) => KRULL_ERR_Q_EQUALS_P,
        Error::PreconditionFailed(_) => KRULL_ERR_PRECONDITION_FAILED,
        Error::Reducible(_) => KRULL_ERR_REDUCIBLE,
        Error::NotInMaximalIdeal(_) => KRULL_ERR_NOT_IN_MAXIMAL_IDEAL,
        Error::WindowExhausted(_) => KRULL_ERR_WINDOW_EXHAUSTED,
        Error::NoCompatibleRoot(_) => KRULL_ERR_NO_COMPATIBLE_ROOT,
        Error::DepthExhausted { .. } => KRULL_ERR_DEPTH_EXHAUSTED,
        Error::UnknownSuite(_) => KRULL_ERR_UNKNOWN_SUITE,
        Error::Parse { .. } => KRULL_ERR_PARSE,
        Error::InvalidField(_) => KRULL_ERR_INVALID_FIELD,
        Error::InvalidGroup(_) => KRULL_ERR_INVALID_GROUP,
        Error::NotApplicable(_) => KRULL_ERR_NOT_APPLICABLE,
        Error::Io(_) => KRULL_ERR_IO,
    }
}

fn fail(code: i32, msg: String) -> i32 {
    LAST_ERROR.with(|l| *l.borrow_mut() = Some(msg));
    code
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), i32>) -> i32 {
    LAST_ERROR.with(|l| *l.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KRULL_OK,
        Ok(Err(code)) => code,
        Err(_) => fail(KRULL_ERR_PANIC, "internal panic".into()),
    }
}

trait OrCode<T> {
    fn or_code(self) -> Result<T, i32>;
}

impl<T> OrCode<T> for krull::Result<T> {
    fn or_code(self) -> Result<T, i32> {
        self.map_err(|e| fail(code_of(&e), e.to_string()))
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, i32> {
    p.as_ref().ok_or_else(|| fail(KRULL_ERR_NULL_POINTER, "null pointer argument".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, i32> {
    p.as_mut().ok_or_else(|| fail(KRULL_ERR_NULL_POINTER, "null output pointer".into()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, i32> {
    if s.is_null() {
        return Err(fail(KRULL_ERR_NULL_POINTER, "null string argument".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(KRULL_ERR_INVALID_UTF8, "string is not valid UTF-8".into()))
}

fn to_c(s: String) -> *mut c_char {
    // interior NULs cannot occur in rendered output; strip defensively
    CString::new(s.replace('\0', "")).expect("no interior NUL").into_raw()
}

/// Message for the most recent failure on this thread, or null. Free with
/// [`krull_string_free`].
#[no_mangle]
pub extern "C" fn krull_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|l| l.borrow().clone().map_or(ptr::null_mut(), to_c))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn krull_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ------------------------------------------------------------ fields

/// Parse a field descriptor such as `"Qp(3)[zeta_p]"`.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn krull_field_parse(descriptor: *const c_char, out_field: *mut *mut KrullField) -> i32 {
    guard(|| {
        let slot = out(out_field)?;
        *slot = ptr::null_mut();
        let f = LocalField::parse(read_str(descriptor)?).or_code()?;
        *slot = Box::into_raw(Box::new(KrullField(f)));
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a handle from [`krull_field_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn krull_field_free(field: *mut KrullField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Residue characteristic, ramification index, residue degree and `[F:Q_p]`.
///
/// # Safety
/// `field` must be a live handle; out-pointers may be null to skip a value.
#[no_mangle]
pub unsafe extern "C" fn krull_field_invariants(
    field: *const KrullField,
    p: *mut u64,
    e: *mut i64,
    f: *mut u32,
    degree: *mut u64,
) -> i32 {
    guard(|| {
        let k = &borrow(field)?.0;
        if let Some(p) = p.as_mut() {
            *p = k.p();
        }
        if let Some(e) = e.as_mut() {
            *e = k.e();
        }
        if let Some(f) = f.as_mut() {
            *f = k.f();
        }
        if let Some(d) = degree.as_mut() {
            *d = k.degree() as u64;
        }
        Ok(())
    })
}

/// `dim_{F_q} F^×/F^{×q}`.
///
/// # Safety
/// `field` must be a live handle and `out_dim` valid.
#[no_mangle]
pub unsafe extern "C" fn krull_p_rank(field: *const KrullField, q: u64, out_dim: *mut u64) -> i32 {
    guard(|| {
        let k = &borrow(field)?.0;
        let o = out(out_dim)?;
        *o = p_rank(k, q).or_code()?.dim as u64;
        Ok(())
    })
}

/// Residue of `p/π^{p−1}`; written as an integer when the residue field is
/// `F_p` (the usual case), otherwise the constant coordinate.
///
/// # Safety
/// `field` must be a live handle and `out_residue` valid.
#[no_mangle]
pub unsafe extern "C" fn krull_residue_p_over_pi(field: *const KrullField, out_residue: *mut u64) -> i32 {
    guard(|| {
        let k = &borrow(field)?.0;
        let o = out(out_residue)?;
        *o = residue_of_p_over_uniformizer(k).or_code()?.rep.first().copied().unwrap_or(0);
        Ok(())
    })
}

// ------------------------------------------------------------ elements

/// # Safety
/// `field` must be a live handle and `out_elem` valid.
#[no_mangle]
pub unsafe extern "C" fn krull_element_from_int(field: *const KrullField, n: i64, out_elem: *mut *mut KrullElement) -> i32 {
    guard(|| {
        let k = &borrow(field)?.0;
        let slot = out(out_elem)?;
        *slot = Box::into_raw(Box::new(KrullElement(k.from_int(n))));
        Ok(())
    })
}

/// The field's uniformizer.
///
/// # Safety
/// `field` must be a live handle and `out_elem` valid.
#[no_mangle]
pub unsafe extern "C" fn krull_element_uniformizer(field: *const KrullField, out_elem: *mut *mut KrullElement) -> i32 {
    guard(|| {
        let k = &borrow(field)?.0;
        let slot = out(out_elem)?;
        *slot = Box::into_raw(Box::new(KrullElement(k.uniformizer())));
        Ok(())
    })
}

/// # Safety
/// `elem` must be null or a live element handle.
#[no_mangle]
pub unsafe extern "C" fn krull_element_free(elem: *mut KrullElement) {
    if !elem.is_null() {
        drop(Box::from_raw(elem));
    }
}

unsafe fn binary(
    a: *const KrullElement,
    b: *const KrullElement,
    out_elem: *mut *mut KrullElement,
    op: impl FnOnce(&LocalFieldElement, &LocalFieldElement) -> krull::Result<LocalFieldElement>,
) -> i32 {
    guard(|| {
        let (x, y) = (&borrow(a)?.0, &borrow(b)?.0);
        let slot = out(out_elem)?;
        if x.field() != y.field() {
            return Err(fail(KRULL_ERR_PRECONDITION_FAILED, "elements of different fields".into()));
        }
        *slot = Box::into_raw(Box::new(KrullElement(op(x, y).or_code()?)));
        Ok(())
    })
}

/// # Safety
/// `a`, `b` must be live handles over the same field; `out_elem` valid.
#[no_mangle]
pub unsafe extern "C" fn krull_element_add(a: *const KrullElement, b: *const KrullElement, out_elem: *mut *mut KrullElement) -> i32 {
    binary(a, b, out_elem, |x, y| Ok(x.add(y)))
}

/// # Safety
/// As for [`krull_element_add`].
#[no_mangle]
pub unsafe extern "C" fn krull_element_mul(a: *const KrullElement, b: *const KrullElement, out_elem: *mut *mut KrullElement) -> i32 {
    binary(a, b, out_elem, |x, y| Ok(x.mul(y)))
}

/// # Safety
/// As for [`krull_element_add`].
#[no_mangle]
pub unsafe extern "C" fn krull_element_div(a: *const KrullElement, b: *const KrullElement, out_elem: *mut *mut KrullElement) -> i32 {
    binary(a, b, out_elem, |x, y| x.div(y))
}

/// Normalised valuation (`v(π) = 1`). `*out_is_infinite` is set to 1 for
/// an exact zero, in which case `*out_val` is 0.
///
/// # Safety
/// `elem` must be a live handle; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn krull_element_valuation(elem: *const KrullElement, out_val: *mut i64, out_is_infinite: *mut i32) -> i32 {
    guard(|| {
        let x = &borrow(elem)?.0;
        let (v, inf) = (out(out_val)?, out(out_is_infinite)?);
        match x.valuation().or_code()? {
            Valuation::Finite(n) => (*v, *inf) = (n, 0),
            Valuation::Infinity => (*v, *inf) = (0, 1),
        }
        Ok(())
    })
}

/// `*out_is_zero` = 1 when the element vanishes to its own precision
/// (where [`krull_element_valuation`] reports `KRULL_ERR_PRECISION_EXHAUSTED`).
///
/// # Safety
/// `elem` must be a live handle and `out_is_zero` valid.
#[no_mangle]
pub unsafe extern "C" fn krull_element_is_zero(elem: *const KrullElement, out_is_zero: *mut i32) -> i32 {
    guard(|| {
        let x = &borrow(elem)?.0;
        *out(out_is_zero)? = i32::from(x.is_zero());
        Ok(())
    })
}

/// Render an element; free the result with [`krull_string_free`].
///
/// # Safety
/// `elem` must be a live handle and `out_str` valid.
#[no_mangle]
pub unsafe extern "C" fn krull_element_to_string(elem: *const KrullElement, out_str: *mut *mut c_char) -> i32 {
    guard(|| {
        let x = &borrow(elem)?.0;
        *out(out_str)? = to_c(x.to_string());
        Ok(())
    })
}

// ------------------------------------------------------------ standalone

/// Julia Robinson's integrality predicate on `p^val · mantissa` known to
/// `rel` p-adic digits. `*out_integral` is 1 or 0.
///
/// # Safety
/// `out_integral` must be valid.
#[no_mangle]
pub unsafe extern "C" fn krull_jr_integer_test(p: u64, val: i64, mantissa: i64, rel: u32, out_integral: *mut i32) -> i32 {
    guard(|| {
        let o = out(out_integral)?;
        let x = PadicNumber::new(p, val, mantissa as i128, rel).or_code()?;
        *o = i32::from(jr_integer_test(&x).or_code()?);
        Ok(())
    })
}

/// `([Q_p(ζ_n):Q_p], e, f)`.
///
/// # Safety
/// Out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn krull_cyclotomic_data(n: u64, p: u64, degree: *mut u64, e: *mut u64, f: *mut u64) -> i32 {
    guard(|| {
        let (d, e, f) = (out(degree)?, out(e)?, out(f)?);
        (*d, *e, *f) = cyclotomic_data(n, p).or_code()?;
        Ok(())
    })
}

// ------------------------------------------------------------ reports

/// Run a named suite. `params` may be null for all defaults.
///
/// # Safety
/// `suite_id` must be a NUL-terminated string, `params` null or valid,
/// `out_report` valid.
#[no_mangle]
pub unsafe extern "C" fn krull_suite_run(
    suite_id: *const c_char,
    params: *const KrullSuiteParams,
    out_report: *mut *mut KrullReport,
) -> i32 {
    guard(|| {
        let slot = out(out_report)?;
        *slot = ptr::null_mut();
        let id = read_str(suite_id)?;
        let mut sp = SuiteParams::default();
        if let Some(c) = params.as_ref() {
            let nz = |v: u64| (v != 0).then_some(v);
            sp.p = nz(c.p);
            sp.q = nz(c.q);
            sp.n = nz(c.n);
            sp.precision = (c.precision != 0).then_some(c.precision);
            sp.depth = (c.depth != 0).then_some(c.depth);
            sp.seed = c.seed;
            if !c.field.is_null() {
                sp.field = Some(read_str(c.field)?.to_string());
            }
        }
        let r = run_suite(id, &sp).or_code()?;
        *slot = Box::into_raw(Box::new(KrullReport(r)));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn krull_report_free(report: *mut KrullReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of cases, and how many passed.
///
/// # Safety
/// `report` must be a live handle; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn krull_report_counts(report: *const KrullReport, total: *mut u64, passed: *mut u64) -> i32 {
    guard(|| {
        let r = &borrow(report)?.0;
        let (t, p) = (out(total)?, out(passed)?);
        *t = r.cases.len() as u64;
        *p = r.cases.iter().filter(|c| c.pass).count() as u64;
        Ok(())
    })
}

/// Versioned JSON rendering; free with [`krull_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn krull_report_to_json(report: *const KrullReport, out_json: *mut *mut c_char) -> i32 {
    guard(|| {
        let r = &borrow(report)?.0;
        *out(out_json)? = to_c(r.to_json());
        Ok(())
    })
}
