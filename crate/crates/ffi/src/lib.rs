//! C interface. Objects are opaque handles freed by their `*_free`
//! function; strings returned through `out` parameters are owned by the
//! caller and freed with `cl_string_free`. Every call returns a `ClStatus`
//! and, on failure, leaves a message for `cl_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use contlogic::coding::{self, GodelCode};
use contlogic::eval::{eval, EvalBudget, PresentationStructure};
use contlogic::forcing::{forces_sup_leq, Bound, Condition, ConsistencyOracle, ForcingAnswer, MetricInstance};
use contlogic::formula::{Formula, Signature};
use contlogic::group::{lambda_norm_lower, parse_group_config, GroupAlgebraElement, GroupSpec};
use contlogic::numeric::{fmt_exact, parse_exact};
use contlogic::parser::{parse_formula, print_formula};
use contlogic::presentation::{
    C2wPresentation, CstarLambdaPresentation, GroupVnaPresentation, Presentation, RPresentation,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Coding = 4,
    Group = 5,
    Eval = 6,
    Forcing = 7,
    InvalidArgument = 8,
    Panic = 99,
}

/// Answer of `cl_forces_sup_leq`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClAnswer {
    Yes = 0,
    No = 1,
    Unknown = 2,
}

pub struct ClFormula {
    formula: Formula,
    signature: Signature,
}

pub struct ClGroup {
    spec: Arc<GroupSpec>,
}

pub struct ClCondition {
    condition: Condition,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(ClStatus, String);

fn fail<E: std::fmt::Display>(status: ClStatus) -> impl Fn(E) -> Failure {
    move |e| Failure(status, e.to_string())
}

/// Runs `f`, records errors and turns panics into `ClStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ClStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ClStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ClStatus::Panic
        }
    }
}

unsafe fn arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ClStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ClStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(ClStatus::NullPointer, "null out pointer".into()));
    }
    let c = CString::new(s).map_err(fail(ClStatus::InvalidArgument))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(ClStatus::NullPointer, "null out pointer".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure(ClStatus::NullPointer, "null handle".into()))
}

fn signature(name: &str) -> Result<Signature, Failure> {
    Signature::by_name(name).ok_or_else(|| Failure(ClStatus::InvalidArgument, format!("no signature `{name}`")))
}

fn code(text: &str) -> Result<GodelCode, Failure> {
    text.trim().parse().map_err(|_| Failure(ClStatus::Coding, format!("`{text}` is not a natural")))
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn cl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `text` over the preset signature `sig` (`metric`, `cstar`,
/// `tvna`).
///
/// # Safety
/// `text` and `sig` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_formula_parse(text: *const c_char, sig: *const c_char, out: *mut *mut ClFormula) -> ClStatus {
    guard(|| {
        let signature = signature(arg(sig)?)?;
        let formula = parse_formula(arg(text)?, &signature).map_err(fail(ClStatus::Parse))?;
        put(out, ClFormula { formula, signature })
    })
}

/// # Safety
/// `code_text` and `sig` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_formula_decode(code_text: *const c_char, sig: *const c_char, out: *mut *mut ClFormula) -> ClStatus {
    guard(|| {
        let signature = signature(arg(sig)?)?;
        let formula = coding::decode(&code(arg(code_text)?)?, &signature).map_err(fail(ClStatus::Coding))?;
        put(out, ClFormula { formula, signature })
    })
}

/// # Safety
/// `f` is NULL or a live handle from `cl_formula_parse`/`cl_formula_decode`.
#[no_mangle]
pub unsafe extern "C" fn cl_formula_free(f: *mut ClFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_formula_print(f: *const ClFormula, out: *mut *mut c_char) -> ClStatus {
    guard(|| put_string(out, print_formula(&handle(f)?.formula)))
}

/// Decimal Gödel code of the formula.
///
/// # Safety
/// `f` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_formula_encode(f: *const ClFormula, out: *mut *mut c_char) -> ClStatus {
    guard(|| {
        let f = handle(f)?;
        let c = coding::encode(&f.formula, &f.signature).map_err(fail(ClStatus::Coding))?;
        put_string(out, c.to_string())
    })
}

/// Code of `φ_p -. 2^-n`.
///
/// # Safety
/// `p` and `sig` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_code_f(p: *const c_char, n: u32, sig: *const c_char, out: *mut *mut c_char) -> ClStatus {
    guard(|| {
        let signature = signature(arg(sig)?)?;
        let c = coding::f(&code(arg(p)?)?, n, &signature).map_err(fail(ClStatus::Coding))?;
        put_string(out, c.to_string())
    })
}

/// Code of `φ_p -. φ_q`.
///
/// # Safety
/// `p`, `q` and `sig` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_code_g(p: *const c_char, q: *const c_char, sig: *const c_char, out: *mut *mut c_char) -> ClStatus {
    guard(|| {
        let signature = signature(arg(sig)?)?;
        let c = coding::g(&code(arg(p)?)?, &code(arg(q)?)?, &signature).map_err(fail(ClStatus::Coding))?;
        put_string(out, c.to_string())
    })
}

/// Group from the text of a group config.
///
/// # Safety
/// `config` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_group_from_config(config: *const c_char, out: *mut *mut ClGroup) -> ClStatus {
    guard(|| {
        let spec = parse_group_config(arg(config)?).map_err(fail(ClStatus::Group))?;
        put(out, ClGroup { spec: Arc::new(spec) })
    })
}

/// # Safety
/// `g` is NULL or a live handle from `cl_group_from_config`.
#[no_mangle]
pub unsafe extern "C" fn cl_group_free(g: *mut ClGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Dyadic lower bound on the reduced norm of `element` from the moment
/// `τ((a*a)^n)`, as exact decimal text.
///
/// # Safety
/// `g` is a live handle, `element` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_group_lambda_lower(
    g: *const ClGroup,
    element: *const c_char,
    n: usize,
    k: u32,
    out: *mut *mut c_char,
) -> ClStatus {
    guard(|| {
        if n == 0 {
            return Err(Failure(ClStatus::InvalidArgument, "moment order starts at 1".into()));
        }
        let a = GroupAlgebraElement::parse(&handle(g)?.spec, arg(element)?).map_err(fail(ClStatus::Group))?;
        let low = lambda_norm_lower(&a, n, k).map_err(fail(ClStatus::Group))?;
        put_string(out, fmt_exact(&low))
    })
}

fn eval_json<P: Presentation>(p: P, phi: &Formula, points: u64, k: u32) -> Result<String, Failure> {
    let s = PresentationStructure::new(p);
    let r = eval(phi, &s, &EvalBudget::new(points, k)).map_err(fail(ClStatus::Eval))?;
    Ok(r.to_json().to_string())
}

/// Evaluates a sentence over a presentation (`R`, `L`, `cstar`, `C2w`)
/// and writes the result record as JSON. `g` may be NULL for `R` and
/// `C2w`.
///
/// # Safety
/// `presentation` and `sentence` are NUL-terminated strings, `g` is NULL
/// or a live handle, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_eval_json(
    presentation: *const c_char,
    g: *const ClGroup,
    sentence: *const c_char,
    points: u64,
    k: u32,
    out: *mut *mut c_char,
) -> ClStatus {
    guard(|| {
        let name = arg(presentation)?;
        let group = || handle(g).map(|g| (*g.spec).clone());
        let sig = match name {
            "R" | "L" => Signature::tvna(),
            "cstar" | "C2w" => Signature::cstar(),
            _ => return Err(Failure(ClStatus::InvalidArgument, format!("no presentation `{name}`"))),
        };
        let phi = parse_formula(arg(sentence)?, &sig).map_err(fail(ClStatus::Parse))?;
        let json = match name {
            "R" => eval_json(RPresentation::new(), &phi, points, k)?,
            "C2w" => eval_json(C2wPresentation::new(), &phi, points, k)?,
            "L" => eval_json(GroupVnaPresentation::new(group()?), &phi, points, k)?,
            _ => eval_json(CstarLambdaPresentation::new(group()?), &phi, points, k)?,
        };
        put_string(out, json)
    })
}

/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_condition_new(out: *mut *mut ClCondition) -> ClStatus {
    guard(|| put(out, ClCondition { condition: Condition::empty() }))
}

/// # Safety
/// `c` is NULL or a live handle from `cl_condition_new`.
#[no_mangle]
pub unsafe extern "C" fn cl_condition_free(c: *mut ClCondition) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Adds the bound `phi < r` to the condition; `r` is exact text such as
/// `1/4` or `0.25`. Consistency is not checked here.
///
/// # Safety
/// `c` is a live handle; `phi` and `r` are NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn cl_condition_add(c: *mut ClCondition, phi: *const c_char, r: *const c_char) -> ClStatus {
    guard(|| {
        let c = c.as_mut().ok_or(Failure(ClStatus::NullPointer, "null handle".into()))?;
        let phi = parse_formula(arg(phi)?, &Signature::metric()).map_err(fail(ClStatus::Parse))?;
        let r_text = arg(r)?;
        let r = parse_exact(r_text)
            .ok_or_else(|| Failure(ClStatus::InvalidArgument, format!("`{r_text}` is not exact")))?;
        let b = Bound::new(phi, r).map_err(fail(ClStatus::Forcing))?;
        c.condition = c.condition.with(b);
        Ok(())
    })
}

/// # Safety
/// `c` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_condition_is_condition(c: *const ClCondition, out: *mut bool) -> ClStatus {
    guard(|| {
        let ok = MetricInstance::new()
            .is_condition(&handle(c)?.condition)
            .map_err(fail(ClStatus::Forcing))?;
        *out.as_mut().ok_or(Failure(ClStatus::NullPointer, "null out pointer".into()))? = ok;
        Ok(())
    })
}

/// Whether the condition forces `sup_x psi <= r`.
///
/// # Safety
/// `c` is a live handle; `psi`, `var` and `r` are NUL-terminated strings;
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cl_forces_sup_leq(
    c: *const ClCondition,
    psi: *const c_char,
    var: *const c_char,
    r: *const c_char,
    budget: u32,
    out: *mut ClAnswer,
) -> ClStatus {
    guard(|| {
        let p = &handle(c)?.condition;
        let psi = parse_formula(arg(psi)?, &Signature::metric()).map_err(fail(ClStatus::Parse))?;
        let r_text = arg(r)?;
        let r = parse_exact(r_text)
            .ok_or_else(|| Failure(ClStatus::InvalidArgument, format!("`{r_text}` is not exact")))?;
        let ans = forces_sup_leq(p, &psi, arg(var)?, &r, budget, &MetricInstance::new())
            .map_err(fail(ClStatus::Forcing))?;
        *out.as_mut().ok_or(Failure(ClStatus::NullPointer, "null out pointer".into()))? = match ans {
            ForcingAnswer::Yes => ClAnswer::Yes,
            ForcingAnswer::No(_) => ClAnswer::No,
            ForcingAnswer::Unknown(_) => ClAnswer::Unknown,
        };
        Ok(())
    })
}
