use std::ffi::{c_char, CStr, CString};
use std::ptr;

use contlogic_ffi::*;

fn s(text: &str) -> CString {
    CString::new(text).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let out = CStr::from_ptr(p).to_str().unwrap().to_string();
    cl_string_free(p);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(cl_last_error_message()).to_str().unwrap().to_string()
}

#[test]
fn formulas_round_trip_through_codes() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(cl_formula_parse(s("sup x. d(x, c1)").as_ptr(), s("metric").as_ptr(), &mut f), ClStatus::Ok);
        let mut code = ptr::null_mut();
        assert_eq!(cl_formula_encode(f, &mut code), ClStatus::Ok);
        let code = take(code);
        let mut g = ptr::null_mut();
        assert_eq!(cl_formula_decode(s(&code).as_ptr(), s("metric").as_ptr(), &mut g), ClStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(cl_formula_print(g, &mut text), ClStatus::Ok);
        assert_eq!(take(text), "sup x . d(x, c1)");
        let mut fc = ptr::null_mut();
        assert_eq!(cl_code_f(s(&code).as_ptr(), 1, s("metric").as_ptr(), &mut fc), ClStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(cl_formula_decode(fc, s("metric").as_ptr(), &mut h), ClStatus::Ok);
        cl_string_free(fc);
        let mut text = ptr::null_mut();
        cl_formula_print(h, &mut text);
        assert_eq!(take(text), "(sup x . d(x, c1)) -. half(1)");
        cl_formula_free(f);
        cl_formula_free(g);
        cl_formula_free(h);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(cl_formula_parse(s("d(x, ").as_ptr(), s("metric").as_ptr(), &mut f), ClStatus::Parse);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(cl_formula_parse(ptr::null(), s("metric").as_ptr(), &mut f), ClStatus::NullPointer);
        assert_eq!(cl_formula_decode(s("12345").as_ptr(), s("metric").as_ptr(), &mut f), ClStatus::Coding);
        assert_eq!(cl_formula_parse(s("d(x, x)").as_ptr(), s("nope").as_ptr(), &mut f), ClStatus::InvalidArgument);
        let mut out = ptr::null_mut();
        assert_eq!(cl_formula_print(ptr::null(), &mut out), ClStatus::NullPointer);
        cl_formula_free(ptr::null_mut());
        cl_string_free(ptr::null_mut());
    }
}

#[test]
fn group_lower_bound_and_eval() {
    unsafe {
        let mut g = ptr::null_mut();
        let cfg = s("generators = u\nbackend = abelian\n");
        assert_eq!(cl_group_from_config(cfg.as_ptr(), &mut g), ClStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(cl_group_lambda_lower(g, s("u + u^-1").as_ptr(), 5, 20, &mut out), ClStatus::Ok);
        // 252^(1/10) to 20 bits
        assert_eq!(take(out), "1.73836040496826171875");
        assert_eq!(cl_group_lambda_lower(g, s("u + u^-1").as_ptr(), 0, 20, &mut out), ClStatus::InvalidArgument);
        let mut json = ptr::null_mut();
        assert_eq!(cl_eval_json(s("L").as_ptr(), g, s("sup x. tr_re(x)").as_ptr(), 8, 10, &mut json), ClStatus::Ok);
        assert!(take(json).contains("\"certified_lower\":\"1\""));
        assert_eq!(
            cl_eval_json(s("L").as_ptr(), ptr::null(), s("sup x. tr_re(x)").as_ptr(), 8, 10, &mut json),
            ClStatus::NullPointer
        );
        cl_group_free(g);
    }
}

#[test]
fn conditions_and_forcing() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(cl_condition_new(&mut c), ClStatus::Ok);
        let mut ok = false;
        assert_eq!(cl_condition_is_condition(c, &mut ok), ClStatus::Ok);
        assert!(ok);
        let mut ans = ClAnswer::Unknown;
        assert_eq!(cl_forces_sup_leq(c, s("d(x, c1)").as_ptr(), s("x").as_ptr(), s("1/2").as_ptr(), 10, &mut ans), ClStatus::Ok);
        assert_eq!(ans, ClAnswer::No);
        for (phi, r) in [("d(c1, c2)", "1/4"), ("d(c2, c3)", "1/4"), ("1 -. d(c1, c3)", "1/4")] {
            assert_eq!(cl_condition_add(c, s(phi).as_ptr(), s(r).as_ptr()), ClStatus::Ok);
        }
        assert_eq!(cl_condition_is_condition(c, &mut ok), ClStatus::Ok);
        assert!(!ok);
        cl_condition_free(c);
        let mut c = ptr::null_mut();
        cl_condition_new(&mut c);
        assert_eq!(cl_condition_add(c, s("d(c1, c2)").as_ptr(), s("1/8").as_ptr()), ClStatus::Ok);
        assert_eq!(cl_forces_sup_leq(c, s("d(c1, c2)").as_ptr(), s("x").as_ptr(), s("1/8").as_ptr(), 10, &mut ans), ClStatus::Ok);
        assert_eq!(ans, ClAnswer::Yes);
        assert_eq!(cl_condition_add(c, s("d(c1, c2)").as_ptr(), s("0.3").as_ptr()), ClStatus::Forcing);
        cl_condition_free(c);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(cl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
