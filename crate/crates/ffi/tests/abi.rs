use std::ffi::{CStr, CString};
use std::ptr;

use lagsurf_ffi::*;

fn last_error() -> String {
    let p = lagsurf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn surface(name: &str) -> *mut LagsurfSurface {
    let name = CString::new(name).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { lagsurf_surface_new(name.as_ptr(), &mut h) }, LagsurfStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(lagsurf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn unknown_surface_sets_input_status_and_message() {
    let name = CString::new("no-such-surface").unwrap();
    let mut h = ptr::null_mut();
    let st = unsafe { lagsurf_surface_new(name.as_ptr(), &mut h) };
    assert_eq!(st, LagsurfStatus::Input);
    assert!(h.is_null());
    assert!(last_error().contains("no-such-surface"));
}

#[test]
fn null_arguments_are_rejected() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { lagsurf_surface_new(ptr::null(), &mut h) }, LagsurfStatus::NullPointer);
    let mut out = [0.0; 6];
    assert_eq!(unsafe { lagsurf_surface_eval(ptr::null(), 0.0, 0.0, &mut out) }, LagsurfStatus::NullPointer);
    unsafe {
        lagsurf_surface_free(ptr::null_mut());
        lagsurf_string_free(ptr::null_mut());
    }
}

#[test]
fn m0_invariants_through_the_abi() {
    let h = surface("m0");
    let mut inv = LagsurfPointInvariants::default();
    assert_eq!(unsafe { lagsurf_surface_invariants(h, 1.0, 0.2, &mut inv) }, LagsurfStatus::Ok);
    assert_eq!(inv.has_c, 1);
    assert!((inv.c - 0.5).abs() < 1e-12);
    assert!((inv.gauss_curvature - 0.5).abs() < 1e-6);
    assert!(inv.mean_curvature_norm < 1e-9);
    let [x1, x2, x3, y1, y2, y3] = inv.position;
    assert!((x1 + y1).abs() + (x2 + y2).abs() + (x3 + y3).abs() < 1e-14);

    let mut name = ptr::null_mut();
    assert_eq!(unsafe { lagsurf_surface_name(h, &mut name) }, LagsurfStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(name) }.to_str().unwrap(), "m0");
    unsafe {
        lagsurf_string_free(name);
        lagsurf_surface_free(h);
    }
}

#[test]
fn analyze_returns_a_passing_json_report() {
    let h = surface("klein-b");
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { lagsurf_surface_analyze_json(h, 16, 16, &mut json) }, LagsurfStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["surface"], "klein-b");
    unsafe {
        lagsurf_string_free(json);
        lagsurf_surface_free(h);
    }
}

#[test]
fn bad_grid_is_an_input_error() {
    let h = surface("m0");
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { lagsurf_surface_analyze_json(h, 2, 2, &mut json) }, LagsurfStatus::Input);
    assert!(json.is_null());
    unsafe { lagsurf_surface_free(h) };
}

#[test]
fn torus_index_is_two() {
    let h = surface("torus-t");
    let mut idx = LagsurfIndex::default();
    assert_eq!(unsafe { lagsurf_surface_index(h, 32, 0.02, &mut idx) }, LagsurfStatus::Ok);
    assert_eq!((idx.ind0, idx.betti1, idx.index), (0, 2, 2));
    assert!((idx.lambda1 - 1.0).abs() < 4e-3);
    unsafe { lagsurf_surface_free(h) };
}

#[test]
fn index_of_a_non_compact_surface_is_a_precondition_error() {
    let h = surface("const-c:0.3");
    let mut idx = LagsurfIndex::default();
    assert_eq!(unsafe { lagsurf_surface_index(h, 16, 0.02, &mut idx) }, LagsurfStatus::Precondition);
    unsafe { lagsurf_surface_free(h) };
}

#[test]
fn verify_suite_counts_checks() {
    let name = CString::new("sinh-gordon").unwrap();
    let (mut pass, mut fail) = (0usize, 0usize);
    assert_eq!(unsafe { lagsurf_verify_suite(name.as_ptr(), 1.0, &mut pass, &mut fail) }, LagsurfStatus::Ok);
    assert!(pass > 0);
    assert_eq!(fail, 0);
    let bad = CString::new("nope").unwrap();
    assert_eq!(unsafe { lagsurf_verify_suite(bad.as_ptr(), 1.0, &mut pass, &mut fail) }, LagsurfStatus::Input);
}

#[test]
fn elliptic_functions() {
    let (mut k, mut e) = (0.0, 0.0);
    assert_eq!(unsafe { lagsurf_complete_elliptic(0.0, &mut k, &mut e) }, LagsurfStatus::Ok);
    assert!((k - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!((e - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    let mut j = LagsurfJacobi::default();
    assert_eq!(unsafe { lagsurf_jacobi(0.7, 0.6, &mut j) }, LagsurfStatus::Ok);
    assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-14);
    assert_eq!(unsafe { lagsurf_jacobi(0.7, 1.5, &mut j) }, LagsurfStatus::Domain);
}
