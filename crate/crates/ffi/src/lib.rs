//! C ABI over the `lagsurf` engine.
//!
//! Every fallible function returns a [`LagsurfStatus`]. On failure the
//! message is kept per thread and read with [`lagsurf_last_error`].
//! Surfaces are opaque handles released with [`lagsurf_surface_free`];
//! strings handed out by the library are released with
//! [`lagsurf_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lagsurf::catalog::resolve_surface;
use lagsurf::elliptic::{complete_e, complete_k, jacobi, EllipticModulus};
use lagsurf::geometry::{second_form, JetScheme, SurfaceSpec};
use lagsurf::harness::{analyze_surface, run_suite, Config, Suite};
use lagsurf::spectral::index_report;
use lagsurf::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagsurfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Unknown identifier or malformed argument.
    Input = 3,
    Domain = 4,
    Precondition = 5,
    Degenerate = 6,
    Convergence = 7,
    /// An eigenvalue fell inside the safety band below 1.
    Ambiguity = 8,
    Divergence = 9,
    /// The call completed but at least one check failed.
    CheckFailed = 10,
    Panic = 99,
}

impl From<&Error> for LagsurfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Input(_) => LagsurfStatus::Input,
            Error::Domain(_) => LagsurfStatus::Domain,
            Error::Precondition(_) => LagsurfStatus::Precondition,
            Error::Degenerate(_) => LagsurfStatus::Degenerate,
            Error::Convergence { .. } => LagsurfStatus::Convergence,
            Error::Ambiguity { .. } => LagsurfStatus::Ambiguity,
            Error::Divergence { .. } => LagsurfStatus::Divergence,
        }
    }
}

/// Opaque catalog surface.
pub struct LagsurfSurface {
    spec: SurfaceSpec,
}

/// Pointwise invariants at one parameter point.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LagsurfPointInvariants {
    /// Ambient position `(x1, x2, x3, y1, y2, y3)`.
    pub position: [f64; 6],
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub gauss_curvature: f64,
    pub mean_curvature_norm: f64,
    pub sigma_squared: f64,
    pub lagrangian_residual: f64,
    /// Associated Jacobian; meaningful only when `has_c` is nonzero.
    pub c: f64,
    pub has_c: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LagsurfIndex {
    pub ind0: u32,
    pub ind1: u32,
    pub betti1: u32,
    pub index: u32,
    /// Smallest nonzero eigenvalue found.
    pub lambda1: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LagsurfJacobi {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let mut bytes = msg.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(LagsurfStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail((&e).into())
    }
}

fn fail(status: LagsurfStatus, msg: &str) -> Fail {
    set_error(msg);
    Fail(status)
}

/// Runs `f`, recording errors and turning panics into [`LagsurfStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LagsurfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LagsurfStatus::Ok,
        Ok(Err(Fail(s))) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            LagsurfStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(fail(LagsurfStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(LagsurfStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| fail(LagsurfStatus::NullPointer, "null output pointer"))
}

unsafe fn surface_ref<'a>(s: *const LagsurfSurface) -> Result<&'a LagsurfSurface, Fail> {
    s.as_ref().ok_or_else(|| fail(LagsurfStatus::NullPointer, "null surface handle"))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lagsurf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next library call on the same thread.
#[no_mangle]
pub extern "C" fn lagsurf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Resolves a catalog identifier (for example `"klein-b"` or
/// `"torus-ab:0.3:0.4"`) into a new handle.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_surface_new(name: *const c_char, out: *mut *mut LagsurfSurface) -> LagsurfStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let spec = resolve_surface(read_str(name)?)?;
        *out = Box::into_raw(Box::new(LagsurfSurface { spec }));
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_surface_free(s: *mut LagsurfSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Copies the surface's catalog name into a new string.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_surface_name(s: *const LagsurfSurface, out: *mut *mut c_char) -> LagsurfStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = to_c_string(surface_ref(s)?.spec.name.clone());
        Ok(())
    })
}

/// Parameter rectangle `[t0, t1] × [s0, s1]` as `{t0, t1, s0, s1}`.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_surface_domain(s: *const LagsurfSurface, out: *mut [f64; 4]) -> LagsurfStatus {
    guard(|| {
        let d = &surface_ref(s)?.spec.domain;
        *out_ref(out)? = [d.t_range.0, d.t_range.1, d.s_range.0, d.s_range.1];
        Ok(())
    })
}

/// Ambient position `(x, y) ∈ S²×S²` at `(t, s)`.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_surface_eval(
    s: *const LagsurfSurface,
    t: f64,
    u: f64,
    out: *mut [f64; 6],
) -> LagsurfStatus {
    guard(|| {
        let p = surface_ref(s)?.spec.eval(t, u)?;
        *out_ref(out)? = [p.x[0], p.x[1], p.x[2], p.y[0], p.y[1], p.y[2]];
        Ok(())
    })
}

/// Metric, curvatures and associated Jacobian at `(t, s)` from closed-form jets.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_surface_invariants(
    s: *const LagsurfSurface,
    t: f64,
    u: f64,
    out: *mut LagsurfPointInvariants,
) -> LagsurfStatus {
    guard(|| {
        let spec = &surface_ref(s)?.spec;
        let out = out_ref(out)?;
        let p = spec.eval(t, u)?;
        let f = second_form(spec, t, u, JetScheme::Analytic)?;
        *out = LagsurfPointInvariants {
            position: [p.x[0], p.x[1], p.x[2], p.y[0], p.y[1], p.y[2]],
            g11: f.g11,
            g12: f.g12,
            g22: f.g22,
            gauss_curvature: f.k,
            mean_curvature_norm: f.h_norm,
            sigma_squared: f.sigma_sq,
            lagrangian_residual: f.lagrangian_residual,
            c: f.c.unwrap_or(f64::NAN),
            has_c: f.c.is_some() as i32,
        };
        Ok(())
    })
}

/// Runs the surface analyzers on an `nt × ns` grid and returns the JSON
/// report. Returns [`LagsurfStatus::CheckFailed`] (with the report still
/// written) when a check fails.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_surface_analyze_json(
    s: *const LagsurfSurface,
    nt: usize,
    ns: usize,
    out: *mut *mut c_char,
) -> LagsurfStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let spec = &surface_ref(s)?.spec;
        let cfg = Config { nt, ns, ..Config::default() };
        cfg.validate()?;
        let report = analyze_surface(spec, &cfg, JetScheme::Analytic)?;
        let json = serde_json::to_string(&report).map_err(|e| fail(LagsurfStatus::Panic, &e.to_string()))?;
        *out = to_c_string(json);
        if report.pass() {
            Ok(())
        } else {
            let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            Err(fail(LagsurfStatus::CheckFailed, &format!("failed checks: {}", failed.join(", "))))
        }
    })
}

/// Index of a compact minimal Lagrangian torus or Klein bottle on an
/// `n × n` grid with margin `epsilon` below the eigenvalue 1.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_surface_index(
    s: *const LagsurfSurface,
    n: usize,
    epsilon: f64,
    out: *mut LagsurfIndex,
) -> LagsurfStatus {
    guard(|| {
        let spec = &surface_ref(s)?.spec;
        let out = out_ref(out)?;
        let r = index_report(spec, n, n, epsilon)?;
        let lambda1 = r.eigenvalues.iter().copied().find(|&l| l > 1e-6).unwrap_or(f64::NAN);
        let narrow = |x: usize| u32::try_from(x).unwrap_or(u32::MAX);
        *out = LagsurfIndex {
            ind0: narrow(r.ind0),
            ind1: narrow(r.ind1),
            betti1: narrow(r.betti1),
            index: narrow(r.index),
            lambda1,
        };
        Ok(())
    })
}

/// Runs one verification suite (`"lagrangian"`, `"minimal"`, `"identities"`,
/// `"gaussmap"`, `"sinh-gordon"` or `"spectral"`) with tolerances multiplied
/// by `tol_scale`, and reports the number of passed and failed checks.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_verify_suite(
    suite: *const c_char,
    tol_scale: f64,
    passed: *mut usize,
    failed: *mut usize,
) -> LagsurfStatus {
    guard(|| {
        let suite: Suite = read_str(suite)?.parse()?;
        let (passed, failed) = (out_ref(passed)?, out_ref(failed)?);
        let cfg = Config { tol_scale, ..Config::default() };
        let checks = run_suite(suite, &cfg, None)?;
        *failed = checks.iter().filter(|c| !c.pass).count();
        *passed = checks.len() - *failed;
        if *failed == 0 {
            Ok(())
        } else {
            Err(fail(LagsurfStatus::CheckFailed, &format!("{} checks failed", *failed)))
        }
    })
}

/// Jacobi `sn, cn, dn` of `x` for modulus `p ∈ [0, 1)`.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_jacobi(x: f64, p: f64, out: *mut LagsurfJacobi) -> LagsurfStatus {
    guard(|| {
        let j = jacobi(x, EllipticModulus::new(p)?);
        *out_ref(out)? = LagsurfJacobi { sn: j.sn, cn: j.cn, dn: j.dn };
        Ok(())
    })
}

/// Complete elliptic integrals `K(p)` and `E(p)`.
#[no_mangle]
pub unsafe extern "C" fn lagsurf_complete_elliptic(p: f64, k: *mut f64, e: *mut f64) -> LagsurfStatus {
    guard(|| {
        let m = EllipticModulus::new(p)?;
        *out_ref(k)? = complete_k(m);
        *out_ref(e)? = complete_e(m);
        Ok(())
    })
}
