use std::f64::consts::FRAC_PI_2;

use lagsurf::elliptic::{complete_e, complete_k, jacobi, jacobi_derivatives, EllipticModulus};
use proptest::prelude::*;

/// Moduli shared by the quadrature comparisons.
const MODULI: [f64; 5] = [0.0, 0.3, 0.6, 0.942_809_041_582_063_4, 0.99];

/// K(p) and E(p) at each of `MODULI`, frozen from a 30-digit evaluation.
const K_FROZEN: [f64; 5] = [
    1.570_796_326_794_896_6,
    1.608_048_619_930_512_8,
    1.750_753_802_915_752_5,
    2.528_625_532_218_894,
    3.356_600_523_361_192,
];
const E_FROZEN: [f64; 5] = [
    1.570_796_326_794_896_6,
    1.534_833_464_923_249,
    1.418_083_394_448_724_2,
    1.113_741_101_712_938_2,
    1.028_475_809_028_804,
];

/// Adaptive Simpson quadrature on `[a, b]`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn k_quadrature(p: f64) -> f64 {
    simpson(&|t: f64| 1.0 / (1.0 - p * p * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-12)
}

fn e_quadrature(p: f64) -> f64 {
    simpson(&|t: f64| (1.0 - p * p * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-12)
}

/// `(sn, cn, dn)` at `x` by RK4 on `sn' = cn dn, cn' = −sn dn, dn' = −p² sn cn`.
fn jacobi_ode(x: f64, p: f64) -> [f64; 3] {
    let rhs = |y: [f64; 3]| [y[1] * y[2], -y[0] * y[2], -p * p * y[0] * y[1]];
    let n = 20_000;
    let h = x / n as f64;
    let mut y = [0.0, 1.0, 1.0];
    let axpy = |y: [f64; 3], k: [f64; 3], a: f64| [y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2]];
    for _ in 0..n {
        let k1 = rhs(y);
        let k2 = rhs(axpy(y, k1, 0.5 * h));
        let k3 = rhs(axpy(y, k2, 0.5 * h));
        let k4 = rhs(axpy(y, k3, h));
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn complete_integrals_agree_with_quadrature() {
    for (i, &p) in MODULI.iter().enumerate() {
        let m = EllipticModulus::new(p).unwrap();
        let (k, e) = (complete_k(m), complete_e(m));
        assert!(rel(k, k_quadrature(p)) < 1e-10, "K({p})");
        assert!(rel(e, e_quadrature(p)) < 1e-10, "E({p})");
        assert!(rel(k, K_FROZEN[i]) < 1e-14, "K({p}) = {k}");
        assert!(rel(e, E_FROZEN[i]) < 1e-14, "E({p}) = {e}");
    }
}

#[test]
fn klein_modulus_values() {
    let m = EllipticModulus::klein();
    assert!((m.p() - 8f64.sqrt() / 3.0).abs() < 1e-16);
    assert!((m.complementary() - 1.0 / 3.0).abs() < 1e-15);
    assert!((complete_k(m) - 2.5283).abs() < 1e-3);
    assert!((complete_e(m) - 1.1136).abs() < 1e-3);
}

#[test]
fn jacobi_matches_the_defining_ode() {
    let m = EllipticModulus::klein();
    let j = jacobi(0.7, m);
    let y = jacobi_ode(0.7, m.p());
    assert!((j.sn - y[0]).abs() < 1e-12);
    assert!((j.cn - y[1]).abs() < 1e-12);
    assert!((j.dn - y[2]).abs() < 1e-12);
    // 30-digit reference values.
    assert!((j.sn - 0.608_812_189_561_442_4).abs() < 1e-14);
    assert!((j.cn - 0.793_314_387_769_062_4).abs() < 1e-14);
    assert!((j.dn - 0.818_859_758_901_311).abs() < 1e-14);
    assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-12);
    assert!((j.dn * j.dn + m.p() * m.p() * j.sn * j.sn - 1.0).abs() < 1e-12);
}

#[test]
fn modulus_one_is_a_domain_error() {
    assert!(EllipticModulus::new(1.0).is_err());
    assert!(EllipticModulus::new(1.2).is_err());
}

fn modulus() -> impl Strategy<Value = f64> {
    0.0..0.999f64
}

proptest! {
    #[test]
    fn pythagorean_identities(x in -50.0..50.0f64, p in modulus()) {
        let m = EllipticModulus::new(p).unwrap();
        let j = jacobi(x, m);
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() <= 1e-12);
        prop_assert!((j.dn * j.dn + p * p * j.sn * j.sn - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn derivatives_match_central_differences(x in -10.0..10.0f64, p in 0.0..0.95f64) {
        let m = EllipticModulus::new(p).unwrap();
        let h = 1e-5;
        let (a, b) = (jacobi(x + h, m), jacobi(x - h, m));
        let (dsn, dcn, ddn) = jacobi_derivatives(x, m);
        prop_assert!(((a.sn - b.sn) / (2.0 * h) - dsn).abs() <= 1e-8);
        prop_assert!(((a.cn - b.cn) / (2.0 * h) - dcn).abs() <= 1e-8);
        prop_assert!(((a.dn - b.dn) / (2.0 * h) - ddn).abs() <= 1e-8);
    }

    #[test]
    fn derivative_closed_forms(x in -10.0..10.0f64, p in modulus()) {
        let m = EllipticModulus::new(p).unwrap();
        let j = jacobi(x, m);
        let (dsn, dcn, ddn) = jacobi_derivatives(x, m);
        prop_assert!((dsn - j.cn * j.dn).abs() <= 1e-15);
        prop_assert!((dcn + j.sn * j.dn).abs() <= 1e-15);
        prop_assert!((ddn + p * p * j.sn * j.cn).abs() <= 1e-15);
    }

    #[test]
    fn four_k_periodicity(x in -5.0..5.0f64, p in 0.0..0.99f64) {
        let m = EllipticModulus::new(p).unwrap();
        let k = complete_k(m);
        let (a, b) = (jacobi(x, m), jacobi(x + 4.0 * k, m));
        prop_assert!((a.sn - b.sn).abs() <= 1e-11);
        prop_assert!((a.cn - b.cn).abs() <= 1e-11);
        prop_assert!((a.dn - b.dn).abs() <= 1e-11);
    }

    #[test]
    fn integral_bounds(p in 1e-6..0.999f64) {
        let m = EllipticModulus::new(p).unwrap();
        prop_assert!(complete_k(m) > FRAC_PI_2);
        let e = complete_e(m);
        prop_assert!(e < FRAC_PI_2 && e > 1.0);
    }
}
