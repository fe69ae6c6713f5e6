use lagsurf::catalog::make_klein_bottle_b;
use lagsurf::geometry::{associated_jacobian, first_form, jet, JetScheme};
use lagsurf::sinh_gordon::{
    first_integral, integrate_reduced, lawson_period, lawson_solution, reconstruct, reconstruct_c,
    reconstruct_u, sg_residual, sg_residual_analytic, SGField,
};
use lagsurf::Error;
use proptest::prelude::*;

fn lawson_line(n: usize, shift: f64) -> SGField {
    let dt = 2.0 * lawson_period() / n as f64;
    SGField::sample(n, 1, (shift, dt), (0.0, 1.0), false, |t, _| lawson_solution(t)).unwrap()
}

#[test]
fn trivial_fields() {
    let zero = SGField::sample(8, 8, (0.0, 0.1), (0.0, 0.1), true, |_, _| 0.0).unwrap();
    assert_eq!(sg_residual(&zero).unwrap(), 0.0);
    let rec = reconstruct(&zero).unwrap();
    assert!(rec.u.iter().all(|&u| (u - 0.5 * 4f64.ln()).abs() < 1e-15));
    assert!(rec.c.iter().all(|&c| c == 0.0));
    assert!(rec.compat_residual() < 1e-15);

    let one = SGField::sample(8, 8, (0.0, 0.1), (0.0, 0.1), true, |_, _| 1.0).unwrap();
    assert!((sg_residual(&one).unwrap() - 0.5 * 2f64.sinh()).abs() < 1e-14);
}

#[test]
fn small_or_broken_fields_are_rejected() {
    let tiny = SGField::sample(2, 1, (0.0, 0.1), (0.0, 1.0), false, |_, _| 0.0).unwrap();
    assert!(matches!(sg_residual(&tiny), Err(Error::Domain(_))));
    assert!(SGField::line(0.0, 0.1, vec![0.0, f64::NAN, 0.0]).is_err());
    assert!(matches!(SGField::new(2, 2, (0.0, 1.0), (0.0, 1.0), false, vec![0.0; 3]), Err(Error::Input(_))));
}

#[test]
fn lawson_solution_solves_sinh_gordon() {
    // tanh v(0) = tanh(log √3) = 1/2.
    assert!((lawson_solution(0.0).tanh() - 0.5).abs() < 1e-15);
    let n = 512;
    let dt = 2.0 * lawson_period() / n as f64;
    let analytic = sg_residual_analytic(|t, _| lawson_solution(t), (0..n).map(|i| (i as f64 * dt, 0.0)));
    assert!(analytic < 1e-6, "{analytic}");
    let fd = sg_residual(&lawson_line(n, 0.0)).unwrap();
    assert!(fd < 1e-4, "{fd}");
}

#[test]
fn reduced_ode_reproduces_lawson() {
    let sol = integrate_reduced(0.5f64.atanh(), 0.0, lawson_period(), 1e-3).unwrap();
    let worst = sol.t.iter().zip(&sol.v).map(|(&t, &v)| (v - lawson_solution(t)).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-7, "{worst}");
    assert!(sol.first_integral_drift() < 1e-8);

    let rest = integrate_reduced(0.0, 0.0, 5.0, 1e-3).unwrap();
    assert!(rest.v.iter().all(|&v| v == 0.0));

    assert!(matches!(integrate_reduced(0.0, 0.0, 1.0, 0.0), Err(Error::Domain(_))));
    // The flow itself is bounded; a coarse step from a huge start overflows.
    assert!(matches!(integrate_reduced(30.0, 0.0, 10.0, 0.1), Err(Error::Divergence { .. })));
}

#[test]
fn lawson_reconstruction_is_compatible() {
    let rec = reconstruct(&lawson_line(512, 0.0)).unwrap();
    assert!(rec.compat_residual() < 1e-4, "{}", rec.compat_residual());
    assert!(rec.algebraic < 1e-12);
}

#[test]
fn reconstruction_matches_klein_bottle() {
    let b = make_klein_bottle_b();
    for k in 0..40 {
        let t = b.domain.t_range.0 + (k as f64 + 0.5) * b.domain.t_len() / 40.0;
        let j = jet(&b, t, 0.37, JetScheme::Analytic).unwrap();
        let g = first_form(&j).unwrap();
        let v = lawson_solution(t);
        assert!((g.g11 - reconstruct_u(v).mul_add(2.0, 0.0).exp()).abs() < 1e-6);
        let c = associated_jacobian(&j).unwrap();
        assert!((c.abs() - reconstruct_c(v).abs()).abs() < 1e-6, "{t}: {c} vs {}", reconstruct_c(v));
    }
}

proptest! {
    #[test]
    fn first_integral_is_conserved(v0 in -1.5..1.5f64, dv0 in -2.0..2.0f64) {
        let sol = integrate_reduced(v0, dv0, 2.0, 1e-3).unwrap();
        prop_assert!(sol.first_integral_drift() <= 1e-8);
        let e = first_integral(v0, dv0);
        prop_assert!(sol.v.iter().all(|&v| (2.0 * v).cosh() <= e + 1e-9));
    }

    #[test]
    fn reconstructed_c_stays_inside_the_open_interval(v0 in -3.0..3.0f64, dv0 in -2.0..2.0f64) {
        let sol = integrate_reduced(v0, dv0, 1.0, 1e-3).unwrap();
        for &v in &sol.v {
            let c = reconstruct_c(v);
            prop_assert!(c.abs() < 0.5);
            let u = reconstruct_u(v);
            let alg = (1.0 - 4.0 * c * c) * (4.0 * u).exp();
            prop_assert!((alg - 16.0).abs() <= 1e-9 * (4.0 * u).exp());
        }
    }

    #[test]
    fn residual_is_translation_invariant(shift in 0.0..3.0f64) {
        let a = sg_residual(&lawson_line(512, 0.0)).unwrap();
        let b = sg_residual(&lawson_line(512, shift)).unwrap();
        prop_assert!(a < 1e-4 && b < 1e-4);
    }
}
