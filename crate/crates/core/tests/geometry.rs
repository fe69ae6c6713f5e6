use std::sync::OnceLock;

use lagsurf::catalog::{make_klein_bottle_b, make_m0, make_t, resolve_surface};
use lagsurf::elliptic::{jacobi, EllipticModulus};
use lagsurf::geometry::ambient::{apply_j, omega};
use lagsurf::geometry::forms::jacobian_in_frame;
use lagsurf::geometry::{
    ambient_j, associated_jacobian, degree, first_form, gauss_equation_residual, jet, lagrangian_residual,
    orthonormal_frame, rank_identity_residual, second_form, symplectic_form, GridSpec, Isometry, JetScheme,
    ProductPoint, ProductVector, SurfaceSpec, Vec3,
};
use lagsurf::Error;
use nalgebra::Rotation3;
use proptest::prelude::*;

const A: JetScheme = JetScheme::Analytic;

const LAGRANGIAN: [&str; 12] = [
    "m0",
    "torus-t",
    "torus-ab:0.5:0",
    "torus-ab:0.3:0.4",
    "product:great:lat=0.5",
    "product:lat=0.3@1.7:lat=-0.2",
    "graph-antipodal",
    "const-c:0.3",
    "clifford-gauss",
    "sphere-gauss",
    "lawson-gauss",
    "klein-b",
];

fn surfaces() -> &'static Vec<SurfaceSpec> {
    static S: OnceLock<Vec<SurfaceSpec>> = OnceLock::new();
    S.get_or_init(|| LAGRANGIAN.iter().map(|n| resolve_surface(n).unwrap()).collect())
}

/// A parameter point at fractions `(a, b)` of the rectangle, kept clear of
/// unglued edges.
fn point(s: &SurfaceSpec, a: f64, b: f64) -> (f64, f64) {
    let d = &s.domain;
    let lerp = |r: (f64, f64), f: f64| r.0 + 0.06 + f * (r.1 - r.0 - 0.12);
    (lerp(d.t_range, a), lerp(d.s_range, b))
}

fn v3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

#[test]
fn complex_structure_on_basis_vectors() {
    let p = ProductPoint::new(Vec3::x(), Vec3::z());
    let v = ProductVector::new(Vec3::y(), Vec3::x());
    let jv = ambient_j(&p, &v).unwrap();
    assert_eq!(jv, ProductVector::new(Vec3::z(), Vec3::y()));
}

#[test]
fn symplectic_form_of_one_factor() {
    let p = ProductPoint::new(Vec3::x(), Vec3::x());
    let v = ProductVector::new(Vec3::y(), Vec3::zeros());
    let w = ProductVector::new(Vec3::z(), Vec3::zeros());
    assert_eq!(symplectic_form(&p, &v, &w).unwrap(), 1.0);
}

#[test]
fn non_tangent_vectors_are_rejected() {
    let p = ProductPoint::new(Vec3::x(), Vec3::z());
    let v = ProductVector::new(Vec3::x(), Vec3::zeros());
    assert!(matches!(ambient_j(&p, &v), Err(Error::Precondition(_))));
}

#[test]
fn m0_partials_are_antipodal() {
    let m0 = make_m0();
    let j = jet(&m0, 1.3, 0.4, A).unwrap();
    assert!((j.d_t.v1 + j.d_t.v2).amax() < 1e-15);
    assert!((j.d_s.v1 + j.d_s.v2).amax() < 1e-15);
    let ff = first_form(&j).unwrap();
    // Lambert chart has area density 1 on each factor, so det g = 4.
    assert!((ff.det() - 4.0).abs() < 1e-12);
}

#[test]
fn flat_torus_metric_is_euclidean() {
    let t = make_t();
    for (a, b) in [(0.1, 0.2), (2.0, 5.0)] {
        let g = first_form(&jet(&t, a, b, A).unwrap()).unwrap();
        assert!((g.g11 - 1.0).abs() < 1e-15 && g.g12.abs() < 1e-15 && (g.g22 - 1.0).abs() < 1e-15);
    }
}

#[test]
fn klein_bottle_origin_and_metric() {
    let b = make_klein_bottle_b();
    let p = b.eval(0.0, 0.0).unwrap();
    assert!((p.x - Vec3::new(0.0, 0.0, -1.0)).amax() < 1e-15);
    for t in [0.0, 0.3, 0.9, 1.4] {
        let g = first_form(&jet(&b, t, 0.7, A).unwrap()).unwrap();
        let dn = jacobi(3f64.sqrt() * t, EllipticModulus::klein()).dn;
        let e2u = 6.0 * dn * dn + 2.0 / (3.0 * dn * dn);
        assert!((g.g11 - e2u).abs() < 1e-12 && (g.g22 - e2u).abs() < 1e-12 && g.g12.abs() < 1e-12);
    }
}

#[test]
fn identity_graph_is_not_lagrangian() {
    let s = resolve_surface("graph-identity").unwrap();
    let j = jet(&s, 0.4, 0.2, A).unwrap();
    assert!(lagrangian_residual(&j).unwrap() > 0.5);
    assert!(matches!(associated_jacobian(&j), Err(Error::Precondition(_))));
}

#[test]
fn points_outside_the_domain_are_rejected() {
    let s = resolve_surface("const-c:0.3").unwrap();
    assert!(matches!(jet(&s, 0.0, 1.5, A), Err(Error::Domain(_))));
}

#[test]
fn degree_needs_an_orientable_domain() {
    let b = make_klein_bottle_b();
    assert!(degree(&b, GridSpec::new(8, 8), A).is_err());
    let cover = b.oriented_double_cover();
    assert!(degree(&cover, GridSpec::new(32, 32), A).unwrap().abs() < 1e-10);
}

#[test]
fn glide_twice_is_a_translation() {
    let b = make_klein_bottle_b();
    let d = &b.domain;
    let (t1, s1) = d.glide(0.3, 0.2).unwrap();
    let (t2, s2) = d.glide(t1, s1).unwrap();
    assert!((t2 - 0.3).abs() < 1e-15);
    assert!((s2 - 0.2 - d.s_len() * 2.0).abs() < 1e-14 || (s2 - 0.2 - d.s_len()).abs() < 1e-14);
}

fn unit() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("nonzero", |a| v3(*a).norm() > 1e-3)
        .prop_map(|a| v3(a).normalize())
}

fn tangent_at(p: &ProductPoint, a: [f64; 3], b: [f64; 3]) -> ProductVector {
    p.project(&ProductVector::new(v3(a), v3(b)))
}

fn raw() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-2.0..2.0f64)
}

proptest! {
    #[test]
    fn j_is_a_complex_isometry(x in unit(), y in unit(), a in raw(), b in raw(), c in raw(), d in raw()) {
        let p = ProductPoint::new(x, y);
        let v = tangent_at(&p, a, b);
        let w = tangent_at(&p, c, d);
        let jv = apply_j(&p, &v);
        prop_assert!((apply_j(&p, &jv) + v).max_abs() <= 1e-12);
        prop_assert!((jv.dot(&apply_j(&p, &w)) - v.dot(&w)).abs() <= 1e-12);
        prop_assert!(omega(&p, &v, &v).abs() <= 1e-12);
        prop_assert!((omega(&p, &v, &w) + omega(&p, &w, &v)).abs() <= 1e-12);
        prop_assert!((symplectic_form(&p, &v, &w).unwrap() - jv.dot(&w)).abs() <= 1e-12);
    }

    #[test]
    fn lagrangian_surface_invariants(k in 0..LAGRANGIAN.len(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let s = &surfaces()[k];
        let (t, u) = point(s, a, b);
        let j = jet(s, t, u, A).unwrap();
        prop_assert!(j.tangency_residual() <= 1e-8);
        prop_assert!(lagrangian_residual(&j).unwrap() <= 1e-9);
        let c = associated_jacobian(&j).unwrap();
        prop_assert!(c * c <= 0.25 + 1e-9);
        prop_assert!(rank_identity_residual(&j).unwrap() <= 1e-8);
        prop_assert!(gauss_equation_residual(s, t, u, A).unwrap() <= 1e-4);
        if let Some(c0) = s.expects.constant_c {
            prop_assert!((c - c0).abs() <= 1e-8);
        }
        if s.expects.minimal {
            prop_assert!(second_form(s, t, u, A).unwrap().h_norm <= 1e-6);
        }
    }

    #[test]
    fn fd_jets_track_analytic_ones(k in 0..LAGRANGIAN.len(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let s = &surfaces()[k];
        let (t, u) = point(s, a, b);
        let fd = jet(s, t, u, JetScheme::FD_DEFAULT).unwrap();
        prop_assert!(fd.tangency_residual() <= 1e-5);
        prop_assert!((fd.point.as_vector() - jet(s, t, u, A).unwrap().point.as_vector()).max_abs() <= 1e-12);
    }

    #[test]
    fn eval_and_jet_positions_agree(k in 0..LAGRANGIAN.len(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let s = &surfaces()[k];
        let (t, u) = point(s, a, b);
        let p = s.eval(t, u).unwrap();
        prop_assert!((p.as_vector() - jet(s, t, u, A).unwrap().point.as_vector()).max_abs() <= 1e-12);
        prop_assert!(p.unit_residual() <= 1e-10);
    }

    #[test]
    fn c_is_frame_independent(k in 0..LAGRANGIAN.len(), a in 0.0..1.0f64, b in 0.0..1.0f64, angle in 0.0..6.3f64) {
        let s = &surfaces()[k];
        let (t, u) = point(s, a, b);
        let j = jet(s, t, u, A).unwrap();
        let frame = orthonormal_frame(&j).unwrap().rotated(angle);
        prop_assert!((jacobian_in_frame(&j, &frame) - associated_jacobian(&j).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn holomorphic_isometries_preserve_invariants(
        k in 0..LAGRANGIAN.len(), a in 0.0..1.0f64, b in 0.0..1.0f64,
        e1 in prop::array::uniform3(-3.0..3.0f64), e2 in prop::array::uniform3(-3.0..3.0f64),
    ) {
        let s = &surfaces()[k];
        let (t, u) = point(s, a, b);
        let ra = Rotation3::from_euler_angles(e1[0], e1[1], e1[2]).into_inner();
        let rb = Rotation3::from_euler_angles(e2[0], e2[1], e2[2]).into_inner();
        let moved = s.transformed(Isometry::diagonal(ra, rb));
        let (f0, f1) = (second_form(s, t, u, A).unwrap(), second_form(&moved, t, u, A).unwrap());
        for (x, y) in [(f0.g11, f1.g11), (f0.g12, f1.g12), (f0.g22, f1.g22), (f0.sigma_sq, f1.sigma_sq), (f0.h_norm, f1.h_norm)] {
            prop_assert!((x - y).abs() <= 1e-10);
        }
        prop_assert!((f0.c.unwrap() - f1.c.unwrap()).abs() <= 1e-10);
        prop_assert!((f0.k - f1.k).abs() <= 1e-8);
    }
}
