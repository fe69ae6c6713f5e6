//! The minimal Lagrangian Klein bottle `B` and its algebraic description.

use std::f64::consts::PI;

use crate::dual::Scalar;
use crate::elliptic::{complete_e, complete_k, jacobi, EllipticModulus};
use crate::error::{Error, Result};
use crate::geometry::{Expectations, Gluing, ParamDomain, ProductMap, ProductPoint, SurfaceSpec};

#[derive(Debug, Clone, Copy)]
struct KleinB {
    modulus: EllipticModulus,
}

impl ProductMap for KleinB {
    fn map<S: Scalar>(&self, t: S, s: S) -> [[S; 3]; 2] {
        let r3 = 3f64.sqrt();
        let (sn, cn, dn) = (t * r3).jacobi(self.modulus);
        let k = (dn * 3.0).powi(-1);
        let sq = sn * sn;
        let (a, b) = (s * (4.0 / r3), s * (2.0 / r3));
        let twice = sn * cn * 2.0;
        let f = sq * 2.0 - 3.0;
        let g = sq * 4.0 - 3.0;
        [
            [-(twice * k), -(f * a.sin() * k), f * a.cos() * k],
            [-(twice * 2.0 * k), -(g * b.sin() * k), -(g * b.cos() * k)],
        ]
    }
}

/// Periods of the double cover and the glide centre: `(2K/√3, √3π, K/√3)`.
pub fn klein_periods() -> (f64, f64, f64) {
    let k = complete_k(EllipticModulus::klein());
    let r3 = 3f64.sqrt();
    (2.0 * k / r3, r3 * PI, k / r3)
}

pub fn make_klein_bottle_b() -> SurfaceSpec {
    let (pt, ps, c) = klein_periods();
    let expects = Expectations {
        lagrangian: true,
        minimal: true,
        parallel_h: true,
        conformal: true,
        orientable: false,
        compact: true,
        euler_characteristic: Some(0),
        ..Expectations::default()
    };
    SurfaceSpec::from_map("klein-b", ParamDomain::klein(pt, ps, c, true), expects, KleinB {
        modulus: EllipticModulus::klein(),
    })
}

/// `e^{2u(t)} = 6 dn²(√3t) + 2/(3 dn²(√3t))`
pub fn klein_conformal_factor(t: f64) -> f64 {
    let dn = jacobi(3f64.sqrt() * t, EllipticModulus::klein()).dn;
    6.0 * dn * dn + 2.0 / (3.0 * dn * dn)
}

/// `12πE(2√2/3)`
pub fn klein_area() -> f64 {
    12.0 * PI * complete_e(EllipticModulus::klein())
}

/// Principal square root of `re + i im`.
fn principal_sqrt(re: f64, im: f64) -> (f64, f64) {
    let r = re.hypot(im).sqrt();
    let a = 0.5 * im.atan2(re);
    (r * a.cos(), r * a.sin())
}

/// Deviation from `{2x = y, Re(√z w) = Im(√z w)}` with `(x, z), (y, w) ∈ ℝ×ℂ`.
pub fn klein_membership_residual(p: &ProductPoint) -> f64 {
    let (sr, si) = principal_sqrt(p.x[1], p.x[2]);
    let (wr, wi) = (p.y[1], p.y[2]);
    let (re, im) = (sr * wr - si * wi, sr * wi + si * wr);
    (2.0 * p.x[0] - p.y[0]).abs().max((re - im).abs())
}

/// Largest coordinate change of the surface under its deck group generators
/// (translations, and the glide on Klein domains).
pub fn deck_residual(surface: &SurfaceSpec, t: f64, s: f64) -> Result<f64> {
    let d = &surface.domain;
    let p = surface.eval(t, s)?.as_vector();
    let images: Vec<(f64, f64)> = match d.gluing {
        Gluing::Torus { period_t, period_s } => vec![(t + period_t, s), (t, s + period_s)],
        Gluing::Klein { period_t, period_s, .. } => {
            vec![(t + period_t, s), (t, s + period_s), d.glide(t, s).expect("klein glide")]
        }
        _ => {
            return Err(Error::Precondition(format!("{} has no deck group", surface.name)));
        }
    };
    let mut worst: f64 = 0.0;
    for (a, b) in images {
        worst = worst.max((surface.eval(a, b)?.as_vector() - p).max_abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_value() {
        let b = make_klein_bottle_b();
        let p = b.eval(0.0, 0.0).unwrap();
        assert!((p.x - crate::geometry::Vec3::new(0.0, 0.0, -1.0)).amax() < 1e-15);
    }

    #[test]
    fn principal_branch() {
        let (a, b) = principal_sqrt(-1.0, 0.0);
        assert!(a.abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
        let (a, b) = principal_sqrt(0.0, -4.0);
        assert!((a - 2f64.sqrt()).abs() < 1e-15 && (b + 2f64.sqrt()).abs() < 1e-15);
    }
}
