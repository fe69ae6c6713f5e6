//! Kähler structure of S²×S² ⊂ ℝ³×ℝ³.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Tangency violations beyond this abort `ambient_j` / `symplectic_form`.
pub const TANGENCY_TOL: f64 = 1e-6;

/// A point of S²×S².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductPoint {
    pub x: Vec3,
    pub y: Vec3,
}

/// A vector of ℝ³×ℝ³. Tangent vectors of S²×S², raw second partials and
/// mean-curvature vectors all use this representation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProductVector {
    pub v1: Vec3,
    pub v2: Vec3,
}

/// A tangent vector at a [`ProductPoint`]; `⟨v1, x⟩ = ⟨v2, y⟩ = 0`.
pub type ProductTangent = ProductVector;

impl ProductPoint {
    pub fn new(x: Vec3, y: Vec3) -> Self {
        Self { x, y }
    }

    /// Re-projects both factors to the unit sphere.
    pub fn normalized(self) -> Self {
        Self { x: self.x.normalize(), y: self.y.normalize() }
    }

    pub fn as_vector(self) -> ProductVector {
        ProductVector { v1: self.x, v2: self.y }
    }

    /// Largest deviation of `|x|`, `|y|` from 1.
    pub fn unit_residual(&self) -> f64 {
        (self.x.norm() - 1.0).abs().max((self.y.norm() - 1.0).abs())
    }

    /// Largest of `|⟨v1, x⟩|`, `|⟨v2, y⟩|`.
    pub fn tangency_residual(&self, v: &ProductVector) -> f64 {
        v.v1.dot(&self.x).abs().max(v.v2.dot(&self.y).abs())
    }

    /// Orthogonal projection of an ℝ⁶ vector onto `T_{(x,y)}(S²×S²)`.
    pub fn project(&self, v: &ProductVector) -> ProductVector {
        ProductVector {
            v1: v.v1 - self.x * v.v1.dot(&self.x),
            v2: v.v2 - self.y * v.v2.dot(&self.y),
        }
    }

    /// The unnormalised ambient normal `(x, −y)` of S²×S² in S⁵(√2).
    pub fn hat(&self) -> ProductVector {
        ProductVector { v1: self.x, v2: -self.y }
    }

    fn check_tangent(&self, v: &ProductVector) -> Result<()> {
        let r = self.tangency_residual(v);
        if r > TANGENCY_TOL * (1.0 + v.norm()) {
            return Err(Error::Precondition(format!(
                "vector is not tangent to S2xS2 (residual {r:.3e})"
            )));
        }
        Ok(())
    }
}

impl ProductVector {
    pub fn new(v1: Vec3, v2: Vec3) -> Self {
        Self { v1, v2 }
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.v1.dot(&o.v1) + self.v2.dot(&o.v2)
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.v1.amax().max(self.v2.amax())
    }
}

impl Add for ProductVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v1: self.v1 + o.v1, v2: self.v2 + o.v2 }
    }
}

impl Sub for ProductVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v1: self.v1 - o.v1, v2: self.v2 - o.v2 }
    }
}

impl Neg for ProductVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v1: -self.v1, v2: -self.v2 }
    }
}

impl Mul<f64> for ProductVector {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self { v1: self.v1 * k, v2: self.v2 * k }
    }
}

/// `J(v) = (x × v1, y × v2)` without the tangency check.
#[inline]
pub fn apply_j(p: &ProductPoint, v: &ProductVector) -> ProductVector {
    ProductVector { v1: p.x.cross(&v.v1), v2: p.y.cross(&v.v2) }
}

/// Product complex structure of S²×S².
pub fn ambient_j(p: &ProductPoint, v: &ProductTangent) -> Result<ProductTangent> {
    p.check_tangent(v)?;
    Ok(apply_j(p, v))
}

/// `ω(v, w) = det{x, v1, w1} + det{y, v2, w2}` without the tangency check.
#[inline]
pub fn omega(p: &ProductPoint, v: &ProductVector, w: &ProductVector) -> f64 {
    apply_j(p, v).dot(w)
}

/// Kähler form `ω = π₁*ω₀ + π₂*ω₀`.
pub fn symplectic_form(p: &ProductPoint, v: &ProductTangent, w: &ProductTangent) -> Result<f64> {
    p.check_tangent(v)?;
    p.check_tangent(w)?;
    Ok(omega(p, v, w))
}

/// `σ̃(v, w) = (−⟨v1,w1⟩x, −⟨v2,w2⟩y)`, the second fundamental form of S²×S² in ℝ⁶.
pub fn ambient_second_form(p: &ProductPoint, v: &ProductVector, w: &ProductVector) -> ProductVector {
    ProductVector { v1: -p.x * v.v1.dot(&w.v1), v2: -p.y * v.v2.dot(&w.v2) }
}

/// An isometry of S²×S² in block form: either `(x, y) ↦ (A x, B y)` or,
/// when `swap` is set, `(x, y) ↦ (A y, B x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub a: Matrix3<f64>,
    pub b: Matrix3<f64>,
    pub swap: bool,
}

impl Isometry {
    pub fn diagonal(a: Matrix3<f64>, b: Matrix3<f64>) -> Self {
        Self { a, b, swap: false }
    }

    pub fn identity() -> Self {
        Self::diagonal(Matrix3::identity(), Matrix3::identity())
    }

    /// Holomorphic isometries have `A, B ∈ SO(3)` and no factor swap.
    pub fn is_holomorphic(&self) -> bool {
        !self.swap && (self.a.determinant() - 1.0).abs() < 1e-12 && (self.b.determinant() - 1.0).abs() < 1e-12
    }

    pub fn apply_point(&self, p: &ProductPoint) -> ProductPoint {
        let v = self.apply_vector(&p.as_vector());
        ProductPoint { x: v.v1, y: v.v2 }
    }

    pub fn apply_vector(&self, v: &ProductVector) -> ProductVector {
        if self.swap {
            ProductVector { v1: self.a * v.v2, v2: self.b * v.v1 }
        } else {
            ProductVector { v1: self.a * v.v1, v2: self.b * v.v2 }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(v: [f64; 3]) -> Vec3 {
        Vec3::from(v).normalize()
    }

    fn tangent_at(p: &ProductPoint, a: [f64; 3], b: [f64; 3]) -> ProductVector {
        p.project(&ProductVector::new(Vec3::from(a), Vec3::from(b)))
    }

    #[test]
    fn j_on_basis_vectors() {
        let p = ProductPoint::new(Vec3::x(), Vec3::z());
        let v = ProductVector::new(Vec3::y(), Vec3::x());
        let jv = ambient_j(&p, &v).unwrap();
        assert_eq!(jv, ProductVector::new(Vec3::z(), Vec3::y()));
    }

    #[test]
    fn omega_on_one_factor() {
        let p = ProductPoint::new(Vec3::x(), Vec3::x());
        let v = ProductVector::new(Vec3::y(), Vec3::zeros());
        let w = ProductVector::new(Vec3::z(), Vec3::zeros());
        assert_eq!(symplectic_form(&p, &v, &w).unwrap(), 1.0);
    }

    #[test]
    fn non_tangent_rejected() {
        let p = ProductPoint::new(Vec3::x(), Vec3::x());
        let v = ProductVector::new(Vec3::x(), Vec3::zeros());
        assert!(matches!(ambient_j(&p, &v), Err(Error::Precondition(_))));
    }

    fn vec3() -> impl Strategy<Value = [f64; 3]> {
        prop::array::uniform3(-1.0..1.0f64)
    }

    proptest! {
        #[test]
        fn j_squares_to_minus_identity(x in vec3(), y in vec3(), a in vec3(), b in vec3()) {
            prop_assume!(Vec3::from(x).norm() > 0.1 && Vec3::from(y).norm() > 0.1);
            let p = ProductPoint::new(unit(x), unit(y));
            let v = tangent_at(&p, a, b);
            let jjv = ambient_j(&p, &ambient_j(&p, &v).unwrap()).unwrap();
            prop_assert!((jjv + v).max_abs() <= 1e-12);
        }

        #[test]
        fn j_is_an_isometry_and_omega_antisymmetric(
            x in vec3(), y in vec3(), a in vec3(), b in vec3(), c in vec3(), d in vec3()
        ) {
            prop_assume!(Vec3::from(x).norm() > 0.1 && Vec3::from(y).norm() > 0.1);
            let p = ProductPoint::new(unit(x), unit(y));
            let v = tangent_at(&p, a, b);
            let w = tangent_at(&p, c, d);
            let jv = apply_j(&p, &v);
            let jw = apply_j(&p, &w);
            prop_assert!((jv.dot(&jw) - v.dot(&w)).abs() <= 1e-12);
            prop_assert!(omega(&p, &v, &v).abs() <= 1e-15);
            prop_assert!((omega(&p, &v, &w) + omega(&p, &w, &v)).abs() <= 1e-14);
        }
    }
}
