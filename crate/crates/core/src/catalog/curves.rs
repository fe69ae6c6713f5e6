//! Circles on the unit sphere and products of two of them.

use std::f64::consts::PI;

use crate::dual::Scalar;
use crate::error::{Error, Result};
use crate::geometry::{Expectations, ParamDomain, ProductMap, SurfaceSpec, Vec3};

/// A circle `{x₁ = height}` of the unit sphere traversed at constant speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceCurve {
    height: f64,
    speed: f64,
}

impl SpaceCurve {
    pub fn new(height: f64, speed: f64) -> Result<Self> {
        if !(height.abs() < 1.0) || !(speed > 0.0) || !speed.is_finite() {
            return Err(Error::Domain(format!(
                "circle needs |height| < 1 and positive speed, got ({height}, {speed})"
            )));
        }
        Ok(Self { height, speed })
    }

    /// Unit-speed great circle `(0, cos t, sin t)`.
    pub fn great() -> Self {
        Self { height: 0.0, speed: 1.0 }
    }

    /// Unit-speed latitude circle at `x₁ = height`.
    pub fn latitude(height: f64) -> Result<Self> {
        Self::new(height, 1.0)
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn radius(&self) -> f64 {
        (1.0 - self.height * self.height).sqrt()
    }

    pub fn period(&self) -> f64 {
        2.0 * PI * self.radius() / self.speed
    }

    /// Geodesic curvature in the sphere.
    pub fn geodesic_curvature(&self) -> f64 {
        self.height / self.radius()
    }

    pub fn is_great(&self) -> bool {
        self.height == 0.0
    }

    pub fn eval<S: Scalar>(&self, t: S) -> [S; 3] {
        let r = self.radius();
        let a = t * (self.speed / r);
        [S::cst(self.height), a.cos() * r, a.sin() * r]
    }

    pub fn derivative(&self, t: f64) -> Vec3 {
        let r = self.radius();
        let a = t * self.speed / r;
        Vec3::new(0.0, -self.speed * a.sin(), self.speed * a.cos())
    }
}

#[derive(Debug, Clone, Copy)]
struct CurveProduct(SpaceCurve, SpaceCurve);

impl ProductMap for CurveProduct {
    fn map<S: Scalar>(&self, t: S, s: S) -> [[S; 3]; 2] {
        [self.0.eval(t), self.1.eval(s)]
    }
}

/// `(t, s) ↦ (α(t), β(s))` on the torus of the two periods.
pub fn make_product_of_curves(alpha: SpaceCurve, beta: SpaceCurve) -> SurfaceSpec {
    let geodesic = alpha.is_great() && beta.is_great();
    let expects = Expectations {
        lagrangian: true,
        minimal: geodesic,
        constant_c: Some(0.0),
        constant_k: Some(0.0),
        totally_geodesic: geodesic,
        parallel_h: true,
        conformal: alpha.speed == beta.speed,
        orientable: true,
        compact: true,
        genus: Some(1),
        euler_characteristic: Some(0),
    };
    let domain = ParamDomain::torus(alpha.period(), beta.period(), alpha.speed == beta.speed);
    let name = format!("product:{}:{}", curve_name(&alpha), curve_name(&beta));
    SurfaceSpec::from_map(name, domain, expects, CurveProduct(alpha, beta))
}

fn curve_name(c: &SpaceCurve) -> String {
    let base = if c.is_great() { "great".to_string() } else { format!("lat={}", c.height) };
    if c.speed == 1.0 {
        base
    } else {
        format!("{base}@{}", c.speed)
    }
}

/// The flat totally geodesic torus `{x₁ = y₁ = 0}`.
pub fn make_t() -> SurfaceSpec {
    let mut s = make_product_of_curves(SpaceCurve::great(), SpaceCurve::great());
    s.name = "torus-t".into();
    s
}

/// The torus `{x₁ = a, y₁ = b}` in arc-length coordinates.
pub fn make_t_ab(a: f64, b: f64) -> Result<SurfaceSpec> {
    if a * a + b * b == 0.0 {
        return Err(Error::Input("a = b = 0 is the torus T; use torus-t".into()));
    }
    if !(0.0..1.0).contains(&a) || !(0.0..1.0).contains(&b) {
        return Err(Error::Domain(format!("torus heights must lie in [0, 1), got ({a}, {b})")));
    }
    let mut s = make_product_of_curves(SpaceCurve::latitude(a)?, SpaceCurve::latitude(b)?);
    s.name = format!("torus-ab:{a}:{b}");
    Ok(s)
}

/// `|H|` of a product of circles: half the norm of the two curvature vectors.
pub fn product_mean_curvature_norm(alpha: &SpaceCurve, beta: &SpaceCurve) -> f64 {
    0.5 * alpha.geodesic_curvature().hypot(beta.geodesic_curvature())
}
