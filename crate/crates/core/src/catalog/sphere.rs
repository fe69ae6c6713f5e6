//! Lagrangian graphs over the sphere: `x ↦ (x, F(x))`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::dual::{Dual2, Scalar};
use crate::error::{Error, Result};
use crate::geometry::{Expectations, Gluing, ParamDomain, ProductMap, SurfaceSpec, Vec3};

/// A smooth self-map of the unit sphere, written generically so that its
/// differential is available by forward differentiation.
pub trait SphereMap: Send + Sync + 'static {
    fn apply<S: Scalar>(&self, x: [S; 3]) -> [S; 3];
}

/// `x ↦ −x`
#[derive(Debug, Clone, Copy)]
pub struct Antipodal;

impl SphereMap for Antipodal {
    fn apply<S: Scalar>(&self, x: [S; 3]) -> [S; 3] {
        [-x[0], -x[1], -x[2]]
    }
}

/// `x ↦ x`; its graph is not Lagrangian.
#[derive(Debug, Clone, Copy)]
pub struct IdentityMap;

impl SphereMap for IdentityMap {
    fn apply<S: Scalar>(&self, x: [S; 3]) -> [S; 3] {
        x
    }
}

/// `x ↦ A x` for an orthogonal matrix `A` given row-major.
#[derive(Debug, Clone, Copy)]
pub struct Orthogonal(pub [[f64; 3]; 3]);

impl SphereMap for Orthogonal {
    fn apply<S: Scalar>(&self, x: [S; 3]) -> [S; 3] {
        let a = &self.0;
        let row = |r: &[f64; 3]| x[0] * r[0] + x[1] * r[1] + x[2] * r[2];
        [row(&a[0]), row(&a[1]), row(&a[2])]
    }
}

/// `(x, y, z) ↦ (e^{iμ atanh z}(x + iy), −z)` with `μ = √(1−4λ²)/λ`: minus an
/// area-preserving twist of the sphere without its poles.
#[derive(Debug, Clone, Copy)]
pub struct ConstantJacobianTwist {
    pub lambda: f64,
}

impl ConstantJacobianTwist {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 0.5) {
            return Err(Error::Domain(format!("lambda must lie in (0, 1/2), got {lambda}")));
        }
        Ok(Self { lambda })
    }

    pub fn twist_rate(&self) -> f64 {
        (1.0 - 4.0 * self.lambda * self.lambda).sqrt() / self.lambda
    }
}

impl SphereMap for ConstantJacobianTwist {
    fn apply<S: Scalar>(&self, x: [S; 3]) -> [S; 3] {
        let a = x[2].atanh() * self.twist_rate();
        let (c, s) = (a.cos(), a.sin());
        [c * x[0] - s * x[1], s * x[0] + c * x[1], -x[2]]
    }
}

/// Cylindrical equal-area chart `(θ, z) ↦ (√(1−z²) cos θ, √(1−z²) sin θ, z)`,
/// positively oriented for the outward normal. Area density 1.
pub fn lambert<S: Scalar>(theta: S, z: S) -> [S; 3] {
    let r = (-(z * z) + 1.0).sqrt();
    [r * theta.cos(), r * theta.sin(), z]
}

/// Inverse stereographic projection from the south (`north = true`) or north
/// pole; both charts are positively oriented and conformal.
pub fn stereographic<S: Scalar>(u: S, v: S, north: bool) -> [S; 3] {
    let q = u * u + v * v;
    let d = q + 1.0;
    if north {
        [u * 2.0 / d, v * 2.0 / d, (-q + 1.0) / d]
    } else {
        [u * 2.0 / d, -(v * 2.0) / d, (q - 1.0) / d]
    }
}

#[derive(Clone, Copy)]
enum Chart {
    Lambert,
    Stereo { north: bool },
}

struct Graph<F> {
    f: Arc<F>,
    chart: Chart,
}

impl<F: SphereMap> ProductMap for Graph<F> {
    fn map<S: Scalar>(&self, t: S, s: S) -> [[S; 3]; 2] {
        let x = match self.chart {
            Chart::Lambert => lambert(t, s),
            Chart::Stereo { north } => stereographic(t, s, north),
        };
        [x, self.f.apply(x)]
    }
}

/// Half-width of the square parameter patch of the polar charts.
pub const POLAR_CHART_HALF_WIDTH: f64 = 1.0;

fn sphere_domain() -> ParamDomain {
    ParamDomain {
        t_range: (0.0, 2.0 * PI),
        s_range: (-1.0, 1.0),
        gluing: Gluing::Sphere { period_t: 2.0 * PI },
        conformal: false,
    }
}

/// Graph of `F` over the whole sphere: main chart `(θ, z)` plus two
/// stereographic charts about the poles.
pub fn make_graph<F: SphereMap>(name: &str, f: F, expects: Expectations) -> SurfaceSpec {
    let f = Arc::new(f);
    let patch = (-POLAR_CHART_HALF_WIDTH, POLAR_CHART_HALF_WIDTH);
    let polar = |north: bool, tag: &str| {
        let mut e = expects.clone();
        e.conformal = true;
        e.compact = false;
        e.genus = None;
        e.euler_characteristic = None;
        SurfaceSpec::from_map(
            format!("{name}/{tag}"),
            ParamDomain::plane(patch, patch, true),
            e,
            Graph { f: f.clone(), chart: Chart::Stereo { north } },
        )
    };
    let main = SurfaceSpec::from_map(name, sphere_domain(), expects.clone(), Graph {
        f: f.clone(),
        chart: Chart::Lambert,
    });
    main.with_aux_chart(polar(true, "north")).with_aux_chart(polar(false, "south"))
}

fn sphere_expects() -> Expectations {
    Expectations {
        lagrangian: true,
        orientable: true,
        compact: true,
        genus: Some(0),
        euler_characteristic: Some(2),
        ..Expectations::default()
    }
}

/// `M₀ = {(x, −x)}`, the graph of the antipodal map.
pub fn make_m0() -> SurfaceSpec {
    let expects = Expectations {
        minimal: true,
        constant_c: Some(0.5),
        constant_k: Some(0.5),
        totally_geodesic: true,
        parallel_h: true,
        ..sphere_expects()
    };
    make_graph("m0", Antipodal, expects)
}

/// Same surface as [`make_m0`], built as a graph (catalog name `graph-antipodal`).
pub fn make_graph_antipodal() -> SurfaceSpec {
    let mut s = make_m0();
    s.name = "graph-antipodal".into();
    s
}

/// Negative control: the graph of the identity, which is not Lagrangian.
pub fn make_graph_identity() -> SurfaceSpec {
    let expects = Expectations { lagrangian: false, ..sphere_expects() };
    make_graph("graph-identity", IdentityMap, expects)
}

/// Non-compact Lagrangian graph over the sphere without its poles with
/// constant associated Jacobian `λ`.
pub fn make_constant_c_graph(lambda: f64) -> Result<SurfaceSpec> {
    let f = ConstantJacobianTwist::new(lambda)?;
    let expects = Expectations {
        lagrangian: true,
        constant_c: Some(lambda),
        orientable: true,
        ..Expectations::default()
    };
    let domain = ParamDomain {
        gluing: Gluing::Cylinder { period_t: 2.0 * PI },
        ..sphere_domain()
    };
    Ok(SurfaceSpec::from_map(
        format!("const-c:{lambda}"),
        domain,
        expects,
        Graph { f: Arc::new(f), chart: Chart::Lambert },
    ))
}

/// `|ω₀(v, w) + ω₀(dF v, dF w)|` for an oriented orthonormal pair `v, w` at
/// `x`; zero exactly when the graph of `F` is Lagrangian at `x`.
pub fn area_preserving_residual<F: SphereMap>(f: &F, x: Vec3) -> Result<f64> {
    let n = x.norm();
    if !(n > 0.0) {
        return Err(Error::Domain("base point must be nonzero".into()));
    }
    let x = x / n;
    let helper = if x[0].abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let v = (helper - x * helper.dot(&x)).normalize();
    let w = x.cross(&v);
    let (a, b) = Dual2::params(0.0, 0.0);
    let curve: [Dual2; 3] = std::array::from_fn(|k| a * v[k] + b * w[k] + x[k]);
    let norm = (curve[0] * curve[0] + curve[1] * curve[1] + curve[2] * curve[2]).sqrt();
    let image = f.apply(curve.map(|c| c / norm));
    let fx = Vec3::new(image[0].v, image[1].v, image[2].v);
    let dv = Vec3::new(image[0].d[0], image[1].d[0], image[2].d[0]);
    let dw = Vec3::new(image[0].d[1], image[1].d[1], image[2].d[1]);
    Ok((1.0 + fx.cross(&dv).dot(&dw)).abs())
}
