use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ambient::{Isometry, ProductPoint, ProductVector, Vec3};
use super::domain::ParamDomain;
use crate::dual::{Dual2, Scalar};
use crate::error::{Error, Result};

/// A map `(t, s) ↦ (φ, ψ) ∈ ℝ³×ℝ³` written once for every [`Scalar`].
pub trait ProductMap: Send + Sync + 'static {
    fn map<S: Scalar>(&self, t: S, s: S) -> [[S; 3]; 2];
}

/// Object-safe evaluator behind a [`SurfaceSpec`].
pub trait SurfaceMap: Send + Sync {
    fn eval(&self, t: f64, s: f64) -> ProductPoint;
    /// Exact first and second partials, when a closed form exists.
    fn analytic_jet(&self, t: f64, s: f64) -> Option<ImmersionJet>;
}

/// Adapter giving every [`ProductMap`] exact jets by second-order forward
/// differentiation.
pub struct Analytic<M>(pub M);

impl<M: ProductMap> SurfaceMap for Analytic<M> {
    fn eval(&self, t: f64, s: f64) -> ProductPoint {
        let [a, b] = self.0.map(t, s);
        ProductPoint::new(Vec3::from(a), Vec3::from(b))
    }

    fn analytic_jet(&self, t: f64, s: f64) -> Option<ImmersionJet> {
        let (dt, ds) = Dual2::params(t, s);
        let [a, b] = self.0.map(dt, ds);
        let pick = |f: &dyn Fn(&Dual2) -> f64| {
            ProductVector::new(
                Vec3::new(f(&a[0]), f(&a[1]), f(&a[2])),
                Vec3::new(f(&b[0]), f(&b[1]), f(&b[2])),
            )
        };
        let pos = pick(&|x| x.v);
        Some(ImmersionJet {
            point: ProductPoint::new(pos.v1, pos.v2),
            d_t: pick(&|x| x.d[0]),
            d_s: pick(&|x| x.d[1]),
            d_tt: pick(&|x| x.h[0]),
            d_ts: pick(&|x| x.h[1]),
            d_ss: pick(&|x| x.h[2]),
            source: JetSource::Analytic,
        })
    }
}

/// A congruent copy of another surface.
struct Transformed {
    inner: Arc<dyn SurfaceMap>,
    iso: Isometry,
}

impl SurfaceMap for Transformed {
    fn eval(&self, t: f64, s: f64) -> ProductPoint {
        self.iso.apply_point(&self.inner.eval(t, s))
    }

    fn analytic_jet(&self, t: f64, s: f64) -> Option<ImmersionJet> {
        let j = self.inner.analytic_jet(t, s)?;
        let f = |v: &ProductVector| self.iso.apply_vector(v);
        Some(ImmersionJet {
            point: self.iso.apply_point(&j.point),
            d_t: f(&j.d_t),
            d_s: f(&j.d_s),
            d_tt: f(&j.d_tt),
            d_ts: f(&j.d_ts),
            d_ss: f(&j.d_ss),
            source: j.source,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JetSource {
    Analytic,
    FiniteDifference,
}

/// How to obtain derivatives of a surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JetScheme {
    Analytic,
    /// Central differences of the evaluator: step `h1` for first partials,
    /// `h2` for second partials.
    Fd { h1: f64, h2: f64 },
}

impl JetScheme {
    pub const FD_DEFAULT: JetScheme = JetScheme::Fd { h1: 1e-4, h2: 1e-3 };

    pub fn source(&self) -> JetSource {
        match self {
            JetScheme::Analytic => JetSource::Analytic,
            JetScheme::Fd { .. } => JetSource::FiniteDifference,
        }
    }
}

/// Position with first and second parameter derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImmersionJet {
    pub point: ProductPoint,
    pub d_t: ProductVector,
    pub d_s: ProductVector,
    pub d_tt: ProductVector,
    pub d_ts: ProductVector,
    pub d_ss: ProductVector,
    pub source: JetSource,
}

impl ImmersionJet {
    /// Tolerance class for residuals computed from this jet.
    pub fn tangency_tolerance(&self) -> f64 {
        match self.source {
            JetSource::Analytic => 1e-8,
            JetSource::FiniteDifference => 1e-5,
        }
    }

    pub fn tangency_residual(&self) -> f64 {
        self.point
            .tangency_residual(&self.d_t)
            .max(self.point.tangency_residual(&self.d_s))
    }
}

/// Properties a catalog entry is constructed to have.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Expectations {
    pub lagrangian: bool,
    pub minimal: bool,
    pub constant_c: Option<f64>,
    /// Constant Gauss curvature, when known in closed form.
    pub constant_k: Option<f64>,
    pub totally_geodesic: bool,
    pub parallel_h: bool,
    pub conformal: bool,
    pub orientable: bool,
    pub compact: bool,
    pub genus: Option<u32>,
    pub euler_characteristic: Option<i32>,
}

/// A catalog surface: evaluator, parameter domain and declared properties.
#[derive(Clone)]
pub struct SurfaceSpec {
    pub name: String,
    pub domain: ParamDomain,
    pub expects: Expectations,
    map: Arc<dyn SurfaceMap>,
    /// Additional charts (e.g. stereographic charts around the poles of a
    /// sphere whose main chart degenerates there).
    pub aux_charts: Vec<SurfaceSpec>,
}

impl fmt::Debug for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceSpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("expects", &self.expects)
            .field("aux_charts", &self.aux_charts.len())
            .finish()
    }
}

impl SurfaceSpec {
    pub fn new(
        name: impl Into<String>,
        domain: ParamDomain,
        expects: Expectations,
        map: Arc<dyn SurfaceMap>,
    ) -> Self {
        Self { name: name.into(), domain, expects, map, aux_charts: Vec::new() }
    }

    pub fn from_map<M: ProductMap>(
        name: impl Into<String>,
        domain: ParamDomain,
        expects: Expectations,
        map: M,
    ) -> Self {
        Self::new(name, domain, expects, Arc::new(Analytic(map)))
    }

    pub fn with_aux_chart(mut self, chart: SurfaceSpec) -> Self {
        self.aux_charts.push(chart);
        self
    }

    pub fn eval(&self, t: f64, s: f64) -> Result<ProductPoint> {
        self.domain.check(t, s)?;
        Ok(self.map.eval(t, s))
    }

    pub fn map(&self) -> &Arc<dyn SurfaceMap> {
        &self.map
    }

    /// Image under an isometry of S²×S². The Lagrangian condition survives
    /// when `det A = det B`; `C` picks up the factor `det A` (and a further
    /// sign when the factors are swapped).
    pub fn transformed(&self, iso: Isometry) -> Self {
        let mut expects = self.expects.clone();
        let (da, db) = (iso.a.determinant().signum(), iso.b.determinant().signum());
        if da != db && expects.constant_c != Some(0.0) {
            expects.lagrangian = false;
            expects.constant_c = None;
        } else {
            let sign = if iso.swap { -da } else { da };
            expects.constant_c = expects.constant_c.map(|c| sign * c);
        }
        Self {
            name: format!("{}~", self.name),
            domain: self.domain,
            expects,
            map: Arc::new(Transformed { inner: self.map.clone(), iso }),
            aux_charts: Vec::new(),
        }
    }

    /// The oriented double cover of a Klein-bottle surface; other surfaces
    /// are returned unchanged.
    pub fn oriented_double_cover(&self) -> Self {
        if self.domain.is_orientable() {
            return self.clone();
        }
        let mut cover = self.clone();
        cover.name = format!("{}/double-cover", self.name);
        cover.domain = self.domain.double_cover();
        cover.expects.orientable = true;
        cover.expects.genus = Some(1);
        cover
    }
}

/// Derivatives of a surface at `(t, s)`.
pub fn jet(surface: &SurfaceSpec, t: f64, s: f64, scheme: JetScheme) -> Result<ImmersionJet> {
    surface.domain.check(t, s)?;
    match scheme {
        JetScheme::Analytic => surface.map.analytic_jet(t, s).ok_or_else(|| {
            Error::Precondition(format!("{} has no closed-form derivatives", surface.name))
        }),
        JetScheme::Fd { h1, h2 } => {
            if !(h1 > 0.0 && h2 > 0.0) {
                return Err(Error::Domain("finite-difference steps must be positive".into()));
            }
            for (a, b) in [(t + h2, s + h2), (t - h2, s - h2), (t + h1, s + h1), (t - h1, s - h1)] {
                surface.domain.check(a, b)?;
            }
            Ok(fd_jet(surface.map.as_ref(), t, s, h1, h2))
        }
    }
}

fn fd_jet(map: &dyn SurfaceMap, t: f64, s: f64, h1: f64, h2: f64) -> ImmersionJet {
    let f = |a: f64, b: f64| map.eval(a, b).normalized().as_vector();
    let center = f(t, s);
    let point = ProductPoint::new(center.v1, center.v2);
    let d_t = (f(t + h1, s) - f(t - h1, s)) * (0.5 / h1);
    let d_s = (f(t, s + h1) - f(t, s - h1)) * (0.5 / h1);
    let inv = 1.0 / (h2 * h2);
    let d_tt = (f(t + h2, s) - center * 2.0 + f(t - h2, s)) * inv;
    let d_ss = (f(t, s + h2) - center * 2.0 + f(t, s - h2)) * inv;
    let d_ts = (f(t + h2, s + h2) - f(t + h2, s - h2) - f(t - h2, s + h2) + f(t - h2, s - h2))
        * (0.25 * inv);
    ImmersionJet {
        point,
        d_t: point.project(&d_t),
        d_s: point.project(&d_s),
        d_tt,
        d_ts,
        d_ss,
        source: JetSource::FiniteDifference,
    }
}
