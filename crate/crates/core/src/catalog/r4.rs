//! Surfaces of ℝ⁴ (mostly of S³) and their Gauss maps into S²₊×S²₋.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::sync::Arc;

use nalgebra::{Matrix2, Vector4};

use super::sphere::lambert;
use crate::dual::{Dual2, Scalar};
use crate::elliptic::{complete_k, EllipticModulus};
use crate::error::{Error, Result};
use crate::geometry::surface::Analytic;
use crate::geometry::{
    associated_jacobian, first_form, jet, Expectations, Gluing, JetScheme, ParamDomain, ProductMap,
    SurfaceMap, SurfaceSpec,
};

pub type Vec4 = Vector4<f64>;

/// A map into ℝ⁴ with closed-form position and first partials.
pub trait R4Map: Clone + Send + Sync + 'static {
    fn eval<S: Scalar>(&self, t: S, s: S) -> [S; 4];
    /// `[∂_t, ∂_s]` of [`R4Map::eval`].
    fn partials<S: Scalar>(&self, t: S, s: S) -> [[S; 4]; 2];
}

/// Position with first and second partials of a surface in ℝ⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R4Jet {
    pub point: Vec4,
    pub d_t: Vec4,
    pub d_s: Vec4,
    pub d_tt: Vec4,
    pub d_ts: Vec4,
    pub d_ss: Vec4,
}

trait R4Source: Send + Sync {
    fn eval(&self, t: f64, s: f64) -> Vec4;
    fn partials(&self, t: f64, s: f64) -> [Vec4; 2];
    fn jet(&self, t: f64, s: f64) -> R4Jet;
    fn gauss(&self) -> Arc<dyn SurfaceMap>;
}

struct Source<M>(M);

impl<M: R4Map> R4Source for Source<M> {
    fn eval(&self, t: f64, s: f64) -> Vec4 {
        Vec4::from(self.0.eval(t, s))
    }

    fn partials(&self, t: f64, s: f64) -> [Vec4; 2] {
        self.0.partials(t, s).map(Vec4::from)
    }

    fn jet(&self, t: f64, s: f64) -> R4Jet {
        let (a, b) = Dual2::params(t, s);
        let x = self.0.eval(a, b);
        let pick = |f: &dyn Fn(&Dual2) -> f64| Vec4::new(f(&x[0]), f(&x[1]), f(&x[2]), f(&x[3]));
        R4Jet {
            point: pick(&|d| d.v),
            d_t: pick(&|d| d.d[0]),
            d_s: pick(&|d| d.d[1]),
            d_tt: pick(&|d| d.h[0]),
            d_ts: pick(&|d| d.h[1]),
            d_ss: pick(&|d| d.h[2]),
        }
    }

    fn gauss(&self) -> Arc<dyn SurfaceMap> {
        Arc::new(Analytic(GaussMapOf(self.0.clone())))
    }
}

/// An oriented immersion into ℝ⁴ with its parameter domain.
#[derive(Clone)]
pub struct R4Immersion {
    pub name: String,
    pub domain: ParamDomain,
    /// Whether the image lies in the unit sphere S³.
    pub in_s3: bool,
    /// Whether the immersion is minimal in S³.
    pub minimal: bool,
    src: Arc<dyn R4Source>,
}

impl std::fmt::Debug for R4Immersion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("R4Immersion")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("in_s3", &self.in_s3)
            .field("minimal", &self.minimal)
            .finish()
    }
}

impl R4Immersion {
    pub fn new<M: R4Map>(name: impl Into<String>, domain: ParamDomain, minimal: bool, map: M) -> Self {
        Self { name: name.into(), domain, in_s3: true, minimal, src: Arc::new(Source(map)) }
    }

    pub fn eval(&self, t: f64, s: f64) -> Result<Vec4> {
        self.domain.check(t, s)?;
        Ok(self.src.eval(t, s))
    }

    /// Closed-form first partials.
    pub fn partials(&self, t: f64, s: f64) -> Result<[Vec4; 2]> {
        self.domain.check(t, s)?;
        Ok(self.src.partials(t, s))
    }

    /// Position and first two derivatives by forward differentiation of `eval`.
    pub fn jet(&self, t: f64, s: f64) -> Result<R4Jet> {
        self.domain.check(t, s)?;
        Ok(self.src.jet(t, s))
    }

    /// Unit normal in S³ making `(∂_t, ∂_s, Ψ, N)` positively oriented.
    pub fn unit_normal(&self, t: f64, s: f64) -> Result<Vec4> {
        let p = self.eval(t, s)?;
        let [a, b] = self.partials(t, s)?;
        let n = Vec4::from(cross4(a.into(), b.into(), p.into()));
        let len = n.norm();
        if !(len > 1e-12 * (a.norm() * b.norm())) {
            return Err(Error::Degenerate(format!("{} has rank-deficient differential", self.name)));
        }
        Ok(n / len)
    }

    /// Local geometry in S³ at a point.
    pub fn geometry(&self, t: f64, s: f64) -> Result<S3Geometry> {
        let j = self.jet(t, s)?;
        let n = self.unit_normal(t, s)?;
        let g = Matrix2::new(
            j.d_t.dot(&j.d_t),
            j.d_t.dot(&j.d_s),
            j.d_s.dot(&j.d_t),
            j.d_s.dot(&j.d_s),
        );
        let h = Matrix2::new(j.d_tt.dot(&n), j.d_ts.dot(&n), j.d_ts.dot(&n), j.d_ss.dot(&n));
        let gi = g.try_inverse().ok_or_else(|| Error::Degenerate(format!("{}: singular metric", self.name)))?;
        let shape = gi * h;
        Ok(S3Geometry {
            metric: g,
            second_form: h,
            mean_curvature: 0.5 * shape.trace(),
            sigma_sq: (shape * shape).trace(),
            curvature: 1.0 + h.determinant() / g.determinant(),
        })
    }

    /// The Gauss map `p ↦ dΨ(T_pΣ) ∈ G⁺(2,4) ≅ S²₊×S²₋` as a catalog surface.
    pub fn gauss_map(&self, name: impl Into<String>, expects: Expectations) -> SurfaceSpec {
        SurfaceSpec::new(name, self.domain, expects, self.src.gauss())
    }

    /// Largest deviation between the closed-form partials and the
    /// forward-differentiated ones.
    pub fn partials_residual(&self, t: f64, s: f64) -> Result<f64> {
        let j = self.jet(t, s)?;
        let [a, b] = self.partials(t, s)?;
        Ok((a - j.d_t).amax().max((b - j.d_s).amax()))
    }
}

/// Metric, second fundamental form (against the unit normal), mean curvature,
/// `|σ̂|²` and Gauss curvature of a surface in S³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S3Geometry {
    pub metric: Matrix2<f64>,
    pub second_form: Matrix2<f64>,
    pub mean_curvature: f64,
    pub sigma_sq: f64,
    pub curvature: f64,
}

/// `X` with `⟨X, d⟩ = det(a, b, c, d)` for every `d`.
pub fn cross4<S: Scalar>(a: [S; 4], b: [S; 4], c: [S; 4]) -> [S; 4] {
    let minor = |skip: usize| {
        let r: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
        let m = |i: usize, v: &[S; 4]| v[r[i]];
        m(0, &a) * (m(1, &b) * m(2, &c) - m(2, &b) * m(1, &c))
            - m(0, &b) * (m(1, &a) * m(2, &c) - m(2, &a) * m(1, &c))
            + m(0, &c) * (m(1, &a) * m(2, &b) - m(2, &a) * m(1, &b))
    };
    [-minor(0), minor(1), -minor(2), minor(3)]
}

fn dot4<S: Scalar>(a: &[S; 4], b: &[S; 4]) -> S {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Plücker coordinates `ξ_ij = a_i b_j − a_j b_i` of `a ∧ b`.
fn wedge<S: Scalar>(a: &[S; 4], b: &[S; 4]) -> [[S; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i] * b[j] - a[j] * b[i]))
}

/// Unit 2-vectors `E^k_± = (ε_ij ± ε_kl)/√2` built on the standard frame of
/// ℝ⁴, as index pairs: `E¹: (12, 34)`, `E²: (13, 42)`, `E³: (14, 23)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WedgeBasis;

impl WedgeBasis {
    pub const PAIRS: [((usize, usize), (usize, usize)); 3] =
        [((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2))];

    /// Components of a 2-vector (given by Plücker coordinates) on
    /// `(E¹₊, E²₊, E³₊)` and `(E¹₋, E²₋, E³₋)`.
    pub fn coordinates<S: Scalar>(xi: &[[S; 4]; 4]) -> ([S; 3], [S; 3]) {
        let plus = Self::PAIRS.map(|((a, b), (c, d))| (xi[a][b] + xi[c][d]) * FRAC_1_SQRT_2);
        let minus = Self::PAIRS.map(|((a, b), (c, d))| (xi[a][b] - xi[c][d]) * FRAC_1_SQRT_2);
        (plus, minus)
    }

    /// `E^k_±` as Plücker coordinates; `k ∈ {0, 1, 2}`.
    pub fn element(k: usize, plus: bool) -> [[f64; 4]; 4] {
        let ((a, b), (c, d)) = Self::PAIRS[k];
        let sign = if plus { 1.0 } else { -1.0 };
        let mut xi = [[0.0; 4]; 4];
        xi[a][b] = FRAC_1_SQRT_2;
        xi[b][a] = -FRAC_1_SQRT_2;
        xi[c][d] += sign * FRAC_1_SQRT_2;
        xi[d][c] -= sign * FRAC_1_SQRT_2;
        xi
    }

    /// `⟨⟨ξ, η⟩⟩ = Σ_{i<j} ξ_ij η_ij`, which on decomposables is
    /// `⟨v,v'⟩⟨w,w'⟩ − ⟨v,w'⟩⟨w,v'⟩`.
    pub fn inner(xi: &[[f64; 4]; 4], eta: &[[f64; 4]; 4]) -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                acc += xi[i][j] * eta[i][j];
            }
        }
        acc
    }
}

/// Frame `(e1, e2, Ψ, N)` and the Gauss-map coordinates built from it.
fn gauss_frame<S: Scalar>(p: [S; 4], pt: [S; 4], ps: [S; 4]) -> ([S; 4], [S; 4], [S; 4]) {
    let nt = dot4(&pt, &pt).sqrt();
    let e1 = pt.map(|x| x / nt);
    let c = dot4(&ps, &e1);
    let w: [S; 4] = std::array::from_fn(|k| ps[k] - e1[k] * c);
    let nw = dot4(&w, &w).sqrt();
    let e2 = w.map(|x| x / nw);
    let n = cross4(e1, e2, p);
    let nn = dot4(&n, &n).sqrt();
    (e1, e2, n.map(|x| x / nn))
}

/// The pair `(φ, ψ)` with `φ = (e1∧e2 + Ψ∧N)/√2`, `ψ = (e1∧e2 − Ψ∧N)/√2`.
#[derive(Clone)]
struct GaussMapOf<M>(M);

impl<M: R4Map> ProductMap for GaussMapOf<M> {
    fn map<S: Scalar>(&self, t: S, s: S) -> [[S; 3]; 2] {
        let p = self.0.eval(t, s);
        let [pt, ps] = self.0.partials(t, s);
        let (e1, e2, n) = gauss_frame(p, pt, ps);
        let a = wedge(&e1, &e2);
        let b = wedge(&p, &n);
        let phi: [[S; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| (a[i][j] + b[i][j]) * FRAC_1_SQRT_2));
        let psi: [[S; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| (a[i][j] - b[i][j]) * FRAC_1_SQRT_2));
        [WedgeBasis::coordinates(&phi).0, WedgeBasis::coordinates(&psi).1]
    }
}

/// Clifford torus `(cos t, sin t, cos s, sin s)/√2`.
#[derive(Debug, Clone, Copy)]
pub struct CliffordMap;

impl R4Map for CliffordMap {
    fn eval<S: Scalar>(&self, t: S, s: S) -> [S; 4] {
        [t.cos(), t.sin(), s.cos(), s.sin()].map(|x| x * FRAC_1_SQRT_2)
    }

    fn partials<S: Scalar>(&self, t: S, s: S) -> [[S; 4]; 2] {
        let z = S::cst(0.0);
        [
            [-t.sin(), t.cos(), z, z].map(|x| x * FRAC_1_SQRT_2),
            [z, z, -s.sin(), s.cos()].map(|x| x * FRAC_1_SQRT_2),
        ]
    }
}

/// Totally geodesic `S² = S³ ∩ {x₄ = 0}` in the equal-area chart.
#[derive(Debug, Clone, Copy)]
pub struct EquatorMap;

impl R4Map for EquatorMap {
    fn eval<S: Scalar>(&self, t: S, s: S) -> [S; 4] {
        let x = lambert(t, s);
        [x[0], x[1], x[2], S::cst(0.0)]
    }

    fn partials<S: Scalar>(&self, t: S, s: S) -> [[S; 4]; 2] {
        let r = (-(s * s) + 1.0).sqrt();
        let (c, sn) = (t.cos(), t.sin());
        let z = S::cst(0.0);
        [
            [-(r * sn), r * c, z, z],
            [-(s * c) / r, -(s * sn) / r, S::cst(1.0), z],
        ]
    }
}

/// Lawson's τ₃,₁ torus `(cn(√3t) e^{i√3s}, sn(√3t) e^{is/√3})` in
/// conformal coordinates, with `ℂ² = ℝ⁴` as `(Re, Im, Re, Im)`.
#[derive(Debug, Clone, Copy)]
pub struct LawsonTau31 {
    pub modulus: EllipticModulus,
}

impl R4Map for LawsonTau31 {
    fn eval<S: Scalar>(&self, t: S, s: S) -> [S; 4] {
        let r3 = 3f64.sqrt();
        let (sn, cn, _) = (t * r3).jacobi(self.modulus);
        let (a, b) = (s * r3, s / r3);
        [cn * a.cos(), cn * a.sin(), sn * b.cos(), sn * b.sin()]
    }

    fn partials<S: Scalar>(&self, t: S, s: S) -> [[S; 4]; 2] {
        let r3 = 3f64.sqrt();
        let (sn, cn, dn) = (t * r3).jacobi(self.modulus);
        let (a, b) = (s * r3, s / r3);
        let (ca, sa, cb, sb) = (a.cos(), a.sin(), b.cos(), b.sin());
        // cn' = −sn dn, sn' = cn dn
        let dcn = -(sn * dn) * r3;
        let dsn = cn * dn * r3;
        [
            [dcn * ca, dcn * sa, dsn * cb, dsn * sb],
            [-(cn * sa) * r3, cn * ca * r3, -(sn * sb) / r3, sn * cb / r3],
        ]
    }
}

pub fn make_clifford() -> R4Immersion {
    R4Immersion::new("clifford", ParamDomain::torus(2.0 * PI, 2.0 * PI, true), true, CliffordMap)
}

pub fn make_equator_sphere() -> R4Immersion {
    let domain = ParamDomain {
        t_range: (0.0, 2.0 * PI),
        s_range: (-1.0, 1.0),
        gluing: Gluing::Sphere { period_t: 2.0 * PI },
        conformal: false,
    };
    R4Immersion::new("equator-s2", domain, true, EquatorMap)
}

/// Periods `(4K/√3, 2√3π)` close both factor circles.
pub fn make_lawson_tau31() -> R4Immersion {
    let m = EllipticModulus::klein();
    let k = complete_k(m);
    let r3 = 3f64.sqrt();
    let domain = ParamDomain::torus(4.0 * k / r3, 2.0 * r3 * PI, true);
    R4Immersion::new("lawson-tau31", domain, true, LawsonTau31 { modulus: m })
}

fn gauss_expects(psi: &R4Immersion, constant_c: Option<f64>) -> Expectations {
    let d = &psi.domain;
    Expectations {
        lagrangian: true,
        minimal: psi.minimal,
        constant_c,
        totally_geodesic: constant_c.map(|c| c.abs() == 0.5).unwrap_or(false),
        parallel_h: psi.minimal,
        conformal: d.conformal,
        orientable: true,
        compact: d.is_compact(),
        genus: match d.gluing {
            Gluing::Torus { .. } => Some(1),
            Gluing::Sphere { .. } => Some(0),
            _ => None,
        },
        euler_characteristic: d.euler_characteristic(),
        ..Expectations::default()
    }
}

/// Gauss map of the Clifford torus: a double cover of `T`.
pub fn make_clifford_gauss() -> SurfaceSpec {
    let psi = make_clifford();
    let mut e = gauss_expects(&psi, Some(0.0));
    e.constant_k = Some(0.0);
    e.totally_geodesic = true;
    psi.gauss_map("clifford-gauss", e)
}

/// Gauss map of the totally geodesic S² ⊂ S³: congruent to `M₀`.
pub fn make_sphere_gauss() -> SurfaceSpec {
    let psi = make_equator_sphere();
    let mut e = gauss_expects(&psi, Some(0.5));
    e.constant_k = Some(0.5);
    psi.gauss_map("sphere-gauss", e)
}

pub fn make_lawson_gauss() -> SurfaceSpec {
    let psi = make_lawson_tau31();
    psi.gauss_map("lawson-gauss", gauss_expects(&psi, None))
}

/// Deviation from `g = (2 + |σ̂|²) ĝ` (relative, entrywise) and from
/// `C = K̂ / (2 + |σ̂|²)` for the Gauss map of a surface of S³.
pub fn gauss_map_relation_residual(psi: &R4Immersion, t: f64, s: f64) -> Result<(f64, f64)> {
    if !psi.in_s3 {
        return Err(Error::Precondition(format!("{} does not lie in S3", psi.name)));
    }
    let geo = psi.geometry(t, s)?;
    let gauss = psi.gauss_map(format!("{}/gauss", psi.name), gauss_expects(psi, None));
    let j = jet(&gauss, t, s, JetScheme::Analytic)?;
    let g = first_form(&j)?;
    let factor = 2.0 + geo.sigma_sq;
    let gh = geo.metric;
    let scale = factor * gh.amax();
    let r_metric = [
        (g.g11 - factor * gh[(0, 0)]).abs(),
        (g.g12 - factor * gh[(0, 1)]).abs(),
        (g.g22 - factor * gh[(1, 1)]).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
        / scale;
    let c = associated_jacobian(&j)?;
    Ok((r_metric, (c - geo.curvature / factor).abs()))
}

/// `|(φ, −ψ) − √2 Ψ∧N|` in wedge-basis coordinates.
pub fn bipolar_residual(psi: &R4Immersion, t: f64, s: f64) -> Result<f64> {
    let p = psi.eval(t, s)?;
    let n = psi.unit_normal(t, s)?;
    let gauss = psi.gauss_map(format!("{}/gauss", psi.name), gauss_expects(psi, None));
    let q = gauss.eval(t, s)?;
    let xi = wedge(&[p[0], p[1], p[2], p[3]], &[n[0], n[1], n[2], n[3]]);
    let (plus, minus) = WedgeBasis::coordinates(&xi);
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        worst = worst
            .max((q.x[k] - SQRT_2 * plus[k]).abs())
            .max((-q.y[k] - SQRT_2 * minus[k]).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_basis_is_orthonormal() {
        for k in 0..3 {
            for l in 0..3 {
                for (pk, pl) in [(true, true), (true, false), (false, false)] {
                    let v = WedgeBasis::inner(&WedgeBasis::element(k, pk), &WedgeBasis::element(l, pl));
                    let want = if k == l && pk == pl { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-15, "{k}{pk} {l}{pl}: {v}");
                }
            }
        }
    }

    #[test]
    fn cross4_is_orthogonal_and_oriented() {
        let a = [1.0, 0.2, -0.3, 0.5];
        let b = [0.1, 1.0, 0.4, -0.2];
        let c = [0.3, -0.1, 1.0, 0.7];
        let x = cross4(a, b, c);
        for v in [a, b, c] {
            assert!(dot4(&x, &v).abs() < 1e-14);
        }
        let m = nalgebra::Matrix4::from_columns(&[
            Vec4::from(a),
            Vec4::from(b),
            Vec4::from(c),
            Vec4::from(x),
        ]);
        assert!((m.determinant() - dot4(&x, &x)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_partials_match_differentiation() {
        for psi in [make_clifford(), make_lawson_tau31(), make_equator_sphere()] {
            for &(t, s) in &[(0.3, 0.2), (1.1, -0.4), (2.0, 0.7)] {
                assert!(psi.partials_residual(t, s).unwrap() < 1e-12, "{}", psi.name);
            }
        }
    }
}
