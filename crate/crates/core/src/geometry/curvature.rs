//! Quantities that need derivatives of jets: intrinsic curvature, the
//! identities for `C`, the Hopf differential and parallelism of `H`.

use serde::{Deserialize, Serialize};

use super::ambient::ProductVector;
use super::forms::{associated_jacobian, extrinsic, first_form, Metric, LAGRANGIAN_PRECONDITION};
use super::surface::{jet, ImmersionJet, JetScheme, SurfaceSpec};
use crate::error::{Error, Result};

/// Step of the stencils differentiating jet-derived quantities.
pub const CURVATURE_STEP: f64 = 1e-3;
/// Relative conformality tolerance for choosing the conformal curvature formula.
pub const CONFORMAL_TOL: f64 = 1e-6;

/// Fourth-order central first derivative from samples at `x ± h, x ± 2h`
/// given as `[f(−2h), f(−h), f(h), f(2h)]`.
#[inline]
pub(crate) fn d1(f: [f64; 4], h: f64) -> f64 {
    (f[0] - 8.0 * f[1] + 8.0 * f[2] - f[3]) / (12.0 * h)
}

/// Fourth-order central second derivative from `[f(−2h), f(−h), f(0), f(h), f(2h)]`.
#[inline]
pub(crate) fn d2(f: [f64; 5], h: f64) -> f64 {
    (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
}

const OFFSETS: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];

/// Evaluates `f` at the four stencil points along `t` and along `s`.
fn stencil<T>(
    t: f64,
    s: f64,
    h: f64,
    mut f: impl FnMut(f64, f64) -> Result<T>,
) -> Result<([T; 4], [T; 4])> {
    let along_t = [
        f(t + OFFSETS[0] * h, s)?,
        f(t + OFFSETS[1] * h, s)?,
        f(t + OFFSETS[2] * h, s)?,
        f(t + OFFSETS[3] * h, s)?,
    ];
    let along_s = [
        f(t, s + OFFSETS[0] * h)?,
        f(t, s + OFFSETS[1] * h)?,
        f(t, s + OFFSETS[2] * h)?,
        f(t, s + OFFSETS[3] * h)?,
    ];
    Ok((along_t, along_s))
}

/// Metric and its exact first derivatives, read off a jet.
#[derive(Debug, Clone, Copy)]
struct MetricJet {
    e: f64,
    f: f64,
    g: f64,
    /// `[∂_t, ∂_s]` of E, F, G.
    de: [f64; 2],
    df: [f64; 2],
    dg: [f64; 2],
}

impl MetricJet {
    fn from_jet(j: &ImmersionJet) -> Self {
        let (pt, ps) = (&j.d_t, &j.d_s);
        Self {
            e: pt.dot(pt),
            f: pt.dot(ps),
            g: ps.dot(ps),
            de: [2.0 * j.d_tt.dot(pt), 2.0 * j.d_ts.dot(pt)],
            df: [
                j.d_tt.dot(ps) + pt.dot(&j.d_ts),
                j.d_ts.dot(ps) + pt.dot(&j.d_ss),
            ],
            dg: [2.0 * j.d_ts.dot(ps), 2.0 * j.d_ss.dot(ps)],
        }
    }

    fn metric(&self) -> Metric {
        Metric { g11: self.e, g12: self.f, g22: self.g }
    }

    /// Christoffel symbols `Γ^c_ab` indexed `[c][a][b]`.
    fn christoffel(&self) -> [[[f64; 2]; 2]; 2] {
        // ∂_k g_ij as dg[k][i][j]
        let dg = |k: usize| [[self.de[k], self.df[k]], [self.df[k], self.dg[k]]];
        let d = [dg(0), dg(1)];
        let (i11, i12, i22) = self.metric().inverse();
        let inv = [[i11, i12], [i12, i22]];
        let mut gamma = [[[0.0; 2]; 2]; 2];
        for c in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let mut acc = 0.0;
                    for l in 0..2 {
                        acc += inv[c][l] * 0.5 * (d[a][b][l] + d[b][a][l] - d[l][a][b]);
                    }
                    gamma[c][a][b] = acc;
                }
            }
        }
        gamma
    }
}

fn metric_jet_at(surface: &SurfaceSpec, t: f64, s: f64, scheme: JetScheme) -> Result<MetricJet> {
    Ok(MetricJet::from_jet(&jet(surface, t, s, scheme)?))
}

/// Which formula produced a curvature value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureMethod {
    Conformal,
    Brioschi,
}

/// Intrinsic Gauss curvature from the metric alone.
///
/// First derivatives of the metric come exactly from the jets; the second
/// derivatives Brioschi needs are fourth-order differences of those. On a
/// conformal chart `K = −e^{−2u} Δ₀u` with `e^{2u} = g11`.
pub fn gauss_curvature(surface: &SurfaceSpec, t: f64, s: f64, scheme: JetScheme) -> Result<f64> {
    gauss_curvature_with_method(surface, t, s, scheme).map(|(k, _)| k)
}

pub fn gauss_curvature_with_method(
    surface: &SurfaceSpec,
    t: f64,
    s: f64,
    scheme: JetScheme,
) -> Result<(f64, CurvatureMethod)> {
    let h = CURVATURE_STEP;
    let m0 = metric_jet_at(surface, t, s, scheme)?;
    first_form(&jet(surface, t, s, scheme)?)?;
    let (mt, ms) = stencil(t, s, h, |a, b| metric_jet_at(surface, a, b, scheme))?;
    if surface.domain.conformal && m0.metric().is_conformal(CONFORMAL_TOL) {
        // u_a = ∂_a E / 2E
        let ut = mt.map(|m| 0.5 * m.de[0] / m.e);
        let us = ms.map(|m| 0.5 * m.de[1] / m.e);
        let lap = d1(ut, h) + d1(us, h);
        return Ok((-lap / m0.e, CurvatureMethod::Conformal));
    }
    let (e, f, g) = (m0.e, m0.f, m0.g);
    let (e_t, e_s) = (m0.de[0], m0.de[1]);
    let (f_t, f_s) = (m0.df[0], m0.df[1]);
    let (g_t, g_s) = (m0.dg[0], m0.dg[1]);
    let e_ss = d1(ms.map(|m| m.de[1]), h);
    let g_tt = d1(mt.map(|m| m.dg[0]), h);
    let f_ts = 0.5 * (d1(ms.map(|m| m.df[0]), h) + d1(mt.map(|m| m.df[1]), h));
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let a = det3([
        [-0.5 * e_ss + f_ts - 0.5 * g_tt, 0.5 * e_t, f_t - 0.5 * e_s],
        [f_s - 0.5 * g_t, e, f],
        [0.5 * g_s, f, g],
    ]);
    let b = det3([
        [0.0, 0.5 * e_s, 0.5 * g_t],
        [0.5 * e_s, e, f],
        [0.5 * g_t, f, g],
    ]);
    let w = e * g - f * f;
    Ok(((a - b) / (w * w), CurvatureMethod::Brioschi))
}

/// Fundamental forms, mean curvature, `C` and `K` at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    /// `sigma[k][i][j] = ⟨σ(e_i, e_j), ν_k⟩` in the orthonormal frames.
    pub sigma: [[[f64; 2]; 2]; 2],
    pub h: ProductVector,
    pub h_norm: f64,
    pub sigma_sq: f64,
    /// Associated Jacobian; `None` off Lagrangian points.
    pub c: Option<f64>,
    pub k: f64,
    pub lagrangian_residual: f64,
}

pub fn second_form(surface: &SurfaceSpec, t: f64, s: f64, scheme: JetScheme) -> Result<FundamentalForms> {
    let j = jet(surface, t, s, scheme)?;
    let ex = extrinsic(&j)?;
    let c = if ex.lagrangian_residual <= LAGRANGIAN_PRECONDITION {
        Some(associated_jacobian(&j)?)
    } else {
        None
    };
    let k = gauss_curvature(surface, t, s, scheme)?;
    Ok(FundamentalForms {
        g11: ex.metric.g11,
        g12: ex.metric.g12,
        g22: ex.metric.g22,
        sigma: ex.sigma,
        h: ex.mean_curvature,
        h_norm: ex.mean_curvature.norm(),
        sigma_sq: ex.sigma_sq,
        c,
        k,
        lagrangian_residual: ex.lagrangian_residual,
    })
}

/// `|K − 2C² − 2|H|² + |σ|²/2|`
pub fn gauss_equation_residual(surface: &SurfaceSpec, t: f64, s: f64, scheme: JetScheme) -> Result<f64> {
    let ff = second_form(surface, t, s, scheme)?;
    let c = ff.c.ok_or_else(|| {
        Error::Precondition(format!("{} is not Lagrangian at ({t}, {s})", surface.name))
    })?;
    Ok((ff.k - 2.0 * c * c - 2.0 * ff.h_norm * ff.h_norm + 0.5 * ff.sigma_sq).abs())
}

fn require_minimal_lagrangian(surface: &SurfaceSpec) -> Result<()> {
    if !(surface.expects.minimal && surface.expects.lagrangian) {
        return Err(Error::Precondition(format!(
            "{} is not declared minimal Lagrangian",
            surface.name
        )));
    }
    Ok(())
}

fn c_at(surface: &SurfaceSpec, t: f64, s: f64, scheme: JetScheme) -> Result<f64> {
    associated_jacobian(&jet(surface, t, s, scheme)?)
}

/// Residuals of `|∇C|² = (1−4C²)(2C²−K)/2` and `ΔC = −C(1+4C²−4K)`.
pub fn c_identities_residual(surface: &SurfaceSpec, t: f64, s: f64, scheme: JetScheme) -> Result<(f64, f64)> {
    require_minimal_lagrangian(surface)?;
    let h = CURVATURE_STEP;
    let j0 = jet(surface, t, s, scheme)?;
    let c0 = associated_jacobian(&j0)?;
    let m0 = MetricJet::from_jet(&j0);
    let (ct, cs) = stencil(t, s, h, |a, b| c_at(surface, a, b, scheme))?;
    let c_t = d1(ct, h);
    let c_s = d1(cs, h);
    let c_tt = d2([ct[0], ct[1], c0, ct[2], ct[3]], h);
    let c_ss = d2([cs[0], cs[1], c0, cs[2], cs[3]], h);
    let k = gauss_curvature(surface, t, s, scheme)?;

    let (grad_sq, lap) = if surface.domain.conformal && m0.metric().is_conformal(CONFORMAL_TOL) {
        ((c_t * c_t + c_s * c_s) / m0.e, (c_tt + c_ss) / m0.e)
    } else {
        let c_ts = (c_at(surface, t + h, s + h, scheme)? - c_at(surface, t + h, s - h, scheme)?
            - c_at(surface, t - h, s + h, scheme)?
            + c_at(surface, t - h, s - h, scheme)?)
            / (4.0 * h * h);
        let (i11, i12, i22) = m0.metric().inverse();
        let inv = [[i11, i12], [i12, i22]];
        let grad = [c_t, c_s];
        let hess = [[c_tt, c_ts], [c_ts, c_ss]];
        let gamma = m0.christoffel();
        let mut grad_sq = 0.0;
        let mut lap = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                grad_sq += inv[a][b] * grad[a] * grad[b];
                let conn = gamma[0][a][b] * grad[0] + gamma[1][a][b] * grad[1];
                lap += inv[a][b] * (hess[a][b] - conn);
            }
        }
        (grad_sq, lap)
    };
    let r1 = (grad_sq - 0.5 * (1.0 - 4.0 * c0 * c0) * (2.0 * c0 * c0 - k)).abs();
    let r2 = (lap + c0 * (1.0 + 4.0 * c0 * c0 - 4.0 * k)).abs();
    Ok((r1, r2))
}

/// `⟨φ_z, φ_z⟩` for `z = t + i s`, as `(re, im)`.
fn hopf_coefficient(j: &ImmersionJet) -> (f64, f64) {
    let (a, b) = (&j.d_t.v1, &j.d_s.v1);
    (0.25 * (a.norm_squared() - b.norm_squared()), -0.5 * a.dot(b))
}

/// Cauchy–Riemann residual `|∂_z̄ Θ|` of the Hopf differential and the
/// modulus residual `|16|Θ|² − e^{4u}(1 − 4C²)|`.
pub fn hopf_residual(surface: &SurfaceSpec, t: f64, s: f64, scheme: JetScheme) -> Result<(f64, f64)> {
    require_minimal_lagrangian(surface)?;
    if !surface.domain.conformal {
        return Err(Error::Precondition(format!(
            "{} is not parametrized conformally",
            surface.name
        )));
    }
    let h = CURVATURE_STEP;
    let j0 = jet(surface, t, s, scheme)?;
    let m = first_form(&j0)?;
    if !m.is_conformal(1e-6) {
        return Err(Error::Precondition(format!(
            "chart of {} fails the conformality check at ({t}, {s})",
            surface.name
        )));
    }
    let c = associated_jacobian(&j0)?;
    let (th_t, th_s) = stencil(t, s, h, |a, b| Ok(hopf_coefficient(&jet(surface, a, b, scheme)?)))?;
    let re_t = d1(th_t.map(|x| x.0), h);
    let im_t = d1(th_t.map(|x| x.1), h);
    let re_s = d1(th_s.map(|x| x.0), h);
    let im_s = d1(th_s.map(|x| x.1), h);
    // ∂_z̄ = (∂_t + i ∂_s) / 2
    let cr = (0.5 * (re_t - im_s)).hypot(0.5 * (im_t + re_s));
    let (re, im) = hopf_coefficient(&j0);
    let e2u = 0.5 * (m.g11 + m.g22);
    let modulus = (16.0 * (re * re + im * im) - e2u * e2u * (1.0 - 4.0 * c * c)).abs();
    Ok((cr, modulus))
}

/// `max_a |(∂_a H)^⊥|`, the normal part (within T(S²×S²)) of the coordinate
/// derivatives of the mean curvature vector. Zero iff `∇^⊥ H = 0`.
pub fn parallel_h_residual(surface: &SurfaceSpec, t: f64, s: f64, scheme: JetScheme) -> Result<f64> {
    let h = CURVATURE_STEP;
    let j0 = jet(surface, t, s, scheme)?;
    let ex0 = extrinsic(&j0)?;
    let h_at = |a: f64, b: f64| -> Result<ProductVector> {
        Ok(extrinsic(&jet(surface, a, b, scheme)?)?.mean_curvature)
    };
    let (ht, hs) = stencil(t, s, h, h_at)?;
    let deriv = |v: [ProductVector; 4]| {
        (v[0] - v[1] * 8.0 + v[2] * 8.0 - v[3]) * (1.0 / (12.0 * h))
    };
    let mut worst: f64 = 0.0;
    for dh in [deriv(ht), deriv(hs)] {
        // Projecting to T(S²×S²) drops σ̃(∂_aΦ, H); then drop the part tangent to Σ.
        let mut v = j0.point.project(&dh);
        for e in &ex0.frame.e {
            v = v - *e * v.dot(e);
        }
        worst = worst.max(v.norm());
    }
    Ok(worst)
}
