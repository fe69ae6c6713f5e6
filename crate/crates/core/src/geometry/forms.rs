//! Pointwise quantities computed from a single [`ImmersionJet`].

use serde::{Deserialize, Serialize};

use super::ambient::{apply_j, omega, ProductVector};
use super::surface::ImmersionJet;
use crate::error::{Error, Result};

/// Lagrangian residual above which `C` and the rank identity are refused.
pub const LAGRANGIAN_PRECONDITION: f64 = 1e-6;

/// First fundamental form in parameter coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl Metric {
    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    /// `(g^11, g^12, g^22)`
    pub fn inverse(&self) -> (f64, f64, f64) {
        let d = self.det();
        (self.g22 / d, -self.g12 / d, self.g11 / d)
    }

    /// `|g11 − g22| + |g12| ≤ tol · g11`
    pub fn is_conformal(&self, tol: f64) -> bool {
        (self.g11 - self.g22).abs() + self.g12.abs() <= tol * self.g11
    }
}

/// Induced metric, the Gram matrix of `(∂_t Φ, ∂_s Φ)` in ℝ⁶.
pub fn first_form(j: &ImmersionJet) -> Result<Metric> {
    let m = Metric {
        g11: j.d_t.norm_squared(),
        g12: j.d_t.dot(&j.d_s),
        g22: j.d_s.norm_squared(),
    };
    let tr = m.g11 + m.g22;
    if !(m.det() > 1e-12 * tr * tr) {
        return Err(Error::Degenerate(format!(
            "det g = {:.3e} against trace {:.3e}",
            m.det(),
            tr
        )));
    }
    Ok(m)
}

/// Oriented orthonormal tangent frame `e_i = Σ_a coeffs[i][a] ∂_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub e: [ProductVector; 2],
    pub coeffs: [[f64; 2]; 2],
}

/// Gram–Schmidt on `(∂_t, ∂_s)` in the induced metric.
pub fn orthonormal_frame(j: &ImmersionJet) -> Result<Frame> {
    let m = first_form(j)?;
    let a11 = 1.0 / m.g11.sqrt();
    // e2 ∝ ∂_s − (g12/g11) ∂_t, with |·|² = det g / g11.
    let a22 = (m.g11 / m.det()).sqrt();
    let a21 = -m.g12 / m.g11 * a22;
    let e1 = j.d_t * a11;
    let e2 = j.d_t * a21 + j.d_s * a22;
    Ok(Frame { e: [e1, e2], coeffs: [[a11, 0.0], [a21, a22]] })
}

impl Frame {
    /// The frame rotated by `angle` within the oriented tangent plane.
    pub fn rotated(&self, angle: f64) -> Frame {
        let (s, c) = angle.sin_cos();
        let [e1, e2] = self.e;
        let [r1, r2] = self.coeffs;
        Frame {
            e: [e1 * c + e2 * s, e2 * c - e1 * s],
            coeffs: [
                [c * r1[0] + s * r2[0], c * r1[1] + s * r2[1]],
                [c * r2[0] - s * r1[0], c * r2[1] - s * r1[1]],
            ],
        }
    }
}

/// `|ω(∂_t, ∂_s)| / √det g`, zero exactly when the surface is Lagrangian at the point.
pub fn lagrangian_residual(j: &ImmersionJet) -> Result<f64> {
    let m = first_form(j)?;
    Ok(omega(&j.point, &j.d_t, &j.d_s).abs() / m.det().sqrt())
}

fn require_lagrangian(j: &ImmersionJet) -> Result<()> {
    let r = lagrangian_residual(j)?;
    if r > LAGRANGIAN_PRECONDITION {
        return Err(Error::Precondition(format!(
            "surface is not Lagrangian here (residual {r:.3e})"
        )));
    }
    Ok(())
}

/// `⟨J_x dφ(e1), dφ(e2)⟩` for a given frame.
pub fn jacobian_in_frame(j: &ImmersionJet, frame: &Frame) -> f64 {
    let [e1, e2] = frame.e;
    j.point.x.cross(&e1.v1).dot(&e2.v1)
}

/// Associated Jacobian `C = Jac(φ) = −Jac(ψ)` in the parameter orientation.
pub fn associated_jacobian(j: &ImmersionJet) -> Result<f64> {
    require_lagrangian(j)?;
    Ok(jacobian_in_frame(j, &orthonormal_frame(j)?))
}

/// `C²` from the cross-product formula; orientation free.
pub fn jacobian_squared(j: &ImmersionJet) -> Result<f64> {
    let f = orthonormal_frame(j)?;
    Ok(f.e[0].v1.cross(&f.e[1].v1).norm_squared())
}

/// Deviation of `|dφ e1|² + |dφ e2|²` and `|dψ e1|² + |dψ e2|²` from 1.
pub fn rank_identity_residual(j: &ImmersionJet) -> Result<f64> {
    require_lagrangian(j)?;
    let f = orthonormal_frame(j)?;
    let [e1, e2] = f.e;
    let a = e1.v1.norm_squared() + e2.v1.norm_squared();
    let b = e1.v2.norm_squared() + e2.v2.norm_squared();
    Ok((a - 1.0).abs().max((b - 1.0).abs()))
}

/// Second fundamental form data at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrinsic {
    pub metric: Metric,
    pub frame: Frame,
    /// Orthonormal frame of the normal bundle of Σ in S²×S²; `{J e1, J e2}`
    /// for Lagrangian surfaces.
    pub normal: [ProductVector; 2],
    /// `σ(e_i, e_j)` as ℝ⁶ vectors.
    pub sigma_vec: [[ProductVector; 2]; 2],
    /// `sigma[k][i][j] = ⟨σ(e_i, e_j), ν_k⟩`
    pub sigma: [[[f64; 2]; 2]; 2],
    pub mean_curvature: ProductVector,
    pub sigma_sq: f64,
    pub lagrangian_residual: f64,
}

/// `σ(∂_a, ∂_b)`: the raw second partial with its components normal to
/// S²×S² (that is, `σ̃(∂_a Φ, ∂_b Φ)`) and tangent to Σ removed.
pub fn coordinate_sigma(j: &ImmersionJet, frame: &Frame) -> [[ProductVector; 2]; 2] {
    let p = &j.point;
    let raw = [[j.d_tt, j.d_ts], [j.d_ts, j.d_ss]];
    let mut out = [[ProductVector::default(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            // For exact jets the part normal to S²×S² is σ̃(∂_aΦ, ∂_bΦ); the
            // projection removes it (and the matching FD error) in one go.
            let mut v = p.project(&raw[a][b]);
            for e in &frame.e {
                v = v - *e * v.dot(e);
            }
            out[a][b] = v;
        }
    }
    out
}

pub fn extrinsic(j: &ImmersionJet) -> Result<Extrinsic> {
    let metric = first_form(j)?;
    let frame = orthonormal_frame(j)?;
    let cs = coordinate_sigma(j, &frame);
    let mut sigma_vec = [[ProductVector::default(); 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            let mut acc = ProductVector::default();
            for a in 0..2 {
                for b in 0..2 {
                    acc = acc + cs[a][b] * (frame.coeffs[i][a] * frame.coeffs[k][b]);
                }
            }
            sigma_vec[i][k] = acc;
        }
    }
    let normal = normal_frame(j, &frame);
    let mut sigma = [[[0.0; 2]; 2]; 2];
    for (k, nu) in normal.iter().enumerate() {
        for i in 0..2 {
            for l in 0..2 {
                sigma[k][i][l] = sigma_vec[i][l].dot(nu);
            }
        }
    }
    let mean_curvature = (sigma_vec[0][0] + sigma_vec[1][1]) * 0.5;
    let sigma_sq = sigma_vec[0][0].norm_squared()
        + sigma_vec[1][1].norm_squared()
        + 2.0 * sigma_vec[0][1].norm_squared();
    let lagrangian_residual = omega(&j.point, &j.d_t, &j.d_s).abs() / metric.det().sqrt();
    Ok(Extrinsic {
        metric,
        frame,
        normal,
        sigma_vec,
        sigma,
        mean_curvature,
        sigma_sq,
        lagrangian_residual,
    })
}

/// Orthonormal normal frame: `J e_i` made normal to Σ and orthonormalised.
/// For Lagrangian points this is `{J e1, J e2}` up to roundoff.
fn normal_frame(j: &ImmersionJet, frame: &Frame) -> [ProductVector; 2] {
    let p = &j.point;
    let mut candidates: Vec<ProductVector> =
        frame.e.iter().map(|e| apply_j(p, e)).collect();
    // Fallbacks for complex points, where J maps the tangent plane to itself.
    for k in 0..3 {
        let mut unit = ProductVector::default();
        unit.v1[k] = 1.0;
        candidates.push(p.project(&unit));
        let mut unit = ProductVector::default();
        unit.v2[k] = 1.0;
        candidates.push(p.project(&unit));
    }
    let mut basis: Vec<ProductVector> = Vec::with_capacity(2);
    for c in candidates {
        let mut v = c;
        for e in frame.e.iter().chain(basis.iter()) {
            v = v - *e * v.dot(e);
        }
        let n = v.norm();
        if n > 1e-3 {
            basis.push(v * (1.0 / n));
            if basis.len() == 2 {
                break;
            }
        }
    }
    [basis[0], basis[1]]
}

impl Extrinsic {
    /// `max |⟨σ(e_i,e_j), J e_k⟩ − ⟨σ(e_π(i),e_π(j)), J e_π(k)⟩|` over
    /// permutations; zero for Lagrangian surfaces.
    pub fn cubic_form_asymmetry(&self, j: &ImmersionJet) -> f64 {
        let je: Vec<ProductVector> = self.frame.e.iter().map(|e| apply_j(&j.point, e)).collect();
        let c = |i: usize, l: usize, k: usize| self.sigma_vec[i][l].dot(&je[k]);
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for l in 0..2 {
                for k in 0..2 {
                    let v = c(i, l, k);
                    worst = worst
                        .max((v - c(i, k, l)).abs())
                        .max((v - c(k, l, i)).abs())
                        .max((v - c(l, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Ambient sectional curvature `R̄(e1, e2, e2, e1)` of S²×S² on the tangent plane.
    pub fn ambient_sectional(&self) -> f64 {
        let [e1, e2] = self.frame.e;
        e1.v1.cross(&e2.v1).norm_squared() + e1.v2.cross(&e2.v2).norm_squared()
    }
}
