use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{first_form, jet, Gluing, JetScheme, SurfaceSpec};

/// Relative conformality tolerance for grid weights.
const WEIGHT_CONFORMAL_TOL: f64 = 1e-6;

/// How the nodes of a [`ConformalGrid`] are glued.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridGluing {
    Torus,
    /// The grid covers the oriented double cover; the deck involution is
    /// `(t, s) ↦ (T_t/2 − t, s + T_s/2)`.
    Klein,
}

/// `nt × ns` nodes `(i Δt, j Δs)` on a periodic rectangle with conformal
/// weights `e^{2u}`, `s`-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalGrid {
    pub nt: usize,
    pub ns: usize,
    pub dt: f64,
    pub ds: f64,
    pub gluing: GridGluing,
    pub weights: Vec<f64>,
}

impl ConformalGrid {
    pub fn new(
        nt: usize,
        ns: usize,
        periods: (f64, f64),
        gluing: GridGluing,
        mut weight: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self> {
        if nt < 3 || ns < 3 {
            return Err(Error::Domain(format!("{nt}x{ns} grid is too small")));
        }
        if gluing == GridGluing::Klein && (nt % 2 != 0 || ns % 2 != 0) {
            return Err(Error::Precondition(format!(
                "Klein gluing needs even node counts, got {nt}x{ns}"
            )));
        }
        let dt = periods.0 / nt as f64;
        let ds = periods.1 / ns as f64;
        let mut weights = Vec::with_capacity(nt * ns);
        for j in 0..ns {
            for i in 0..nt {
                let w = weight(i as f64 * dt, j as f64 * ds);
                if !(w > 0.0) || !w.is_finite() {
                    return Err(Error::Domain(format!("non-positive weight {w} at node ({i}, {j})")));
                }
                weights.push(w);
            }
        }
        Ok(Self { nt, ns, dt, ds, gluing, weights })
    }

    /// Flat torus `[0, lt) × [0, ls)` with unit weights.
    pub fn flat(nt: usize, ns: usize, lt: f64, ls: f64) -> Result<Self> {
        Self::new(nt, ns, (lt, ls), GridGluing::Torus, |_, _| 1.0)
    }

    /// Grid over a conformally parametrized compact surface; Klein surfaces
    /// are sampled on their oriented double cover.
    pub fn from_surface(surface: &SurfaceSpec, nt: usize, ns: usize) -> Result<Self> {
        let (periods, gluing) = match surface.domain.gluing {
            Gluing::Torus { period_t, period_s } => ((period_t, period_s), GridGluing::Torus),
            Gluing::Klein { period_t, period_s, center } => {
                if (center - 0.5 * period_t).abs() > 1e-12 * period_t {
                    return Err(Error::Precondition(
                        "glide centre must be half the t-period".into(),
                    ));
                }
                ((period_t, period_s), GridGluing::Klein)
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "{} is not a torus or Klein bottle",
                    surface.name
                )))
            }
        };
        if !surface.domain.conformal {
            return Err(Error::Precondition(format!("{} is not conformal", surface.name)));
        }
        let mut failure = None;
        let grid = Self::new(nt, ns, periods, gluing, |t, s| {
            let w = jet(surface, t, s, JetScheme::Analytic)
                .and_then(|j| first_form(&j))
                .and_then(|g| {
                    if g.is_conformal(WEIGHT_CONFORMAL_TOL) {
                        Ok(0.5 * (g.g11 + g.g22))
                    } else {
                        Err(Error::Precondition(format!("metric not conformal at ({t}, {s})")))
                    }
                });
            match w {
                Ok(w) => w,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        });
        match failure {
            Some(e) => Err(e),
            None => grid,
        }
    }

    pub fn len(&self) -> usize {
        self.nt * self.ns
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nt + i
    }

    pub fn cell_area(&self) -> f64 {
        self.dt * self.ds
    }

    /// Node image under the deck involution (Klein gluing only).
    pub fn involution(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        match self.gluing {
            GridGluing::Torus => None,
            GridGluing::Klein => {
                Some(((self.nt / 2 + self.nt - i) % self.nt, (j + self.ns / 2) % self.ns))
            }
        }
    }

    /// Values of `f` at the nodes, `s`-major.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        (0..self.ns)
            .flat_map(|j| (0..self.nt).map(move |i| (i, j)))
            .map(|(i, j)| f(i as f64 * self.dt, j as f64 * self.ds))
            .collect()
    }
}
