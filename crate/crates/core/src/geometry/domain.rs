use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the parameter rectangle is closed up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gluing {
    /// A bare rectangle; points outside are rejected.
    Plane,
    /// Periodic in both directions.
    Torus { period_t: f64, period_s: f64 },
    /// Generated by `(t, s) ↦ (t + period_t, s)` and the glide
    /// `(t, s) ↦ (center − t, s + period_s / 2)`. The fundamental rectangle
    /// covers half of the oriented double cover in `s`.
    Klein { period_t: f64, period_s: f64, center: f64 },
    /// Periodic in `t`; the two ends of the `s` interval are the poles of a
    /// sphere (compact).
    Sphere { period_t: f64 },
    /// Periodic in `t`; the `s` interval is open (non-compact band).
    Cylinder { period_t: f64 },
}

/// Parameter rectangle with gluing data and a conformality claim.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamDomain {
    pub t_range: (f64, f64),
    pub s_range: (f64, f64),
    pub gluing: Gluing,
    pub conformal: bool,
}

impl ParamDomain {
    pub fn torus(period_t: f64, period_s: f64, conformal: bool) -> Self {
        Self {
            t_range: (0.0, period_t),
            s_range: (0.0, period_s),
            gluing: Gluing::Torus { period_t, period_s },
            conformal,
        }
    }

    pub fn klein(period_t: f64, period_s: f64, center: f64, conformal: bool) -> Self {
        Self {
            t_range: (0.0, period_t),
            s_range: (0.0, 0.5 * period_s),
            gluing: Gluing::Klein { period_t, period_s, center },
            conformal,
        }
    }

    pub fn plane(t_range: (f64, f64), s_range: (f64, f64), conformal: bool) -> Self {
        Self { t_range, s_range, gluing: Gluing::Plane, conformal }
    }

    pub fn is_orientable(&self) -> bool {
        !matches!(self.gluing, Gluing::Klein { .. })
    }

    pub fn is_compact(&self) -> bool {
        matches!(
            self.gluing,
            Gluing::Torus { .. } | Gluing::Klein { .. } | Gluing::Sphere { .. }
        )
    }

    /// Euler characteristic of the closed surface, when compact.
    pub fn euler_characteristic(&self) -> Option<i32> {
        match self.gluing {
            Gluing::Torus { .. } | Gluing::Klein { .. } => Some(0),
            Gluing::Sphere { .. } => Some(2),
            _ => None,
        }
    }

    /// First Betti number (real coefficients) of the closed surface.
    pub fn betti1(&self) -> Option<u32> {
        match self.gluing {
            Gluing::Torus { .. } => Some(2),
            Gluing::Klein { .. } => Some(1),
            Gluing::Sphere { .. } => Some(0),
            _ => None,
        }
    }

    pub fn t_len(&self) -> f64 {
        self.t_range.1 - self.t_range.0
    }

    pub fn s_len(&self) -> f64 {
        self.s_range.1 - self.s_range.0
    }

    /// Whether evaluators may be called at `(t, s)`. Periodic directions
    /// accept every real value (the universal cover).
    pub fn contains(&self, t: f64, s: f64) -> bool {
        if !t.is_finite() || !s.is_finite() {
            return false;
        }
        let inside = |x: f64, r: (f64, f64)| x >= r.0 && x <= r.1;
        match self.gluing {
            Gluing::Plane => inside(t, self.t_range) && inside(s, self.s_range),
            Gluing::Torus { .. } | Gluing::Klein { .. } => true,
            Gluing::Sphere { .. } | Gluing::Cylinder { .. } => {
                s > self.s_range.0 && s < self.s_range.1
            }
        }
    }

    pub fn check(&self, t: f64, s: f64) -> Result<()> {
        if self.contains(t, s) {
            Ok(())
        } else {
            Err(Error::Domain(format!("parameter point ({t}, {s}) is outside the domain")))
        }
    }

    /// The glide reflection of a Klein domain.
    pub fn glide(&self, t: f64, s: f64) -> Option<(f64, f64)> {
        match self.gluing {
            Gluing::Klein { period_s, center, .. } => Some((center - t, s + 0.5 * period_s)),
            _ => None,
        }
    }

    /// Oriented double cover of a Klein domain (identity for orientable ones).
    pub fn double_cover(&self) -> Self {
        match self.gluing {
            Gluing::Klein { period_t, period_s, .. } => Self::torus(period_t, period_s, self.conformal),
            _ => *self,
        }
    }
}

/// A sampling of the fundamental rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nt: usize,
    pub ns: usize,
    /// Distance kept from non-periodic edges of the rectangle.
    pub margin: f64,
}

impl GridSpec {
    pub fn new(nt: usize, ns: usize) -> Self {
        Self { nt, ns, margin: 0.0 }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }
}

/// Midpoint samples of a (possibly trimmed) parameter rectangle with their
/// cell areas, in `s`-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub spec: GridSpec,
    pub dt: f64,
    pub ds: f64,
    pub points: Vec<(f64, f64)>,
}

impl Grid {
    pub fn midpoint(domain: &ParamDomain, spec: GridSpec) -> Result<Self> {
        if spec.nt == 0 || spec.ns == 0 {
            return Err(Error::Domain("grid needs at least one node per axis".into()));
        }
        let periodic_t = !matches!(domain.gluing, Gluing::Plane);
        let periodic_s = matches!(domain.gluing, Gluing::Torus { .. } | Gluing::Klein { .. });
        let trim = |r: (f64, f64), periodic: bool| {
            if periodic {
                r
            } else {
                (r.0 + spec.margin, r.1 - spec.margin)
            }
        };
        let tr = trim(domain.t_range, periodic_t);
        let sr = trim(domain.s_range, periodic_s);
        if tr.1 <= tr.0 || sr.1 <= sr.0 {
            return Err(Error::Domain("grid margin swallows the domain".into()));
        }
        let dt = (tr.1 - tr.0) / spec.nt as f64;
        let ds = (sr.1 - sr.0) / spec.ns as f64;
        let mut points = Vec::with_capacity(spec.nt * spec.ns);
        for j in 0..spec.ns {
            let s = sr.0 + (j as f64 + 0.5) * ds;
            for i in 0..spec.nt {
                points.push((tr.0 + (i as f64 + 0.5) * dt, s));
            }
        }
        Ok(Self { spec, dt, ds, points })
    }

    pub fn cell_area(&self) -> f64 {
        self.dt * self.ds
    }
}
