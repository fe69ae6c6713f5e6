//! Check results and JSON reports.

use serde::{Deserialize, Serialize};

use crate::geometry::{GridSpec, JetSource};

pub const SCHEMA_VERSION: u32 = 1;

/// Which side of the tolerance a value must fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// A residual: passes when `value ≤ tolerance`.
    AtMost,
    /// A negative control: passes when `value ≥ tolerance`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub surface: String,
    /// Largest residual observed (smallest value for `AtLeast` checks).
    pub max_residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn at_most(name: impl Into<String>, surface: impl Into<String>, value: f64, tol: f64) -> Self {
        Self::new(name, surface, value, tol, Bound::AtMost)
    }

    pub fn at_least(name: impl Into<String>, surface: impl Into<String>, value: f64, tol: f64) -> Self {
        Self::new(name, surface, value, tol, Bound::AtLeast)
    }

    fn new(name: impl Into<String>, surface: impl Into<String>, value: f64, tol: f64, bound: Bound) -> Self {
        let pass = match bound {
            Bound::AtMost => value <= tol,
            Bound::AtLeast => value >= tol,
        };
        Self {
            name: name.into(),
            surface: surface.into(),
            max_residual: value,
            tolerance: tol,
            bound,
            pass,
            detail: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn error(name: impl Into<String>, surface: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.into(),
            surface: surface.into(),
            max_residual: f64::NAN,
            tolerance: f64::NAN,
            bound: Bound::AtMost,
            pass: false,
            detail: Some(err.to_string()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Rescales the tolerance; negative controls are loosened the other way.
    pub fn scaled(mut self, scale: f64) -> Self {
        if self.tolerance.is_nan() {
            return self;
        }
        match self.bound {
            Bound::AtMost => {
                self.tolerance *= scale;
                self.pass = self.max_residual <= self.tolerance;
            }
            Bound::AtLeast => {
                self.tolerance /= scale;
                self.pass = self.max_residual >= self.tolerance;
            }
        }
        self
    }

    /// One line for terminal output.
    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        let mut s = format!(
            "{verdict} {:<14} {:<40} {:.3e} {op} {:.1e}",
            self.surface, self.name, self.max_residual, self.tolerance
        );
        if let Some(d) = &self.detail {
            s.push_str("  ");
            s.push_str(d);
        }
        s
    }
}

/// Scalar summaries over the sampled grid; absent where undefined.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub area: Option<f64>,
    pub degree: Option<f64>,
    pub c_min: Option<f64>,
    pub c_max: Option<f64>,
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub h_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub jet_source: JetSource,
    /// `[h1, h2]` when finite differences produced the jets.
    pub fd_steps: Option<[f64; 2]>,
    pub curvature_step: f64,
    /// Distance kept from unglued chart edges.
    pub excluded_margin: f64,
}

/// Properties the analyzers observed, next to the declared ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observed {
    pub lagrangian: bool,
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub schema: u32,
    pub surface: String,
    pub grid: GridSpec,
    pub observed: Observed,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub provenance: Provenance,
    pub timestamp: String,
    pub tool_version: String,
}

impl SurfaceReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// RFC 3339 time of the run; `SOURCE_DATE_EPOCH` pins it for reproducible
/// reports.
pub fn timestamp() -> String {
    use chrono::{DateTime, SecondsFormat, Utc};
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0));
    pinned.unwrap_or_else(Utc::now).to_rfc3339_opts(SecondsFormat::Secs, true)
}
