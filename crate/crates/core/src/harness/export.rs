//! Tabular export of sampled fields.

use std::io::Write;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::geometry::{GridSpec, JetScheme, SurfaceSpec};
use crate::harness::analyze::{sample_surface, NodeSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    C,
    K,
    /// `½ log((g11 + g22)/2)`, the conformal exponent on conformal charts.
    U,
    H,
    Sigma2,
    Position,
}

impl Field {
    fn columns(self) -> &'static [&'static str] {
        match self {
            Field::C => &["C"],
            Field::K => &["K"],
            Field::U => &["u"],
            Field::H => &["H"],
            Field::Sigma2 => &["sigma2"],
            Field::Position => &["x1", "x2", "x3", "y1", "y2", "y3"],
        }
    }

    fn values(self, n: &NodeSample) -> Vec<f64> {
        match self {
            Field::C => vec![n.c.unwrap_or(f64::NAN)],
            Field::K => vec![n.k],
            Field::U => vec![0.5 * n.conformal_factor.ln()],
            Field::H => vec![n.h_norm],
            Field::Sigma2 => vec![n.sigma_sq],
            Field::Position => {
                let (x, y) = (n.position.x, n.position.y);
                vec![x[0], x[1], x[2], y[0], y[1], y[2]]
            }
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "C" | "c" => Field::C,
            "K" | "k" => Field::K,
            "u" => Field::U,
            "H" | "h" => Field::H,
            "sigma2" => Field::Sigma2,
            "position" => Field::Position,
            _ => {
                return Err(Error::Input(format!(
                    "unknown field '{s}' (expected C, K, u, H, sigma2 or position)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::Input(format!("unknown format '{s}' (expected csv or json)"))),
        }
    }
}

/// Writes `t, s` and the requested fields at the midpoints of `spec`,
/// `s`-major. `C` is written as NaN (CSV) or null (JSON) off Lagrangian points.
pub fn export<W: Write>(
    surface: &SurfaceSpec,
    spec: GridSpec,
    fields: &[Field],
    format: ExportFormat,
    mut out: W,
) -> Result<()> {
    if fields.is_empty() {
        return Err(Error::Input("no fields requested".into()));
    }
    let (_, samples) = sample_surface(surface, spec, JetScheme::Analytic)?;
    let mut header = vec!["t", "s"];
    for f in fields {
        header.extend_from_slice(f.columns());
    }
    let io = |e: std::io::Error| Error::Input(format!("write failed: {e}"));
    match format {
        ExportFormat::Csv => {
            writeln!(out, "{}", header.join(",")).map_err(io)?;
            for n in &samples {
                let mut row = vec![format!("{:.16e}", n.t), format!("{:.16e}", n.s)];
                for f in fields {
                    row.extend(f.values(n).into_iter().map(|v| format!("{v:.16e}")));
                }
                writeln!(out, "{}", row.join(",")).map_err(io)?;
            }
        }
        ExportFormat::Json => {
            let rows: Vec<Value> = samples
                .iter()
                .map(|n| {
                    let mut vals = vec![n.t, n.s];
                    for f in fields {
                        vals.extend(f.values(n));
                    }
                    let obj: Map<String, Value> = header
                        .iter()
                        .zip(vals)
                        .map(|(k, v)| (k.to_string(), serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)))
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            let doc = serde_json::json!({
                "surface": surface.name,
                "grid": spec,
                "columns": header,
                "rows": rows,
            });
            serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::Input(format!("write failed: {e}")))?;
            writeln!(out).map_err(io)?;
        }
    }
    Ok(())
}
