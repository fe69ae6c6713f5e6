//! Constructors for the explicit surfaces under test, and the stable names
//! the command line uses for them.

pub mod curves;
pub mod klein;
pub mod r4;
pub mod sphere;

pub use curves::{make_product_of_curves, make_t, make_t_ab, SpaceCurve};
pub use klein::{
    deck_residual, klein_area, klein_conformal_factor, klein_membership_residual, klein_periods,
    make_klein_bottle_b,
};
pub use r4::{
    bipolar_residual, gauss_map_relation_residual, make_clifford, make_clifford_gauss,
    make_equator_sphere, make_lawson_gauss, make_lawson_tau31, make_sphere_gauss, R4Immersion,
    R4Jet, R4Map, WedgeBasis,
};
pub use sphere::{
    area_preserving_residual, make_constant_c_graph, make_graph, make_graph_antipodal,
    make_graph_identity, make_m0, SphereMap,
};

use crate::error::{Error, Result};
use crate::geometry::SurfaceSpec;

/// A resolved catalog identifier.
#[derive(Debug, Clone)]
pub enum CatalogEntry {
    Surface(SurfaceSpec),
    Immersion(R4Immersion),
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        match self {
            CatalogEntry::Surface(s) => &s.name,
            CatalogEntry::Immersion(r) => &r.name,
        }
    }
}

/// Identifiers listed by default, one per family.
pub const DEFAULT_NAMES: [&str; 14] = [
    "m0",
    "torus-t",
    "torus-ab:0.5:0",
    "torus-ab:0.3:0.4",
    "product:great:lat=0.5",
    "graph-antipodal",
    "graph-identity",
    "const-c:0.3",
    "clifford-gauss",
    "sphere-gauss",
    "lawson-tau31",
    "lawson-gauss",
    "klein-b",
    "clifford",
];

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Input(format!("cannot read {what} from '{s}'")))
}

fn parse_curve(s: &str) -> Result<SpaceCurve> {
    let (shape, speed) = match s.split_once('@') {
        Some((a, b)) => (a, parse_f64(b, "curve speed")?),
        None => (s, 1.0),
    };
    let height = if shape == "great" {
        0.0
    } else if let Some(h) = shape.strip_prefix("lat=") {
        parse_f64(h, "latitude height")?
    } else {
        return Err(Error::Input(format!("unknown curve '{s}' (expected great or lat=<h>)")));
    };
    SpaceCurve::new(height, speed)
}

/// Resolves a catalog identifier.
pub fn resolve(name: &str) -> Result<CatalogEntry> {
    use CatalogEntry::{Immersion, Surface};
    let parts: Vec<&str> = name.split(':').collect();
    Ok(match parts.as_slice() {
        ["m0"] => Surface(make_m0()),
        ["torus-t"] => Surface(make_t()),
        ["torus-ab", a, b] => Surface(make_t_ab(parse_f64(a, "a")?, parse_f64(b, "b")?)?),
        ["product", a, b] => Surface(make_product_of_curves(parse_curve(a)?, parse_curve(b)?)),
        ["graph-antipodal"] => Surface(make_graph_antipodal()),
        ["graph-identity"] => Surface(make_graph_identity()),
        ["const-c", l] => Surface(make_constant_c_graph(parse_f64(l, "lambda")?)?),
        ["clifford-gauss"] => Surface(make_clifford_gauss()),
        ["sphere-gauss"] => Surface(make_sphere_gauss()),
        ["lawson-gauss"] => Surface(make_lawson_gauss()),
        ["klein-b"] => Surface(make_klein_bottle_b()),
        ["lawson-tau31"] => Immersion(make_lawson_tau31()),
        ["clifford"] => Immersion(make_clifford()),
        ["equator-s2"] => Immersion(make_equator_sphere()),
        _ => return Err(Error::Input(format!("unknown surface '{name}'"))),
    })
}

/// Resolves an identifier that must name a surface in S²×S².
pub fn resolve_surface(name: &str) -> Result<SurfaceSpec> {
    match resolve(name)? {
        CatalogEntry::Surface(s) => Ok(s),
        CatalogEntry::Immersion(_) => Err(Error::Input(format!(
            "'{name}' is a surface of R4, not of S2xS2"
        ))),
    }
}

/// Every default entry.
pub fn default_catalog() -> Vec<CatalogEntry> {
    DEFAULT_NAMES.iter().map(|n| resolve(n).expect("default names resolve")).collect()
}

/// Default entries that are surfaces of S²×S².
pub fn default_surfaces() -> Vec<SurfaceSpec> {
    default_catalog()
        .into_iter()
        .filter_map(|e| match e {
            CatalogEntry::Surface(s) => Some(s),
            CatalogEntry::Immersion(_) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in DEFAULT_NAMES {
            assert_eq!(resolve(n).unwrap().name(), n);
        }
    }

    #[test]
    fn bad_names() {
        for n in ["", "torus-ab:0:0", "product:great", "const-c:x", "nope"] {
            assert!(resolve(n).is_err(), "{n}");
        }
    }
}
