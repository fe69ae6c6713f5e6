use serde::{Deserialize, Serialize};

use super::grid::{ConformalGrid, GridGluing};
use super::lanczos::lowest_eigenpairs;
use super::operator::{assemble, parity_split, Operators};
use crate::error::{Error, Result};
use crate::geometry::SurfaceSpec;

/// Distance kept from the eigenvalue 1 when counting.
pub const DEFAULT_MARGIN: f64 = 0.02;
/// Eigenvalues below this are treated as the constant mode.
pub const ZERO_EIGENVALUE: f64 = 1e-6;
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "n/a")]
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    pub epsilon: f64,
    /// Largest counted eigenvalue (below `1 − ε`).
    pub below: Option<f64>,
    /// Smallest eigenvalue at or above `1 − ε`.
    pub above: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub surface: String,
    pub grid: [usize; 2],
    pub eigenvalues: Vec<f64>,
    pub parities: Vec<Parity>,
    pub ind0: usize,
    pub ind1: usize,
    pub betti1: usize,
    pub index: usize,
    pub margins: Margins,
    /// Observations that do not invalidate the counts.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

/// Eigenvalues of `op` up to and including the first one above `limit`,
/// ascending.
pub fn spectrum_through(op: &Operators, limit: f64, tol: f64) -> Result<Vec<f64>> {
    let mut k = 8.min(op.dim());
    loop {
        let pairs = lowest_eigenpairs(op, k, tol)?;
        let top = *pairs.values.last().expect("k >= 1");
        if top > limit || k == op.dim() {
            return Ok(pairs.values);
        }
        k = (2 * k).min(op.dim());
    }
}

fn check_gap(values: &[f64], eps: f64) -> Result<()> {
    let (lo, hi) = (1.0 - 2.0 * eps, 1.0 - eps);
    match values.iter().find(|&&l| l > lo && l < hi) {
        Some(&l) => Err(Error::Ambiguity { eigenvalue: l, lo, hi }),
        None => Ok(()),
    }
}

fn betti1(surface: &SurfaceSpec) -> Result<usize> {
    let chi = surface.expects.euler_characteristic.ok_or_else(|| {
        Error::Precondition(format!("{} declares no Euler characteristic", surface.name))
    })?;
    let b = if surface.expects.orientable { 2 - chi } else { 1 - chi };
    usize::try_from(b).map_err(|_| Error::Precondition(format!("inconsistent topology χ = {chi}")))
}

/// Index of a compact minimal Lagrangian torus or Klein bottle from the
/// function spectra on an `nt × ns` grid (the oriented double cover for
/// Klein bottles).
pub fn index_report(surface: &SurfaceSpec, nt: usize, ns: usize, eps: f64) -> Result<SpectralResult> {
    let e = &surface.expects;
    if !(e.compact && e.minimal && e.lagrangian) {
        return Err(Error::Precondition(format!(
            "{} is not a compact minimal Lagrangian surface",
            surface.name
        )));
    }
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::Domain(format!("margin {eps} outside (0, 0.25)")));
    }
    let grid = ConformalGrid::from_surface(surface, nt, ns)?;
    let betti1 = betti1(surface)?;
    let cut = 1.0 - eps;
    let mut notes = Vec::new();
    let (mut labelled, ind0, ind1, index) = match grid.gluing {
        GridGluing::Torus => {
            let ev = spectrum_through(&assemble(&grid), 1.0, DEFAULT_TOL)?;
            check_gap(&ev, eps)?;
            let ind0 = ev.iter().filter(|&&l| l > ZERO_EIGENVALUE && l < cut).count();
            let labelled: Vec<_> = ev.into_iter().map(|l| (l, Parity::None)).collect();
            (labelled, ind0, ind0, betti1 + 2 * ind0)
        }
        GridGluing::Klein => {
            let split = parity_split(&grid)?;
            let plus = spectrum_through(&split.plus, 1.0, DEFAULT_TOL)?;
            let minus = spectrum_through(&split.minus, 1.0, DEFAULT_TOL)?;
            check_gap(&plus, eps)?;
            check_gap(&minus, eps)?;
            if let Some(l) = minus.iter().find(|&&l| (l - 1.0).abs() < eps) {
                notes.push(format!("odd-sector eigenvalue {l:.6} within ε of 1 (not counted)"));
            }
            let ind0 = plus.iter().filter(|&&l| l > ZERO_EIGENVALUE && l < cut).count();
            let ind1 = minus.iter().filter(|&&l| l < cut).count();
            let mut labelled: Vec<_> = plus.into_iter().map(|l| (l, Parity::Plus)).collect();
            labelled.extend(minus.into_iter().map(|l| (l, Parity::Minus)));
            (labelled, ind0, ind1, betti1 + ind0 + ind1)
        }
    };
    labelled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let margins = Margins {
        epsilon: eps,
        below: labelled.iter().map(|p| p.0).filter(|&l| l < cut).reduce(f64::max),
        above: labelled.iter().map(|p| p.0).find(|&l| l >= cut),
    };
    Ok(SpectralResult {
        surface: surface.name.clone(),
        grid: [nt, ns],
        eigenvalues: labelled.iter().map(|p| p.0).collect(),
        parities: labelled.iter().map(|p| p.1).collect(),
        ind0,
        ind1,
        betti1,
        index,
        margins,
        notes,
    })
}
