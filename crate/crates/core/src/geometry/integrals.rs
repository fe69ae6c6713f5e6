//! Grid sweeps and midpoint quadrature over the fundamental rectangle.

use rayon::prelude::*;

use super::domain::{Gluing, Grid, GridSpec};
use super::forms::{associated_jacobian, first_form};
use super::surface::{jet, JetScheme, SurfaceSpec};
use crate::error::{Error, Result};

/// Evaluates `f` at every grid point in parallel, keeping grid order.
pub fn sweep<T, F>(grid: &Grid, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64, f64) -> Result<T> + Sync,
{
    grid.points.par_iter().map(|&(t, s)| f(t, s)).collect()
}

/// Area of the fundamental rectangle by midpoint quadrature of `√det g`.
pub fn area(surface: &SurfaceSpec, spec: GridSpec, scheme: JetScheme) -> Result<f64> {
    let grid = Grid::midpoint(&surface.domain, spec)?;
    let dens = sweep(&grid, |t, s| Ok(first_form(&jet(surface, t, s, scheme)?)?.det().sqrt()))?;
    Ok(dens.iter().sum::<f64>() * grid.cell_area())
}

/// `(1/4π) ∫ C dA` by midpoint quadrature. Requires a closed orientable
/// parameter domain covered by a single grid.
pub fn degree(surface: &SurfaceSpec, spec: GridSpec, scheme: JetScheme) -> Result<f64> {
    let d = &surface.domain;
    if !d.is_orientable() {
        return Err(Error::Precondition(format!(
            "{} is not orientable; use its oriented double cover",
            surface.name
        )));
    }
    if !matches!(d.gluing, Gluing::Torus { .. } | Gluing::Sphere { .. }) {
        return Err(Error::Precondition(format!("{} is not compact", surface.name)));
    }
    if spec.margin != 0.0 {
        return Err(Error::Precondition("degree needs the full parameter rectangle".into()));
    }
    let grid = Grid::midpoint(d, spec)?;
    let dens = sweep(&grid, |t, s| {
        let j = jet(surface, t, s, scheme)?;
        Ok(associated_jacobian(&j)? * first_form(&j)?.det().sqrt())
    })?;
    Ok(dens.iter().sum::<f64>() * grid.cell_area() / (4.0 * std::f64::consts::PI))
}

/// Degree with one Richardson step between `spec` and the grid refined twice
/// in each direction, assuming a second-order quadrature error.
pub fn degree_extrapolated(surface: &SurfaceSpec, spec: GridSpec, scheme: JetScheme) -> Result<f64> {
    let coarse = degree(surface, spec, scheme)?;
    let fine = degree(surface, GridSpec { nt: 2 * spec.nt, ns: 2 * spec.ns, ..spec }, scheme)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
