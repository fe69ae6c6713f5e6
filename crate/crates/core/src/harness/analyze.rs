//! Pointwise sweeps and per-surface reports.

use crate::catalog::{
    bipolar_residual, deck_residual, gauss_map_relation_residual, klein_area,
    klein_membership_residual, CatalogEntry, R4Immersion,
};
use crate::error::Result;
use crate::geometry::curvature::CURVATURE_STEP;
use crate::geometry::{
    c_identities_residual, degree_extrapolated, extrinsic, first_form, hopf_residual, jet,
    parallel_h_residual, rank_identity_residual, second_form, sweep, Gluing, Grid, GridSpec,
    JetScheme, ProductPoint, SurfaceSpec,
};
use crate::harness::config::Config;
use crate::harness::report::{timestamp, Check, Observed, Provenance, Summary, SurfaceReport, SCHEMA_VERSION};
use crate::TOOL_VERSION;

/// Lagrangian residual above which a point counts as not Lagrangian.
const LAGRANGIAN_CUTOFF: f64 = 1e-6;
/// Mean curvature below which a surface counts as minimal.
const MINIMAL_CUTOFF: f64 = 1e-6;

/// Everything the analyzers record at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeSample {
    pub t: f64,
    pub s: f64,
    pub position: ProductPoint,
    pub tangency: f64,
    pub lagrangian: f64,
    /// Associated Jacobian, where the point is Lagrangian.
    pub c: Option<f64>,
    pub k: f64,
    pub h_norm: f64,
    pub sigma_sq: f64,
    pub cubic_asymmetry: Option<f64>,
    pub rank_identity: Option<f64>,
    /// `(g11 + g22) / 2`, which is `e^{2u}` on conformal charts.
    pub conformal_factor: f64,
}

impl NodeSample {
    /// `|K − 2C² − 2|H|² + |σ|²/2|`, where `C` is defined.
    pub fn gauss_equation(&self) -> Option<f64> {
        self.c.map(|c| (self.k - 2.0 * c * c - 2.0 * self.h_norm * self.h_norm + 0.5 * self.sigma_sq).abs())
    }
}

pub fn sample_point(surface: &SurfaceSpec, t: f64, s: f64, scheme: JetScheme) -> Result<NodeSample> {
    let j = jet(surface, t, s, scheme)?;
    let ff = second_form(surface, t, s, scheme)?;
    let lagr = ff.c.is_some();
    let ex = extrinsic(&j)?;
    Ok(NodeSample {
        t,
        s,
        position: j.point,
        tangency: j.tangency_residual(),
        lagrangian: ff.lagrangian_residual,
        c: ff.c,
        k: ff.k,
        h_norm: ff.h_norm,
        sigma_sq: ff.sigma_sq,
        cubic_asymmetry: lagr.then(|| ex.cubic_form_asymmetry(&j)),
        rank_identity: if lagr { Some(rank_identity_residual(&j)?) } else { None },
        conformal_factor: 0.5 * (ff.g11 + ff.g22),
    })
}

/// Samples `surface` at the midpoints of `spec`, in parallel, `s`-major.
pub fn sample_surface(surface: &SurfaceSpec, spec: GridSpec, scheme: JetScheme) -> Result<(Grid, Vec<NodeSample>)> {
    let grid = Grid::midpoint(&surface.domain, spec)?;
    let samples = sweep(&grid, |t, s| sample_point(surface, t, s, scheme))?;
    Ok((grid, samples))
}

/// The chart sampled for pointwise checks: Klein bottles are replaced by
/// their oriented double cover so that `C` carries a sign.
pub fn analysis_chart(surface: &SurfaceSpec) -> SurfaceSpec {
    surface.oriented_double_cover()
}

fn max_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

fn min_max(xs: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    xs.fold(None, |acc, x| match acc {
        None => Some((x, x)),
        Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
    })
}

/// Runs `f` at every grid point and keeps the largest value.
pub fn sweep_max(grid: &Grid, f: impl Fn(f64, f64) -> Result<f64> + Sync) -> Result<f64> {
    Ok(max_of(sweep(grid, f)?.into_iter()))
}

fn checked(name: &str, surface: &str, r: Result<Check>) -> Check {
    r.unwrap_or_else(|e| Check::error(name, surface, e))
}

/// All pointwise and integral checks that apply to a surface of S²×S².
pub fn analyze_surface(surface: &SurfaceSpec, cfg: &Config, scheme: JetScheme) -> Result<SurfaceReport> {
    let spec = GridSpec::new(cfg.nt, cfg.ns).with_margin(cfg.margin);
    let chart = analysis_chart(surface);
    let mut charts = vec![chart.clone()];
    charts.extend(surface.aux_charts.iter().cloned());
    let mut all = Vec::new();
    let mut grids = Vec::new();
    for c in &charts {
        let (grid, samples) = sample_surface(c, spec, scheme)?;
        grids.push(grid);
        all.push(samples);
    }
    let flat: Vec<&NodeSample> = all.iter().flatten().collect();
    let e = &surface.expects;
    let name = surface.name.as_str();
    let (tight, loose) = match scheme {
        JetScheme::Analytic => (1.0, 1.0),
        JetScheme::Fd { .. } => (1e4, 1e2),
    };
    let mut checks = Vec::new();

    let lag_max = max_of(flat.iter().map(|n| n.lagrangian));
    let h_max = max_of(flat.iter().map(|n| n.h_norm));
    checks.push(Check::at_most("tangency", name, max_of(flat.iter().map(|n| n.tangency)), 1e-8 * tight));
    if e.lagrangian {
        checks.push(Check::at_most("lagrangian", name, lag_max, 1e-9 * tight));
        let c_all: Vec<f64> = flat.iter().filter_map(|n| n.c).collect();
        if c_all.len() == flat.len() {
            checks.push(Check::at_most(
                "cubic-form-symmetry",
                name,
                max_of(flat.iter().filter_map(|n| n.cubic_asymmetry)),
                1e-6 * tight,
            ));
            checks.push(Check::at_most(
                "rank-identity",
                name,
                max_of(flat.iter().filter_map(|n| n.rank_identity)),
                1e-8 * tight,
            ));
            checks.push(Check::at_most(
                "c-squared-bound",
                name,
                max_of(c_all.iter().map(|c| (c * c - 0.25).max(0.0))),
                1e-9 * tight,
            ));
            let ge_tol = if e.constant_k.is_some() { 1e-6 } else { 1e-4 };
            checks.push(Check::at_most(
                "gauss-equation",
                name,
                max_of(flat.iter().filter_map(|n| n.gauss_equation())),
                ge_tol * loose,
            ));
            if let Some(c0) = e.constant_c {
                checks.push(Check::at_most(
                    "constant-c",
                    name,
                    max_of(c_all.iter().map(|c| (c - c0).abs())),
                    1e-8 * tight,
                ));
            }
        } else {
            checks.push(Check::error("associated-jacobian", name, "C undefined at some samples"));
        }
    } else {
        checks.push(
            Check::at_least("not-lagrangian", name, lag_max, 1e-3)
                .with_detail("negative control: declared non-Lagrangian"),
        );
    }
    if let Some(k0) = e.constant_k {
        checks.push(Check::at_most(
            "constant-k",
            name,
            max_of(flat.iter().map(|n| (n.k - k0).abs())),
            1e-6 * loose,
        ));
    }
    if e.totally_geodesic {
        checks.push(Check::at_most(
            "totally-geodesic",
            name,
            max_of(flat.iter().map(|n| n.sigma_sq.sqrt())),
            1e-7 * tight,
        ));
    }
    if e.minimal {
        checks.push(Check::at_most("minimal", name, h_max, 1e-6 * tight));
    }
    if e.parallel_h {
        let r = (|| -> Result<Check> {
            let mut worst: f64 = 0.0;
            for (c, g) in charts.iter().zip(&grids) {
                worst = worst.max(sweep_max(g, |t, s| parallel_h_residual(c, t, s, scheme))?);
            }
            Ok(Check::at_most("parallel-mean-curvature", name, worst, 1e-5 * loose))
        })();
        checks.push(checked("parallel-mean-curvature", name, r));
        let (lo, hi) = min_max(flat.iter().map(|n| n.h_norm)).unwrap_or((0.0, 0.0));
        checks.push(Check::at_most("mean-curvature-spread", name, hi - lo, 1e-8 * tight));
        if !e.minimal {
            checks.push(Check::at_least("mean-curvature-nonzero", name, lo, 1e-3));
        }
    }
    if e.minimal && e.lagrangian {
        let r = (|| -> Result<Check> {
            let mut worst: f64 = 0.0;
            for (c, g) in charts.iter().zip(&grids) {
                worst = worst.max(sweep_max(g, |t, s| {
                    let (a, b) = c_identities_residual(c, t, s, scheme)?;
                    Ok(a.max(b))
                })?);
            }
            Ok(Check::at_most("c-identities", name, worst, 5e-4 * loose))
        })();
        checks.push(checked("c-identities", name, r));
        for (c, g) in charts.iter().zip(&grids) {
            if !c.domain.conformal {
                continue;
            }
            let r = (|| -> Result<Check> {
                // Scale-free: Cauchy–Riemann by e^{2u}, modulus by e^{4u}.
                let worst = sweep_max(g, |t, s| {
                    let (cr, m) = hopf_residual(c, t, s, scheme)?;
                    let e2u = 0.5 * {
                        let f = first_form(&jet(c, t, s, scheme)?)?;
                        f.g11 + f.g22
                    };
                    Ok((cr / (1e-4 * e2u)).max(m / (1e-6 * e2u * e2u)))
                })?;
                Ok(Check::at_most("hopf-differential", c.name.as_str(), worst, loose)
                    .with_detail("relative to 1e-4 e^{2u} (holomorphy) and 1e-6 e^{4u} (modulus)"))
            })();
            checks.push(checked("hopf-differential", &c.name, r));
        }
    }

    let mut summary = Summary {
        h_max: Some(h_max),
        ..Summary::default()
    };
    if let Some((lo, hi)) = min_max(flat.iter().filter_map(|n| n.c)) {
        if flat.iter().all(|n| n.c.is_some()) {
            summary.c_min = Some(lo);
            summary.c_max = Some(hi);
        }
    }
    if let Some((lo, hi)) = min_max(flat.iter().map(|n| n.k)) {
        summary.k_min = Some(lo);
        summary.k_max = Some(hi);
    }
    if surface.domain.is_compact() {
        let full = GridSpec::new(cfg.nt, cfg.ns);
        summary.area = Some(crate::geometry::area(surface, full, scheme)?);
        if e.lagrangian && lag_max <= LAGRANGIAN_CUTOFF {
            summary.degree = degree_extrapolated(&chart, full, scheme).ok();
        }
    }

    if let Gluing::Klein { .. } = surface.domain.gluing {
        let g = Grid::midpoint(&surface.domain, spec)?;
        checks.push(checked(
            "deck-invariance",
            name,
            sweep_max(&g, |t, s| deck_residual(surface, t, s)).map(|r| Check::at_most("deck-invariance", name, r, 1e-10)),
        ));
        if surface.name == "klein-b" {
            checks.push(Check::at_most(
                "klein-membership",
                name,
                max_of(all[0].iter().map(|n| klein_membership_residual(&n.position))),
                1e-10,
            ));
            if let Some(a) = summary.area {
                let exact = klein_area();
                checks.push(Check::at_most("area", name, (a - exact).abs() / exact, 1e-4));
            }
            let (lo, hi) = min_max(all[0].iter().map(|n| n.conformal_factor)).unwrap_or((0.0, 0.0));
            checks.push(Check::at_least("conformal-factor-min", name, lo, 4.0 - 1e-9));
            checks.push(Check::at_most("conformal-factor-max", name, hi, 20.0 / 3.0 + 1e-9));
        }
    }

    let fd_steps = match scheme {
        JetScheme::Fd { h1, h2 } => Some([h1, h2]),
        JetScheme::Analytic => None,
    };
    let checks = checks.into_iter().map(|c| c.scaled(cfg.tol_scale)).collect();
    Ok(SurfaceReport {
        schema: SCHEMA_VERSION,
        surface: surface.name.clone(),
        grid: spec,
        observed: Observed { lagrangian: lag_max <= LAGRANGIAN_CUTOFF, minimal: h_max <= MINIMAL_CUTOFF },
        checks,
        summary,
        provenance: Provenance {
            jet_source: scheme.source(),
            fd_steps,
            curvature_step: CURVATURE_STEP,
            excluded_margin: cfg.margin,
        },
        timestamp: timestamp(),
        tool_version: TOOL_VERSION.to_string(),
    })
}

/// Checks for an immersion into ℝ⁴ lying in S³.
pub fn analyze_immersion(psi: &R4Immersion, cfg: &Config) -> Result<SurfaceReport> {
    let spec = GridSpec::new(cfg.nt, cfg.ns).with_margin(cfg.margin);
    let grid = Grid::midpoint(&psi.domain, spec)?;
    let name = psi.name.as_str();
    struct Node {
        sphere: f64,
        normal: f64,
        conformal: f64,
        partials: f64,
        h: f64,
        k: f64,
        relation: (f64, f64),
        bipolar: f64,
    }
    let nodes = sweep(&grid, |t, s| {
        let p = psi.eval(t, s)?;
        let [a, b] = psi.partials(t, s)?;
        let n = psi.unit_normal(t, s)?;
        let geo = psi.geometry(t, s)?;
        let g = geo.metric;
        Ok(Node {
            sphere: (p.norm() - 1.0).abs(),
            normal: (n.norm() - 1.0).abs().max(n.dot(&p).abs()).max(n.dot(&a).abs()).max(n.dot(&b).abs()),
            conformal: ((g[(0, 0)] - g[(1, 1)]).abs() + g[(0, 1)].abs()) / g[(0, 0)],
            partials: psi.partials_residual(t, s)?,
            h: geo.mean_curvature.abs(),
            k: geo.curvature,
            relation: gauss_map_relation_residual(psi, t, s)?,
            bipolar: bipolar_residual(psi, t, s)?,
        })
    })?;
    let mut checks = vec![
        Check::at_most("unit-sphere", name, max_of(nodes.iter().map(|n| n.sphere)), 1e-12),
        Check::at_most("unit-normal", name, max_of(nodes.iter().map(|n| n.normal)), 1e-9),
        Check::at_most("closed-form-partials", name, max_of(nodes.iter().map(|n| n.partials)), 1e-10),
        Check::at_most("gauss-map-metric", name, max_of(nodes.iter().map(|n| n.relation.0)), 1e-6),
        Check::at_most("gauss-map-jacobian", name, max_of(nodes.iter().map(|n| n.relation.1)), 1e-6),
        Check::at_most("bipolar", name, max_of(nodes.iter().map(|n| n.bipolar)), 1e-10),
    ];
    if psi.domain.conformal {
        checks.push(Check::at_most("conformal", name, max_of(nodes.iter().map(|n| n.conformal)), 1e-10));
    }
    let h_max = max_of(nodes.iter().map(|n| n.h));
    if psi.minimal {
        checks.push(Check::at_most("minimal-in-s3", name, h_max, 1e-6));
    }
    let (k_min, k_max) = min_max(nodes.iter().map(|n| n.k)).unwrap_or((0.0, 0.0));
    let area = if psi.domain.is_compact() {
        let full = Grid::midpoint(&psi.domain, GridSpec::new(cfg.nt, cfg.ns))?;
        let dens = sweep(&full, |t, s| Ok(psi.geometry(t, s)?.metric.determinant().sqrt()))?;
        Some(dens.iter().sum::<f64>() * full.cell_area())
    } else {
        None
    };
    Ok(SurfaceReport {
        schema: SCHEMA_VERSION,
        surface: psi.name.clone(),
        grid: spec,
        observed: Observed { lagrangian: false, minimal: h_max <= MINIMAL_CUTOFF },
        checks: checks.into_iter().map(|c| c.scaled(cfg.tol_scale)).collect(),
        summary: Summary {
            area,
            k_min: Some(k_min),
            k_max: Some(k_max),
            h_max: Some(h_max),
            ..Summary::default()
        },
        provenance: Provenance {
            jet_source: crate::geometry::JetSource::Analytic,
            fd_steps: None,
            curvature_step: CURVATURE_STEP,
            excluded_margin: cfg.margin,
        },
        timestamp: timestamp(),
        tool_version: TOOL_VERSION.to_string(),
    })
}

pub fn analyze(entry: &CatalogEntry, cfg: &Config, scheme: JetScheme) -> Result<SurfaceReport> {
    match entry {
        CatalogEntry::Surface(s) => analyze_surface(s, cfg, scheme),
        CatalogEntry::Immersion(r) => analyze_immersion(r, cfg),
    }
}
