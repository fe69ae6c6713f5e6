//! Verification suites run by `lagsurf verify`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Rotation3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::sphere::{lambert, ConstantJacobianTwist, Orthogonal};
use crate::catalog::{
    area_preserving_residual, bipolar_residual, deck_residual, gauss_map_relation_residual,
    klein_area, klein_conformal_factor, klein_membership_residual, make_clifford,
    make_equator_sphere, make_graph, make_graph_antipodal, make_klein_bottle_b,
    make_lawson_gauss, make_lawson_tau31, resolve, resolve_surface, SpaceCurve,
    DEFAULT_NAMES,
};
use crate::catalog::curves::product_mean_curvature_norm;
use crate::elliptic::{complete_k, EllipticModulus};
use crate::error::{Error, Result};
use crate::geometry::ambient::{apply_j, omega};
use crate::geometry::forms::jacobian_in_frame;
use crate::geometry::{
    associated_jacobian, c_identities_residual, degree_extrapolated, first_form, hopf_residual,
    jet, orthonormal_frame, parallel_h_residual, second_form, Grid, GridSpec, Isometry, JetScheme,
    ProductPoint, ProductVector, SurfaceSpec,
};
use crate::harness::analyze::{analysis_chart, sample_surface, sweep_max, NodeSample};
use crate::harness::config::Config;
use crate::harness::report::Check;
use crate::sinh_gordon::{
    integrate_reduced, lawson_period, lawson_solution, reconstruct, reconstruct_c,
    reconstruct_u, sg_residual, sg_residual_analytic, SGField,
};
use crate::spectral::{
    assemble, assemble_klein, dense_eigenvalues, index_report, lowest_eigenpairs, parity_split,
    rayleigh, ConformalGrid, GridGluing,
};

/// Seed of every randomized sample point in the suites.
const SUITE_SEED: u64 = 20_240_917;
const ANALYTIC: JetScheme = JetScheme::Analytic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Lagrangian,
    Minimal,
    Identities,
    GaussMap,
    SinhGordon,
    Spectral,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lagrangian,
        Suite::Minimal,
        Suite::Identities,
        Suite::GaussMap,
        Suite::SinhGordon,
        Suite::Spectral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lagrangian => "lagrangian",
            Suite::Minimal => "minimal",
            Suite::Identities => "identities",
            Suite::GaussMap => "gaussmap",
            Suite::SinhGordon => "sinh-gordon",
            Suite::Spectral => "spectral",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite '{s}'")))
    }
}

type Job = Box<dyn Fn(&Config) -> Result<Vec<Check>> + Send + Sync>;

/// A unit of work and the catalog names it concerns.
struct Task {
    label: String,
    surfaces: Vec<String>,
    job: Job,
}

fn task(label: &str, surfaces: &[&str], job: impl Fn(&Config) -> Result<Vec<Check>> + Send + Sync + 'static) -> Task {
    Task {
        label: label.to_string(),
        surfaces: surfaces.iter().map(|s| s.to_string()).collect(),
        job: Box::new(job),
    }
}

/// Runs one suite, optionally restricted to the tasks touching `surface`.
/// Checks come back in a fixed order with tolerances scaled by the config.
pub fn run_suite(suite: Suite, cfg: &Config, surface: Option<&str>) -> Result<Vec<Check>> {
    cfg.validate()?;
    if let Some(name) = surface {
        resolve(name)?;
    }
    let tasks: Vec<Task> = match suite {
        Suite::Lagrangian => lagrangian_tasks(),
        Suite::Minimal => minimal_tasks(),
        Suite::Identities => identities_tasks(),
        Suite::GaussMap => gaussmap_tasks(),
        Suite::SinhGordon => sinh_gordon_tasks(),
        Suite::Spectral => spectral_tasks(),
    }
    .into_iter()
    .filter(|t| surface.is_none_or(|s| t.surfaces.iter().any(|x| x == s)))
    .collect();
    let results: Vec<Vec<Check>> = tasks
        .par_iter()
        .map(|t| match (t.job)(cfg) {
            Ok(checks) => checks,
            Err(e) => vec![Check::error(t.label.clone(), t.surfaces.join(","), e)],
        })
        .collect();
    Ok(results.into_iter().flatten().map(|c| c.scaled(cfg.tol_scale)).collect())
}

fn max_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

fn min_of(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(f64::INFINITY, |a, b| if b.is_nan() { f64::NAN } else { a.min(b) })
}

/// Samples of the analysis chart and every auxiliary chart.
fn all_samples(surface: &SurfaceSpec, n: usize, cfg: &Config) -> Result<Vec<NodeSample>> {
    let spec = GridSpec::new(n, n).with_margin(cfg.margin);
    let mut out = sample_surface(&analysis_chart(surface), spec, ANALYTIC)?.1;
    for c in &surface.aux_charts {
        out.extend(sample_surface(c, spec, ANALYTIC)?.1);
    }
    Ok(out)
}

/// Charts paired with their sampling grids.
fn charts(surface: &SurfaceSpec, n: usize, cfg: &Config) -> Result<Vec<(SurfaceSpec, Grid)>> {
    let spec = GridSpec::new(n, n).with_margin(cfg.margin);
    let mut out = Vec::new();
    let main = analysis_chart(surface);
    let g = Grid::midpoint(&main.domain, spec)?;
    out.push((main, g));
    for c in &surface.aux_charts {
        out.push((c.clone(), Grid::midpoint(&c.domain, spec)?));
    }
    Ok(out)
}

fn c_values(samples: &[NodeSample], name: &str) -> Result<Vec<f64>> {
    samples
        .iter()
        .map(|n| n.c.ok_or_else(|| Error::Precondition(format!("{name}: C undefined at ({}, {})", n.t, n.s))))
        .collect()
}

/// Random parameter points inside the (trimmed) fundamental rectangle.
fn random_points(surface: &SurfaceSpec, count: usize, margin: f64, salt: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ salt);
    let d = &surface.domain;
    let (t0, t1) = (d.t_range.0 + margin, d.t_range.1 - margin);
    let (s0, s1) = (d.s_range.0 + margin, d.s_range.1 - margin);
    (0..count)
        .map(|_| (rng.random_range(t0..t1), rng.random_range(s0..s1)))
        .collect()
}

fn lagrangian_names() -> Vec<String> {
    let mut v: Vec<String> = crate::catalog::default_surfaces().into_iter().map(|s| s.name).collect();
    v.extend(["const-c:0.1", "const-c:0.45", "product:lat=0.3@1.7:lat=-0.2"].map(String::from));
    v
}

// ---------------------------------------------------------------- lagrangian

fn lagrangian_tasks() -> Vec<Task> {
    let mut tasks = Vec::new();
    for name in lagrangian_names() {
        let n2 = name.clone();
        tasks.push(task("lagrangian", &[&name], move |cfg| {
            let s = resolve_surface(&n2)?;
            let samples = all_samples(&s, cfg.nt, cfg)?;
            let lag = max_of(samples.iter().map(|n| n.lagrangian));
            let mut out = vec![Check::at_most("tangency", &n2, max_of(samples.iter().map(|n| n.tangency)), 1e-8)];
            if !s.expects.lagrangian {
                out.push(
                    Check::at_least("not-lagrangian", &n2, lag, 1e-3).with_detail("negative control"),
                );
                return Ok(out);
            }
            let c = c_values(&samples, &n2)?;
            out.push(Check::at_most("lagrangian", &n2, lag, 1e-9));
            out.push(Check::at_most("c-squared-bound", &n2, max_of(c.iter().map(|c| (c * c - 0.25).max(0.0))), 1e-9));
            out.push(Check::at_most(
                "cubic-form-symmetry",
                &n2,
                max_of(samples.iter().filter_map(|n| n.cubic_asymmetry)),
                1e-6,
            ));
            out.push(Check::at_most(
                "rank-identity",
                &n2,
                max_of(samples.iter().filter_map(|n| n.rank_identity)),
                1e-8,
            ));
            if let Some(c0) = s.expects.constant_c {
                out.push(Check::at_most("constant-c", &n2, max_of(c.iter().map(|c| (c - c0).abs())), 1e-8));
            }
            Ok(out)
        }));
    }

    for lambda in [0.1, 0.3, 0.45] {
        let name = format!("const-c:{lambda}");
        tasks.push(task("area-preserving", &[&name], move |cfg| {
            let f = ConstantJacobianTwist::new(lambda)?;
            let s = resolve_surface(&format!("const-c:{lambda}"))?;
            let grid = Grid::midpoint(&s.domain, GridSpec::new(cfg.nt, cfg.ns).with_margin(cfg.margin))?;
            let r = sweep_max(&grid, |t, z| {
                let x = lambert(t, z);
                area_preserving_residual(&f, Vector3::new(x[0], x[1], x[2]))
            })?;
            Ok(vec![Check::at_most("area-preserving", s.name, r, 1e-9)])
        }));
    }

    tasks.push(task("rotated-antipodal", &["graph-antipodal"], |cfg| {
        let r = Rotation3::from_euler_angles(0.3, -1.1, 2.0).into_inner();
        let m = -r;
        let rows = [0, 1, 2].map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]]);
        let s = make_graph("graph-rotated-antipodal", Orthogonal(rows), make_graph_antipodal().expects);
        let samples = all_samples(&s, cfg.nt, cfg)?;
        Ok(vec![Check::at_most("lagrangian", s.name, max_of(samples.iter().map(|n| n.lagrangian)), 1e-9)])
    }));

    let names: Vec<String> = DEFAULT_NAMES.iter().map(|s| s.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    tasks.push(task("fd-partials", &refs, |_| {
        let mut out = Vec::new();
        for s in crate::catalog::default_surfaces() {
            let mut worst: f64 = 0.0;
            let mut all = vec![s.clone()];
            all.extend(s.aux_charts.iter().cloned());
            // The twist of const-c winds up without bound towards the
            // poles, where h²/6 |∂³| exceeds the tolerance.
            let band = s.expects.constant_c.is_some() && !s.expects.compact;
            let margin = if band { 0.5 } else { 0.05 };
            for c in &all {
                for (t, u) in random_points(c, 16, margin, 1) {
                    let a = jet(c, t, u, ANALYTIC)?;
                    let f = jet(c, t, u, JetScheme::FD_DEFAULT)?;
                    worst = worst.max((a.d_t - f.d_t).max_abs()).max((a.d_s - f.d_s).max_abs());
                }
            }
            let check = Check::at_most("fd-first-partials", s.name, worst, 1e-7);
            out.push(if band { check.with_detail("|z| <= 1/2") } else { check });
        }
        Ok(out)
    }));

    let equivariance = ["lawson-gauss", "klein-b", "const-c:0.3", "torus-ab:0.3:0.4", "m0"];
    tasks.push(task("isometry-equivariance", &equivariance, move |_| {
        let a = Rotation3::from_euler_angles(0.4, 0.9, -0.2).into_inner();
        let b = Rotation3::from_euler_angles(-1.3, 0.1, 0.7).into_inner();
        let iso = Isometry::diagonal(a, b);
        let mut out = Vec::new();
        for name in equivariance {
            let s = resolve_surface(name)?;
            let moved = s.transformed(iso.clone());
            let (mut worst, mut worst_k): (f64, f64) = (0.0, 0.0);
            for (t, u) in random_points(&s, 12, 0.1, 2) {
                let f0 = second_form(&s, t, u, ANALYTIC)?;
                let f1 = second_form(&moved, t, u, ANALYTIC)?;
                let c = match (f0.c, f1.c) {
                    (Some(x), Some(y)) => (x - y).abs(),
                    _ => f64::NAN,
                };
                worst = worst
                    .max((f0.g11 - f1.g11).abs())
                    .max((f0.g12 - f1.g12).abs())
                    .max((f0.g22 - f1.g22).abs())
                    .max((f0.sigma_sq - f1.sigma_sq).abs())
                    .max((f0.h_norm - f1.h_norm).abs())
                    .max(c);
                worst_k = worst_k.max((f0.k - f1.k).abs());
            }
            out.push(Check::at_most("isometry-equivariance", name, worst, 1e-10));
            out.push(Check::at_most("isometry-equivariance-k", name, worst_k, 1e-8));
        }
        Ok(out)
    }));

    let frame_names = ["lawson-gauss", "m0", "const-c:0.3", "klein-b"];
    tasks.push(task("frame-rotation", &frame_names, move |_| {
        let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 3);
        let mut out = Vec::new();
        for name in frame_names {
            let s = analysis_chart(&resolve_surface(name)?);
            let mut worst: f64 = 0.0;
            for (t, u) in random_points(&s, 16, 0.1, 4) {
                let j = jet(&s, t, u, ANALYTIC)?;
                let c = associated_jacobian(&j)?;
                let frame = orthonormal_frame(&j)?;
                let rot = frame.rotated(rng.random_range(0.0..TAU));
                worst = worst.max((jacobian_in_frame(&j, &rot) - c).abs());
            }
            out.push(Check::at_most("frame-rotation-invariance", name, worst, 1e-12));
        }
        Ok(out)
    }));

    tasks.push(task("ambient-structure", &[], |_| {
        let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 5);
        let mut unit = || {
            let v = Vector3::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            v.normalize()
        };
        let (mut jj, mut iso, mut anti): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..100 {
            let p = ProductPoint::new(unit(), unit());
            let tangent = |v: Vector3<f64>, w: Vector3<f64>| {
                ProductVector::new(v - p.x * p.x.dot(&v), w - p.y * p.y.dot(&w))
            };
            let v = tangent(unit(), unit());
            let w = tangent(unit(), unit());
            let jv = apply_j(&p, &v);
            jj = jj.max((apply_j(&p, &jv) + v).max_abs());
            iso = iso.max((jv.dot(&apply_j(&p, &w)) - v.dot(&w)).abs());
            anti = anti.max(omega(&p, &v, &v).abs()).max((omega(&p, &v, &w) + omega(&p, &w, &v)).abs());
        }
        Ok(vec![
            Check::at_most("j-squared", "ambient", jj, 1e-12),
            Check::at_most("j-isometry", "ambient", iso, 1e-12),
            Check::at_most("omega-antisymmetry", "ambient", anti, 1e-12),
        ])
    }));
    tasks
}

// ------------------------------------------------------------------- minimal

fn minimal_tasks() -> Vec<Task> {
    let mut tasks = Vec::new();
    for s in crate::catalog::default_surfaces().into_iter().filter(|s| s.expects.minimal) {
        let name = s.name.clone();
        tasks.push(task("minimal", &[&name.clone()], move |cfg| {
            let s = resolve_surface(&name)?;
            let samples = all_samples(&s, cfg.nt, cfg)?;
            Ok(vec![Check::at_most("minimal", &name, max_of(samples.iter().map(|n| n.h_norm)), 1e-6)])
        }));
    }
    for (name, psi) in [("lawson-tau31", make_lawson_tau31()), ("clifford", make_clifford())] {
        tasks.push(task("minimal-in-s3", &[name], move |cfg| {
            let grid = Grid::midpoint(&psi.domain, GridSpec::new(cfg.nt, cfg.ns))?;
            let h = sweep_max(&grid, |t, s| Ok(psi.geometry(t, s)?.mean_curvature.abs()))?;
            let conf = sweep_max(&grid, |t, s| {
                let g = psi.geometry(t, s)?.metric;
                Ok(((g[(0, 0)] - g[(1, 1)]).abs() + g[(0, 1)].abs()) / g[(0, 0)])
            })?;
            let unit = sweep_max(&grid, |t, s| Ok((psi.eval(t, s)?.norm() - 1.0).abs()))?;
            Ok(vec![
                Check::at_most("minimal-in-s3", name, h, 1e-6),
                Check::at_most("conformal", name, conf, 1e-10),
                Check::at_most("unit-sphere", name, unit, 1e-12),
            ])
        }));
    }

    tasks.push(task("totally-geodesic", &["m0"], |cfg| {
        let s = resolve_surface("m0")?;
        let samples = all_samples(&s, cfg.nt, cfg)?;
        let c = c_values(&samples, "m0")?;
        let full = GridSpec::new(cfg.nt, cfg.ns);
        let area = crate::geometry::area(&s, full, ANALYTIC)?;
        let degree = degree_extrapolated(&s, full, ANALYTIC)?;
        Ok(vec![
            Check::at_most("sigma", "m0", max_of(samples.iter().map(|n| n.sigma_sq.sqrt())), 1e-7),
            Check::at_most("c-half", "m0", max_of(c.iter().map(|c| (c - 0.5).abs())), 1e-8),
            Check::at_most("k-half", "m0", max_of(samples.iter().map(|n| (n.k - 0.5).abs())), 1e-6),
            Check::at_most("area-8pi", "m0", (area - 8.0 * PI).abs(), 1e-3),
            Check::at_most("degree-one", "m0", (degree - 1.0).abs(), 1e-6),
        ])
    }));

    tasks.push(task("flat-torus", &["torus-t"], |cfg| {
        let s = resolve_surface("torus-t")?;
        let samples = all_samples(&s, cfg.nt, cfg)?;
        let c = c_values(&samples, "torus-t")?;
        let degree = degree_extrapolated(&s, GridSpec::new(cfg.nt, cfg.ns), ANALYTIC)?;
        Ok(vec![
            Check::at_most("sigma", "torus-t", max_of(samples.iter().map(|n| n.sigma_sq.sqrt())), 1e-7),
            Check::at_most("k-zero", "torus-t", max_of(samples.iter().map(|n| n.k.abs())), 1e-8),
            Check::at_most("c-zero", "torus-t", max_of(c.iter().map(|c| c.abs())), 1e-10),
            Check::at_most("degree-zero", "torus-t", degree.abs(), 1e-6),
        ])
    }));

    for (a, b) in [(0.5, 0.0), (0.3, 0.4)] {
        let name = format!("torus-ab:{a}:{b}");
        tasks.push(task("parallel-mean-curvature", &[&name], move |cfg| {
            let name = format!("torus-ab:{a}:{b}");
            let s = resolve_surface(&name)?;
            let grid = Grid::midpoint(&s.domain, GridSpec::new(cfg.nt, cfg.ns))?;
            let par = sweep_max(&grid, |t, u| parallel_h_residual(&s, t, u, ANALYTIC))?;
            let samples = all_samples(&s, cfg.nt, cfg)?;
            let lo = min_of(samples.iter().map(|n| n.h_norm));
            let hi = max_of(samples.iter().map(|n| n.h_norm));
            let exact = product_mean_curvature_norm(&SpaceCurve::latitude(a)?, &SpaceCurve::latitude(b)?);
            Ok(vec![
                Check::at_most("parallel-mean-curvature", &name, par, 1e-5),
                Check::at_most("mean-curvature-spread", &name, hi - lo, 1e-8),
                Check::at_least("mean-curvature-nonzero", &name, lo, 1e-3),
                Check::at_most("mean-curvature-closed-form", &name, (hi - exact).abs(), 1e-10),
            ])
        }));
    }

    tasks.push(task("non-examples", &["const-c:0.3", "product:great:lat=0.5"], |cfg| {
        let s = resolve_surface("const-c:0.3")?;
        let grid = Grid::midpoint(&s.domain, GridSpec::new(16, 16).with_margin(cfg.margin))?;
        let par = sweep_max(&grid, |t, u| parallel_h_residual(&s, t, u, ANALYTIC))?;
        let samples = all_samples(&s, 16, cfg)?;
        let p = resolve_surface("product:great:lat=0.5")?;
        let ps = all_samples(&p, 16, cfg)?;
        let pc = c_values(&ps, &p.name)?;
        Ok(vec![
            Check::at_least("parallel-h-fails", "const-c:0.3", par, 1e-3).with_detail("negative control"),
            Check::at_least("not-minimal", "const-c:0.3", max_of(samples.iter().map(|n| n.h_norm)), 1e-3)
                .with_detail("negative control"),
            Check::at_most("c-zero", &p.name, max_of(pc.iter().map(|c| c.abs())), 1e-12),
            Check::at_least("not-minimal", &p.name, min_of(ps.iter().map(|n| n.h_norm)), 1e-3)
                .with_detail("negative control"),
        ])
    }));
    tasks
}

// ---------------------------------------------------------------- identities

fn identities_tasks() -> Vec<Task> {
    let mut tasks = Vec::new();
    for name in lagrangian_names() {
        let n2 = name.clone();
        tasks.push(task("gauss-equation", &[&name], move |cfg| {
            let s = resolve_surface(&n2)?;
            if !s.expects.lagrangian {
                return Ok(Vec::new());
            }
            let samples = all_samples(&s, cfg.identity_grid, cfg)?;
            let r = samples
                .iter()
                .map(|n| n.gauss_equation().ok_or_else(|| Error::Precondition(format!("{n2}: C undefined"))))
                .collect::<Result<Vec<_>>>()?;
            let tol = if s.expects.constant_k.is_some() { 1e-6 } else { 1e-4 };
            Ok(vec![Check::at_most("gauss-equation", &n2, max_of(r.into_iter()), tol)])
        }));
    }

    for name in ["klein-b", "lawson-gauss", "m0"] {
        tasks.push(task("c-identities", &[name], move |cfg| {
            let s = resolve_surface(name)?;
            let mut worst: f64 = 0.0;
            for (c, g) in charts(&s, cfg.nt, cfg)? {
                worst = worst.max(sweep_max(&g, |t, u| {
                    let (a, b) = c_identities_residual(&c, t, u, ANALYTIC)?;
                    Ok(a.max(b))
                })?);
            }
            Ok(vec![Check::at_most("c-identities", name, worst, 5e-4)])
        }));
    }

    for name in ["klein-b", "lawson-gauss"] {
        tasks.push(task("hopf", &[name], move |cfg| {
            let s = analysis_chart(&resolve_surface(name)?);
            let grid = Grid::midpoint(&s.domain, GridSpec::new(cfg.nt, cfg.ns))?;
            let rel = sweep_max(&grid, |t, u| {
                let (cr, m) = hopf_residual(&s, t, u, ANALYTIC)?;
                let f = first_form(&jet(&s, t, u, ANALYTIC)?)?;
                let e2u = 0.5 * (f.g11 + f.g22);
                Ok((cr / (1e-4 * e2u)).max(m / (1e-6 * e2u * e2u)))
            })?;
            Ok(vec![Check::at_most("hopf-differential", name, rel, 1.0)
                .with_detail("relative to 1e-4 e^{2u} (holomorphy) and 1e-6 e^{4u} (modulus)")])
        }));
    }

    tasks.push(task("hopf-vanishes", &["m0"], |cfg| {
        let s = resolve_surface("m0")?;
        let mut worst: f64 = 0.0;
        for c in &s.aux_charts {
            let g = Grid::midpoint(&c.domain, GridSpec::new(cfg.nt, cfg.ns).with_margin(cfg.margin))?;
            worst = worst.max(sweep_max(&g, |t, u| {
                let (cr, m) = hopf_residual(c, t, u, ANALYTIC)?;
                Ok(cr.max(m))
            })?);
        }
        Ok(vec![Check::at_most("hopf-vanishes", "m0", worst, 1e-9)])
    }));

    tasks.push(task("hopf-modulus", &["torus-t"], |cfg| {
        let s = resolve_surface("torus-t")?;
        let g = Grid::midpoint(&s.domain, GridSpec::new(16, 16))?;
        let worst = sweep_max(&g, |t, u| {
            let (cr, m) = hopf_residual(&s, t, u, ANALYTIC)?;
            Ok(cr.max(m))
        })?;
        let _ = cfg;
        Ok(vec![Check::at_most("hopf-modulus", "torus-t", worst, 1e-10)])
    }));
    tasks
}

// ------------------------------------------------------------------ gaussmap

fn gaussmap_tasks() -> Vec<Task> {
    let mut tasks = Vec::new();
    let inputs = [
        ("clifford-gauss", make_clifford(), 1e-8),
        ("lawson-gauss", make_lawson_tau31(), 1e-6),
        ("sphere-gauss", make_equator_sphere(), 1e-8),
    ];
    for (name, psi, tol) in inputs {
        tasks.push(task("gauss-map-relations", &[name, psi.name.clone().as_str()], move |cfg| {
            let grid = Grid::midpoint(&psi.domain, GridSpec::new(cfg.nt, cfg.ns).with_margin(cfg.margin))?;
            let rel = crate::geometry::sweep(&grid, |t, s| gauss_map_relation_residual(&psi, t, s))?;
            let bip = sweep_max(&grid, |t, s| bipolar_residual(&psi, t, s))?;
            Ok(vec![
                Check::at_most("gauss-map-metric", name, max_of(rel.iter().map(|r| r.0)), tol),
                Check::at_most("gauss-map-jacobian", name, max_of(rel.iter().map(|r| r.1)), tol),
                Check::at_most("bipolar", name, bip, 1e-10),
            ])
        }));
    }

    tasks.push(task("clifford-gauss", &["clifford-gauss"], |cfg| {
        let s = resolve_surface("clifford-gauss")?;
        let samples = all_samples(&s, cfg.nt, cfg)?;
        let first = max_of(samples.iter().map(|n| n.position.x[0].abs().max(n.position.y[0].abs())));
        let c = c_values(&samples, "clifford-gauss")?;
        Ok(vec![
            Check::at_most("lands-in-t", "clifford-gauss", first, 1e-10),
            Check::at_most("c-zero", "clifford-gauss", max_of(c.iter().map(|c| c.abs())), 1e-10),
        ])
    }));

    tasks.push(task("sphere-gauss", &["sphere-gauss"], |cfg| {
        let s = resolve_surface("sphere-gauss")?;
        let samples = all_samples(&s, cfg.nt, cfg)?;
        let c = c_values(&samples, "sphere-gauss")?;
        Ok(vec![Check::at_most("c-squared-quarter", "sphere-gauss", max_of(c.iter().map(|c| (c * c - 0.25).abs())), 1e-8)])
    }));

    tasks.push(task("lawson-gauss", &["lawson-gauss"], |cfg| {
        let s = make_lawson_gauss();
        let samples = all_samples(&s, cfg.nt, cfg)?;
        let mut c = c_values(&samples, "lawson-gauss")?;
        // |C| peaks where dn² ∈ {1, 1/9}, i.e. on the lines t = m K/√3.
        let step = complete_k(EllipticModulus::klein()) / 3f64.sqrt();
        for m in 0..4 {
            for (_, u) in random_points(&s, 8, 0.0, 6 + m as u64) {
                c.push(associated_jacobian(&jet(&s, m as f64 * step, u, ANALYTIC)?)?);
            }
        }
        let cmax = max_of(c.iter().map(|c| c.abs()));
        let degree = degree_extrapolated(&s, GridSpec::new(cfg.nt, cfg.ns), ANALYTIC)?;
        Ok(vec![
            Check::at_most("degree-zero", "lawson-gauss", degree.abs(), 1e-6),
            Check::at_most("max-abs-c", "lawson-gauss", (cmax - 0.4).abs(), 1e-6),
            Check::at_most("c-squared-strict", "lawson-gauss", cmax * cmax, 0.25 - 1e-3),
        ])
    }));

    tasks.push(task("klein-bottle", &["klein-b"], |cfg| {
        let b = make_klein_bottle_b();
        let pts = random_points(&b, 100, 0.0, 7);
        let deck = max_of(pts.iter().map(|&(t, s)| deck_residual(&b, t, s).unwrap_or(f64::NAN)));
        let glide = max_of(pts.iter().map(|&(t, s)| {
            let (t1, s1) = b.domain.glide(t, s).unwrap_or((f64::NAN, f64::NAN));
            let (t2, s2) = b.domain.glide(t1, s1).unwrap_or((f64::NAN, f64::NAN));
            (t2 - t).abs().max((s2 - s - 2.0 * b.domain.s_len()).abs())
        }));
        let samples = all_samples(&b, cfg.nt, cfg)?;
        let member = max_of(samples.iter().map(|n| klein_membership_residual(&n.position)));
        // Coordinates (x, Re z, Im z) on the first factor.
        let z_sq = min_of(samples.iter().map(|n| n.position.x[1].powi(2) + n.position.x[2].powi(2)));
        let h = max_of(samples.iter().map(|n| n.h_norm));
        let area = crate::geometry::area(&b, GridSpec::new(cfg.nt, cfg.ns), ANALYTIC)?;
        let exact = klein_area();
        let factor = max_of(samples.iter().map(|n| (n.conformal_factor - klein_conformal_factor(n.t)).abs()));
        let ts: Vec<f64> = (0..=400).map(|i| i as f64 * b.domain.t_len() / 400.0).collect();
        let e_min = min_of(ts.iter().map(|&t| klein_conformal_factor(t)));
        let e_max = max_of(ts.iter().map(|&t| klein_conformal_factor(t)));
        Ok(vec![
            Check::at_most("deck-invariance", "klein-b", deck, 1e-10),
            Check::at_most("glide-squared", "klein-b", glide, 1e-12),
            Check::at_most("membership", "klein-b", member, 1e-10),
            Check::at_least("z-modulus", "klein-b", z_sq, 0.75 - 1e-12),
            Check::at_most("minimal", "klein-b", h, 1e-6),
            Check::at_most("area-12-pi-e", "klein-b", (area - exact).abs() / exact, 1e-4),
            Check::at_most("conformal-factor", "klein-b", factor, 1e-10),
            Check::at_most("conformal-factor-min", "klein-b", (e_min - 4.0).abs(), 1e-9),
            Check::at_most("conformal-factor-max", "klein-b", (e_max - 20.0 / 3.0).abs(), 1e-9),
        ])
    }));

    tasks.push(task("klein-vs-lawson", &["klein-b", "lawson-gauss"], |_| {
        let b = make_klein_bottle_b();
        let l = make_lawson_gauss();
        let (mut metric, mut c, mut k): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for (t, s) in random_points(&b.oriented_double_cover(), 24, 0.0, 8) {
            let fb = second_form(&b.oriented_double_cover(), t, s, ANALYTIC)?;
            let fl = second_form(&l, t, s, ANALYTIC)?;
            metric = metric
                .max((fb.g11 - fl.g11).abs() / fb.g11)
                .max((fb.g12 - fl.g12).abs() / fb.g11)
                .max((fb.g22 - fl.g22).abs() / fb.g11);
            let (cb, cl) = (fb.c.unwrap_or(f64::NAN), fl.c.unwrap_or(f64::NAN));
            c = c.max((cb * cb - cl * cl).abs());
            k = k.max((fb.k - fl.k).abs());
        }
        Ok(vec![
            Check::at_most("matched-metric", "klein-b", metric, 1e-10),
            Check::at_most("matched-c-squared", "klein-b", c, 1e-10),
            Check::at_most("matched-k", "klein-b", k, 1e-8),
        ])
    }));
    tasks
}

// --------------------------------------------------------------- sinh-gordon

fn lawson_line(n: usize) -> Result<SGField> {
    let dt = lawson_period() / n as f64;
    SGField::sample(n, 1, (0.0, dt), (0.0, 1.0), false, |t, _| lawson_solution(t))
}

fn sinh_gordon_tasks() -> Vec<Task> {
    let mut tasks = Vec::new();
    tasks.push(task("lawson-solution", &["klein-b"], |cfg| {
        let n = cfg.sg_nodes;
        let line = lawson_line(n)?;
        let pts = (0..n).map(|i| (line.t(i), 0.0));
        let analytic = sg_residual_analytic(|t, _| lawson_solution(t), pts);
        let fd = sg_residual(&line)?;
        let rec = reconstruct(&line)?;
        let shifted = SGField::sample(n, 1, (0.37, line.dt), (0.0, 1.0), false, |t, _| lawson_solution(t))?;
        let zero = sg_residual(&SGField::sample(8, 8, (0.0, 0.1), (0.0, 0.1), true, |_, _| 0.0)?)?;
        let one = sg_residual(&SGField::sample(8, 8, (0.0, 0.1), (0.0, 0.1), true, |_, _| 1.0)?)?;
        let v0 = lawson_solution(0.0);
        Ok(vec![
            Check::at_most("initial-data", "klein-b", (v0.tanh() - 0.5).abs(), 1e-14),
            Check::at_most("sinh-gordon-analytic", "klein-b", analytic, 1e-6),
            Check::at_most("sinh-gordon-fd", "klein-b", fd, 1e-4),
            Check::at_most("sinh-gordon-translated", "klein-b", sg_residual(&shifted)?, 1e-4),
            Check::at_most("compatibility", "klein-b", rec.compat_residual(), 1e-4),
            Check::at_most("zero-solution", "sinh-gordon", zero, 0.0),
            Check::at_most("constant-non-solution", "sinh-gordon", (one - 2f64.sinh() / 2.0).abs(), 1e-12),
        ])
    }));

    tasks.push(task("reduced-ode", &["klein-b"], |cfg| {
        let t_end = lawson_period();
        // tanh v(0) = 1/2, i.e. v(0) = log √3, at a maximum of v.
        let sol_b = integrate_reduced(0.5f64.atanh(), 0.0, t_end, cfg.sg_step)?;
        let err = max_of(sol_b.t.iter().zip(&sol_b.v).map(|(&t, &v)| (v - lawson_solution(t)).abs()));
        let c_max = max_of(sol_b.v.iter().map(|&v| reconstruct_c(v).abs()));
        let mut drift = sol_b.first_integral_drift();
        for (v0, dv0) in [(0.3, -0.7), (-0.8, 0.2), (1.1, 1.5)] {
            drift = drift.max(integrate_reduced(v0, dv0, 4.0, cfg.sg_step)?.first_integral_drift());
        }
        let eq = integrate_reduced(0.0, 0.0, 3.0, cfg.sg_step)?;
        Ok(vec![
            Check::at_most("reduced-matches-lawson", "klein-b", err, 1e-7),
            Check::at_most("first-integral-drift", "sinh-gordon", drift, 1e-8),
            Check::at_most("c-strictly-inside", "klein-b", c_max, 0.5 - 1e-6),
            Check::at_most("equilibrium", "sinh-gordon", max_of(eq.v.iter().map(|v| v.abs())), 0.0),
        ])
    }));

    tasks.push(task("reconstruction-vs-klein", &["klein-b"], |cfg| {
        let b = make_klein_bottle_b().oriented_double_cover();
        let (mut fu, mut fc): (f64, f64) = (0.0, 0.0);
        for (t, s) in random_points(&b, 32, 0.0, 9) {
            let v = lawson_solution(t);
            let j = jet(&b, t, s, ANALYTIC)?;
            let g = first_form(&j)?;
            let e2u = 0.5 * (g.g11 + g.g22);
            fu = fu.max((e2u - (2.0 * reconstruct_u(v)).exp()).abs());
            fc = fc.max((associated_jacobian(&j)? - reconstruct_c(v)).abs());
        }
        let _ = cfg;
        Ok(vec![
            Check::at_most("reconstructed-conformal-factor", "klein-b", fu, 1e-6),
            Check::at_most("reconstructed-c", "klein-b", fc, 1e-6),
        ])
    }));
    tasks
}

// ------------------------------------------------------------------ spectral

fn flat_lambda1(n: usize) -> Result<(Vec<f64>, f64)> {
    let g = ConformalGrid::flat(n, n, TAU, TAU)?;
    let r = lowest_eigenpairs(&assemble(&g), 6, 1e-9)?;
    let l1 = r.values[1];
    Ok((r.values, l1))
}

fn spectral_tasks() -> Vec<Task> {
    let mut tasks = Vec::new();
    tasks.push(task("flat-torus", &["torus-t"], |_| {
        let (v32, l32) = flat_lambda1(32)?;
        let (_, l16) = flat_lambda1(16)?;
        let (_, l64) = flat_lambda1(64)?;
        let (e16, e32, e64) = ((1.0 - l16).abs(), (1.0 - l32).abs(), (1.0 - l64).abs());
        let mult = max_of(v32[1..5].iter().map(|l| (l - l32).abs()));
        let g = ConformalGrid::flat(32, 32, TAU, TAU)?;
        let op = assemble(&g);
        let ones = nalgebra::DVector::from_element(g.len(), 1.0);
        let lc = crate::spectral::operator::spmv(&op.laplacian, &ones).amax();
        Ok(vec![
            Check::at_most("lambda1", "torus-t", e32, 4e-3),
            Check::at_most("lambda1-multiplicity-4", "torus-t", mult, 1e-8),
            Check::at_least("lambda5-separated", "torus-t", v32[5], 1.5),
            Check::at_most("second-order-refinement", "torus-t", (e16 / e32 / 4.0 - 1.0).abs(), 0.1),
            Check::at_most("monotone-refinement", "torus-t", (e32 - e16).max(e64 - e32).max(0.0), 0.0),
            Check::at_most("constants-harmonic", "torus-t", lc, 0.0),
            Check::at_most("constant-rayleigh", "torus-t", rayleigh(&g, &vec![1.0; g.len()])?, 0.0),
        ])
    }));

    tasks.push(task("dense-cross-check", &["torus-t", "klein-b"], |_| {
        let b = make_klein_bottle_b();
        let kg = ConformalGrid::from_surface(&b, 16, 16)?;
        let flat = ConformalGrid::flat(16, 16, TAU, TAU)?;
        let mut worst: f64 = 0.0;
        for op in [assemble(&flat), assemble(&kg)] {
            let it = lowest_eigenpairs(&op, 12, 1e-10)?;
            let dense = dense_eigenvalues(&op);
            worst = worst.max(max_of(it.values.iter().zip(&dense).map(|(a, b)| (a - b).abs())));
        }
        let split = parity_split(&kg)?;
        let mut merged = dense_eigenvalues(&split.plus);
        merged.extend(dense_eigenvalues(&split.minus));
        merged.sort_by(f64::total_cmp);
        let full = dense_eigenvalues(&assemble(&kg));
        let merge = max_of(merged.iter().zip(&full).map(|(a, b)| (a - b).abs()));
        Ok(vec![
            Check::at_most("dense-agreement", "klein-b", worst, 1e-8),
            Check::at_most("sector-merge", "klein-b", merge, 1e-8),
            Check::at_most("sector-dimensions", "klein-b", (split.plus.dim() + split.minus.dim()) as f64 - kg.len() as f64, 0.0),
        ])
    }));

    tasks.push(task("klein-spectrum", &["klein-b"], |cfg| {
        let b = make_klein_bottle_b();
        let n = cfg.spectral_grid;
        let g = ConformalGrid::from_surface(&b, n, n)?;
        let split = parity_split(&g)?;
        let plus = lowest_eigenpairs(&split.plus, 4, 1e-8)?;
        let native = lowest_eigenpairs(&assemble_klein(&g)?, 4, 1e-8)?;
        let minus = lowest_eigenpairs(&split.minus, 4, 1e-8)?;
        let below = minus.values.iter().filter(|&&l| l < 1.0).count();
        let f = g.sample(|_, s| (2.0 * s / 3f64.sqrt()).cos());
        let h = g.sample(|_, s| (2.0 * s / 3f64.sqrt()).sin());
        let mut odd: f64 = 0.0;
        for j in 0..g.ns {
            for i in 0..g.nt {
                let (a, c) = g.involution(i, j).expect("klein grid");
                let (p, q) = (g.index(i, j), g.index(a, c));
                odd = odd.max((f[q] + f[p]).abs()).max((h[q] + h[p]).abs());
            }
        }
        let ctrl = ConformalGrid::new(n, n, (g.dt * n as f64, g.ds * n as f64), GridGluing::Torus, |t, _| {
            klein_conformal_factor(t + 0.5 * g.dt)
        })?;
        let l_full = lowest_eigenpairs(&assemble(&ConformalGrid { gluing: GridGluing::Torus, ..g.clone() }), 6, 1e-8)?;
        let l_shift = lowest_eigenpairs(&assemble(&ctrl), 6, 1e-8)?;
        let shift = max_of(l_full.values.iter().zip(&l_shift.values).skip(1).map(|(a, b)| (a - b).abs() / a));
        Ok(vec![
            Check::at_most("lambda1", "klein-b", (plus.values[1] - 1.0).abs(), 0.02),
            Check::at_most("native-vs-even-sector", "klein-b", (native.values[1] - plus.values[1]).abs(), 1e-8),
            Check::at_least("odd-eigenvalues-below-one", "klein-b", below as f64, 2.0),
            Check::at_most("rayleigh-cos", "klein-b", rayleigh(&g, &f)?, 1.0 / 3.0 + 0.01),
            Check::at_most("rayleigh-sin", "klein-b", rayleigh(&g, &h)?, 1.0 / 3.0 + 0.01),
            Check::at_most("test-functions-odd", "klein-b", odd, 1e-12),
            Check::at_most("translation-invariance", "klein-b", shift, 5e-3),
        ])
    }));

    tasks.push(task("index", &["torus-t", "klein-b"], |cfg| {
        let t = index_report(&resolve_surface("torus-t")?, 32, 32, cfg.spectral_margin)?;
        let n = cfg.spectral_grid;
        let b = index_report(&make_klein_bottle_b(), n, n, cfg.spectral_margin)?;
        let detail = |r: &crate::spectral::SpectralResult| {
            format!("ind0 {} ind1 {} betti1 {} index {}", r.ind0, r.ind1, r.betti1, r.index)
        };
        Ok(vec![
            Check::at_most("ind0", "torus-t", t.ind0 as f64, 0.0),
            Check::at_most("index-equals-2", "torus-t", (t.index as f64 - 2.0).abs(), 0.0).with_detail(detail(&t)),
            Check::at_most("ind0", "klein-b", b.ind0 as f64, 0.0).with_detail("Hamiltonian stable"),
            Check::at_least("ind1", "klein-b", b.ind1 as f64, 2.0),
            Check::at_least("index", "klein-b", b.index as f64, 3.0).with_detail(detail(&b)),
        ])
    }));
    tasks
}
