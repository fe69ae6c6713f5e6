//! The twelve acceptance criteria. Prints one PASS/FAIL line each and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use lagsurf::catalog::{
    deck_residual, default_surfaces, gauss_map_relation_residual, klein_area, klein_membership_residual,
    make_clifford, make_clifford_gauss, make_klein_bottle_b, make_lawson_gauss, make_lawson_tau31, make_m0,
    make_t, resolve_surface,
};
use lagsurf::geometry::{
    area, associated_jacobian, c_identities_residual, degree_extrapolated, gauss_equation_residual, jet,
    parallel_h_residual, second_form, Grid, GridSpec, JetScheme, SurfaceSpec,
};
use lagsurf::harness::analyze::analysis_chart;
use lagsurf::harness::sample_surface;
use lagsurf::sinh_gordon::{
    integrate_reduced, lawson_period, lawson_solution, reconstruct, sg_residual_analytic, SGField,
};
use lagsurf::spectral::{
    assemble, dense_eigenvalues, index_report, lowest_eigenpairs, parity_split, rayleigh, ConformalGrid,
    DEFAULT_MARGIN,
};
use lagsurf::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const A: JetScheme = JetScheme::Analytic;
const MARGIN: f64 = 0.05;

/// Outcome of one criterion: whether it holds and a short measurement.
struct Verdict {
    pass: bool,
    detail: String,
}

/// Collects named sub-checks of one criterion.
#[derive(Default)]
struct Tally {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn at_most(&mut self, what: &str, value: f64, tol: f64) {
        self.record(what, value <= tol, format!("{what} {value:.2e} <= {tol:.2e}"));
    }

    fn record(&mut self, what: &str, ok: bool, note: String) {
        if !ok {
            self.failed.push(what.to_owned());
        }
        self.notes.push(note);
    }

    fn finish(self) -> Verdict {
        let mut detail = self.notes.join("; ");
        if !self.failed.is_empty() {
            detail = format!("failed: {} | {detail}", self.failed.join(", "));
        }
        Verdict { pass: self.failed.is_empty(), detail }
    }
}

fn lagrangian_surfaces() -> Vec<SurfaceSpec> {
    let mut v: Vec<_> = default_surfaces().into_iter().filter(|s| s.expects.lagrangian).collect();
    for extra in ["const-c:0.1", "const-c:0.45", "product:lat=0.3@1.7:lat=-0.2"] {
        v.push(resolve_surface(extra).unwrap());
    }
    v
}

/// Analysis chart followed by any auxiliary charts.
fn charts(s: &SurfaceSpec) -> Vec<SurfaceSpec> {
    let mut v = vec![analysis_chart(s)];
    v.extend(s.aux_charts.iter().cloned());
    v
}

fn nodes(s: &SurfaceSpec, n: usize) -> Vec<(f64, f64)> {
    Grid::midpoint(&s.domain, GridSpec::new(n, n).with_margin(MARGIN)).unwrap().points
}

fn sweep(s: &SurfaceSpec, n: usize, f: impl Fn(&SurfaceSpec, f64, f64) -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for c in charts(s) {
        for (t, u) in nodes(&c, n) {
            let r = f(&c, t, u)?;
            worst = if r.is_nan() { f64::NAN } else { worst.max(r) };
        }
    }
    Ok(worst)
}

fn timed(tally: &mut Tally, limit: Duration, start: Instant) {
    let secs = start.elapsed().as_secs_f64();
    tally.record("runtime", start.elapsed() < limit, format!("{secs:.2} s < {} s", limit.as_secs()));
}

fn lagrangian_suite() -> Result<Verdict> {
    let start = Instant::now();
    let mut t = Tally::default();
    let mut worst: f64 = 0.0;
    for s in lagrangian_surfaces() {
        for c in charts(&s) {
            let (_, samples) = sample_surface(&c, GridSpec::new(64, 64).with_margin(MARGIN), A)?;
            worst = worst.max(samples.iter().map(|n| n.lagrangian).fold(0.0, f64::max));
        }
    }
    t.at_most("lagrangian residual", worst, 1e-9);
    let id = resolve_surface("graph-identity")?;
    let (_, samples) = sample_surface(&id, GridSpec::new(64, 64).with_margin(MARGIN), A)?;
    let control = samples.iter().map(|n| n.lagrangian).fold(0.0, f64::max);
    t.record("negative control", control > 1e-3, format!("identity graph {control:.2e} > 1e-3"));
    timed(&mut t, Duration::from_secs(10), start);
    Ok(t.finish())
}

fn c_bound() -> Result<Verdict> {
    let mut t = Tally::default();
    let mut worst: f64 = 0.0;
    for s in lagrangian_surfaces() {
        worst = worst.max(sweep(&s, 64, |c, a, b| {
            let x = associated_jacobian(&jet(c, a, b, A)?)?;
            Ok(x * x)
        })?);
    }
    t.at_most("max C^2 - 1/4", worst - 0.25, 1e-9);
    for lambda in [0.1, 0.3, 0.45] {
        let s = resolve_surface(&format!("const-c:{lambda}"))?;
        let dev = sweep(&s, 64, |c, a, b| Ok((associated_jacobian(&jet(c, a, b, A)?)? - lambda).abs()))?;
        t.at_most(&format!("C - {lambda}"), dev, 1e-8);
    }
    Ok(t.finish())
}

fn totally_geodesic() -> Result<Verdict> {
    let mut t = Tally::default();
    let m0 = make_m0();
    let sigma = sweep(&m0, 64, |c, a, b| Ok(second_form(c, a, b, A)?.sigma_sq.sqrt()))?;
    let c = sweep(&m0, 64, |s, a, b| Ok((associated_jacobian(&jet(s, a, b, A)?)? - 0.5).abs()))?;
    let k = sweep(&m0, 64, |s, a, b| Ok((second_form(s, a, b, A)?.k - 0.5).abs()))?;
    let full = GridSpec::new(64, 64);
    let a = area(&m0, full, A)?;
    let d = degree_extrapolated(&m0, full, A)?;
    t.at_most("M0 |sigma|", sigma, 1e-7);
    t.at_most("M0 C - 1/2", c, 1e-8);
    t.at_most("M0 K - 1/2", k, 1e-6);
    t.at_most("M0 area - 8pi", (a - 8.0 * PI).abs(), 1e-3);
    t.at_most("M0 degree - 1", (d - 1.0).abs(), 1e-6);

    let torus = make_t();
    let flat = sweep(&torus, 32, |s, a, b| {
        let f = second_form(s, a, b, A)?;
        Ok(f.sigma_sq.sqrt().max(f.k.abs()).max(f.c.unwrap_or(f64::NAN).abs()))
    })?;
    t.at_most("T sigma, K, C", flat, 1e-10);
    t.at_most("T degree", degree_extrapolated(&torus, full, A)?.abs(), 1e-6);
    Ok(t.finish())
}

fn parallel_family() -> Result<Verdict> {
    let mut t = Tally::default();
    for name in ["torus-ab:0.5:0", "torus-ab:0.3:0.4"] {
        let s = resolve_surface(name)?;
        let par = sweep(&s, 32, |c, a, b| parallel_h_residual(c, a, b, A))?;
        let mut h = Vec::new();
        for (a, b) in nodes(&s, 32) {
            h.push(second_form(&s, a, b, A)?.h_norm);
        }
        let spread = h.iter().cloned().fold(f64::MIN, f64::max) - h.iter().cloned().fold(f64::MAX, f64::min);
        t.at_most(&format!("{name} parallel H"), par, 1e-5);
        t.at_most(&format!("{name} |H| spread"), spread, 1e-8);
    }
    Ok(t.finish())
}

fn gauss_equation() -> Result<Verdict> {
    let mut t = Tally::default();
    let (mut fd, mut fd_jets, mut exact): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for s in lagrangian_surfaces() {
        let r = sweep(&s, 32, |c, a, b| gauss_equation_residual(c, a, b, A))?;
        if s.expects.constant_k.is_some() {
            exact = exact.max(r);
        } else {
            fd = fd.max(r);
        }
        // Differenced second derivatives of the atanh twist lose accuracy
        // near the poles, so non-compact constant-C graphs keep to |z| <= 1/2.
        let band = if s.expects.constant_c.is_some() && !s.expects.compact { 0.5 } else { 1.0 };
        fd_jets = fd_jets.max(sweep(&s, 16, |c, a, b| {
            if b.abs() > band {
                return Ok(0.0);
            }
            gauss_equation_residual(c, a, b, JetScheme::FD_DEFAULT)
        })?);
    }
    t.at_most("differenced curvature", fd, 1e-4);
    t.at_most("differenced jets", fd_jets, 1e-4);
    t.at_most("analytic curvature", exact, 1e-6);
    Ok(t.finish())
}

fn minimal_identities() -> Result<Verdict> {
    let mut t = Tally::default();
    for s in [make_klein_bottle_b(), make_lawson_gauss()] {
        let r = sweep(&s, 64, |c, a, b| {
            let (x, y) = c_identities_residual(c, a, b, A)?;
            Ok(x.max(y))
        })?;
        t.at_most(&s.name, r, 5e-4);
    }
    Ok(t.finish())
}

fn gauss_map_relations() -> Result<Verdict> {
    let mut t = Tally::default();
    for psi in [make_clifford(), make_lawson_tau31()] {
        let mut worst: f64 = 0.0;
        for (a, b) in Grid::midpoint(&psi.domain, GridSpec::new(32, 32))?.points {
            let (rm, rc) = gauss_map_relation_residual(&psi, a, b)?;
            worst = worst.max(rm).max(rc);
        }
        t.at_most(&format!("{} relations", psi.name), worst, 1e-6);
    }
    let cg = make_clifford_gauss();
    let land = sweep(&cg, 32, |s, a, b| {
        let p = s.eval(a, b)?;
        Ok(p.x[0].abs().max(p.y[0].abs()).max(associated_jacobian(&jet(s, a, b, A)?)?.abs()))
    })?;
    t.at_most("clifford-gauss in T, C", land, 1e-10);

    let lg = make_lawson_gauss();
    t.at_most("lawson-gauss degree", degree_extrapolated(&lg, GridSpec::new(64, 64), A)?.abs(), 1e-6);
    // Node lines through t = 0, where dn² = 1 and |C| peaks.
    let d = &lg.domain;
    let n = 64;
    let mut cmax: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let a = d.t_range.0 + i as f64 * d.t_len() / n as f64;
            let b = d.s_range.0 + j as f64 * d.s_len() / n as f64;
            cmax = cmax.max(associated_jacobian(&jet(&lg, a, b, A)?)?.abs());
        }
    }
    t.at_most("lawson-gauss max|C| - 0.4", (cmax - 0.4).abs(), 1e-6);
    t.record("strict C^2 < 1/4", cmax * cmax < 0.25, format!("C^2 = {:.6}", cmax * cmax));
    Ok(t.finish())
}

fn klein_bottle() -> Result<Verdict> {
    let start = Instant::now();
    let mut t = Tally::default();
    let b = make_klein_bottle_b();
    let d = b.domain.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_917);
    let (mut deck, mut member): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let q = (rng.random_range(d.t_range.0..d.t_range.1), rng.random_range(d.s_range.0..d.s_range.1));
        deck = deck.max(deck_residual(&b, q.0, q.1)?);
        member = member.max(klein_membership_residual(&b.eval(q.0, q.1)?));
    }
    t.at_most("deck invariance", deck, 1e-10);
    t.at_most("membership", member, 1e-10);
    t.at_most("|H|", sweep(&b, 64, |s, a, u| Ok(second_form(s, a, u, A)?.h_norm))?, 1e-6);
    let exact = klein_area();
    let quad = area(&b, GridSpec::new(64, 64), A)?;
    t.at_most("area vs 12 pi E", (quad - exact).abs() / exact, 1e-4);
    timed(&mut t, Duration::from_secs(5), start);
    Ok(t.finish())
}

fn sinh_gordon() -> Result<Verdict> {
    let mut t = Tally::default();
    let n = 512;
    let period = lawson_period();
    let dt = 2.0 * period / n as f64;
    let pts = (0..n).map(|i| (i as f64 * dt, 0.0));
    t.at_most("Lawson residual", sg_residual_analytic(|a, _| lawson_solution(a), pts), 1e-6);
    let sol = integrate_reduced(0.5f64.atanh(), 0.0, period, 1e-3)?;
    let ode = sol.t.iter().zip(&sol.v).map(|(&a, &v)| (v - lawson_solution(a)).abs()).fold(0.0, f64::max);
    t.at_most("reduced ODE vs Lawson", ode, 1e-7);
    let line = SGField::sample(n, 1, (0.0, dt), (0.0, 1.0), false, |a, _| lawson_solution(a))?;
    t.at_most("compatibility", reconstruct(&line)?.compat_residual(), 1e-4);
    t.at_most("first-integral drift", sol.first_integral_drift(), 1e-8);
    Ok(t.finish())
}

fn spectral() -> Result<Verdict> {
    let start = Instant::now();
    let mut t = Tally::default();
    let tau = 2.0 * PI;
    let lambda1 = |n: usize| -> Result<f64> {
        let g = ConformalGrid::flat(n, n, tau, tau)?;
        Ok(lowest_eigenpairs(&assemble(&g), 2, 1e-10)?.values[1])
    };
    let (l16, l32, l64) = (lambda1(16)?, lambda1(32)?, lambda1(64)?);
    t.at_most("flat torus lambda1 at 32", (l32 - 1.0).abs(), 4e-3);
    let (e16, e32, e64) = ((1.0 - l16).abs(), (1.0 - l32).abs(), (1.0 - l64).abs());
    let ratios = (e16 / e32, e32 / e64);
    let second_order = e16 > e32 && e32 > e64 && [ratios.0, ratios.1].iter().all(|r| (r - 4.0).abs() < 0.4);
    t.record("refinement", second_order, format!("error ratios {:.3}, {:.3}", ratios.0, ratios.1));

    let b = ConformalGrid::from_surface(&make_klein_bottle_b(), 64, 64)?;
    let plus = lowest_eigenpairs(&parity_split(&b)?.plus, 2, 1e-10)?.values[1];
    t.at_most("B lambda1", (plus - 1.0).abs(), 0.02);

    let small = ConformalGrid::from_surface(&make_klein_bottle_b(), 16, 16)?;
    let op = assemble(&small);
    let dense = dense_eigenvalues(&op);
    let iter = lowest_eigenpairs(&op, 12, 1e-12)?.values;
    let gap = iter.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    t.at_most("dense cross-check", gap, 1e-8);
    timed(&mut t, Duration::from_secs(60), start);
    Ok(t.finish())
}

fn index() -> Result<Verdict> {
    let mut t = Tally::default();
    let torus = index_report(&make_t(), 32, 32, DEFAULT_MARGIN)?;
    t.record("T", torus.ind0 == 0 && torus.index == 2, format!("T ind0 {} index {}", torus.ind0, torus.index));
    let b = index_report(&make_klein_bottle_b(), 64, 64, DEFAULT_MARGIN)?;
    t.record(
        "B",
        b.ind0 == 0 && b.ind1 >= 2 && b.index >= 3,
        format!("B ind0 {} ind1 {} index {}", b.ind0, b.ind1, b.index),
    );
    let g = ConformalGrid::from_surface(&make_klein_bottle_b(), 64, 64)?;
    let w = 2.0 / 3f64.sqrt();
    let rf = rayleigh(&g, &g.sample(|_, s| (w * s).cos()))?;
    let rg = rayleigh(&g, &g.sample(|_, s| (w * s).sin()))?;
    t.at_most("Rayleigh f, g", rf.max(rg), 1.0 / 3.0 + 0.01);
    Ok(t.finish())
}

fn verify_end_to_end() -> Result<Verdict> {
    let mut t = Tally::default();
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_lagsurf"))
        .arg("verify")
        .output()
        .map_err(|e| lagsurf::Error::Input(format!("cannot run verify: {e}")))?;
    let text = String::from_utf8_lossy(&out.stdout);
    let failures = text.lines().filter(|l| l.starts_with("FAIL")).count();
    t.record("exit code", out.status.code() == Some(0), format!("exit {:?}, {failures} failing checks", out.status.code()));
    timed(&mut t, Duration::from_secs(300), start);
    Ok(t.finish())
}

fn main() {
    let criteria: [(&str, fn() -> Result<Verdict>); 12] = [
        ("Lagrangian suite", lagrangian_suite),
        ("C bound", c_bound),
        ("totally geodesic", totally_geodesic),
        ("parallel mean curvature", parallel_family),
        ("Gauss equation", gauss_equation),
        ("minimal Lagrangian identities", minimal_identities),
        ("Gauss map relations", gauss_map_relations),
        ("Klein bottle B", klein_bottle),
        ("sinh-Gordon", sinh_gordon),
        ("spectral", spectral),
        ("index", index),
        ("verify end to end", verify_end_to_end),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let v = run().unwrap_or_else(|e| Verdict { pass: false, detail: format!("error: {e}") });
        println!("{} {:>2} {title}: {}", if v.pass { "PASS" } else { "FAIL" }, k + 1, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
