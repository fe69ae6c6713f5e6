use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lagsurf::catalog::{default_catalog, resolve, resolve_surface, CatalogEntry, DEFAULT_NAMES};
use lagsurf::geometry::{Expectations, GridSpec, JetScheme};
use lagsurf::harness::{analyze, export, run_suite, Config, ExportFormat, Field, Suite};
use lagsurf::sinh_gordon::{integrate_reduced, lawson_period, reconstruct, sg_residual, write_csv};
use lagsurf::spectral::index_report;
use lagsurf::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "lagsurf", version, about = "Verify Lagrangian and minimal Lagrangian surfaces in S2xS2")]
struct Cli {
    /// key = value file overriding default grid sizes and tolerances.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads for grid sweeps (default: logical processors).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog identifiers and their declared properties.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Run every applicable analyzer on one surface and write a JSON report.
    Analyze {
        #[arg(long)]
        surface: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Use finite-difference jets instead of the closed-form ones.
        #[arg(long)]
        fd: bool,
        /// Report path (default: standard output).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        /// Suite to run; repeat for several, `all` or nothing for every suite.
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<String>,
        /// Restrict to checks involving one catalog surface.
        #[arg(long)]
        surface: Option<String>,
        #[arg(long, value_name = "X")]
        tol_scale: Option<f64>,
        /// Also write all checks as JSON.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Write sampled fields of a surface as CSV or JSON.
    Export {
        #[arg(long)]
        surface: String,
        /// Comma-separated subset of C, K, u, H, sigma2, position.
        #[arg(long, value_delimiter = ',', required = true)]
        fields: Vec<String>,
        #[arg(long, default_value = "csv")]
        format: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Spectra and index of a compact minimal Lagrangian surface.
    Spectrum {
        #[arg(long)]
        surface: String,
        /// Nodes per axis (default: spectral_grid).
        #[arg(long)]
        grid: Option<usize>,
        /// Distance ε kept from the eigenvalue 1.
        #[arg(long)]
        margin: Option<f64>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Integrate v'' = -2 sinh 2v and write t, s, v, u, C as CSV.
    SinhGordon {
        #[arg(long, default_value_t = 0.5f64.atanh(), allow_hyphen_values = true)]
        v0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        dv0: f64,
        /// End time (default: one period of the Lawson solution).
        #[arg(long)]
        t_end: Option<f64>,
        /// Step bound (default: sg_step).
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    nt: Option<usize>,
    #[arg(long)]
    ns: Option<usize>,
}

/// Failure modes mapped onto the exit-code contract.
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_) => Failure::Usage(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(m)) => {
            eprintln!("lagsurf: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Run(m)) => {
            eprintln!("lagsurf: {m}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), Failure> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Run(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(Failure::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Run(e.to_string()))?;
    }
    match cli.cmd {
        Command::Catalog { json } => catalog(json),
        Command::Analyze { surface, grid, fd, out } => {
            grid.apply(&mut cfg)?;
            let entry = resolve(&surface)?;
            let scheme = if fd { JetScheme::FD_DEFAULT } else { JetScheme::Analytic };
            let report = analyze(&entry, &cfg, scheme)?;
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("{}", c.line());
            }
            write_json(&report, out.as_deref())?;
            Ok(report.pass())
        }
        Command::Verify { suites, surface, tol_scale, json } => {
            if let Some(x) = tol_scale {
                cfg.tol_scale = x;
            }
            let selected = select_suites(&suites)?;
            let mut all = Vec::new();
            for s in selected {
                let checks = run_suite(s, &cfg, surface.as_deref())?;
                let failed = checks.iter().filter(|c| !c.pass).count();
                println!("== {s}: {} checks, {failed} failed", checks.len());
                for c in &checks {
                    println!("{}", c.line());
                }
                all.extend(checks);
            }
            if let Some(p) = json {
                write_json(&all, Some(&p))?;
            }
            let failed = all.iter().filter(|c| !c.pass).count();
            println!("{} checks, {failed} failed", all.len());
            Ok(failed == 0)
        }
        Command::Export { surface, fields, format, grid, out } => {
            grid.apply(&mut cfg)?;
            let s = resolve_surface(&surface)?;
            let fields = fields.iter().map(|f| f.trim().parse()).collect::<Result<Vec<Field>, _>>()?;
            let format: ExportFormat = format.parse()?;
            let mut w = output(out.as_deref())?;
            export(&s, GridSpec::new(cfg.nt, cfg.ns).with_margin(cfg.margin), &fields, format, &mut w)?;
            w.flush()?;
            Ok(true)
        }
        Command::Spectrum { surface, grid, margin, out } => {
            if let Some(n) = grid {
                cfg.spectral_grid = n;
            }
            if let Some(m) = margin {
                cfg.spectral_margin = m;
            }
            cfg.validate()?;
            let s = resolve_surface(&surface)?;
            let n = cfg.spectral_grid;
            let r = index_report(&s, n, n, cfg.spectral_margin).map_err(|e| match e {
                Error::Precondition(m) => Failure::Usage(m),
                other => other.into(),
            })?;
            eprintln!(
                "{}: ind0 {} ind1 {} betti1 {} index {}",
                r.surface, r.ind0, r.ind1, r.betti1, r.index
            );
            write_json(&r, out.as_deref())?;
            Ok(true)
        }
        Command::SinhGordon { v0, dv0, t_end, step, out } => {
            if let Some(h) = step {
                cfg.sg_step = h;
            }
            cfg.validate()?;
            let sol = integrate_reduced(v0, dv0, t_end.unwrap_or_else(lawson_period), cfg.sg_step)?;
            let field = sol.field()?;
            let mut diag = format!("first-integral drift {:.3e}", sol.first_integral_drift());
            if field.nt >= 5 {
                diag.push_str(&format!(
                    ", residual {:.3e}, compatibility {:.3e}",
                    sg_residual(&field)?,
                    reconstruct(&field)?.compat_residual()
                ));
            }
            eprintln!("{diag}");
            let mut w = output(out.as_deref())?;
            write_csv(&mut w, &field)?;
            w.flush()?;
            Ok(true)
        }
    }
}

impl GridArgs {
    fn apply(&self, cfg: &mut Config) -> Result<(), Failure> {
        if let Some(n) = self.nt {
            cfg.nt = n;
        }
        if let Some(n) = self.ns {
            cfg.ns = n;
        }
        cfg.validate()?;
        Ok(())
    }
}

fn select_suites(names: &[String]) -> Result<Vec<Suite>, Failure> {
    if names.is_empty() || names.iter().any(|n| n == "all") {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out = Vec::new();
    for n in names {
        let s: Suite = n.parse()?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct Listing {
    name: String,
    kind: &'static str,
    #[serde(flatten)]
    expects: Expectations,
}

fn catalog(json: bool) -> Result<bool, Failure> {
    let rows: Vec<Listing> = default_catalog()
        .into_iter()
        .map(|e| match e {
            CatalogEntry::Surface(s) => Listing { name: s.name, kind: "s2xs2", expects: s.expects },
            CatalogEntry::Immersion(r) => Listing {
                name: r.name,
                kind: "r4",
                expects: Expectations {
                    minimal: r.minimal,
                    compact: r.domain.is_compact(),
                    orientable: r.domain.is_orientable(),
                    euler_characteristic: r.domain.euler_characteristic(),
                    conformal: r.domain.conformal,
                    ..Expectations::default()
                },
            },
        })
        .collect();
    debug_assert_eq!(rows.len(), DEFAULT_NAMES.len());
    if json {
        write_json(&rows, None)?;
        return Ok(true);
    }
    let flag = |b: bool, s: &'static str| if b { Some(s) } else { None };
    for r in &rows {
        let e = &r.expects;
        let mut tags: Vec<String> = [
            flag(e.lagrangian, "lagrangian"),
            flag(e.minimal, "minimal"),
            flag(e.compact, "compact"),
            flag(!e.orientable, "non-orientable"),
        ]
        .into_iter()
        .flatten()
        .map(String::from)
        .collect();
        if let Some(c) = e.constant_c {
            tags.push(format!("C={c}"));
        }
        if let Some(chi) = e.euler_characteristic {
            tags.push(format!("chi={chi}"));
        }
        println!("{:<22} {:<6} {}", r.name, r.kind, tags.join(" "));
    }
    println!("parametric: torus-ab:<a>:<b>, product:<curve>:<curve> (great | lat=<h>[@speed]), const-c:<lambda>, equator-s2");
    Ok(true)
}
