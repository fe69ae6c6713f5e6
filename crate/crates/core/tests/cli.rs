use std::path::Path;
use std::process::{Command, Output};

use lagsurf::catalog::resolve_surface;
use lagsurf::geometry::{GridSpec, JetScheme};
use lagsurf::harness::{sample_surface, SurfaceReport};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagsurf"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_listing() {
    let o = run(&["catalog"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for name in ["m0", "torus-t", "klein-b"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    let o = run(&["catalog", "--json"]);
    assert_eq!(code(&o), 0);
    let list: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(list.as_array().unwrap().iter().any(|e| e["name"] == "klein-b" && e["orientable"] == false));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["catalog", "--bogus"][..],
        &["analyze", "--surface", "no-such-surface"],
        &["export", "--surface", "m0", "--fields", "curvature"],
        &["export", "--surface", "m0", "--fields", "C", "--format", "xml"],
        &["verify", "--suite", "everything"],
        &["spectrum", "--surface", "const-c:0.3"],
        &["--config", "/nonexistent/lagsurf.conf", "catalog"],
        &[],
    ] {
        assert_eq!(code(&run(args)), 2, "{args:?}");
    }
}

#[test]
fn analyze_reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m0.json");
    let o = run(&["analyze", "--surface", "m0", "--nt", "64", "--ns", "64", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let report: SurfaceReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.schema, 1);
    assert_eq!(report.timestamp, "1970-01-01T00:00:00Z");
    let (lo, hi) = (report.summary.c_min.unwrap(), report.summary.c_max.unwrap());
    assert!((lo - 0.5).abs() < 1e-8 && (hi - 0.5).abs() < 1e-8);
    assert_eq!(serde_json::to_string_pretty(&report).unwrap().trim_end(), text.trim_end());

    let again = dir.path().join("m0-again.json");
    run(&["analyze", "--surface", "m0", "--nt", "64", "--ns", "64", "--out", again.to_str().unwrap()]);
    assert_eq!(text, std::fs::read_to_string(&again).unwrap());
}

#[test]
fn analyze_constant_c_graph() {
    let o = run(&["analyze", "--surface", "const-c:0.3", "--nt", "32", "--ns", "32"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: SurfaceReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.observed.lagrangian && !r.observed.minimal);
}

#[test]
fn analyze_klein_area() {
    let o = run(&["analyze", "--surface", "klein-b"]);
    assert_eq!(code(&o), 0);
    let r: SurfaceReport = serde_json::from_slice(&o.stdout).unwrap();
    let exact = lagsurf::catalog::klein_area();
    assert!((r.summary.area.unwrap() - exact).abs() / exact < 1e-4);
    assert!((exact - 41.98).abs() < 0.01);
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn export_round_trips_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["lawson-gauss", "const-c:0.3"] {
        let path = dir.path().join("c.csv");
        let o = run(&[
            "export", "--surface", name, "--fields", "C,K", "--format", "csv", "--nt", "24", "--ns", "20", "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        let (header, rows) = read_csv(&path);
        assert_eq!(header, ["t", "s", "C", "K"]);
        let s = resolve_surface(name).unwrap();
        let (_, samples) = sample_surface(&s, GridSpec::new(24, 20).with_margin(0.05), JetScheme::Analytic).unwrap();
        assert_eq!(rows.len(), samples.len());
        for (row, n) in rows.iter().zip(&samples) {
            assert_eq!(row[0].to_bits(), n.t.to_bits());
            assert_eq!(row[1].to_bits(), n.s.to_bits());
            assert_eq!(row[2].to_bits(), n.c.unwrap().to_bits());
            assert_eq!(row[3].to_bits(), n.k.to_bits());
        }
    }

    let o = run(&["export", "--surface", "klein-b", "--fields", "u,position", "--format", "json", "--nt", "4", "--ns", "4"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 16);
    assert_eq!(doc["columns"][2], "u");
}

#[test]
fn verify_exit_codes_and_scaling() {
    let o = run(&["verify", "--suite", "spectral", "--surface", "torus-t"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).lines().any(|l| l.contains("torus-t") && l.contains("index")));

    let o = run(&["verify", "--suite", "lagrangian"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    // A tiny scale leaves no check reachable.
    let o = run(&["verify", "--suite", "lagrangian", "--tol-scale", "1e-30"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn config_file_overrides_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# coarse desk run\nnt = 8\nns = 6\n").unwrap();
    let c = conf.to_str().unwrap();
    let o = run(&["--config", c, "export", "--surface", "torus-t", "--fields", "C"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 1 + 48);
    let o = run(&["--config", c, "export", "--surface", "torus-t", "--fields", "C", "--nt", "4"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 24);

    std::fs::write(&conf, "nt = lots\n").unwrap();
    let o = run(&["--config", c, "catalog"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("config line 1"));
}

#[test]
fn sinh_gordon_csv() {
    let o = run(&["sinh-gordon", "--t-end", "1", "--step", "0.01"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("t,"), "{header}");
    assert_eq!(lines.count(), 101);
    assert_eq!(code(&run(&["sinh-gordon", "--step", "-1"])), 2);
}
