use std::process::{Command, Output};

use serde_json::Value;

fn wormhole(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wormhole"))
        .args(args)
        .env_remove("WORMHOLE_TOL")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Data rows of the named CSV table.
fn csv_table(text: &str, name: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text
        .lines()
        .skip_while(|l| *l != format!("# table: {name}"))
        .skip(1);
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .take_while(|l| !l.is_empty())
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn potential_table_has_header_and_rows() {
    let out = wormhole(&[
        "potential",
        "--b0",
        "1",
        "--L",
        "0",
        "--r-range",
        "0:10:100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# wormhole 0.1.0 potential"));
    assert!(lines.next().unwrap().contains("hbar = 2 m0 = 1"));
    assert!(lines.next().unwrap().starts_with("# config: {"));
    let (header, rows) = csv_table(&text, "v_eff");
    assert_eq!(header, ["r", "v_eff"]);
    assert_eq!(rows.len(), 100);
    assert_eq!(num(&rows[0][1]), 1.0);
    assert_eq!(num(&rows[99][0]), 10.0);
}

#[test]
fn fourier_check_within_limit() {
    let out = wormhole(&[
        "potential",
        "--b0",
        "1",
        "--L",
        "1",
        "--q-range",
        "0:10:50",
        "--check-ft",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let (header, rows) = csv_table(&stdout(&out), "fourier");
    let rel = header.iter().position(|h| h == "rel_err").unwrap();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| num(&r[rel]) <= 1e-6));
}

#[test]
fn validation_errors_exit_two() {
    let out = wormhole(&["potential", "--b0", "-1", "--r-range", "0:1:5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--b0"));

    for args in [
        &["potential", "--r-range", "1:0:5"][..],
        &["potential"],
        &["potential", "--q-range", "0:1:5", "--log", "--check-ft"],
        &["born", "--figure2", "--L", "1"],
        &["heun", "--kb0", "-1"],
        &["transmit", "--k-range", "0:1:5"],
        &["nonsense"],
    ] {
        assert_eq!(wormhole(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn higher_l_transmission_is_gated() {
    let out = wormhole(&["transmit", "--L", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("experimental"));
    let out = wormhole(&[
        "transmit",
        "--L",
        "1",
        "--experimental-L",
        "--k-range",
        "1:2:3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn transmit_scan_is_unitary() {
    let out = wormhole(&["transmit", "--b0", "1", "--k-range", "0.1:10:200"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_table(&stdout(&out), "transmission");
    assert_eq!(
        &header[..6],
        ["k", "L", "T", "R", "unitarity_defect", "domain_halfwidth"]
    );
    assert_eq!(header.last().unwrap(), "status");
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| num(&r[4]) <= 1e-8 && r[8] == "ok"));
}

#[test]
fn transmit_lists_resonances() {
    let out = wormhole(&[
        "transmit",
        "--resonances",
        "3",
        "--b0",
        "1",
        "--k-range",
        "0.2:3:30",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = csv_table(&stdout(&out), "resonances");
    let lambdas: Vec<f64> = rows.iter().map(|r| num(&r[1])).collect();
    assert_eq!(lambdas, [4.0, 8.0, 12.0]);
}

#[test]
fn unconverged_scan_exits_one() {
    let out = wormhole(&[
        "transmit",
        "--k-range",
        "1:2:3",
        "--unitarity-threshold",
        "1e-300",
        "--steps",
        "4000",
        "--halfwidth",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let (_, rows) = csv_table(&stdout(&out), "transmission");
    assert!(rows.iter().all(|r| r[8] == "unconverged"));
}

#[test]
fn figure2_positive_and_decreasing() {
    let out = wormhole(&["born", "--b0", "1", "--x-range", "0.05:5:200", "--figure2"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_table(&stdout(&out), "figure2");
    assert_eq!(
        &header[..5],
        [
            "x",
            "sigma_quad",
            "sigma_quad_err",
            "sigma_closed",
            "rel_discrepancy"
        ]
    );
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| num(&r[1]) > 0.0 && num(&r[4]) <= 1e-6));
    assert!(num(&rows[199][1]) < num(&rows[0][1]));
}

#[test]
fn as_printed_form_reports_discrepancy() {
    let out = wormhole(&["born", "--x-range", "0.5:2:4", "--as-printed"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = csv_table(&stdout(&out), "figure2");
    assert!(rows.iter().all(|r| num(&r[4]) > 1e-3));
}

#[test]
fn zero_energy_dcs_is_constant() {
    let out = wormhole(&["born", "--k", "0", "--L", "0", "--dcs"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = csv_table(&stdout(&out), "dcs");
    assert!(rows.iter().all(|r| num(&r[2]) == 1.0 / 64.0));
}

#[test]
fn eq15_has_no_roots() {
    let out = wormhole(&["born", "--eq15-roots"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("no roots found on (0, 50]"));
    let (_, rows) = csv_table(&stdout(&out), "eq15_roots");
    assert!(rows.is_empty());
}

#[test]
fn heun_default_grid_and_control() {
    let out = wormhole(&["heun"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_table(&stdout(&out), "residuals");
    assert_eq!(
        &header[..5],
        ["k", "L", "branch", "max_residual", "truncation_order"]
    );
    assert_eq!(rows.len(), 24);
    assert!(rows.iter().all(|r| num(&r[3]) <= 1e-8));

    let out = wormhole(&["heun", "--perturb-eta", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("exceeds"));

    let out = wormhole(&["heun", "--kb0", "0", "--L", "0", "--check-ode"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = csv_table(&stdout(&out), "residuals");
    assert!(rows
        .iter()
        .all(|r| num(&r[3]) <= 1e-8 && num(&r[6]) <= 1e-8));
}

#[test]
fn output_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let out = wormhole(&[
            "transmit",
            "--k-range",
            "0.2:4:40",
            "--resonances",
            "2",
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        runs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn unwritable_output_fails() {
    let out = wormhole(&[
        "potential",
        "--r-range",
        "0:1:3",
        "-o",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_output() {
    let out = wormhole(&[
        "born",
        "--dcs",
        "--k",
        "1",
        "--theta-count",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["tool"], "wormhole");
    assert_eq!(doc["config"]["k"], 1.0);
    let t = &doc["tables"][0];
    assert_eq!(t["name"], "dcs");
    assert_eq!(t["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn tolerance_from_environment() {
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_wormhole"))
            .args(["born", "--x-range", "1:2:2"])
            .env("WORMHOLE_TOL", tol)
            .output()
            .unwrap()
    };
    assert_eq!(run("1e-6").status.code(), Some(0));
    let bad = run("-3");
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("WORMHOLE_TOL"));
}
