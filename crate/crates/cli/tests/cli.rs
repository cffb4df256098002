use std::path::Path;
use std::process::{Command, Output};

fn ptmathieu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptmathieu"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = ptmathieu(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header and data rows of a CSV, comment lines dropped.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn footer(text: &str, key: &str) -> String {
    let prefix = format!("# {key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no footer {key}"))
        .to_string()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s:?}"))
}

#[test]
fn perturb_two_samples_of_the_zero_branch() {
    let text = stdout_of(&["perturb", "--beta", "0", "--eps-max", "0.1", "--samples", "2"]);
    assert!(text.starts_with("# ptmathieu "));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["branch", "beta", "eps", "a"]);
    let zero: Vec<_> = rows.iter().filter(|r| r[0] == "zero").collect();
    assert_eq!(zero.len(), 2);
    assert_eq!(num(&zero[0][2]), 0.0);
    assert_eq!(num(&zero[0][3]), 0.0);
    assert_eq!(zero[1][2], "0.1");
    assert_eq!(zero[1][3], "-0.02");
}

#[test]
fn perturb_default_emits_nine_curves() {
    let (_, rows) = csv_rows(&stdout_of(&["perturb"]));
    assert_eq!(rows.len(), 9 * 101);
    let mut keys: Vec<(String, String)> = rows.iter().map(|r| (r[0].clone(), r[1].clone())).collect();
    keys.dedup();
    assert_eq!(keys.len(), 9);
}

#[test]
fn perturb_at_the_threshold_is_flat() {
    let (_, rows) = csv_rows(&stdout_of(&["perturb", "--beta", "1"]));
    for r in rows {
        let anchor = if r[0] == "zero" { 0.0 } else { 0.25 };
        assert_eq!(num(&r[3]), anchor, "{r:?}");
    }
}

#[test]
fn perturb_rejects_broken_phase() {
    let out = ptmathieu(&["perturb", "--beta", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn chart_grid_has_real_discriminant() {
    let text = stdout_of(&[
        "chart",
        "--a-min",
        "-0.1",
        "--a-max",
        "0.5",
        "--a-steps",
        "121",
        "--eps-min",
        "0",
        "--eps-max",
        "0.3",
        "--eps-steps",
        "61",
        "--beta",
        "0.5",
    ]);
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["a", "eps", "class", "growth_rate", "re_delta", "im_delta"]);
    assert_eq!(rows.len(), 121 * 61);
    let worst = rows.iter().map(|r| num(&r[5]).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-8, "max |im_delta| = {worst}");
}

#[test]
fn chart_single_cell_at_free_band_edge() {
    let text = stdout_of(&[
        "chart",
        "--a-min",
        "1",
        "--a-max",
        "1",
        "--a-steps",
        "1",
        "--eps-min",
        "0",
        "--eps-max",
        "0",
        "--eps-steps",
        "1",
    ]);
    let (_, rows) = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    // |Δ| = 2 exactly: the classifier's boundary band
    assert_eq!(rows[0][2], "boundary");
    assert!((num(&rows[0][4]) - 2.0).abs() < 1e-9);
}

#[test]
fn chart_tongues_shrink_with_beta() {
    let unstable = |beta: &str| {
        let text = stdout_of(&[
            "chart",
            "--a-min",
            "-0.1",
            "--a-max",
            "0.5",
            "--a-steps",
            "61",
            "--eps-max",
            "0.3",
            "--eps-steps",
            "31",
            "--beta",
            beta,
        ]);
        let count: usize = footer(&text, "unstable_cells").parse().unwrap();
        let (_, rows) = csv_rows(&text);
        assert_eq!(count, rows.iter().filter(|r| r[2] == "unstable").count());
        count
    };
    let (wide, narrow) = (unstable("0"), unstable("0.9"));
    assert!(wide > narrow, "{wide} vs {narrow}");
}

#[test]
fn chart_overflow_only_exits_with_numerical_failure() {
    let out = ptmathieu(&[
        "chart",
        "--a-min",
        "-10000",
        "--a-max",
        "-10000",
        "--a-steps",
        "1",
        "--eps-max",
        "0",
        "--eps-steps",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let (_, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows[0][2], "overflow");
}

#[test]
fn trace_quarter_plus_reports_expected_curvature() {
    let text = stdout_of(&["trace", "--branch", "quarter+", "--beta", "0.5", "--eps-max", "0.1"]);
    assert_eq!(num(&footer(&text, "kappa_paper")), 0.75);
    assert!(num(&footer(&text, "relative_error")) < 0.02);
    assert_eq!(footer(&text, "closed_at"), "");
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["eps", "a", "a_perturbative", "deviation"]);
    assert_eq!(rows.len(), 41);
}

#[test]
fn trace_zero_branch_at_threshold_is_flat() {
    let text = stdout_of(&["trace", "--branch", "zero", "--beta", "1", "--eps-max", "0.2"]);
    assert!(num(&footer(&text, "kappa_numeric")) < 1e-3);
    let (_, rows) = csv_rows(&text);
    assert!(rows.iter().all(|r| num(&r[1]).abs() < 1e-9));
}

#[test]
fn trace_quarter_minus_follows_closed_form() {
    let text = stdout_of(&["trace", "--branch", "quarter-", "--beta", "0", "--eps-max", "0.1"]);
    let (_, rows) = csv_rows(&text);
    for r in rows {
        let (eps, a) = (num(&r[0]), num(&r[1]));
        assert!((a - (0.25 - eps - eps * eps / 2.0)).abs() <= 1e-3, "{r:?}");
    }
}

#[test]
fn trace_rejects_unknown_branch() {
    assert_eq!(ptmathieu(&["trace", "--branch", "half"]).status.code(), Some(1));
}

fn edge_values(args: &[&str]) -> Vec<f64> {
    let (_, rows) = csv_rows(&stdout_of(args));
    rows.iter().map(|r| num(&r[5])).collect()
}

#[test]
fn edges_free_lattice() {
    let v = edge_values(&[
        "edges", "--nu", "0", "--beta", "0", "--eps", "0", "--trunc", "8", "--count", "3",
    ]);
    assert_eq!(v, [0.0, 1.0, 1.0]);
}

#[test]
fn edges_straddle_quarter() {
    let v = edge_values(&[
        "edges", "--nu", "0.5", "--beta", "0.5", "--eps", "0.1", "--trunc", "32", "--count", "2",
    ]);
    assert!(v[0] < 0.25 && 0.25 < v[1]);
    let gap = v[1] - v[0];
    assert!((gap - 2.0 * 0.75f64.sqrt() * 0.1).abs() < 2e-3, "gap {gap}");
}

#[test]
fn edges_triangular_at_threshold() {
    let v = edge_values(&[
        "edges", "--nu", "0", "--beta", "1", "--eps", "0.4", "--trunc", "16", "--count", "2",
    ]);
    assert_eq!(v, [0.0, 1.0]);
}

#[test]
fn edges_reject_bad_exponent() {
    assert_eq!(ptmathieu(&["edges", "--nu", "0.3"]).status.code(), Some(1));
}

#[test]
fn compare_default_table() {
    let text = stdout_of(&["compare"]);
    let (header, rows) = csv_rows(&text);
    assert_eq!(
        header,
        [
            "branch",
            "beta",
            "eps",
            "a_perturbative",
            "a_floquet",
            "a_hill",
            "abs_error_pert",
            "cross_engine_error",
            "flag"
        ]
    );
    assert_eq!(rows.len(), 27);
    for r in &rows {
        assert!(num(&r[7]) <= 1e-6, "{r:?}");
        assert_eq!(r[8], "");
    }
    for group in rows.chunks(3) {
        let errs: Vec<f64> = group.iter().map(|r| num(&r[6])).collect();
        assert!(errs[0] < errs[1] && errs[1] < errs[2], "{group:?}");
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["perturb"],
        vec!["chart", "--a-steps", "21", "--eps-steps", "11", "--jobs", "3"],
        vec!["trace", "--branch", "quarter-"],
        vec!["edges", "--format", "json"],
    ] {
        assert_eq!(ptmathieu(&args).stdout, ptmathieu(&args).stdout, "{args:?}");
    }
    let base = ["chart", "--a-steps", "21", "--eps-steps", "11"];
    let one = ptmathieu(&[&base[..], &["--jobs", "1"]].concat()).stdout;
    let many = ptmathieu(&[&base[..], &["--jobs", "4"]].concat()).stdout;
    // the invocation header differs; the data must not
    let body = |b: &[u8]| {
        String::from_utf8(b.to_vec())
            .unwrap()
            .lines()
            .skip(1)
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(body(&one), body(&many));
}

#[test]
fn numbers_use_twelve_significant_digits() {
    let significant = |field: &str| -> usize {
        let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
        let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
        digits.trim_start_matches('0').len()
    };
    for args in [
        vec!["perturb", "--beta", "0.3", "--eps-max", "0.37", "--samples", "3"],
        vec!["compare", "--beta", "0.5", "--eps", "0.05"],
    ] {
        let (_, rows) = csv_rows(&stdout_of(&args));
        for field in rows.iter().flatten().filter(|f| f.parse::<f64>().is_ok()) {
            assert!(significant(field) <= 12, "{args:?}: {field}");
            // %g switches to an exponent below 1e-4
            assert!(
                !field.trim_start_matches('-').starts_with("0.0000"),
                "{args:?}: {field}"
            );
        }
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# sweep\nbeta = 0\neps-max=0.1\nsamples = 2\n");
    let from_file = stdout_of(&["perturb", "--config", &cfg]);
    let direct = stdout_of(&["perturb", "--beta", "0", "--eps-max", "0.1", "--samples", "2"]);
    assert_eq!(csv_rows(&from_file), csv_rows(&direct));
    assert!(from_file.lines().next().unwrap().contains("--eps-max=0.1"));

    let overridden = stdout_of(&["perturb", "--config", &cfg, "--samples", "3"]);
    assert_eq!(csv_rows(&overridden).1.len(), 3 * 3);
}

#[test]
fn config_errors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", "samples\n");
    assert_eq!(ptmathieu(&["perturb", "--config", &bad]).status.code(), Some(1));
    let missing = dir.path().join("absent.cfg");
    assert_eq!(
        ptmathieu(&["perturb", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn out_flag_writes_the_file_and_nothing_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("edges.csv");
    let out = ptmathieu(&["edges", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written
        .lines()
        .next()
        .unwrap()
        .ends_with(&format!("--out {}", path.display())));
    let body = |t: &str| t.lines().skip(1).map(String::from).collect::<Vec<_>>();
    assert_eq!(body(&written), body(&stdout_of(&["edges"])));
}

#[test]
fn json_envelope_matches_documented_schema() {
    let schema: serde_json::Value = serde_json::from_str(include_str!("../../../docs/output-schema.json")).unwrap();
    let required: Vec<&str> = schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    for args in [
        vec!["perturb", "--samples", "3"],
        vec!["chart", "--a-steps", "3", "--eps-steps", "2"],
        vec!["trace", "--eps-max", "0.05", "--samples", "6"],
        vec!["edges"],
        vec!["compare", "--eps", "0.05", "--beta", "0.5"],
    ] {
        let text = stdout_of(&[&args[..], &["--format", "json"]].concat());
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        let obj = doc.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        let mut want = required.clone();
        want.sort_unstable();
        assert_eq!(keys, want, "{args:?}");
        assert_eq!(doc["tool"], "ptmathieu");
        assert_eq!(doc["kind"], args[0]);
        let columns: Vec<&str> = doc["columns"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap())
            .collect();
        for row in doc["rows"].as_array().unwrap() {
            let mut row_keys: Vec<&str> = row.as_object().unwrap().keys().map(String::as_str).collect();
            row_keys.sort_unstable();
            let mut cols = columns.clone();
            cols.sort_unstable();
            assert_eq!(row_keys, cols);
        }
    }
}

#[test]
fn svg_output_for_plotting_commands() {
    for args in [
        vec!["perturb"],
        vec!["chart", "--a-steps", "5", "--eps-steps", "4"],
        vec!["trace"],
    ] {
        let text = stdout_of(&[&args[..], &["--format", "svg"]].concat());
        assert!(text.starts_with("<svg") || text.starts_with("<?xml"), "{args:?}");
        assert!(text.trim_end().ends_with("</svg>"));
    }
    assert_eq!(ptmathieu(&["edges", "--format", "svg"]).status.code(), Some(1));
}

#[test]
fn help_and_version_exit_cleanly() {
    assert_eq!(ptmathieu(&["--help"]).status.code(), Some(0));
    assert_eq!(ptmathieu(&["--version"]).status.code(), Some(0));
    assert_eq!(ptmathieu(&["frobnicate"]).status.code(), Some(1));
}
