//! End-to-end tests of the binary: exit codes, determinism, and agreement
//! between the text and JSON renderings.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2forms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn json(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(output)).expect("valid JSON")
}

#[test]
fn table1_reports_expected_betti_numbers() {
    let out = run(&["table1", "--json"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["status"], "ok");
    assert_eq!(report["command"], "table1");
    let rows = report["outputs"]["rows"].as_array().unwrap();
    let b2: Vec<u64> = rows.iter().map(|r| r["b2"].as_u64().unwrap()).collect();
    assert_eq!(b2, [3, 3, 5, 6]);
    assert!(rows.iter().all(|r| r["status"] == "PASS"));
    assert_eq!(report["outputs"]["all_pass"], true);

    let text = stdout(&run(&["table1"]));
    assert_eq!(text.matches("PASS").count(), 4);
    assert!(text.contains("expected"));
}

#[test]
fn verify_is_deterministic_across_runs() {
    let first = run(&["g2", "verify", "--algebra", "@row2", "--json"]);
    let second = run(&["g2", "verify", "--algebra", "@row2", "--json"]);
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&second));
    let report = json(&first);
    assert_eq!(report["outputs"]["dim_s"], 1);
    assert_eq!(report["outputs"]["b2"], 3);
    assert_eq!(report["outputs"]["abelian"], true);
    assert_eq!(report["outputs"]["torsion"]["closed"], true);
}

#[test]
fn metric_of_standard_phi_is_identity() {
    let out = run(&["g2", "metric", "--algebra", "abelian7", "--json"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["outputs"]["orientation"], 1);
    assert_eq!(report["outputs"]["vol_coeff"], 1.0);
    let metric = report["outputs"]["metric"].as_array().unwrap();
    for (i, row) in metric.iter().enumerate() {
        for (j, entry) in row.as_array().unwrap().iter().enumerate() {
            let expect = if i == j { 1.0 } else { 0.0 };
            assert_eq!(entry.as_f64().unwrap(), expect);
        }
    }
}

#[test]
fn text_and_json_carry_identical_numbers() {
    let json_out = json(&run(&["torus", "--amp-b", "0", "--amp-c", "0", "--json"]));
    let text = stdout(&run(&["torus", "--amp-b", "0", "--amp-c", "0"]));
    for key in ["closed_residual", "nonparallel_witness", "symmetry_count"] {
        let value = json_out["outputs"][key].to_string();
        assert!(
            text.contains(&format!("{key}: {value}")),
            "{key}: JSON said {value}, text was:\n{text}"
        );
    }
    assert_eq!(json_out["outputs"]["symmetry_count"], 6);
}

#[test]
fn exhausted_search_exits_with_code_two() {
    let out = run(&["g2", "find-closed", "--algebra", "@row1", "--attempts", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let diagnostics = String::from_utf8(out.stderr).unwrap();
    assert!(diagnostics.contains("50 attempts"), "{diagnostics}");
}

#[test]
fn input_errors_exit_with_code_one() {
    // Jacobi violation.
    let out = run(&["algebra", "check", "(0, 0, 0, e^{12} + e^{34}, 0, 0, 0)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("Jacobi"));

    // Unknown built-in.
    let out = run(&["g2", "metric", "--algebra", "@nope"]);
    assert_eq!(out.status.code(), Some(1));

    // Non-positive 3-form.
    let out = run(&[
        "g2",
        "metric",
        "--algebra",
        "abelian7",
        "--phi",
        "-e^{123} + e^{145} + e^{167} + e^{246} - e^{257} - e^{347} - e^{356}",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("positive"));

    // Usage mistakes exit 1, never 2.
    let out = run(&["g2", "metric", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));

    // Negative amplitude.
    let out = run(&["torus", "--amp-a", "-1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn algebra_commands_accept_literal_tuples_and_files() {
    let out = json(&run(&[
        "algebra",
        "betti",
        "(0, 0, e^{12}, 0, e^{13}, e^{24} + e^{23}, e^{25} + e^{34} + e^{15} + e^{16} - 3 e^{26})",
        "--json",
    ]));
    assert_eq!(out["outputs"]["b2"], 6);

    let out = json(&run(&["algebra", "betti", "(0, 0, 0, 0, 0, 0, 0)", "--json"]));
    let betti: Vec<u64> = out["outputs"]["betti"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(betti, [1, 7, 21, 35, 35, 21, 7, 1]);

    let dir = std::env::temp_dir();
    let path = dir.join(format!("g2forms-cli-test-{}.cat", std::process::id()));
    std::fs::write(
        &path,
        "# one named algebra\nexample: (0, 0, e^{12}, e^{13}, e^{23}, e^{15} + e^{24}, e^{16} + e^{34} + e^{25})\n",
    )
    .unwrap();
    let out = json(&run(&["algebra", "betti", path.to_str().unwrap(), "--json"]));
    assert_eq!(out["outputs"]["b2"], 3);
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_accepts_an_explicit_phi() {
    let find = json(&run(&["g2", "find-closed", "--algebra", "@row3", "--json"]));
    let phi = find["outputs"]["phi"].as_str().unwrap();
    assert_eq!(find["outputs"]["kernel_dim"], 20);

    let verify = json(&run(&["g2", "verify", "--algebra", "@row3", "--phi", phi, "--json"]));
    assert_eq!(verify["outputs"]["witness_phi"].as_str().unwrap(), phi);
    assert_eq!(verify["outputs"]["b2"], 5);
    assert_eq!(verify["outputs"]["harmonic_ok"], true);
}

#[test]
fn help_and_version_exit_cleanly() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("table1"));
    let out = run(&["--version"]);
    assert!(out.status.success());
}
