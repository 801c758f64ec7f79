use std::process::{Command, Output};

use serde_json::Value;

fn wplc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wplc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = wplc(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim_end().lines().count(), 1, "one document");
    serde_json::from_str(&text).unwrap()
}

#[test]
fn line_bundle_precision_counts_terms() {
    let doc = json(&["--json", "char", "line", "--l", "0", "--prec", "3", "--p", "1,1"]);
    assert_eq!(doc["kind"], "line");
    assert_eq!(doc["params"]["l"], 0);
    assert_eq!(doc["pair"]["d"], 2);
    assert_eq!(doc["precision"]["num"], 6);
    assert_eq!(doc["precision"]["den"], 2);
    assert_eq!(doc["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--json", "mutate", "--p", "2,3", "--path", "1,2", "--prec", "3"];
    let a = wplc(&args);
    let b = wplc(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn pair_reports_matrices() {
    let doc = json(&["--json", "pair", "--p", "1,1"]);
    assert_eq!(doc["d"], 2);
    assert_eq!(doc["lambda"]["data"], serde_json::json!([[0, -1], [1, 0]]));
    assert_eq!(doc["btilde"]["data"], serde_json::json!([[0, -2], [2, 0]]));
}

#[test]
fn mutation_state_schema() {
    let doc = json(&["--json", "mutate", "--p", "1,1", "--path", "1", "--prec", "4"]);
    for key in ["quiver", "dims", "vars", "frozen", "path"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["path"], serde_json::json!([1]));
}

#[test]
fn kronecker_path_returns_to_start() {
    let start = json(&["--json", "kronecker"]);
    let back = json(&["--json", "kronecker", "--path", "1,1"]);
    assert_eq!(start["vars"], back["vars"]);
    assert_eq!(start["dims"], back["dims"]);
}

#[test]
fn verify_report_schema() {
    let doc = json(&["--json", "verify", "--suite", "example33", "--lmax", "2"]);
    assert_eq!(doc["suite"], "example33");
    assert_eq!(doc["passed"], true);
    let case = &doc["cases"][0];
    for key in ["name", "status", "detail"] {
        assert!(case.get(key).is_some());
    }
}

#[test]
fn audit_all_passes() {
    let doc = json(&["--json", "audit", "--family", "all"]);
    assert_eq!(doc["unique"], true);
    assert_eq!(doc["fits"], serde_json::json!([[1, 1, 0]]));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["char", "line", "--bogus", "1"][..],
        &["verify", "--suite", "nope"],
        &["pair", "--p", "0,2"],
        &["mutate", "--p", "1,1", "--path", "5"],
        &["audit", "--family", "other"],
    ] {
        assert_eq!(wplc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("wplc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wplc.toml");
    std::fs::write(&path, "p = \"2,3\"\nprec = 2\n").unwrap();
    let path = path.to_str().unwrap();
    let from_config = json(&["--json", "--config", path, "char", "line", "--l", "0"]);
    assert_eq!(from_config["pair"]["p"], serde_json::json!([2, 3]));
    let overridden = json(&["--json", "--config", path, "char", "line", "--p", "1,1", "--prec", "3"]);
    assert_eq!(overridden["pair"]["p"], serde_json::json!([1, 1]));
    assert_eq!(overridden["terms"].as_array().unwrap().len(), 3);
}
