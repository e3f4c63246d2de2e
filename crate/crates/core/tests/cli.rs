use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn homwb(args: &[&str]) -> (Output, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_homwb"))
        .args(args)
        .output()
        .expect("binary runs");
    let json: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out, json)
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn ring_list_matches_golden_file() {
    let (out, json) = homwb(&["ring", "list"]);
    assert!(out.status.success());
    let golden: Value =
        serde_json::from_str(&std::fs::read_to_string(data("golden/ring_list.json")).unwrap())
            .unwrap();
    assert_eq!(json["results"], golden);
}

#[test]
fn classify_residue_field_over_r2() {
    let (out, json) = homwb(&[
        "classify", "--ring", "R2q5", "--module", "k", "--bound", "6",
    ]);
    assert!(out.status.success());
    assert_eq!(
        json["results"]["torsionfree"]["totally_reflexive_up_to_bound"],
        true
    );
    assert_eq!(json["results"]["gdim"]["verdict"]["kind"], "zero");
    assert_eq!(json["ring"]["p"], 5);
}

#[test]
fn reduce_reports_witness_and_reproduces() {
    let args = [
        "reduce",
        "--mode",
        "red",
        "--target",
        "pd",
        "--ring",
        "R1q5",
        "--module",
        "k",
        "--max-steps",
        "2",
        "--n-max",
        "1",
        "--ab-max",
        "2",
    ];
    let (out, json) = homwb(&args);
    assert!(out.status.success());
    let w = &json["results"]["witness"];
    assert_eq!(w["length"], 1);
    assert_eq!(w["steps"][0]["n"], 0);
    assert_eq!(w["steps"][0]["a"], 2);
    assert_eq!(w["steps"][0]["b"], 1);
    assert_eq!(w["steps"][0]["middle_dim"], 3);
    let (_, again) = homwb(&args);
    assert_eq!(json["results"], again["results"]);
    assert_eq!(json["limits"]["max_steps"], 2);
}

#[test]
fn config_file_sets_limits_and_flags_override() {
    let dir = std::env::temp_dir().join(format!("homwb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("limits.json");
    std::fs::write(&cfg, r#"{"max_steps": 1, "seed": 9}"#).unwrap();
    let cfg = cfg.to_string_lossy().into_owned();
    let (out, json) = homwb(&["reduce", "--ring", "R2q5", "--config", &cfg, "--n-max", "0"]);
    assert!(out.status.success());
    assert_eq!(json["limits"]["max_steps"], 1);
    assert_eq!(json["limits"]["n_max"], 0);
    assert_eq!(json["seed"], 9);
}

#[test]
fn nonassociative_table_is_rejected_with_witness() {
    let (out, json) = homwb(&["ring", "validate", &data("data/nonassociative.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json["axiom"], "associativity");
    assert_eq!(json["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn unknown_ids_exit_with_code_two() {
    let (out, json) = homwb(&["resolve", "--ring", "R7q5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json["error"], "unknown_ring");
    let (out, json) = homwb(&["resolve", "--ring", "R1q5", "--module", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json["error"], "unknown_module");
}

#[test]
fn sequence_build_then_verify() {
    let dir = std::env::temp_dir().join(format!("homwb-seq-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("seq.json").to_string_lossy().into_owned();
    let (out, json) = homwb(&[
        "seq", "build", "--ring", "R2q5", "--module", "k", "--m", "1", "--n", "1", "--out", &file,
    ]);
    assert!(out.status.success());
    assert_eq!(json["results"]["ranks"], serde_json::json!([1, 1, 1, 1]));
    for mode in ["all", "split", "4"] {
        let (out, json) = homwb(&[
            "seq", "verify", &file, "--m", "1", "--n", "1", "--mode", mode,
        ]);
        assert!(out.status.success());
        assert_eq!(json["results"]["passed"], true);
        assert_eq!(json["results"]["image_in_gmn"], true);
    }
    let (out, json) = homwb(&["seq", "verify", &file, "--m", "2", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json["error"], "contract");
    let (out, json) = homwb(&[
        "seq", "build", "--ring", "R1q5", "--module", "k", "--m", "1", "--n", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json["error"], "precondition");
}

#[test]
fn checks_run_and_pass() {
    for which in [
        "complexity",
        "gorenstein",
        "gdim-formula",
        "splice",
        "thm4",
        "cor20",
    ] {
        let (out, json) = homwb(&["check", which, "--ring", "R2q5", "--module", "k"]);
        assert!(out.status.success(), "{which}");
        assert!(json["results"].is_object());
    }
}

#[test]
fn growth_and_ext_commands() {
    let (_, json) = homwb(&[
        "growth", "--ring", "R1q5", "--kind", "betti", "--bound", "8",
    ]);
    assert_eq!(
        json["results"]["estimate"]["verdict"]["kind"],
        "exponential"
    );
    let (_, json) = homwb(&["ext", "--ring", "R1q5", "--module", "k", "--bound", "3"]);
    assert_eq!(
        json["results"]["ext"]["dims"],
        serde_json::json!([2, 3, 6, 12])
    );
    let (_, json) = homwb(&["--p", "2", "resolve", "--ring", "R4", "--steps", "4"]);
    assert_eq!(
        json["results"]["betti"],
        serde_json::json!([1, 3, 8, 21, 55])
    );
    assert_eq!(json["ring"]["p"], 2);
}
