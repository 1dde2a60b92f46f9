use std::process::{Command, Output};

use serde_json::Value;

fn homforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homforge"))
        .args(args)
        .env_remove("HOMFORGE_CAP")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn payload(r: &Value, k: usize) -> &Value {
    &r["checks"][k]["payload"]
}

#[test]
fn homology_of_klein_four() {
    let out = homforge(&["homology", "--group", r#"{"kind":"abelian","orders":[2,2]}"#, "--degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], "1");
    assert_eq!(payload(&r, 0)["invariants"]["torsion"], serde_json::json!([2, 2, 2]));
    for c in r["checks"].as_array().unwrap() {
        assert!(!c["anchor"].as_str().unwrap().is_empty());
        assert_eq!(c["status"], "pass");
    }
}

#[test]
fn homology_of_a_matrix_group() {
    let g = r#"{"kind":"matrix","q":3,"gens":[[[2,0],[0,1]],[[0,1],[1,0]]]}"#;
    let out = homforge(&["homology", "--group", g, "--degree", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    // D_4 abelianizes to (Z/2)^2
    assert_eq!(payload(&r, 0)["group_order"], 8);
    assert_eq!(payload(&r, 0)["invariants"]["torsion"], serde_json::json!([2, 2]));
}

#[test]
fn chi_two_two() {
    let out = homforge(&["chi", "--m", "2", "--n", "2", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let p = payload(&r, 0);
    assert_eq!(p["cycle"], true);
    assert_eq!(p["order"], 2);
    assert_eq!(p["projections_vanish"], true);
}

#[test]
fn kunneth_two_four() {
    let out = homforge(&["kunneth", "--m", "2", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(payload(&report(&out), 0)["total_torsion"], serde_json::json!(["2", "2", "4"]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(homforge(&["bogus"]).status.code(), Some(2));
    assert_eq!(homforge(&["homology", "--degree", "3"]).status.code(), Some(2));
    assert_eq!(homforge(&["homology", "--group", "{", "--degree", "3"]).status.code(), Some(2));
    assert_eq!(homforge(&["milnor", "--q", "6"]).status.code(), Some(2));
    assert_eq!(homforge(&["torus", "--verify", "thm31", "--compile", "--q", "7"]).status.code(), Some(2));
}

#[test]
fn cap_gives_skip_record_and_exit_three() {
    let out = homforge(&["--cap", "10", "homology", "--group", r#"{"kind":"abelian","orders":[4]}"#, "--degree", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["checks"][0]["status"], "skipped");
    assert_eq!(r["status"], "skipped");
}

#[test]
fn env_cap_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_homforge"))
        .args(["kunneth", "--m", "2", "--n", "2"])
        .env("HOMFORGE_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out)["config"]["cell_cap"], 5);
}

#[test]
fn milnor_checks() {
    let out = homforge(&["milnor", "--q", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["checks"].as_array().unwrap().len(), 5);
    let out = homforge(&["milnor", "--q", "4", "--check", "div2"]);
    let r = report(&out);
    assert_eq!(r["checks"].as_array().unwrap().len(), 1);
    assert_eq!(payload(&r, 0)["uniquely_2_divisible"], true);
}

#[test]
fn torus_identities() {
    for which in ["thm31", "rem32"] {
        let out = homforge(&["torus", "--verify", which]);
        assert_eq!(out.status.code(), Some(0), "{which}");
        assert_eq!(payload(&report(&out), 0)["holds"], true);
    }
    let out = homforge(&["torus", "--verify", "rem32", "--compile", "--values", "2,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(payload(&report(&out), 1)["group_order"], 16);
}

#[test]
fn kernel_elements() {
    let dir = std::env::temp_dir().join(format!("homforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let field = dir.join("field.json");
    std::fs::write(&field, r#"[["2","3","2"],[3,4,2]]"#).unwrap();
    let out = homforge(&["kernel-el", "--q", "5", "--triples", field.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(payload(&report(&out), 0)["theorem31_holds"], true);

    let formal = dir.join("formal.json");
    std::fs::write(&formal, r#"[["a","b","c"]]"#).unwrap();
    let out = homforge(&["kernel-el", "--formal", "a,b,c", "--triples", formal.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(payload(&report(&out), 0)["accepted"], false);

    std::fs::write(&formal, r#"[["a","b","c"],["a","b","c^-1"]]"#).unwrap();
    let out = homforge(&["kernel-el", "--formal", "a,b,c", "--triples", formal.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let args = ["lemma", "--seed", "11"];
    let a = homforge(&args);
    let b = homforge(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn suite_subset_with_config_and_out() {
    let dir = std::env::temp_dir().join(format!("homforge-suite-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("config.json");
    let out_path = dir.join("r.json");
    std::fs::write(&config, r#"{"seed": 3, "timings": true}"#).unwrap();
    let out = homforge(&[
        "suite",
        "--only",
        "1,6,7,9",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["config"]["seed"], 3);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks.iter().all(|c| c["status"] == "pass" && c["elapsed_ms"].is_u64()));
    std::fs::remove_dir_all(&dir).unwrap();
}
