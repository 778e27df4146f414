use assert_cmd::Command;
use predicates::prelude::*;

fn rsss() -> Command {
    Command::cargo_bin("rsss").unwrap()
}

#[test]
fn pgl_mod_3_json() {
    let assert = rsss()
        .args([
            "scenario", "pgl", "--n", "3", "--coeff", "zmod:3", "--format", "json",
        ])
        .assert()
        .success();
    let out = String::from_utf8(assert.get_output().stdout.clone()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let names: Vec<&str> = doc["presentation"]["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, vec!["r1", "r2", "t"]);
    assert_eq!(doc["presentation"]["relations"][0], "t^3");
    assert_eq!(doc["presentation"]["associated_graded_only"], false);
    assert_eq!(doc["page"]["warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn vex_document() {
    let assert = rsss()
        .args(["vex", "--u", "1,2,3", "--v", "0"])
        .assert()
        .success();
    let out = String::from_utf8(assert.get_output().stdout.clone()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["q"], serde_json::json!(["11", "-6", "1"]));
    assert_eq!(doc["r"], serde_json::json!(["-6"]));
    assert_eq!(doc["sigma_vex"], serde_json::json!(["6", "11", "0"]));
}

#[test]
fn stiefel_mod_2_is_a_precondition_failure() {
    rsss()
        .args([
            "scenario", "stiefel", "--n", "2", "--m", "1", "--u", "1,1", "--v", "1", "--coeff",
            "zmod:2",
        ])
        .assert()
        .code(3)
        .stderr(predicate::str::contains("2 invertible"));
}

#[test]
fn bad_ring_is_a_usage_failure() {
    rsss()
        .args(["scenario", "pgl", "--n", "2", "--coeff", "bogus"])
        .assert()
        .code(2);
}

#[test]
fn missing_subcommand_is_a_usage_failure() {
    rsss().assert().code(2);
}

#[test]
fn split_primes_finds_3_and_11() {
    let assert = rsss()
        .args(["split-primes", "--q", "11,-6,1", "--max", "20"])
        .assert()
        .success();
    let out = String::from_utf8(assert.get_output().stdout.clone()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let primes: Vec<u64> = doc["split_primes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["prime"].as_u64().unwrap())
        .collect();
    assert_eq!(primes, vec![3, 11, 17, 19]);
}

#[test]
fn ext_bar_z2_group_over_z() {
    let assert = rsss()
        .args(["ext", "bar", "--preset", "z2-group", "--max-degree", "4", "--coeff", "z"])
        .assert()
        .success();
    let out = String::from_utf8(assert.get_output().stdout.clone()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let entries = doc["entries"].as_array().unwrap();
    let find = |s: i64| {
        entries
            .iter()
            .find(|e| e["tridegree"] == serde_json::json!([s, 0, 0]))
    };
    let e0 = find(0).unwrap();
    assert_eq!(e0["rank"], 1);
    let e2 = find(2).unwrap();
    assert_eq!(e2["rank"], 0);
    assert_eq!(e2["torsion"], serde_json::json!(["2"]));
    assert!(find(1).is_none());
    assert!(find(3).is_none());
}

#[test]
fn text_chart_is_deterministic() {
    let run = || {
        let assert = rsss()
            .args(["scenario", "projective", "--n", "3", "--coeff", "q"])
            .assert()
            .success();
        String::from_utf8(assert.get_output().stdout.clone()).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    assert!(a.contains("weight 2"));
    assert!(a.contains("fired differentials"));
}

#[test]
fn window_override_truncates() {
    let assert = rsss()
        .args([
            "scenario", "projective", "--n", "6", "--coeff", "q", "--max-filt", "2", "--max-deg",
            "2", "--format", "json",
        ])
        .assert()
        .success();
    let out = String::from_utf8(assert.get_output().stdout.clone()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    for e in doc["page"]["entries"].as_array().unwrap() {
        let t = e["tridegree"].as_array().unwrap();
        assert!(t[0].as_i64().unwrap() <= 2);
        assert!(t[1].as_i64().unwrap() <= 2);
    }
}

#[test]
fn custom_ext_module_from_file() {
    // Round-trip a built-in module through JSON to exercise the custom path.
    let dir = std::env::temp_dir().join("rsss-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("module.json");
    let module = rsss_core::ext::trivial_module(&rsss_core::ext::z2_group_ring(
        &rsss_core::coeff::CoeffRing::Rationals,
    ));
    std::fs::write(&path, serde_json::to_string(&module).unwrap()).unwrap();
    let preset = format!("custom:{}", path.display());
    let assert = rsss()
        .args(["ext", "bar", "--preset", &preset, "--max-degree", "3", "--coeff", "q"])
        .assert()
        .success();
    let out = String::from_utf8(assert.get_output().stdout.clone()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    // Over the rationals only Ext^0 survives for the Z/2 group ring.
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["tridegree"], serde_json::json!([0, 0, 0]));
}
