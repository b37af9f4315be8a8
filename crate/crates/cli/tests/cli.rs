use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusion-limits")).args(args).output().expect("binary runs")
}

fn run_with_report(dir: &Path, name: &str, args: &[&str]) -> (i32, Value, String) {
    let out = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.to_str().unwrap().to_string();
    full.extend(["--out", &out_str]);
    let o = run(&full);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&out).expect("report written")).unwrap();
    (o.status.code().unwrap(), json, String::from_utf8(o.stdout).unwrap())
}

const S4: [&str; 4] = ["--group", "preset:symmetric:4", "--sylow", "2"];

fn with_s4<'a>(head: &[&'a str], tail: &[&'a str]) -> Vec<&'a str> {
    head.iter().chain(S4.iter()).chain(tail.iter()).copied().collect()
}

#[test]
fn classify_the_symmetric_group() {
    let dir = tempfile::tempdir().unwrap();
    let (code, json, stdout) = run_with_report(dir.path(), "c.json", &with_s4(&["classify"], &[]));
    assert_eq!(code, 0);
    assert_eq!(json["schema"], "fusion-limits/1");
    assert_eq!(json["result"]["rows"].as_array().unwrap().len(), 10);
    assert_eq!(json["result"]["centric"], 4);
    assert_eq!(json["result"]["essential"], 1);
    assert!(stdout.contains("10 subgroups, 4 centric"));
    assert_eq!(json["provenance"]["group"]["degree"], 4);
    assert_eq!(json["provenance"]["sylow_order"], 8);
}

#[test]
fn classify_a_cyclic_group_of_order_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, json, _) = run_with_report(dir.path(), "c.json", &["classify", "--group", "preset:cyclic:2"]);
    assert_eq!(code, 0);
    assert_eq!(json["result"]["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn config_errors_exit_with_two() {
    let bad_preset = run(&["classify", "--group", "preset:nonsense:3"]);
    assert_eq!(bad_preset.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_preset.stderr).contains("nonsense"));
    let no_prime = run(&["classify", "--group", "preset:symmetric:3"]);
    assert_eq!(no_prime.status.code(), Some(2));
    let unknown_flag = run(&["classify", "--group", "preset:cyclic:2", "--bogus"]);
    assert_eq!(unknown_flag.status.code(), Some(2));
}

#[test]
fn limits_of_the_symmetric_group_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let (code, json, _) = run_with_report(dir.path(), "l.json", &with_s4(&["limits"], &["--jmax", "3", "--nmax", "3"]));
    assert_eq!(code, 0);
    let rows = json["result"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let lims: Vec<u64> = row["lims"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
        assert!(lims[1..].iter().all(|&d| d == 0), "{row}");
    }
}

#[test]
fn limits_of_the_alternating_group() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["limits", "--group", "preset:alternating:4", "--sylow", "2", "--jmax", "1", "--nmax", "2"];
    let (code, json, _) = run_with_report(dir.path(), "l.json", &args);
    assert_eq!(code, 0);
    assert_eq!(json["result"][0]["lims"], serde_json::json!([1, 0, 0]));
    assert_eq!(json["result"][1]["lims"], serde_json::json!([0, 0, 0]));
}

#[test]
fn degree_caps_are_enforced_before_computing() {
    let o = run(&["limits", "--group", "preset:elementary_abelian:2,6", "--jmax", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn pruning_the_klein_four_group_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, json, _) = run_with_report(dir.path(), "b.json", &with_s4(&["verify", "theorem-b"], &["--prune", "V"]));
    assert_eq!(code, 0);
    assert_eq!(json["passed"], true);
    assert_eq!(json["result"]["verdict"]["conclusion_holds"], true);
}

#[test]
fn theorem_a_ledger_is_green_on_the_dihedral_triple() {
    let dir = tempfile::tempdir().unwrap();
    let (code, json, _) = run_with_report(dir.path(), "a.json", &with_s4(&["verify", "theorem-a"], &["--prune", "V"]));
    assert_eq!(code, 0);
    let ledgers = json["result"]["ledgers"].as_array().unwrap();
    assert_eq!(ledgers.len(), 4);
    assert!(ledgers.iter().all(|l| l["green"] == true));
    let hypotheses = ledgers[0]["ledger"]["verdict"]["hypotheses"].as_array().unwrap();
    assert!(hypotheses.iter().any(|h| h["name"] == "S' in the family"));
}

#[test]
fn other_scenarios_pass_on_the_symmetric_group() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["theorem-c", "two-essential", "trees", "sharpness"] {
        let (code, json, _) = run_with_report(dir.path(), "v.json", &with_s4(&["verify", kind], &["--jmax", "2", "--nmax", "2"]));
        assert_eq!(code, 0, "{kind}: {json}");
        assert_eq!(json["passed"], true);
    }
}

#[test]
fn an_unclosed_family_is_a_hypothesis_failure() {
    let dir = tempfile::tempdir().unwrap();
    let family = dir.path().join("family.json");
    std::fs::write(&family, r#"["V"]"#).unwrap();
    let fam = family.to_str().unwrap();
    let (code, json, _) = run_with_report(dir.path(), "t.json", &with_s4(&["verify", "trees"], &["--prune", "V", "--family", fam]));
    assert_eq!(code, 3);
    assert_eq!(json["passed"], false);
    let failed: Vec<&Value> =
        json["result"]["verdict"]["hypotheses"].as_array().unwrap().iter().filter(|h| h["holds"] == false).collect();
    assert_eq!(failed[0]["name"], "family closed in F");
}

#[test]
fn a_failing_hypothesis_still_writes_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let args = with_s4(&["verify", "two-essential"], &["--subgroup", "(0 1)", "--subgroup", "V", "--jmax", "1"]);
    let (code, json, stdout) = run_with_report(dir.path(), "e.json", &args);
    assert_eq!(code, 3);
    assert!(stdout.contains("[FAIL] P normal in S"));
    assert_eq!(json["result"]["verdicts"][0]["verdict"]["conclusion_checked"], false);
}

#[test]
fn seeded_systems_match_the_realization() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = dir.path().join("seeds.json");
    // an automorphism of order three of the normal Klein four group
    std::fs::write(
        &seeds,
        r#"{"seeds": [{"generators": ["(0 1)(2 3)", "(0 2)(1 3)"], "images": ["(0 2)(1 3)", "(0 3)(1 2)"]}]}"#,
    )
    .unwrap();
    let seed_path = seeds.to_str().unwrap();
    let (code, json, _) = run_with_report(dir.path(), "c.json", &with_s4(&["classify"], &["--seed-homs", seed_path]));
    assert_eq!(code, 0);
    let (_, realized, _) = run_with_report(dir.path(), "r.json", &with_s4(&["classify"], &[]));
    assert_eq!(json["result"]["rows"], realized["result"]["rows"]);
    assert_eq!(json["provenance"]["fusion"], "generated from seeds");
}

#[test]
fn identical_configs_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let args = with_s4(&["verify", "theorem-a"], &["--jmax", "1", "--nmax", "2"]);
    let first = dir.path().join("one.json");
    let second = dir.path().join("two.json");
    for out in [&first, &second] {
        let mut a = args.clone();
        a.extend(["--out", out.to_str().unwrap()]);
        assert_eq!(run(&a).status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}
