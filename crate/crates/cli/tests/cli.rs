use std::process::{Command, Output};

use serde_json::Value;

fn arbordyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arbordyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn orbit_prints_the_c_list() {
    let out = arbordyn(&["orbit", "x^2+t", "--depth", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"["-t","t^2+t","t^4+2*t^3+t^2+t"]"#
    );
}

#[test]
fn zsig_mod_3_is_empty() {
    let out = arbordyn(&["zsig", "x^2+t", "--mod", "3", "--depth", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["members"], serde_json::json!([]));
}

#[test]
fn bound_mod_5_constants() {
    let out = arbordyn(&["bound", "x^2+t", "--mod", "5"]);
    let v = json_of(&out);
    assert_eq!((v["A"].as_u64(), v["B"].as_u64()), (Some(8), Some(144)));
    assert_eq!(v["n_bound"], 10);
}

#[test]
fn envelopes_validate_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["orbit", "x^2+t", "--mod", "7"],
        &["insep", "x^2-t^3", "--mod", "3"],
        &["zsig", "x^2+t", "--depth", "5"],
        &["bound", "(x-t^2)^2-(t^3+1)", "--mod", "5"],
        &["global-bound", "x^2-t^3"],
        &["stoll", "x^2+t", "--mod", "5", "--mode", "arithmetic"],
        &["jones", "--depth", "4", "--prime-cap", "50"],
        &["ms-check", "--mod", "7", "--samples", "50", "--seed", "3"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let mut a: Vec<&str> = args.to_vec();
        a.push("--json");
        let first = arbordyn(&a);
        assert_eq!(first.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&first.stderr));
        let second = arbordyn(&a);
        assert_eq!(first.stdout, second.stdout, "{args:?} is not deterministic");
        let path = dir.path().join(format!("r{k}.json"));
        let p = path.to_str().unwrap();
        let mut b = a.clone();
        b.extend(["--out", p]);
        assert_eq!(arbordyn(&b).status.code(), Some(0));
        let check = arbordyn(&["validate", p]);
        assert_eq!(check.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&check.stdout));
    }
}

#[test]
fn tampered_reports_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.json");
    let p = path.to_str().unwrap();
    arbordyn(&["orbit", "x^2+t", "--json", "--out", p]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["schema_version"] = 0.into();
    std::fs::write(&path, v.to_string()).unwrap();
    let out = arbordyn(&["validate", p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("version mismatch"));
}

#[test]
fn exit_codes() {
    assert_eq!(arbordyn(&["orbit", "x^2+*t"]).status.code(), Some(1));
    assert_eq!(arbordyn(&["frobnicate"]).status.code(), Some(1));
    let square = arbordyn(&["zsig", "(x-t)^2", "--mod", "3"]);
    assert_eq!(square.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&square.stderr).contains("degenerate_square"));
    let iso = arbordyn(&["bound", "(x-t)^2+t+1", "--mod", "3"]);
    assert_eq!(iso.status.code(), Some(2));
    let ms = arbordyn(&["ms-check", "t^2", "t", "--mod", "5"]);
    assert_eq!(ms.status.code(), Some(2));
}

#[test]
fn unfactored_contents_exit_3() {
    // a zero factoring budget leaves the large content unsplit
    let out = arbordyn(&["global-bound", "x^2+1000000016000000063*t+t^5", "--factor-effort", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json_of(&out);
    assert_eq!(v["complete"], false);
    assert!(!v["exceptional"]["unfactored"].as_array().unwrap().is_empty());
}

#[test]
fn checkpointed_jones_resumes_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp");
    let cps = cp.to_str().unwrap();
    let a = arbordyn(&["jones", "--depth", "5", "--checkpoint", cps, "--jobs", "2"]);
    let b = arbordyn(&["jones", "--depth", "5", "--checkpoint", cps, "--jobs", "1"]);
    let c = arbordyn(&["jones", "--depth", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert!(std::fs::read_dir(&cp).unwrap().count() > 31);
}

#[test]
fn parse_map_examples() {
    let v = json_of(&arbordyn(&["orbit", "(x - (t^2))^2 - (t^3+1)", "--depth", "1", "--json"]));
    assert_eq!(v["result"]["c"][0], "t^3+1");
    let v = json_of(&arbordyn(&["orbit", "(x-t)^2+t+1", "--depth", "1"]));
    assert_eq!(v[0], "-t-1");
}
