use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn nilorb(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nilorb")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("{e}: {s}"))
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn orbits_lists_seven_patterns() {
    let (code, out, _) = nilorb(&["orbits", "--blocks", "1,1,1"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 7);
    assert!(list.iter().all(|e| e["dim"].is_u64() && e["pattern"]["blocks"] == json("[1,1,1]")));
}

#[test]
fn orbit_patterns_feed_back_into_leq() {
    let dir = tempfile::tempdir().unwrap();
    let (_, out, _) = nilorb(&["orbits", "--blocks", "1,1"]);
    let list = json(&out);
    let zero = write(&dir, "a.json", &list[0]["pattern"].to_string());
    let arrow = write(&dir, "b.json", &list[1]["pattern"].to_string());
    let (code, out, _) =
        nilorb(&["leq", "--blocks", "1,1", "--a", arrow.to_str().unwrap(), "--b", zero.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["leq"], true);
    let (_, out, _) =
        nilorb(&["leq", "--blocks", "1,1", "--a", zero.to_str().unwrap(), "--b", arrow.to_str().unwrap()]);
    assert_eq!(json(&out)["leq"], false);
}

#[test]
fn finiteness_reports_witness() {
    let (code, out, _) = nilorb(&["finiteness", "--blocks", "1,1,1", "--nilpotency", "3"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["finite"], false);
    assert_eq!(v["witness"], "D");
    let (_, out, _) = nilorb(&["finiteness", "--blocks", "2,3", "--nilpotency", "3"]);
    assert_eq!(json(&out)["reason"], "maximal_x3");
    let (_, out, _) = nilorb(&["finiteness", "--blocks", "2,2", "--nilpotency", "4", "--lambda", "3/2"]);
    let v = json(&out);
    assert_eq!(v["witness"], "E");
    assert_eq!(v["matrix"]["entries"][3][0], "3/2");
}

#[test]
fn hasse_formats() {
    let (code, out, _) = nilorb(&["hasse", "--blocks", "2,1", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph orbits {"));
    assert_eq!(out.lines().filter(|l| l.contains(" -> ")).count(), 3);
    let (_, out, _) = nilorb(&["hasse", "--blocks", "1,1,1"]);
    let v = json(&out);
    assert_eq!(v["elements"].as_array().unwrap().len(), 7);
    assert_eq!(v["order"], "degeneration");
    let (code, _, _) = nilorb(&["hasse", "--blocks", "1,1", "--format", "svg"]);
    assert_eq!(code, 2);
}

#[test]
fn classify_and_normal_forms() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(&dir, "m.json", "[[0,0,0],[1,0,0],[0,0,0]]");
    let (code, out, _) = nilorb(&["classify", "--blocks", "1,1,1", "--matrix", m.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["decomposition"], "U2,1 + V3");
    let reg = write(&dir, "r.json", r#"{"rows":3,"cols":3,"entries":[[0,0,0],[1,0,0],[2,3,0]]}"#);
    let (code, out, _) = nilorb(&["normal-form", "--blocks", "2,1", "--matrix", reg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["h"]["entries"], json("[[0,0,0],[1,0,0],[0,1,0]]"));
    assert!(v["certificate"]["zeros"].as_array().unwrap().contains(&json("[3,1]")));
    let (code, out, _) = nilorb(&["u-normal-form", "--matrix", reg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["h"]["entries"], json("[[0,0,0],[1,0,0],[2,3,0]]"));
    let (code, _, err) = nilorb(&["normal-form", "--blocks", "2,1", "--matrix", m.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(json(&err)["error"], "not_generic");
}

#[test]
fn invariant_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(&dir, "d.json", r#"{"a":[2],"a_prime":[1,1],"polys":[[[0,1],["0","0","1"]]]}"#);
    let h = write(&dir, "h.json", "[[0,0,0],[2,0,0],[5,3,0]]");
    let (code, out, _) = nilorb(&["invariant-eval", "--datum", d.to_str().unwrap(), "--matrix", h.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["value"], "12");
    let (_, out, _) = nilorb(&["invariant-weight", "--datum", d.to_str().unwrap(), "--size", "3"]);
    assert_eq!(json(&out)["weight"], json("[-2,1,1]"));
    let (_, out, _) = nilorb(&["toric-check", "--datum", d.to_str().unwrap(), "--size", "3", "--seed", "4"]);
    let v = json(&out);
    assert_eq!(v["toric"], true);
    assert_eq!(v["exponents"]["measured"], json("[2,1]"));
    let (_, out, _) = nilorb(&["toric-check", "--builtin", "det_1", "--size", "4", "--trials", "3"]);
    assert_eq!(json(&out)["toric"], true);
    let bad = write(&dir, "bad.json", r#"{"a":[2],"a_prime":[1],"polys":[[[1]]]}"#);
    let (code, _, err) = nilorb(&["invariant-weight", "--datum", bad.to_str().unwrap(), "--size", "3"]);
    assert_eq!(code, 1);
    assert_eq!(json(&err)["error"], "datum");
    let (code, _, _) =
        nilorb(&["invariant-eval", "--builtin", "det_1", "--size", "3", "--matrix", "/nonexistent/m.json"]);
    assert_eq!(code, 1);
    let (code, _, err) =
        nilorb(&["invariant-eval", "--builtin", "det_1", "--size", "4", "--matrix", h.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(json(&err)["error"], "shape");
    let (code, out, _) =
        nilorb(&["invariant-eval", "--builtin", "det_1", "--size", "3", "--matrix", h.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["value"], "6");
}

#[test]
fn conjugate_test_answers() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(&dir, "a.json", "[[0,1],[0,0]]");
    let b = write(&dir, "b.json", "[[0,0],[1,0]]");
    let (code, out, _) =
        nilorb(&["conjugate-test", "--blocks", "1,1", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["answer"], "no");
    assert_eq!(v["certificate"]["kind"], "rank_profile");
    let (_, out, _) =
        nilorb(&["conjugate-test", "--blocks", "1,1", "--a", a.to_str().unwrap(), "--b", a.to_str().unwrap()]);
    assert_eq!(json(&out)["answer"], "yes");
}

#[test]
fn malformed_input_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(&dir, "m.json", "[[0,1],");
    let (code, _, err) = nilorb(&["classify", "--blocks", "1,1", "--matrix", m.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(json(&err)["error"], "parse");
    let (code, _, _) = nilorb(&["classify", "--blocks", "1,1"]);
    assert_eq!(code, 2);
}

#[test]
fn selftest_passes() {
    let (code, out, _) = nilorb(&["selftest"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["failed"], 0);
}
