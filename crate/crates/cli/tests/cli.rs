use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn sk2d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sk2d")).args(args).output().expect("spawn sk2d")
}

fn json_of(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = sk2d(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn first_key(text: &str) -> String {
    let v: serde_json::Map<String, Value> = serde_json::from_str(text).unwrap();
    v.keys().next().unwrap().clone()
}

#[test]
fn holonomy_of_log_family() {
    let v = json_of(&["holonomy", "--family", "log", "--A", "1", "--B", "-1"]);
    assert_eq!(v["schema"], "sk2d/1");
    let m = &v["matrix"];
    let got = [
        m[0][0].as_f64().unwrap(),
        m[0][1].as_f64().unwrap(),
        m[1][0].as_f64().unwrap(),
        m[1][1].as_f64().unwrap(),
    ];
    let want = [1.0, 2.0 * std::f64::consts::PI, 0.0, 1.0];
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-6, "{got:?}");
    }
}

#[test]
fn classify_reads_holonomy_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hol.json");
    let p = path.to_str().unwrap();
    let out = sk2d(&["holonomy", "--family", "log", "--A", "1", "--B", "-1", "--out", p]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(first_key(&text), "schema");
    let v = json_of(&["classify", "--input", p]);
    assert_eq!(v["tag"], "parabolic-plus");
}

#[test]
fn classify_inline_matrix() {
    let v = json_of(&["classify", "--matrix", "-1,0,0,-1"]);
    assert_eq!(v["tag"], "minus-identity");
}

#[test]
fn schema_key_comes_first() {
    let out = sk2d(&["classify", "--matrix", "1,0,0,1", "--json"]);
    assert!(out.status.success());
    assert_eq!(first_key(&String::from_utf8_lossy(&out.stdout)), "schema");
}

#[test]
fn unknown_family_is_invalid_input() {
    let out = sk2d(&["holonomy", "--family", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nope"), "{err}");
}

#[test]
fn short_matrix_is_invalid_input() {
    assert_eq!(sk2d(&["classify", "--matrix", "1,0,0"]).status.code(), Some(2));
}

#[test]
fn bad_flag_is_invalid_input() {
    assert_eq!(sk2d(&["holonomy", "--bogus"]).status.code(), Some(2));
}

#[test]
fn picard_violation_is_invalid_input() {
    let out = sk2d(&["p1", "--punctures", "0,0;1,0;-1,0", "--alphas", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_kw_converges_and_matches() {
    let v = json_of(&["solve-kw", "--family", "poincare", "--grid-ntheta", "32"]);
    assert_eq!(v["converged"], true);
    assert!(v["final_residual"].as_f64().unwrap() <= 1e-10);
    assert!(v["max_error"].as_f64().unwrap() < 1e-2);
}

#[test]
fn solve_kw_budget_exhausted_exits_3() {
    let out = sk2d(&["solve-kw", "--family", "poincare", "--grid-ntheta", "32", "--max-iter", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn family_dumps_fields() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("fam");
    let out = sk2d(&["family", "--family", "liouville-zn", "--grid-ntheta", "16", "--out", d.to_str().unwrap()]);
    assert!(out.status.success());
    for f in ["w.csv", "u.csv", "omega11.csv", "omega22.csv", "xi0.csv", "summary.json"] {
        assert!(d.join(f).exists(), "{f}");
    }
    let w = fs::read_to_string(d.join("w.csv")).unwrap();
    assert_eq!(w.lines().count(), 1 + 17 * 16);
}

#[test]
fn asymptotics_liouville() {
    let v = json_of(&["asymptotics", "--family", "liouville-zn", "--n", "3"]);
    assert_eq!(v["kind"], "power");
    assert!(v["beta"].as_f64().unwrap().is_finite(), "{v}");
    assert_eq!(v["bound"], true);
    let v = json_of(&["asymptotics", "--family", "log"]);
    assert_eq!(v["kind"], "log-type");
}

#[test]
fn gauss_bonnet_orders_budget() {
    let v = json_of(&["gauss-bonnet", "--orders", "inf:-3,0.25,0.25,0.25"]);
    assert!((v["beta_sum"].as_f64().unwrap() + 4.5).abs() < 1e-12);
    assert_eq!(v["satisfied"], false);
    let v = json_of(&["gauss-bonnet", "--orders", "inf:-3,0.5,0.5,0.5"]);
    assert_eq!(v["satisfied"], true);
}

#[test]
fn gauss_bonnet_of_flat_family() {
    let v = json_of(&["gauss-bonnet", "--family", "flat-harmonic"]);
    assert!(v["lhs"].as_f64().unwrap().abs() < 1e-2);
}

#[test]
fn verify_log_family_passes() {
    let out = sk2d(&["verify", "--family", "log"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn p1_writes_patches() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("p1");
    let h = 3f64.sqrt() / 2.0;
    let pts = format!("1,0;-0.5,{h};-0.5,-{h}");
    let out = sk2d(&["p1", "--punctures", &pts, "--orders", "0.45", "--grid-ntheta", "32", "--out", d.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s: Value = serde_json::from_str(&fs::read_to_string(d.join("summary.json")).unwrap()).unwrap();
    assert_eq!(s["schema"], "sk2d/1");
    assert_eq!(s["moduli_dim"], 3);
    assert!(d.join("patch_0.csv").exists());
    assert!((s["infinity_order"].as_f64().unwrap() + 3.0).abs() < 1e-3);
}

#[test]
fn reruns_reproduce_output() {
    let args = ["holonomy", "--family", "poincare", "--json"];
    assert_eq!(sk2d(&args).stdout, sk2d(&args).stdout);
}
