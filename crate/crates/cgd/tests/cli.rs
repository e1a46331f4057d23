use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn cgd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgd")).args(args).output().expect("cgd runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_flags() {
    let o = cgd(&["validate", path(&fixture("nested-triangles-flat-12.cg"))]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["is_c_connected"], true);
    assert_eq!(v["is_flat"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("flat=true"));
}

#[test]
fn infeasible_fixtures_exit_one_with_both_deciders() {
    for name in ["infeasible-parallel.cg", "infeasible-triconnected.cg"] {
        for extra in [&[][..], &["--oracle"][..]] {
            let file = fixture(name);
            let mut args = vec!["test-rr", path(&file)];
            args.extend_from_slice(extra);
            let o = cgd(&args);
            assert_eq!(code(&o), 1, "{name} {extra:?}");
            let v = json(&o);
            assert_eq!(v["verdict"], "infeasible");
            assert!(v["witness_embedding"].is_null());
            assert_ne!(v["violation"]["cluster"], "root");
        }
    }
}

#[test]
fn feasible_fixtures_agree_with_the_oracle() {
    let small_sun = scratch("sun-4.cg");
    assert_eq!(code(&cgd(&["gen", "sun-flat", "--n", "4", "--out", path(&small_sun)])), 0);
    let files = [small_sun, fixture("k4.cg"), fixture("triangle.cg")];
    for file in &files {
        let name = file.display();
        let fast = cgd(&["test-rr", path(file)]);
        let slow = cgd(&["test-rr", "--oracle", path(file)]);
        assert_eq!(code(&fast), code(&slow), "{name}");
        assert_eq!(json(&fast)["verdict"], json(&slow)["verdict"]);
    }
}

#[test]
fn draw_and_count_agree_in_every_mode() {
    let cases = [("ee", "k4.cg"), ("er", "nested-triangles-flat-12.cg"), ("rr", "sun-flat-8.cg")];
    for (mode, name) in cases {
        let plan = scratch(&format!("{mode}.json"));
        let svg = scratch(&format!("{mode}.svg"));
        let o = cgd(&["draw", path(&fixture(name)), "--mode", mode, "--out", path(&plan), "--svg", path(&svg)]);
        assert_eq!(code(&o), 0, "{mode}: {}", String::from_utf8_lossy(&o.stderr));
        let totals = json(&o);
        assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
        let c = cgd(&["count", path(&plan)]);
        assert_eq!(code(&c), 0, "{mode}");
        let report = json(&c);
        assert_eq!(report["consistent"], true);
        assert_eq!(report["recounted"], totals);
        let kinds = ["alpha", "beta", "gamma"];
        let nonzero: Vec<&str> = kinds.iter().copied().filter(|k| totals[*k] != 0).collect();
        assert!(nonzero.len() <= 1, "{mode}: one kind of crossing only");
    }
}

#[test]
fn tampered_plan_is_a_mismatch() {
    let plan = scratch("tampered.json");
    assert_eq!(code(&cgd(&["draw", path(&fixture("sun-flat-8.cg")), "--mode", "rr", "--out", path(&plan)])), 0);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&plan).unwrap()).unwrap();
    v["gamma"] = Value::from(v["gamma"].as_u64().unwrap() + 1);
    std::fs::write(&plan, v.to_string()).unwrap();
    let o = cgd(&["count", path(&plan)]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["consistent"], false);
}

#[test]
fn rr_drawing_reuses_a_test_rr_witness() {
    let result = scratch("witness.json");
    let o = cgd(&["test-rr", path(&fixture("k4.cg"))]);
    assert_eq!(code(&o), 0);
    std::fs::write(&result, &o.stdout).unwrap();
    let d = cgd(&["draw", path(&fixture("k4.cg")), "--mode", "rr", "--embedding", path(&result)]);
    assert_eq!(code(&d), 0);
    assert_eq!(json(&d)["gamma"], 0);
    let bad = cgd(&["draw", path(&fixture("k4.cg")), "--mode", "ee", "--embedding", path(&result)]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn rr_drawing_of_an_infeasible_instance_is_negative() {
    let o = cgd(&["draw", path(&fixture("infeasible-triconnected.cg")), "--mode", "rr"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["verdict"], "infeasible");
}

#[test]
fn output_is_byte_stable() {
    let file = fixture("sun-flat-8.cg");
    let args = ["draw", path(&file), "--mode", "rr"];
    let (a, b) = (cgd(&args), cgd(&args));
    assert_eq!(a.stdout, b.stdout);
    let g1 = cgd(&["gen", "cplanar-random", "--n", "9", "--seed", "4"]);
    let g2 = cgd(&["gen", "cplanar-random", "--n", "9", "--seed", "4"]);
    assert_eq!(code(&g1), 0);
    assert_eq!(g1.stdout, g2.stdout);
}

#[test]
fn gen_output_parses_and_validates() {
    let file = scratch("sun.cg");
    let o = cgd(&["gen", "sun-flat", "--n", "8", "--out", path(&file)]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(text, std::fs::read_to_string(fixture("sun-flat-8.cg")).unwrap());
    assert_eq!(code(&cgd(&["validate", path(&file)])), 0);
}

#[test]
fn spqr_dump_accepts_both_edge_forms() {
    let by_name = cgd(&["spqr", "dump", path(&fixture("k4.cg")), "--ref", "a,b"]);
    assert_eq!(code(&by_name), 0);
    let v = json(&by_name);
    assert_eq!(v["reference"], serde_json::json!(["a", "b"]));
    assert!(v["nodes"].as_array().unwrap().iter().any(|n| n["kind"] == "R"));
    let by_index = cgd(&["spqr", "dump", path(&fixture("k4.cg")), "--ref", "0"]);
    assert_eq!(by_index.stdout, by_name.stdout);
    assert_eq!(code(&cgd(&["spqr", "dump", path(&fixture("k4.cg")), "--ref", "a,zz"])), 2);
}

#[test]
fn usage_and_io_problems_exit_two() {
    assert_eq!(code(&cgd(&[])), 2);
    assert_eq!(code(&cgd(&["frobnicate"])), 2);
    assert_eq!(code(&cgd(&["validate", "/nonexistent/file.cg"])), 2);
    assert_eq!(code(&cgd(&["draw", path(&fixture("k4.cg"))])), 2);
    assert_eq!(code(&cgd(&["gen", "no-such-family"])), 2);
    assert_eq!(code(&cgd(&["test-rr", "--oracle", "--cap", "4", path(&fixture("sun-flat-8.cg"))])), 1);
}

#[test]
fn malformed_instance_is_a_negative_answer() {
    let file = scratch("broken.cg");
    std::fs::write(&file, "cg 1\nv a\nv b\ne a b\n").unwrap();
    let o = cgd(&["validate", path(&file)]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["error"].as_str().unwrap().contains("membership"));
}
