//! The `arank` binary on the shipped fixtures.

use std::process::Command;

fn arank(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_arank"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn check_exits_one_on_failing_condition() {
    let (code, out, _) = arank(&["check", "examples/e1.instance"]);
    assert_eq!(code, 1);
    assert!(out.contains("mu-cum") && out.contains("X={a,b,c} Y={a,b}"));
    let (code, _, _) = arank(&["check", "examples/e1.instance", "--conditions=mu-subset,mu-pr,mu-a"]);
    assert_eq!(code, 0);
}

#[test]
fn json_output_is_byte_stable() {
    let args = ["represent", "examples/e1.instance", "--mode=transitive", "--depth=4", "--json"];
    let (code, a, _) = arank(&args);
    let (_, b, _) = arank(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["command"], "represent");
    assert_eq!(doc["artifacts"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn ctd_and_extend_on_e2() {
    let (code, out, _) = arank(&["ctd", "examples/e2.instance"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("satisfying worlds {a1,a2,b2,c1,d2}"));
    let (code, out, _) = arank(&["extend", "examples/e2.instance", "--json"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("declared cross edges are dropped"));
}

#[test]
fn fuzz_needs_no_instance() {
    let (code, out, _) = arank(&["fuzz", "--seed=1", "--budget=30", "--mode=smooth-transitive"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn input_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("arank-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.instance");
    std::fs::write(&bad, r#"{"points": ["a"], "mu": [{"set": ["a"], "mu": ["d"]}]}"#).unwrap();
    let (code, _, err) = arank(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown point `d`"), "{err}");
    let (code, _, _) = arank(&["check", "examples/missing.instance"]);
    assert_eq!(code, 2);
    let (code, _, _) = arank(&["ctd", "examples/e1.instance"]);
    assert_eq!(code, 2);
    let (code, _, _) = arank(&["nonsense"]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(dir).ok();
}
