//! End-to-end behavior of the `uqg` binary: exit codes, stdin input,
//! determinism, and the canon round trip.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_uqg"))
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = bin();
    cmd.args(args).stdout(Stdio::piped()).stderr(Stdio::piped());
    if stdin.is_some() {
        cmd.stdin(Stdio::piped());
    } else {
        cmd.stdin(Stdio::null());
    }
    let mut child = cmd.spawn().unwrap();
    if let Some(text) = stdin {
        child.stdin.as_mut().unwrap().write_all(text.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn payload(out: &Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    v["payload"].clone()
}

#[test]
fn classify_au_via_stdin_and_file_agree() {
    let text = std::fs::read_to_string(fixture("diag_4_1.json")).unwrap();
    let a = run(&["classify", "au", "--matrix", &fixture("diag_4_1.json")], None);
    let b = run(&["classify", "au"], Some(&text));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_is_deterministic() {
    let args = ["fusion", "verify", "--n", "3", "--max-len", "5"];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_json_exits_one() {
    let out = run(&["classify", "au"], Some("not json"));
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "error");
    assert_eq!(v["code"], "invalid_matrix");
}

#[test]
fn non_square_matrix_exits_one() {
    let out = run(&["classify", "au"], Some(r#"{"n":2,"data":[[[1,0]],[[0,0],[1,0]]]}"#));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unsupported_decomposition_exits_two() {
    let q = r#"{"n":3,"data":[[[1,0],[1,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[2,0]]]}"#;
    let out = run(&["decompose", "au"], Some(q));
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "unsupported");
}

#[test]
fn canon_au_round_trips_through_isomorphic() {
    let out = run(&["canon", "au", "--matrix", &fixture("diag_4_1.json")], None);
    assert_eq!(out.status.code(), Some(0));
    let canon = serde_json::to_string(&payload(&out)["matrix"]).unwrap();
    let iso = run(
        &["isomorphic", "au", "--matrix", &fixture("diag_4_1.json")],
        Some(&canon),
    );
    assert_eq!(iso.status.code(), Some(0));
    assert_eq!(payload(&iso)["isomorphic"], true);
}

#[test]
fn canon_bu_round_trips_through_isomorphic() {
    let t1 = r#"{"n":2,"data":[[[0,0],[1,0]],[[-1,0],[0,0]]]}"#;
    let path = std::env::temp_dir().join("uqg_canon_bu_t1.json");
    std::fs::write(&path, t1).unwrap();
    let out = run(&["canon", "bu", "--matrix", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let canon = serde_json::to_string(&payload(&out)["matrix"]).unwrap();
    let iso = run(
        &["isomorphic", "bu", "--matrix", path.to_str().unwrap()],
        Some(&canon),
    );
    assert_eq!(iso.status.code(), Some(0));
    assert_eq!(payload(&iso)["isomorphic"], true);
}

#[test]
fn fusion_product_with_dims_balances() {
    let out = run(&["fusion", "product", "ab", "ba", "--n", "4"], None);
    assert_eq!(out.status.code(), Some(0));
    let p = payload(&out);
    assert_eq!(p["dim_product"], p["dim_sum"]);
    let words: Vec<&str> = p["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["word"].as_str().unwrap())
        .collect();
    assert!(words.contains(&"abba"));
}

#[test]
fn decompose_bu_accepts_partition_flag() {
    let q = r#"{"n":4,"data":[
        [[0,0],[1,0],[0,0],[0,0]],
        [[-1,0],[0,0],[0,0],[0,0]],
        [[0,0],[0,0],[1,0],[0,0]],
        [[0,0],[0,0],[0,0],[1,0]]]}"#;
    let out = run(
        &["decompose", "bu", "--partition", "[[0,1],[2,3]]"],
        Some(q),
    );
    assert_eq!(out.status.code(), Some(0));
    let atoms = payload(&out)["atoms"].as_array().unwrap().len();
    assert_eq!(atoms, 2);
}

#[test]
fn unknown_subcommand_fails() {
    let out = run(&["frobnicate"], None);
    assert_ne!(out.status.code(), Some(0));
}
