//! The `atomfib` binary end to end: output formats, exit codes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use atomfib_cli::Listing;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn atomfib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atomfib")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn text_and_json_agree() {
    let m = data("twisted_cubic.mat");
    let m = m.to_str().unwrap();
    let text = atomfib(&["atomic", m]);
    let json = atomfib(&["atomic", m, "--json"]);
    assert!(text.status.success() && json.status.success());
    let t = Listing::from_text(&stdout(&text)).unwrap();
    let j = Listing::from_json(&serde_json::from_str(&stdout(&json)).unwrap()).unwrap();
    assert_eq!(t, j);
    assert_eq!(t.entries.len(), 18);
}

#[test]
fn runs_are_deterministic() {
    let m = data("steinberger_3x3.mat");
    let a = atomfib(&["atomic", m.to_str().unwrap()]);
    let b = atomfib(&["atomic", m.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# 31 atomic fibers"));
}

#[test]
fn decompose_8_7() {
    let m = data("twisted_cubic.mat");
    let o = atomfib(&["decompose", m.to_str().unwrap(), "--rhs", "8,7", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["residual"], serde_json::json!([0, 0]));
    assert_eq!(v["atoms"].as_array().unwrap().len(), 2);
}

#[test]
fn rhs_domains_from_files() {
    let m = data("twisted_cubic.mat");
    let m = m.to_str().unwrap();
    let lat = data("lattice_2z_z.gens");
    let mon = data("orthant.gens");
    let o = atomfib(&["atomic", m, "--rhs-lattice", lat.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("# 13 atomic fibers"));
    let o = atomfib(&["atomic", m, "--rhs-monoid", mon.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("# 18 atomic fibers"));
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("atomfib-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.mat");
    std::fs::write(&bad, "2 2\n1 2\n").unwrap();
    let o = atomfib(&["atomic", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let m = data("twisted_cubic.mat");
    let o = atomfib(&["extended", m.to_str().unwrap(), "--budget", "3"]);
    assert_eq!(o.status.code(), Some(3));

    // two published partition counts disagree with enumeration
    let o = atomfib(&["bench", "partition"]);
    assert_eq!(o.status.code(), Some(2));
    let o = atomfib(&["bench", "steinberger"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::remove_dir_all(dir).ok();
}
