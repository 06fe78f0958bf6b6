use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_liberatrix"));
    c.env_remove("LIBERATRIX_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("liberatrix-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

// K1,4 with the center last and a triple eigenvalue at 0
const STAR_TRIPLE: &str = "5 5\n0 0 0 0 1\n0 0 0 0 1\n0 0 0 0 1\n0 0 0 0 1\n1 1 1 1 0\n";

const K4K1: &str = "5 5\n1 1 1 1 0\n1 1 1 1 0\n1 1 1 1 0\n1 1 1 1 0\n0 0 0 0 4\n";

#[test]
fn verify_rejects_triple_eigenvalue() {
    let m = scratch("star.txt", STAR_TRIPLE);
    let graph = scratch("star.edges", "5 4\n1 5\n2 5\n3 5\n4 5\n");
    let o = run(&["verify", "--graph", graph.to_str().unwrap(), "--matrix", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn verify_k4k1_lacks_ssp() {
    // Ψ is 4x10 of rank 3
    let m = scratch("k4k1.txt", K4K1);
    let o = run(&["verify", "--graph", "catalog:K4uK1", "--matrix", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("nullity 1"));
}

#[test]
fn libset_single_nonedge_is_not_enough() {
    let m = scratch("k4k1-libset.txt", K4K1);
    let path = m.to_str().unwrap();
    let pair = run(&["libset", "--graph", "catalog:K4uK1", "--matrix", path, "--beta", "3-5,4-5", "--full"]);
    assert_eq!(pair.status.code(), Some(0), "{}", stdout(&pair));
    let one = run(&["libset", "--graph", "catalog:K4uK1", "--matrix", path, "--beta", "4-5"]);
    assert_eq!(one.status.code(), Some(1), "{}", stdout(&one));
}

#[test]
fn liberated_matrix_round_trips() {
    let m = scratch("k4k1-lib.txt", K4K1);
    let out = m.with_file_name("k4k1-liberated.txt");
    let o = run(&[
        "liberate", "--graph", "catalog:K4uK1", "--matrix", m.to_str().unwrap(), "--beta", "3-5,4-5", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let edges = scratch("k4k1-plus.edges", "5 8\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n3 5\n4 5\n");
    let v = run(&["verify", "--graph", edges.to_str().unwrap(), "--matrix", out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn zero_forcing_number_prints() {
    let o = run(&["zf", "--graph", "catalog:P3xP4", "--number"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn missing_matrix_file_is_an_io_error() {
    let o = run(&["verify", "--graph", "catalog:K4uK1", "--matrix", "/nonexistent/m.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_identical() {
    let report = |jobs: &str| {
        let o = run(&["--seed", "7", "--jobs", jobs, "--json", "-", "reproduce", "k4k1"]);
        assert!(o.status.success(), "{}", stdout(&o));
        o.stdout
    };
    let first = report("1");
    assert_eq!(first, report("1"));
    assert_eq!(first, report("4"));
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn seed_from_environment() {
    let via_env = bin().env("LIBERATRIX_SEED", "11").args(["--json", "-", "reproduce", "k14"]).output().unwrap();
    let via_flag = run(&["--seed", "11", "--json", "-", "reproduce", "k14"]);
    assert_eq!(via_env.stdout, via_flag.stdout);
}

#[test]
fn reproduce_lists_targets() {
    let o = run(&["reproduce", "--list"]);
    let out = stdout(&o);
    for t in ["table6", "k4k1", "c6c8", "prism"] {
        assert!(out.lines().any(|l| l.trim() == t), "{t} missing from {out}");
    }
}

#[test]
fn unknown_reproduce_target_fails() {
    let o = run(&["reproduce", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}
