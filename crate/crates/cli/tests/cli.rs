use std::path::PathBuf;
use std::process::{Command, Output};

fn hmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmf")).args(args).output().expect("run hmf")
}

fn config(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn build_query_stats_spotcheck() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("d11.db");
    let db = db.to_str().unwrap();
    let cfg = config("q_d11.cfg");
    let o = hmf(&["build", "--field", &cfg, "--min-norm", "1", "--max-norm", "4", "--prime-bound", "40", "--out", db]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("records 3"));

    // deterministic rebuild
    let again = dir.path().join("again.db");
    let o = hmf(&["build", "--field", &cfg, "--max-norm", "4", "--prime-bound", "40", "--out", again.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(db).unwrap(), std::fs::read(&again).unwrap());

    let o = hmf(&["query", "--db", db, "--count"]);
    assert_eq!(stdout(&o).trim(), "3");
    let o = hmf(&["query", "--db", db, "dim=1", "norm=1", "--csv"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().nth(1).unwrap().starts_with("1.1.1.1-11-1.0.1-0,11,1"));
    let o = hmf(&["query", "--db", db, "norm=50..60", "--count"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = hmf(&["query", "--db", db, "colour=blue"]);
    assert_eq!(o.status.code(), Some(1));

    let hist = dir.path().join("hist.csv");
    let o = hmf(&["stats", "--db", db, "--histogram-out", hist.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&hist).unwrap(), "field_label,disc_E,count\n");

    let o = hmf(&["spotcheck", "--db", db, "--field", &cfg, "--samples", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("4 checked, 0 failed"));

    // a tampered eigenvalue is a verification failure
    let text = std::fs::read_to_string(db).unwrap().replacen("eigenvalues=[[-2]", "eigenvalues=[[-1]", 1);
    let bad = dir.path().join("bad.db");
    std::fs::write(&bad, text).unwrap();
    let o = hmf(&["spotcheck", "--db", bad.to_str().unwrap(), "--field", &cfg, "--samples", "6", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn crosscheck_and_usage_errors() {
    let o = hmf(&["crosscheck", "--level", "33", "--p", "3", "--q", "11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let o = hmf(&["crosscheck", "--level", "33", "--p", "3", "--q", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(hmf(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hmf(&["build", "--field", "/nonexistent.cfg", "--max-norm", "3", "--out", "/tmp/x"]).status.code(), Some(1));
    assert_eq!(hmf(&["--help"]).status.code(), Some(0));
    let o = hmf(&["query", "--db", "/nonexistent.db"]);
    assert_eq!(o.status.code(), Some(1));
}
