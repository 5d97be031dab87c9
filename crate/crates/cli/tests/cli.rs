use std::path::Path;
use std::process::{Command, Output};

fn wcspflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wcspflow"))
        .args(args)
        .output()
        .unwrap()
}

fn field<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key).map(str::trim))
}

fn gen(dir: &Path, family: &str, size: &str, seed: &str) -> String {
    let path = dir.join(format!("{family}-{seed}.wcsp"));
    let p = path.to_str().unwrap().to_string();
    let out = wcspflow(&["gen", family, "--size", size, "--seed", seed, "-o", &p]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    p
}

#[test]
fn solve_and_oracle_agree() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen(dir.path(), "round-robin", "3,1,2", "4");
    let oracle = wcspflow(&["oracle", &file]);
    assert_eq!(oracle.status.code(), Some(0));
    let oracle = String::from_utf8(oracle.stdout).unwrap();
    for level in ["none", "soic", "gac", "fdgac", "wedgac"] {
        let out = wcspflow(&["solve", &file, "--consistency", level]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(field(&text, "status "), Some("optimal"));
        assert_eq!(field(&text, "cost "), field(&oracle, "cost "));
    }
}

#[test]
fn gen_is_reproducible() {
    let a = wcspflow(&["gen", "sliding-stretch", "--size", "8", "--seed", "3"]);
    let b = wcspflow(&["gen", "sliding-stretch", "--size", "8", "--seed", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(wcspflow(&["solve"]).status.code(), Some(64));
    assert_eq!(wcspflow(&["gen", "no-such-family"]).status.code(), Some(64));
    assert_eq!(
        wcspflow(&["solve", "/no/such/file"]).status.code(),
        Some(64)
    );
    assert_eq!(wcspflow(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let dead = dir.path().join("dead.wcsp");
    std::fs::write(&dead, "wcsp dead\ntop 5\nvar x 0 1\nunary 0 5 7\n").unwrap();
    let dead = dead.to_str().unwrap();
    assert_eq!(wcspflow(&["solve", dead]).status.code(), Some(3));
    assert_eq!(wcspflow(&["oracle", dead]).status.code(), Some(3));

    let file = gen(dir.path(), "all-interval", "8", "0");
    let out = wcspflow(&["solve", &file, "--consistency", "none", "--nodes", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(wcspflow(&["oracle", &file]).status.code(), Some(2));
    let out = wcspflow(&["solve", &file, "--ub", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn suite_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = wcspflow(&[
        "suite",
        "--families",
        "latin-square,fair-schedule",
        "--levels",
        "gac,wedgac",
        "--seeds",
        "2",
        "--tiny",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,n,level,seed,optimum,nodes,ms");
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("latin-square"));
}
