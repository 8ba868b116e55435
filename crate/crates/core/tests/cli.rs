use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hamcube::io::{parse_instance, parse_path, parse_report};
use hamcube::verify::verify_path;

fn hamcube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamcube")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_solve_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst_file = dir.path().join("inst.txt");
    let path_file = dir.path().join("path.txt");
    let o = hamcube(&["gen", "--n", "7", "--seed", "11", "--out", path_str(&inst_file)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let inst = parse_instance(&fs::read_to_string(&inst_file).unwrap()).unwrap();
    assert_eq!(inst.m.len(), 8);
    assert_eq!(inst.seed, Some(11));

    let o = hamcube(&["solve", "--n-base", "5", "--in", path_str(&inst_file), "--out", path_str(&path_file)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (n, p) = parse_path(&fs::read_to_string(&path_file).unwrap()).unwrap();
    assert_eq!(n, inst.n);
    verify_path(n, &p, inst.x, inst.y, &inst.m).unwrap();

    let o = hamcube(&["verify", "--in", path_str(&inst_file), "--path", path_str(&path_file)]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "ok\n");
}

#[test]
fn verify_reports_a_broken_path() {
    let dir = tempfile::tempdir().unwrap();
    let inst_file = dir.path().join("inst.txt");
    let path_file = dir.path().join("path.txt");
    fs::write(&inst_file, "n=5\nx=00000\ny=10000\nM: 01000-01100\n").unwrap();
    assert_eq!(code(&hamcube(&["solve", "--in", path_str(&inst_file), "--out", path_str(&path_file)])), 0);
    let text = fs::read_to_string(&path_file).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let last = lines.len() - 1;
    lines.swap(3, last);
    fs::write(&path_file, lines.join("\n") + "\n").unwrap();
    let o = hamcube(&["verify", "--in", path_str(&inst_file), "--path", path_str(&path_file)]);
    assert_eq!(code(&o), 1);
    assert!(!o.stdout.is_empty());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.txt");
    assert_eq!(code(&hamcube(&["solve", "--in", path_str(&missing)])), 3);

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "n=5\nx=00000\ny=11000\n").unwrap();
    let o = hamcube(&["solve", "--in", path_str(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parity"));

    fs::write(&bad, "n=5\nx=0000\ny=10000\n").unwrap();
    let o = hamcube(&["solve", "--in", path_str(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"), "{}", String::from_utf8_lossy(&o.stderr));

    assert_eq!(code(&hamcube(&["solve", "--n-base", "4", "--in", path_str(&bad)])), 1);
    assert_eq!(code(&hamcube(&["no-such-command"])), 1);
    assert_eq!(code(&hamcube(&["--help"])), 0);

    // exact search at n = 6 cannot finish in one node
    let inst = dir.path().join("inst.txt");
    assert_eq!(code(&hamcube(&["gen", "--n", "6", "--seed", "3", "--out", path_str(&inst)])), 0);
    let o = hamcube(&["solve", "--node-cap", "1", "--in", path_str(&inst)]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn counterexample_small_cubes() {
    for n in ["3", "4", "5"] {
        let o = hamcube(&["counterexample", "--n", n]);
        assert_eq!(code(&o), 0);
        let text = String::from_utf8_lossy(&o.stdout);
        assert!(text.contains("nnc=true"));
        assert!(text.contains("# oracle: unsat"));
        let k: usize = n.parse().unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2 * k - 3);
    }
    let o = hamcube(&["counterexample", "--n", "4", "--x", "0000", "--y", "0011"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn sweep_reports_are_reproducible() {
    let run = || hamcube(&["sweep", "--n", "6", "--m", "5", "--trials", "40", "--seed", "9", "--n-base", "5"]);
    let (a, b) = (run(), run());
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let rep = parse_report(&String::from_utf8_lossy(&a.stdout)).unwrap();
    assert_eq!((rep.instances, rep.success), (40, 40));
    assert!(rep.max_runtime_ms.is_none());

    let timed = hamcube(&["sweep", "--n", "5", "--max-m", "1", "--timing"]);
    assert_eq!(code(&timed), 0);
    assert!(parse_report(&String::from_utf8_lossy(&timed.stdout)).unwrap().max_runtime_ms.is_some());
}

#[test]
fn cross_check_and_bench() {
    let o = hamcube(&["cross-check", "--n", "5", "--trials", "30", "--seed", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let o = hamcube(&["bench", "--n", "8", "--trials", "3", "--n-base", "5"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("failed=0"));
}
