mod common;

use std::process::{Command, Output};

use common::problem_path;

fn ifd6(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifd6")).args(args).output().unwrap()
}

fn ex(name: &str) -> String {
    problem_path(name).display().to_string()
}

#[test]
fn solve_prints_one_csv_row() {
    let out = ifd6(&["solve", "--problem", &ex("ex02.prob"), "--J", "4", "--kappa"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("J,e2_exact"));
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "4");
    assert!(fields[1].ends_with("E-04"), "{}", fields[1]);
    assert!(fields[9].ends_with("E+02"), "{}", fields[9]);
}

#[test]
fn converge_is_deterministic() {
    let args = ["converge", "--problem", &ex("ex05.prob"), "--Jmin", "3", "--Jmax", "5", "--out", "md"];
    let (a, b) = (ifd6(&args), ifd6(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 5);
}

#[test]
fn solvers_agree_through_the_cli() {
    let row = |solver: &str| {
        let out = ifd6(&["solve", "--problem", &ex("ex04.prob"), "--J", "5", "--solver", solver]);
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(row("direct"), row("cg"));
}

#[test]
fn dump_has_header_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.txt");
    let out = ifd6(&["solve", "--problem", &ex("ex01.prob"), "--J", "3", "--dump-solution", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# ifd6 solution"));
    assert_eq!(lines.next(), Some("N1 = 8"));
    assert_eq!(lines.next(), Some("N2 = 8"));
    assert!(lines.next().unwrap().starts_with("bounds = "));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.len() == 9));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(ifd6(&["solve", "--problem", "/nonexistent.prob", "--J", "3"]).status.code(), Some(1));
    assert_eq!(ifd6(&["solve", "--problem", &ex("ex01.prob"), "--J", "0"]).status.code(), Some(1));
    assert_eq!(ifd6(&["solve", "--problem", &ex("ex01.prob"), "--J", "3", "--order", "7"]).status.code(), Some(1));
    assert_eq!(ifd6(&["converge", "--problem", &ex("ex01.prob"), "--Jmin", "5", "--Jmax", "4"]).status.code(), Some(1));
    assert_eq!(ifd6(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ifd6(&["--help"]).status.code(), Some(0));
}

#[test]
fn numerical_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.prob");
    std::fs::write(
        &path,
        "l1 = -1\nl2 = 1\nl3 = -1\nl4 = 1\npsi = x - 0.1\nf_plus = sqrt(x - 5)\nf_minus = 0\ng = 0\ng1 = 0\ng0 = 0\n",
    )
    .unwrap();
    let out = ifd6(&["solve", "--problem", path.to_str().unwrap(), "--J", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("domain"));
}
