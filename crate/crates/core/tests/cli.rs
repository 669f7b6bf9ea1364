use std::process::{Command, Output};

use multiplihedra::export::import_json;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiplihedra")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count() {
    let o = run(&["count", "8"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "5814\n");
    assert_eq!(stdout(&run(&["count", "9"])), "25674\n");
}

#[test]
fn verify_prints_summary() {
    let o = run(&["verify", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "21 vertices, 13 facets, OK\n");
    let o = run(&["verify", "3", "--brute-force", "--weights", "1,2,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "6 vertices, 6 facets, OK\n");
}

#[test]
fn coords() {
    assert_eq!(stdout(&run(&["coords", "1"])), "=(x)\t()\n");
    let out = stdout(&run(&["coords", "3", "--q", "1/3"]));
    assert_eq!(out.lines().count(), 6);
    assert!(out.contains("=(=(x) =(=(x) =(x)))\t(2, 1)\n"));
    assert!(out.contains("=((x (x x)))\t(2/3, 1/3)\n"));
}

#[test]
fn boundary_q_needs_flag() {
    let o = run(&["coords", "4", "--q", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--quotient"));
    let o = run(&["coords", "4", "--q", "1", "--quotient"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("5 distinct points (expected 5)\n"));
    let o = run(&["coords", "4", "--q", "1/2", "--quotient"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_arguments() {
    assert_eq!(run(&["coords", "3", "--q", "one half"]).status.code(), Some(2));
    assert_eq!(run(&["coords", "3", "--weights", "1,x,1"]).status.code(), Some(2));
    assert_eq!(run(&["coords", "3", "--weights", "1,0,1"]).status.code(), Some(2));
    assert_eq!(run(&["coords", "3", "--weights", "1,1"]).status.code(), Some(2));
    assert_eq!(run(&["coords", "3", "--q", "3/2"]).status.code(), Some(2));
    assert_eq!(run(&["export", "3", "--format", "svg"]).status.code(), Some(2));
}

#[test]
fn facets_listing() {
    let out = stdout(&run(&["facets", "4"]));
    assert_eq!(out.lines().count(), 13);
    assert!(out.contains("u(2;2,2): x2 <= 4"));
}

#[test]
fn exports() {
    assert_eq!(stdout(&run(&["export", "2", "--format", "polymake"])), "POINTS\n1 1/2\n1 1\n");
    let off = stdout(&run(&["export", "4", "--format", "off"]));
    assert!(off.starts_with("OFF\n21 13 32\n"));
    let json = stdout(&run(&["export", "3", "--format", "json", "--q", "2/3"]));
    let bundle = import_json(&json).unwrap();
    assert_eq!(bundle.points.len(), 6);
    assert!(bundle.hull.unwrap().passed());
}

#[test]
fn metric() {
    let out = stdout(&run(&["metric", "3", "--tree", "=(=(x) =(=(x) =(x)))"]));
    assert!(out.contains("(e2)/1 = (e3)/1"));
    assert!(out.contains("free lengths: 2"));
    assert!(out.contains("interior point: 1/6, 1/6, 1/12, 1/12"));
    let out = stdout(&run(&["metric", "3", "--facets"]));
    assert!(out.contains("u(2;2,1)\t=(=(x x) =(x)) [1, 1/2]"));
    assert!(out.contains("(tie, leftmost edge chosen)"));
    assert_eq!(run(&["metric", "4", "--tree", "=(x x x)"]).status.code(), Some(2));
}

#[test]
fn enumerate() {
    assert_eq!(stdout(&run(&["enumerate", "4"])).lines().count(), 21);
    assert_eq!(stdout(&run(&["enumerate", "3", "--faces"])).lines().count(), 13);
}
