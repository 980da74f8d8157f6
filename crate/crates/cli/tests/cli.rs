//! End-to-end runs of the binary against the shipped fixtures, asserting
//! the documented exit codes: 0 for answers, 1 for domain failures, 2 for
//! file and usage problems.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name);
    path.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polynet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("polynet-{}-{name}", std::process::id()))
}

#[test]
fn show_prints_the_canonical_fixpoint() {
    let out = run(&["show", &data("running.pn")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        text,
        "place x\nplace y\nplace z\n\
         trans alpha : x -> y+z\ntrans beta : 2*y -> z\n\
         marking init : 2*x+2*y\n"
    );
    let parsed = polynet::netfile::parse_net(&text).unwrap();
    assert_eq!(parsed.render(), text);
}

#[test]
fn reach_reports_the_example_graph() {
    let out = run(&[
        "reach",
        &data("running.pn"),
        "--marking",
        "init",
        "--max-depth",
        "10",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("7 markings, 8 arrows\n"), "got: {text}");
    assert!(text.contains("\n4*z\n"));
}

#[test]
fn reach_writes_byte_identical_dot() {
    let a = scratch("a.dot");
    let b = scratch("b.dot");
    for path in [&a, &b] {
        let out = run(&[
            "reach",
            &data("running.pn"),
            "--marking",
            "init",
            "--dot",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let first = fs::read_to_string(&a).unwrap();
    let second = fs::read_to_string(&b).unwrap();
    assert!(first.starts_with("digraph reduction {"));
    assert!(first.contains("label=\"alpha\""));
    assert_eq!(first, second);
    let _ = fs::remove_file(a);
    let _ = fs::remove_file(b);
}

#[test]
fn fire_walks_and_reports_each_step() {
    let out = run(&[
        "fire",
        &data("running.pn"),
        "--marking",
        "init",
        "--seq",
        "alpha,beta",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "2*x+2*y\n  alpha @ x+2*y -> x+3*y+z\n  beta @ x+y+z -> x+y+2*z\n"
    );
}

#[test]
fn blocked_transitions_are_domain_errors() {
    let out = run(&[
        "fire",
        &data("running.pn"),
        "--marking",
        "init",
        "--seq",
        "beta,beta",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("'beta' is not enabled"), "got: {err}");
    assert!(err.contains("missing 2*y"));
}

#[test]
fn equiv_answers_both_ways_with_exit_zero() {
    let yes = run(&[
        "equiv",
        &data("running.pn"),
        "--marking",
        "init",
        "--seq1",
        "alpha,beta",
        "--seq2",
        "beta,alpha",
    ]);
    assert!(yes.status.success());
    assert_eq!(stdout(&yes), "equivalent\n");

    let no = run(&[
        "equiv",
        &data("running.pn"),
        "--marking",
        "init",
        "--seq1",
        "alpha",
        "--seq2",
        "beta",
    ]);
    assert!(no.status.success());
    assert_eq!(stdout(&no), "not equivalent\n");
}

#[test]
fn class_lists_the_three_interleavings() {
    let out = run(&[
        "class",
        &data("running.pn"),
        "--marking",
        "init",
        "--seq",
        "alpha,alpha,beta,beta",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "class size 3\n  alpha,alpha,beta,beta\n  alpha,beta,alpha,beta\n  beta,alpha,alpha,beta\n"
    );
}

#[test]
fn translate_prints_each_presentation() {
    let comm = run(&["translate", &data("running.pn"), "--to", "comm"]);
    assert!(comm.status.success());
    assert!(stdout(&comm).contains("rule alpha : x -> y+z"));

    let poly2 = run(&["translate", &data("running.pn"), "--to", "poly2"]);
    assert!(poly2.status.success());
    let text = stdout(&poly2);
    assert!(text.contains("cell tau(x,y) : x.y -> y.x"));
    assert!(text.contains("cell alpha : x -> y.z"));
    // The base presentation has no diagonal crossings.
    assert!(!text.contains("tau(x,x)"));

    let poly3 = run(&["translate", &data("running.pn"), "--to", "poly3"]);
    assert!(poly3.status.success());
    let text = stdout(&poly3);
    assert!(text.contains("2-cell x"));
    assert!(text.contains("3-cell beta : 2*y -> z"));
}

#[test]
fn lift_emits_a_circuit_that_pi_accepts() {
    let out = run(&[
        "lift",
        &data("running.pn"),
        "--marking",
        "init",
        "--seq",
        "alpha,beta",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("x.x.y.y\n"));
    assert!(text.contains("# pi round-trip: ok"));

    // The printed circuit loads straight back into the projection command.
    let circ = scratch("lifted.circ");
    fs::write(&circ, &text).unwrap();
    let back = run(&[
        "pi",
        &data("running.pn"),
        "--circuit",
        circ.to_str().unwrap(),
    ]);
    assert!(back.status.success());
    let text = stdout(&back);
    assert!(text.starts_with("2*x+2*y\n"));
    assert!(text.contains("alpha @"));
    assert!(text.contains("beta @"));
    let _ = fs::remove_file(circ);
}

#[test]
fn pi_projects_the_crossing_fixture() {
    let out = run(&[
        "pi",
        &data("running.pn"),
        "--circuit",
        &data("crossed.circ"),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x+y\n  alpha @ y -> 2*y+z\n");
}

#[test]
fn normalize_cancels_the_crossing_pair() {
    let out = run(&[
        "normalize",
        &data("running.pn"),
        "--circuit",
        &data("cancel.circ"),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "# 2 slices -> 0 slices\nx.y\n");
}

#[test]
fn file_problems_exit_with_code_two() {
    let bad = scratch("bad.pn");
    fs::write(&bad, "frobnicate x\n").unwrap();
    let out = run(&["show", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"));
    let _ = fs::remove_file(&bad);

    let undeclared = scratch("undeclared.pn");
    fs::write(&undeclared, "place x\ntrans t : 2*q -> x\n").unwrap();
    let out = run(&["show", undeclared.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("'q' is not declared"));
    let _ = fs::remove_file(&undeclared);

    let out = run(&["show", "/no/such/file.pn"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["reach", &data("running.pn"), "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_references_exit_with_code_one() {
    let out = run(&[
        "reach",
        &data("running.pn"),
        "--marking",
        "nope",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no marking named 'nope'"));

    let out = run(&[
        "fire",
        &data("running.pn"),
        "--marking",
        "init",
        "--seq",
        "gamma",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no transition named 'gamma'"));
}

#[test]
fn the_check_suites_pass_on_the_example() {
    for suite in ["comm", "2d", "3d", "eh"] {
        let out = run(&["check", &data("running.pn"), "--thm", suite]);
        assert!(out.status.success(), "suite {suite} failed: {}", stderr(&out));
        assert!(stdout(&out).contains("ok:"));
    }
}
