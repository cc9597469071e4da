//! End-to-end checks of the `b4` binary: pinned outputs, exit codes, and
//! byte determinism of CSV and suite output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn b4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_b4"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("b4-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir.join(name)
}

#[test]
fn transduce_builtin_state_map() {
    let out = b4(&["transduce", "--machine", "builtin:b4", "--state", "p", "--word", "(1)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0(1)\n");

    let out = b4(&["transduce", "--machine", "builtin:b4", "--state", "q", "--word", "0(1)"]);
    assert_eq!(stdout(&out), "00(1)\n");
}

#[test]
fn order_and_normal_form() {
    let out = b4(&["order", "--element", "pq"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "8\n");

    let out = b4(&["order", "--element", "pq", "--cap", "4"]);
    assert_eq!(stdout(&out), "EXCEEDS_CAP\n");

    let out = b4(&["normalform", "--element", "paq"]);
    assert_eq!(stdout(&out), "pb\n");

    let out = b4(&["normalform", "--element", "-"]);
    assert_eq!(stdout(&out), "I\n");
}

#[test]
fn metric_prints_exact_dyadic() {
    let out = b4(&["metric", "--x", "(1)", "--y", "111110(1)"]);
    assert_eq!(stdout(&out), "2^-5\n");

    let out = b4(&["metric", "--x", "1(10)", "--y", "11(01)"]);
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn orbit_csv_matches_basis_and_is_deterministic() {
    let args = ["orbit", "--start", "(1)", "--steps", "8", "--prefix", "3", "--csv"];
    let first = b4(&args);
    assert!(first.status.success());
    let text = stdout(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,u_k,x_k");
    assert_eq!(lines[1], "1,001,(1)");
    assert_eq!(lines[4], "4,110,0(1)");
    assert_eq!(lines[8], "8,111,00(1)");

    let second = b4(&args);
    assert_eq!(first.stdout, second.stdout);

    let full = b4(&["orbit", "--start", "(1)", "--steps", "2", "--csv"]);
    assert_eq!(stdout(&full), "k,word\n1,00(1)\n2,100(1)\n");
}

#[test]
fn verify_suite_exits_clean_and_is_deterministic() {
    let out = b4(&["verify", "--suite", "lemma56", "--max", "12"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lemma56:n=12:(v) PASS"));
    assert!(text.ends_with("SUMMARY 60/60 checks passed\n"));

    let again = b4(&["verify", "--suite", "lipschitz", "--max", "16"]);
    let once_more = b4(&["verify", "--suite", "lipschitz", "--max", "16"]);
    assert!(again.status.success());
    assert_eq!(again.stdout, once_more.stdout);
}

#[test]
fn suite_all_covers_every_operation() {
    let out = b4(&["verify", "--suite", "all", "--max", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains(" FAIL "));
    for marker in [
        "lemma31:",
        "cor32:",
        "lemma41:",
        "klein:",
        "lemma52:",
        "lemma55:order",
        "lemma55:conjugate",
        "lemma56:",
        "lipschitz:",
        "sequential:",
        "orbit:iterate",
        "orbit:metric",
        "orbit:density",
        "orbit:transitivity",
        "algebra:normalform",
        "algebra:equal",
        "algebra:growth",
        "SUMMARY ",
    ] {
        assert!(text.contains(marker), "missing {marker}");
    }
}

#[test]
fn compose_minimize_transduce_files() {
    let src = scratch("b4p.machine");
    let composed = scratch("pp.machine");
    let minimized = scratch("ppmin.machine");
    std::fs::write(&src, format!("{}start p\n", b4_core::b4::B4_MACHINE_FILE))
        .expect("write machine file");

    let out = b4(&[
        "compose",
        "--machines",
        &format!("{},{}", src.display(), src.display()),
        "--out",
        composed.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = b4(&[
        "minimize",
        "--machine",
        composed.to_str().unwrap(),
        "--out",
        minimized.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "states: 16 -> 1\n");

    let out = b4(&[
        "transduce",
        "--machine",
        minimized.to_str().unwrap(),
        "--state",
        "s0",
        "--word",
        "01(10)",
    ]);
    assert_eq!(stdout(&out), "01(10)\n");
}

#[test]
fn enumerate_emits_growth_csv() {
    let out = b4(&["enumerate", "--max-len", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "L,count\n0,1\n1,4\n2,9\n");
}

#[test]
fn errors_exit_two() {
    let out = b4(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));

    let out = b4(&["transduce", "--machine", "/nonexistent", "--state", "p", "--word", "(1)"]);
    assert_eq!(out.status.code(), Some(2));

    let out = b4(&["transduce", "--machine", "builtin:b4", "--state", "z", "--word", "(1)"]);
    assert_eq!(out.status.code(), Some(2));

    let out = b4(&["order", "--element", "pqx"]);
    assert_eq!(out.status.code(), Some(2));

    let out = b4(&["metric", "--x", "(1)", "--y", "(2)"]);
    assert_eq!(out.status.code(), Some(2));
}
