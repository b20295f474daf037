use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittclasses")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn mul_in_icoh() {
    let o = run(&["mul", "--space", "bsl:5", "--theory", "icoh", "p2*b{1}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "tors(cb2^2*cb3)\n");
}

#[test]
fn ch2_and_bockstein() {
    let o = run(&["sq2", "--space", "bsl:4", "cb2^2 + cb3"]);
    assert_eq!(stdout(&o), "0\n");
    let o = run(&["sq2", "--space", "bsl:4", "cb2"]);
    assert_eq!(stdout(&o), "cb3\n");
    let o = run(&["beta", "--space", "bsl:5", "cb2*cb4"]);
    assert_eq!(stdout(&o), "tors(cb2*cb5 + cb3*cb4)\n");
    let o = run(&["rho", "--space", "bsl:4", "e4 + p2"]);
    assert_eq!(stdout(&o), "cb2^2 + cb4\n");
}

#[test]
fn syntax_errors_exit_2() {
    let o = run(&["mul", "--space", "bsl:5", "b{1,"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset 4"));
    assert_eq!(run(&["mul", "--space", "bsl:5", "q7"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["mul", "--field", "Q", "1"]).status.code(), Some(2));
}

#[test]
fn poincare_table() {
    let o = run(&["poincare", "--space", "bsl:5", "--theory", "icoh", "--max-degree", "5"]);
    assert_eq!(stdout(&o), "degree\tfree\ttorsion\n0\t1\t0\n3\t0\t1\n4\t1\t0\n5\t0\t1\n");
}

#[test]
fn degree_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_wittclasses"))
        .args(["mul", "--space", "bsl:3", "--theory", "chow", "c2^5"])
        .env("WITTCLASSES_MAX_DEGREE", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the cap 8"));
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "all"]);
    let b = run(&["verify", "all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().all(|l| l.starts_with("PASS ")));
    let o = run(&["verify", "relations", "--n", "5", "--field", "Fq3", "--max-degree", "12"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn split_check_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "[ring]\ngen h 1 4\ndim 3\nflags ambient_pn\n[sq2]\nsq2 h = h^2\n[bundle]\nrank 3\ntotal = 1 + 4*h^3\n").unwrap();
    let o = run(&["split-check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "VERDICT: OBSTRUCTED\nc_n = 4*h^3\nsq2_obstruction = 0\n");
}
