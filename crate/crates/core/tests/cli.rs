use std::process::{Command, Output};

use parisian_hybrid::cli::{self, format_number, parse_grid};
use proptest::prelude::*;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_parisian-hybrid"));
    c.env_remove(cli::SEED_ENV);
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn ruin_grid_has_five_rows() {
    let o = run(&["ruin", "--model", "brownian", "--c", "1", "--sigma", "1", "--x", "0:2:0.5", "--r", "1", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 6);
    assert_eq!(column(&out, "x"), ["0", "0.5", "1", "1.5", "2"]);
    assert_eq!(column(&out, "ruin_probability")[0], "0.0360124891148");
}

#[test]
fn malformed_grid_names_the_flag() {
    let o = run(&["ruin", "--x", "2:0:0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--x"), "{}", stderr(&o));
    let o = run(&["exit", "--b", "1:2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--b"));
    let o = run(&["scale", "--q", "0:1:0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--q"));
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(run(&["ruin", "--c", "1", "--sigma", "0"]).status.code(), Some(2));
    assert_eq!(run(&["exit", "--x", "3", "--b", "2"]).status.code(), Some(2));
    assert_eq!(run(&["compare", "--identity", "th2", "--b", "2", "--a", "1"]).status.code(), Some(2));
    assert_eq!(run(&["compare", "--identity", "ruin-before-exit"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["ruin", "--config", "/nonexistent/file"]).status.code(), Some(2));
    let o = bin().args(["mc", "--identity", "th3", "--n", "10"]).env(cli::SEED_ENV, "abc").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(cli::SEED_ENV));
}

#[test]
fn quadrature_failure_exits_three() {
    let o = run(&[
        "delayed", "--method", "first-form", "--p", "0.5", "--s", "1", "--rel-tol", "1e-15", "--abs-tol", "1e-300", "--max-subdivisions", "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("quadrature"));
}

#[test]
fn failed_comparison_exits_one() {
    // A horizon shorter than any inspection truncates every path.
    let o = run(&["compare", "--identity", "ruin-probability", "--x", "0", "--horizon", "1e-6", "--n", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(column(&stdout(&o), "pass"), ["false"]);
    assert_eq!(column(&stdout(&o), "truncated_fraction"), ["1"]);
}

#[test]
fn single_comparison_passes() {
    let o = run(&[
        "compare", "--identity", "th2", "--model", "brownian", "--c", "1", "--x", "1", "--b", "2", "--r", "1", "--lambda", "1", "--q", "0", "--n",
        "1000000", "--seed", "42",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(column(&stdout(&o), "pass"), ["true"]);
}

#[test]
fn comparisons_are_reproducible() {
    let args = ["compare", "--identity", "lemma-w", "--model", "cl", "--x", "0:1:0.5", "--b", "2", "--q", "0.5", "--p", "1", "--n", "20000"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[&args[..], &["--seed", "1"]].concat());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn seed_from_the_environment() {
    let args = ["mc", "--identity", "th3", "--x", "0", "--n", "5000"];
    let env = bin().args(args).env(cli::SEED_ENV, "77").output().unwrap();
    let flag = run(&[&args[..], &["--seed", "77"]].concat());
    assert_eq!(env.stdout, flag.stdout);
    assert_eq!(column(&stdout(&env), "seed"), ["77"]);
    let both = bin().args(&[&args[..], &["--seed", "78"]].concat()).env(cli::SEED_ENV, "77").output().unwrap();
    assert_eq!(column(&stdout(&both), "seed"), ["78"]);
}

#[test]
fn flags_override_the_config_file() {
    let path = std::env::temp_dir().join(format!("parisian-hybrid-{}.cfg", std::process::id()));
    std::fs::write(&path, "# defaults\nmodel = cl\nx = 0:1:0.5\nr=2\n").unwrap();
    let o = run(&["ruin", "--config", path.to_str().unwrap(), "--r", "1"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(column(&out, "model"), ["cl", "cl", "cl"]);
    assert_eq!(column(&out, "r"), ["1", "1", "1"]);
    assert_eq!(column(&out, "x"), ["0", "0.5", "1"]);
}

#[test]
fn header_is_always_present() {
    for args in [
        &["scale", "--q", "0.5"][..],
        &["delayed", "--s", "0:1:0.5"],
        &["exit", "--model", "cl"],
        &["gerber-shiu", "--b", "2", "--y=-2:0:1"],
        &["lemma", "--b", "2"],
        &["mc", "--identity", "creeping", "--x=-0.5", "--q", "1", "--n", "100"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let out = stdout(&o);
        let header = out.lines().next().unwrap();
        assert!(header.starts_with("model,c,sigma,eta,mu,"), "{header}");
        let width = header.split(',').count();
        assert!(out.lines().all(|l| l.split(',').count() == width));
    }
}

#[test]
fn output_to_file() {
    let path = std::env::temp_dir().join(format!("parisian-hybrid-{}.csv", std::process::id()));
    let o = run(&["scale", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("model,c,sigma,eta,mu,q,x,phi,w,z\n"));
}

#[test]
fn in_process_runner_matches_the_binary() {
    let args = ["parisian-hybrid", "exit", "--q", "0:1:0.25"].map(String::from);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(cli::run(&args, &mut out, &mut err), 0);
    assert_eq!(out, run(&args[1..].iter().map(String::as_str).collect::<Vec<_>>()).stdout);
}

#[test]
fn numbers_carry_twelve_significant_digits() {
    assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
    assert_eq!(format_number(2.0 / 3.0 * 1e-7), "6.66666666667e-08");
    assert_eq!(format_number(123.0), "123");
    let o = run(&["scale", "--x", "1", "--q", "0.5"]);
    let w = &column(&stdout(&o), "w")[0];
    let digits = w.chars().filter(char::is_ascii_digit).collect::<String>();
    assert_eq!(digits.trim_start_matches('0').len(), 12, "{w}");
}

proptest! {
    #[test]
    fn formatted_numbers_round_trip(v in prop::num::f64::NORMAL) {
        let back: f64 = format_number(v).parse().unwrap();
        prop_assert!((back - v).abs() <= 5e-12 * v.abs());
    }

    #[test]
    fn grids_cover_their_range(start in -10.0f64..10.0, len in 0.0f64..10.0, step in 0.01f64..2.0) {
        let g = parse_grid(&format!("{start}:{}:{step}", start + len)).unwrap().0;
        prop_assert_eq!(g[0], start);
        prop_assert!(*g.last().unwrap() <= start + len + 1e-9 * step);
        prop_assert!(start + len - g.last().unwrap() < step * (1.0 + 1e-9));
    }
}
