use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use degsnd::format::{parse_solution, write_instance};
use degsnd_core::generate::{gen_random, RandomParams};
use degsnd_core::Instance;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("degsnd").chain(args.iter().copied());
    let code = degsnd::run(argv, &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = run(&[&["gen"], args].concat());
    assert_eq!(out.code, 0, "{}", out.stderr);
    put(dir, name, &out.stdout)
}

#[test]
fn solve_k4_pipeline() {
    let dir = TempDir::new().unwrap();
    let k4 = gen(&dir, "k4.inst", &["k4", "--bound", "1"]);
    let out = run(&["solve", p(&k4)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let sol = parse_solution(&out.stdout).unwrap();
    assert!(sol.cost <= degsnd_core::rational::int(4));
    let sol_path = put(&dir, "k4.sol", &out.stdout);
    let verify = run(&["verify", p(&k4), p(&sol_path)]);
    assert_eq!(verify.code, 0);
    assert!(verify.stdout.ends_with("overall status=pass\n"));
}

#[test]
fn solve_error_codes() {
    let dir = TempDir::new().unwrap();
    let malformed = put(&dir, "bad.inst", "vertices 4\nedge 0 1\n");
    let out = run(&["solve", p(&malformed)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 2"));

    let infeasible = put(&dir, "inf.inst", "vertices 2\nedge 0 1 1\nreq 0 1 2\n");
    let out = run(&["solve", p(&infeasible)]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("LP infeasible"));
    assert!(out.stdout.is_empty());

    assert_eq!(run(&["solve", p(&dir.path().join("missing.inst"))]).code, 2);
    let out_of_range = put(&dir, "range.inst", "vertices 4\nedge 0 9 1\n");
    let out = run(&["solve", p(&out_of_range)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("vertex id out of range"));
}

#[test]
fn verify_outcomes() {
    let dir = TempDir::new().unwrap();
    let k4 = gen(&dir, "k4.inst", &["k4"]);
    let star = put(&dir, "star.sol", "cost 3\npick 0\npick 1\npick 2\n");
    assert_eq!(run(&["verify", p(&k4), p(&star)]).code, 0);

    // without edge 2 (0-3) vertex 3 is cut off
    let short = put(&dir, "short.sol", "cost 2\npick 0\npick 1\n");
    let out = run(&["verify", p(&k4), p(&short)]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("pair u=0 v=3 required=1 achieved=0 status=fail"));
    assert!(out.stderr.contains("pair (0, 3)"));

    let unknown = put(&dir, "unknown.sol", "cost 1\npick 99\n");
    let out = run(&["verify", p(&k4), p(&unknown)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("99"));

    let lying = put(&dir, "lying.sol", "cost 1\npick 0\npick 1\npick 2\n");
    let out = run(&["verify", p(&k4), p(&lying)]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("declared cost 1"));
}

#[test]
fn lp_values() {
    let dir = TempDir::new().unwrap();
    let k4 = gen(&dir, "k4.inst", &["k4", "--bound", "1"]);
    let out = run(&["lp", p(&k4)]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().next(), Some("2"));

    let bare = gen(&dir, "bare.inst", &["cycle", "--n", "5", "--rho", "0"]);
    assert_eq!(run(&["lp", p(&bare)]).stdout, "0\nsupport 0\n");

    let inf = put(&dir, "inf.inst", "vertices 2\nedge 0 1 1\nreq 0 1 2\n");
    let out = run(&["lp", p(&inf)]);
    assert_eq!((out.code, out.stdout.as_str()), (1, "infeasible\n"));

    let big = gen(&dir, "big.inst", &["path", "--n", "13"]);
    assert_eq!(run(&["lp", p(&big), "--enumerate-cuts"]).code, 2);
    assert_eq!(run(&["lp", p(&big)]).stdout, "12\nsupport 12\n");
}

#[test]
fn lp_enumeration_agrees_on_small_instances() {
    let dir = TempDir::new().unwrap();
    let mut files = vec![
        gen(&dir, "k4.inst", &["k4", "--bound", "1"]),
        gen(&dir, "c6.inst", &["cycle", "--n", "6", "--rho", "2"]),
        gen(&dir, "p5.inst", &["path", "--n", "5", "--cost", "3/2"]),
    ];
    for seed in 0..12 {
        let n = (4 + seed % 5).to_string();
        files.push(gen(
            &dir,
            &format!("r{seed}.inst"),
            &["random", "--n", &n, "--m", "11", "--seed", &seed.to_string()],
        ));
    }
    for f in files {
        let generated = run(&["lp", p(&f)]);
        let enumerated = run(&["lp", p(&f), "--enumerate-cuts"]);
        assert_eq!(generated.code, 0);
        assert_eq!(
            generated.stdout.lines().next(),
            enumerated.stdout.lines().next(),
            "{}",
            fs::read_to_string(&f).unwrap()
        );
    }
}

#[test]
fn gen_outputs_and_errors() {
    let out = run(&["gen", "petersen"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().filter(|l| l.starts_with("edge")).count(), 15);
    assert_eq!(run(&["gen", "cube"]).code, 2);
    assert_eq!(run(&["gen", "cycle"]).code, 2);
    assert_eq!(run(&["gen", "random", "--n", "5"]).code, 2);
    assert_eq!(run(&["gen", "k4", "--cost", "-1"]).code, 2);

    let a = run(&["gen", "random", "--n", "6", "--m", "10", "--seed", "9"]);
    let b = run(&["gen", "random", "--n", "6", "--m", "10", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn brute_force_command() {
    let dir = TempDir::new().unwrap();
    let k4 = gen(&dir, "k4.inst", &["k4", "--bound", "1"]);
    let out = run(&["brute", p(&k4)]);
    assert_eq!((out.code, out.stdout.as_str()), (1, "infeasible\n"));
    let out = run(&["brute", p(&k4), "--relax", "1"]);
    assert_eq!(out.code, 0);
    assert_eq!(parse_solution(&out.stdout).unwrap().cost, degsnd_core::rational::int(3));

    let mut b = Instance::builder(24);
    for i in 0..23 {
        b = b.unit_edge(i, i + 1);
    }
    let long = put(&dir, "long.inst", &write_instance(&b.build().unwrap()));
    let out = run(&["brute", p(&long)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("23 edges"));
}

#[test]
fn trace_and_dump_files() {
    let dir = TempDir::new().unwrap();
    let inst = gen_random(&RandomParams::new(7, 12, 2, 0.7), 5).unwrap();
    let path = put(&dir, "r.inst", &write_instance(&inst));
    let trace = dir.path().join("run.log");
    let dump = dir.path().join("root.lp");
    let out = run(&["solve", p(&path), "--trace", p(&trace), "--dump-lp", p(&dump), "--seed", "77"]);
    assert_eq!(out.code, 0, "{}", out.stderr);

    let shown = run(&["trace", p(&trace)]);
    assert_eq!(shown.code, 0);
    assert!(shown.stdout.contains("strictly decreasing"));

    let lp = fs::read_to_string(&dump).unwrap();
    assert!(lp.starts_with("\\ residual cut LP"));
    assert!(lp.contains("Subject To") && lp.ends_with("End\n"));

    let text = fs::read_to_string(&trace).unwrap();
    let last = text.lines().last().unwrap().to_string();
    let stalled = put(&dir, "stalled.log", &format!("{text}{}\n", last.replace("iteration=", "iteration=9")));
    assert_eq!(run(&["trace", p(&stalled)]).code, 1);
    let broken = put(&dir, "broken.log", "start active=1\n");
    assert_eq!(run(&["trace", p(&broken)]).code, 2);
}

#[test]
fn help_version_and_usage() {
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("solve"));
    assert_eq!(run(&["--version"]).code, 0);
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["solve"]).code, 2);
    assert_eq!(run(&["brute", "x", "--relax", "minus"]).code, 2);
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let k4 = gen(&dir, "k4.inst", &["k4"]);
    let bin = env!("CARGO_BIN_EXE_degsnd");
    let ok = Command::new(bin).args(["solve", p(&k4)]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout).unwrap().starts_with("cost "));
    let usage = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
