use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tu-auction"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_d1_unit_level() {
    let out = run(&["solve", "--instance", &fixture("d1.tua"), "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("phi: 1\n"), "{text}");
    assert!(text.contains("x_star: e1\n"), "{text}");
    assert!(text.contains("check optimality: pass"), "{text}");
}

#[test]
fn solve_infeasible_level_exits_2() {
    let out = run(&["solve", "--instance", &fixture("d1.tua"), "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_1() {
    let out = run(&["solve", "--instance", "/nonexistent/x.tua", "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/x.tua"));
}

#[test]
fn malformed_file_exits_1() {
    let dir = std::env::temp_dir().join(format!("tu-auction-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.tua");
    std::fs::write(&path, "TU-AUCTION v1\nm 1 n 2\nA\n1 1\nb\n0\nc\n1 1\n").unwrap();
    let out = run(&["phi", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b must be nonzero"));
}

#[test]
fn verify_fixtures_pass() {
    for (name, kmax) in [("d1.tua", "1"), ("d2.tua", "2"), ("d4.tua", "2")] {
        let out = run(&["verify", "--instance", &fixture(name), "--kmax", kmax]);
        let text = stdout(&out);
        assert_eq!(out.status.code(), Some(0), "{name}:\n{text}");
        assert!(text.contains("status: pass"));
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn verify_reports_monopoly() {
    let out = run(&["verify", "--instance", &fixture("d3.tua"), "--kmax", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("monopoly: e1"), "{text}");
    assert!(text.contains("benchmarks: skipped"));
}

#[test]
fn bench_max_monopoly_is_unbounded() {
    let out = run(&["bench", "max", "--instance", &fixture("d3.tua"), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("unbounded"));
}

#[test]
fn bench_values_on_d2() {
    let max = stdout(&run(&["bench", "max", "--instance", &fixture("d2.tua"), "--k", "1", "--pruned"]));
    assert!(max.contains("mu: 6\n"), "{max}");
    assert!(max.contains("mu_tilde: 6\n"), "{max}");
    let min = stdout(&run(&["bench", "min", "--instance", &fixture("d2.tua"), "--k", "1"]));
    assert!(min.contains("nu: 6\n"), "{min}");
    assert!(min.contains("gamma: 6\n"), "{min}");
}

#[test]
fn phi_and_decompose() {
    let phi = stdout(&run(&["phi", "--instance", &fixture("d1.tua")]));
    assert!(phi.contains("grid: 0 1 3\n"), "{phi}");
    let split = run(&["decompose", "--instance", &fixture("d4.tua"), "--k", "3"]);
    assert_eq!(split.status.code(), Some(0));
    assert_eq!(stdout(&split).matches("piece ").count(), 3);
}

#[test]
fn check_subcommands() {
    let tu = stdout(&run(&["check", "tu", "--instance", &fixture("d2.tua")]));
    assert!(tu.contains("verdict: confirmed"), "{tu}");
    let mono = stdout(&run(&["check", "monopoly", "--instance", &fixture("d3.tua"), "--k", "1"]));
    assert!(mono.contains("verdict: monopoly"), "{mono}");
    assert!(mono.contains("column: e1"));
}

#[test]
fn presets_match_fixture_files() {
    for name in ["d1", "d2", "d3", "d4"] {
        let out = run(&["gen", "--preset", name]);
        assert_eq!(out.status.code(), Some(0));
        let on_disk = std::fs::read_to_string(fixture(&format!("{name}.tua"))).unwrap();
        assert_eq!(stdout(&out), on_disk, "{name}");
    }
}

#[test]
fn gen_random_is_deterministic() {
    let args = ["gen", "--random", "--nodes", "7", "--edges", "12", "--seed", "42", "--format", "kflow"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    assert!(a.starts_with("KFLOW v1"));
    let other = stdout(&run(&["gen", "--random", "--nodes", "7", "--edges", "12", "--seed", "43", "--format", "kflow"]));
    assert_ne!(a, other);
}

#[test]
fn gen_rejects_empty_graph() {
    let out = run(&["gen", "--random", "--edges", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_error_exits_1() {
    assert_eq!(run(&["solve"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}
