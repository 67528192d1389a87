//! Drives the `bench` binary end to end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hessfree_bench::config::Format;
use hessfree_bench::summary::read_summary;
use hessfree_bench::trace::{Trace, COLUMNS, RNG_NAME};
use tempfile::TempDir;

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bench"))
        .args(args)
        .output()
        .expect("bench binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("bench.toml");
    fs::write(&path, body).unwrap();
    path
}

const SWEEP: &str = r#"
[run]
problems = ["nonconvex-quadratic:d=5"]
solvers = ["accnc", "gd"]
eps = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3]
seeds = [0, 1, 2]
"#;

fn traces_in(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
}

#[test]
fn run_writes_one_trace_per_entry_and_a_summary() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), SWEEP);
    let o = bench(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let traces = traces_in(&out.join("traces"));
    assert_eq!(traces.len(), 30);
    for path in &traces {
        let text = fs::read_to_string(path).unwrap();
        let mut lines = text.lines();
        let comment = lines.next().unwrap();
        assert!(comment.starts_with(&format!("# rng={RNG_NAME} seed=")));
        assert_eq!(lines.next().unwrap(), COLUMNS.join(","));

        let trace = Trace::read(path).unwrap();
        assert!(!trace.rows.is_empty());
        // Counters are cumulative.
        for w in trace.rows.windows(2) {
            assert!(w[1].grad_calls >= w[0].grad_calls && w[1].hvp_calls >= w[0].hvp_calls);
        }
        let last = trace.rows.last().unwrap();
        assert!(last.grad_norm <= last.eps);
        // Writing the parsed trace back gives the same bytes.
        let mut again = Vec::new();
        trace.write_csv(&mut again).unwrap();
        assert_eq!(String::from_utf8(again).unwrap(), text);
    }

    let summary = read_summary(&out.join("summary.csv")).unwrap();
    assert_eq!(summary.len(), 10);
    for row in &summary {
        assert_eq!(row.runs, 3);
        assert_eq!(row.success_rate, 1.0);
        assert!(row.slope.is_some());
    }

    let fit = bench(&["fit", "--summary", out.join("summary.csv").to_str().unwrap()]);
    assert!(fit.status.success());
    let stdout = String::from_utf8(fit.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
    assert!(stdout.lines().nth(1).unwrap().starts_with("nonconvex-quadratic:d=5,accnc,"));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SWEEP);
    let mut dirs = Vec::new();
    for name in ["a", "b"] {
        let out = tmp.path().join(name);
        let o = bench(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seeds", "4,5"]);
        assert!(o.status.success());
        dirs.push(out);
    }
    let a = traces_in(&dirs[0].join("traces"));
    let b = traces_in(&dirs[1].join("traces"));
    assert_eq!(a.len(), 20);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.file_name(), y.file_name());
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
    }
    let sa: Vec<_> = read_summary(&dirs[0].join("summary.csv")).unwrap().iter().map(|r| r.without_wallclock()).collect();
    let sb: Vec<_> = read_summary(&dirs[1].join("summary.csv")).unwrap().iter().map(|r| r.without_wallclock()).collect();
    assert_eq!(sa, sb);
}

#[test]
fn json_output_round_trips() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("json");
    let cfg = write_config(tmp.path(), SWEEP);
    let o = bench(&[
        "run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(),
        "--format", "json", "--solvers", "gd", "--eps", "1e-2", "--seeds", "0",
    ]);
    assert!(o.status.success());
    let traces = traces_in(&out.join("traces"));
    assert_eq!(traces.len(), 1);
    assert_eq!(traces[0].extension().unwrap(), Format::Json.extension());
    let trace = Trace::read(&traces[0]).unwrap();
    assert_eq!(trace.rng, RNG_NAME);
    assert!(trace.rows.iter().all(|r| r.phase == "gd"));
    let summary = read_summary(&out.join("summary.json")).unwrap();
    assert_eq!(summary.len(), 1);
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let out = out.to_str().unwrap();

    // Unknown key in the config.
    let bad = write_config(tmp.path(), "[run]\nproblems = [\"quadratic\"]\nsolvers = [\"gd\"]\neps = [0.1]\ncolour = 1\n");
    assert_eq!(bench(&["run", "--config", bad.to_str().unwrap(), "--out", out]).status.code(), Some(2));

    // Strict-saddle on a problem without the tag.
    let bad = write_config(tmp.path(), "[run]\nproblems = [\"rosenbrock\"]\nsolvers = [\"strict-saddle\"]\neps = [0.1]\n");
    assert_eq!(bench(&["run", "--config", bad.to_str().unwrap(), "--out", out]).status.code(), Some(2));

    // Missing file.
    let missing = tmp.path().join("nope.toml");
    assert_eq!(bench(&["run", "--config", missing.to_str().unwrap()]).status.code(), Some(2));

    // Inner smoothness too small for the proximal model: the inner AGD diverges.
    let failing = write_config(
        tmp.path(),
        "[run]\nproblems = [\"quadratic:d=5:kappa=10\"]\nsolvers = [\"acagd-only\"]\neps = [1e-3]\n[solver]\ninner_smoothness = \"l1\"\n",
    );
    let o = bench(&["run", "--config", failing.to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("acagd"));
    // The failed run still leaves an (empty) trace and a summary row.
    let summary = read_summary(&tmp.path().join("out/summary.csv")).unwrap();
    assert_eq!(summary[0].successes, 0);

    let ok = write_config(tmp.path(), "[run]\nproblems = [\"quadratic:d=5:kappa=10\"]\nsolvers = [\"acagd-only\"]\neps = [1e-3]\n");
    assert_eq!(bench(&["run", "--config", ok.to_str().unwrap(), "--out", out]).status.code(), Some(0));
    // The same switch from the command line.
    let o = bench(&["run", "--config", ok.to_str().unwrap(), "--out", out, "--inner-smoothness", "l1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = bench(&["run", "--config", ok.to_str().unwrap(), "--out", out, "--eig-backend", "qr"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gradient_descent_scales_like_inverse_eps_squared() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("gd");
    let cfg = write_config(
        tmp.path(),
        r#"
[run]
problems = ["random-nonconvex:d=20:decades=6"]
solvers = ["gd"]
eps = [1e-2, 3e-3, 1e-3, 3e-4]
seeds = [0, 1]
dense_check = false
"#,
    );
    let o = bench(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let summary = read_summary(&out.join("summary.csv")).unwrap();
    let slope = summary[0].slope.unwrap();
    assert!((slope - 2.0).abs() <= 0.3, "slope {slope}");
}
