use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radial-itp"))
}

fn manifest(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, format!("schema_version = 1\n{body}")).unwrap();
    path
}

fn solve(config: &Path, extra: &[&str]) -> Output {
    bin().arg("solve").arg("--config").arg(config).args(extra).output().unwrap()
}

const HARMONIC: &str = r#"
[potential]
family = "harmonic"

[grid]
n_points = 801
r_max = 10.0

[solver]
dt = 1.0
n_states = 3

[output]
report = "report.json"
density = "dens"
"#;

#[test]
fn solve_writes_report_and_densities() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = manifest(dir.path(), "run.toml", HARMONIC);
    let out = solve(&cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("<r^-2>"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["schema_version"], 1);
    let states = report["runs"][0]["states"].as_array().unwrap();
    assert_eq!(states.len(), 3);
    for (n, s) in states.iter().enumerate() {
        let e = s["energy"].as_f64().unwrap();
        assert!((e - (2 * n) as f64 - 1.5).abs() < 1e-2);
        assert_eq!(s["nodes"], n);
        assert_eq!(s["converged"], true);
    }

    let csv = std::fs::read_to_string(dir.path().join("dens/state_2.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,psi,rdf,v_eff"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 801);
    assert!(rows.iter().all(|r| r.len() == 4));
    assert!((rows[800][0] - 10.0).abs() < 1e-9);
    assert!((rows[400][3] - 0.5 * rows[400][0] * rows[400][0]).abs() < 1e-12);
}

#[test]
fn zero_states_is_rejected_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = manifest(dir.path(), "run.toml", &HARMONIC.replace("n_states = 3", "n_states = 0"));
    let out = solve(&cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("solver.n_states"));
    assert!(!dir.path().join("report.json").exists());
    assert!(!dir.path().join("dens").exists());
}

#[test]
fn parse_errors_identify_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = manifest(dir.path(), "run.toml", &HARMONIC.replace("dt = 1.0", "dt = 1.0\nstep = 3"));
    let out = solve(&cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 12") && err.contains("step"), "{err}");
}

#[test]
fn unconverged_run_exits_nonzero_and_keeps_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let body = HARMONIC.replace("dt = 1.0", "dt = 1e-4\nmax_steps = 20");
    let cfg = manifest(dir.path(), "run.toml", &body);
    let out = solve(&cfg, &[]);
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["all_converged"], false);
    assert_eq!(report["runs"][0]["status"], "not_converged");
    assert_eq!(report["runs"][0]["states"].as_array().unwrap().len(), 1);
}

#[test]
fn seeded_sweeps_are_byte_identical_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"
[potential]
family = "spiked"
coupling = 1.0
exponent = 1.0

[grid]
n_points = 601

[solver]
dt = 1.0
n_states = 2
guess = "random"

[sweep]
parameter = "coupling"
values = [0.001, 0.1, 1.0, 10.0]

[output]
report = "REPORT"
density = "DENS"
"#;
    let mut texts = Vec::new();
    for (k, jobs) in ["1", "3", "3"].iter().enumerate() {
        let b = body
            .replace("REPORT", &format!("r{k}.json"))
            .replace("DENS", &format!("d{k}"));
        let cfg = manifest(dir.path(), &format!("m{k}.toml"), &b);
        let out = solve(&cfg, &["--jobs", jobs, "--seed", "17"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        texts.push(std::fs::read(dir.path().join(format!("r{k}.json"))).unwrap());
        assert!(dir.path().join(format!("d{k}/run_3_state_1.csv")).exists());
    }
    assert_eq!(texts[0], texts[1]);
    assert_eq!(texts[1], texts[2]);
    let csv = |k: usize| std::fs::read(dir.path().join(format!("d{k}/run_2_state_0.csv"))).unwrap();
    assert_eq!(csv(0), csv(1));
}

#[test]
fn compare_self_and_structural_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let a = manifest(dir.path(), "a.toml", &HARMONIC.replace("report.json", "a.json"));
    let b_body = HARMONIC
        .replace("report.json", "b.json")
        .replace("n_states = 3", "n_states = 5");
    let b = manifest(dir.path(), "b.toml", &b_body);
    assert!(solve(&a, &[]).status.success());
    assert!(solve(&b, &[]).status.success());
    let ja = dir.path().join("a.json");
    let jb = dir.path().join("b.json");

    let out = bin().arg("compare").arg(&ja).arg(&ja).args(["--tol", "0"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("max |dE| = 0e0"), "{text}");

    let out = bin().arg("compare").arg(&ja).arg(&jb).args(["--tol", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("only in b: 3, 4"), "{text}");

    let out = bin()
        .arg("compare")
        .arg(&ja)
        .arg(dir.path().join("missing.json"))
        .args(["--tol", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
