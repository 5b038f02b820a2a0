use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bessel-subord"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("BESSEL_SUBORD_THREADS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const SMALL: [&str; 6] = ["--N", "16", "--grid-radii", "0.5,0.9", "--grid-angles", "256"];

fn with_small<'a>(args: &[&'a str]) -> Vec<&'a str> {
    args.iter().copied().chain(SMALL).collect()
}

#[test]
fn eval_matches_closed_form() {
    let out = run(&[
        "eval",
        "--p",
        "0.5",
        "--b",
        "1",
        "--c",
        "1",
        "--z",
        "0.25,-0.3+0.2i",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows
        .iter()
        .all(|r| r.contains("sqrt(z) sin(sqrt(z))") && r.ends_with(",true")));
}

#[test]
fn eval_without_closed_form_still_succeeds() {
    let out = run(&["eval", "--kappa", "2.5+1i", "--c", "0.5", "--z", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn kappa_pole_is_a_usage_error() {
    let out = run(&["eval", "--kappa", "0", "--z", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_case_and_unknown_case_exit_2() {
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--case", "C9_9"]).status.code(), Some(2));
    assert_eq!(run(&["audit", "--phi", "w"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn passing_verify_exits_0() {
    let out = run(&with_small(&[
        "verify",
        "--case",
        "C2_4,recursion",
        "--p",
        "0.5",
        "--b",
        "1",
        "--c",
        "1",
        "--format",
        "json-lines",
    ]));
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("generated_unix"));
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true);
    }
}

#[test]
fn failing_verify_exits_1() {
    let out = run(&with_small(&["verify", "--case", "trig_chain_sinh", "--format", "csv"]));
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).lines().nth(2).unwrap().ends_with(",false"));
}

#[test]
fn audit_exit_codes_follow_violations() {
    let clean = run(&["audit", "--phi", "v", "--class", "H", "--format", "csv"]);
    assert_eq!(clean.status.code(), Some(0));
    let dirty = run(&["audit", "--phi", "v-u", "--class", "H", "--format", "csv"]);
    assert_eq!(dirty.status.code(), Some(1));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(dirty.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    let row = reader.records().next().unwrap().unwrap();
    let col = |name: &str| {
        row.get(header.iter().position(|h| h == name).unwrap())
            .unwrap()
            .to_string()
    };
    assert_eq!(col("min_k"), "2");
    assert_eq!(col("min_k_resolution"), "0.5");
}

#[test]
fn violations_csv_lists_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("violations.csv");
    let out = run(&["audit", "--phi", "v-u", "--violations", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "theta,k,L_re,L_im,phi_re,phi_im");
    let ks: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(!ks.is_empty());
    assert!(ks.iter().all(|&k| k < 2.0));
}

fn body(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    text.split_once('\n').unwrap().1.to_string()
}

#[test]
fn reports_are_identical_modulo_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for (i, threads) in ["1", "2"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.csv"));
        let args = with_small(&[
            "verify",
            "--case",
            "C2_4,C2_12",
            "--sweep",
            "default",
            "--format",
            "csv",
            "--out",
            path.to_str().unwrap(),
        ]);
        let status = bin()
            .args(&args)
            .env("BESSEL_SUBORD_THREADS", threads)
            .status()
            .unwrap();
        assert_ne!(status.code(), Some(2));
        bodies.push(body(&path));
    }
    assert!(!bodies[0].is_empty());
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "order = 12\nformat = \"json-lines\"\n\n[grid]\nradii = [0.5]\nangles = 256\n",
    )
    .unwrap();
    let cfg = config.to_str().unwrap();
    let from_config = run(&[
        "verify", "--config", cfg, "--case", "C2_4", "--p", "1", "--b", "1", "--c", "1",
    ]);
    assert_eq!(from_config.status.code(), Some(0));
    assert!(stdout(&from_config).lines().next().unwrap().starts_with('{'));
    let overridden = run(&[
        "verify", "--config", cfg, "--case", "C2_4", "--p", "1", "--b", "1", "--c", "1", "--format", "csv",
    ]);
    assert!(stdout(&overridden).lines().nth(1).unwrap().starts_with("case,params"));
}

#[test]
fn bad_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "ordr = 12\n").unwrap();
    let out = run(&["verify", "--config", config.to_str().unwrap(), "--case", "C2_4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--config", "/nonexistent/run.toml", "--case", "C2_4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_thread_count_exits_2() {
    let out = bin()
        .args(["eval", "--z", "0.1"])
        .env("BESSEL_SUBORD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
