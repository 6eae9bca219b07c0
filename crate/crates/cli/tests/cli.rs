//! End-to-end runs of the binary: flag handling, exit codes, report
//! formats, config-file merging, and byte-level determinism.

use std::process::{Command, Output};

fn bailey_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bailey-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn invert_check_sampled_trials_pass() {
    let out = bailey_lab(&[
        "invert-check",
        "--group",
        "A",
        "--rank",
        "2",
        "--box",
        "2,2",
        "--trials",
        "5",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert_eq!(
        stdout.matches("CHECK inversion A 2 2,2 pass\n").count(),
        5,
        "stdout: {stdout}"
    );
    assert_eq!(stdout.matches("PARAM ").count(), 5);
    // timing goes to stderr, never stdout
    assert!(!stdout.contains("ms"));
    assert!(stderr_of(&out).contains("finished in"));
}

#[test]
fn rank_zero_is_a_usage_error() {
    let out = bailey_lab(&["invert-check", "--group", "A", "--rank", "0", "--box", "2,2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("--rank"));
    assert!(stdout_of(&out).is_empty());
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = bailey_lab(&["invert-check", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(bailey_lab(&["--help"]).status.code(), Some(0));
    assert_eq!(bailey_lab(&["--version"]).status.code(), Some(0));
    assert_eq!(bailey_lab(&["invert-check", "--help"]).status.code(), Some(0));
}

#[test]
fn explicit_parameters_give_one_exact_report() {
    let out = bailey_lab(&[
        "invert-check",
        "--group",
        "A",
        "--rank",
        "1",
        "--box",
        "3",
        "--q",
        "1/2",
        "--a",
        "1/3",
        "--x",
        "1/3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "CHECK inversion A 1 3 pass\nPARAM q=1/2 a=1/3 x=1/3\n"
    );
}

#[test]
fn negative_explicit_values_parse() {
    let out = bailey_lab(&[
        "invert-check",
        "--group",
        "C",
        "--box",
        "2",
        "--q",
        "-1/2",
        "--x",
        "-2/5",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert_eq!(
        stdout_of(&out),
        "CHECK inversion C 1 2 pass\nPARAM q=-1/2 x=-2/5\n"
    );
}

#[test]
fn inadmissible_explicit_parameters_exit_two() {
    // a = 1 poles the starred matrix at the origin
    let out = bailey_lab(&[
        "invert-check",
        "--group",
        "A",
        "--box",
        "2",
        "--q",
        "1/2",
        "--a",
        "1",
        "--x",
        "1/3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = stdout_of(&out);
    assert!(stdout.starts_with("CHECK inversion A 1 2 inadmissible\n"));
    assert!(stdout.contains("POLE "));
}

#[test]
fn lemma_check_with_unit_coupling_is_inadmissible() {
    // beta * x_1 = 1 makes every step denominator (beta x_1; q)_N
    // vanish for N >= 1, whatever the seed pair
    let out = bailey_lab(&[
        "lemma-check",
        "--group",
        "C",
        "--rank",
        "1",
        "--box",
        "3",
        "--q",
        "1/2",
        "--x",
        "1/3",
        "--alpha",
        "2",
        "--beta",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = stdout_of(&out);
    assert!(stdout.starts_with("CHECK lemma C 1 3 inadmissible\n"));
    assert!(stdout.contains("POLE lemma[C] N=1: denominator (beta x_k; q)_1 = 0 at k=1"));
}

#[test]
fn lemma_check_admissible_explicit_parameters_pass() {
    let out = bailey_lab(&[
        "lemma-check",
        "--group",
        "C",
        "--rank",
        "1",
        "--box",
        "3",
        "--q",
        "1/2",
        "--x",
        "1/5",
        "--alpha",
        "2",
        "--beta",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(stdout.starts_with("CHECK lemma C 1 3 pass\n"));
    assert!(stdout.contains("PARAM q=1/2 x=1/5\n"));
    assert!(stdout.contains("PARAM alpha=2 beta=3\n"));
}

#[test]
fn chain_checks_every_link() {
    let out = bailey_lab(&[
        "chain",
        "--group",
        "A",
        "--rank",
        "1",
        "--box",
        "4",
        "--q",
        "1/2",
        "--a",
        "1/3",
        "--x",
        "1/3",
        "--step",
        "rho=2,sigma=3",
        "--step",
        "rho=5/2,sigma=7",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert_eq!(
        stdout_of(&out),
        "CHECK chain A 1 4 pass\n\
         PARAM q=1/2 a=1/3 x=1/3\n\
         PARAM rho=2 sigma=3\n\
         PARAM rho=5/2 sigma=7\n"
    );
}

#[test]
fn chain_without_steps_is_a_usage_error() {
    let out = bailey_lab(&["chain", "--group", "A", "--box", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("--step"));
}

#[test]
fn wrong_family_step_keys_are_usage_errors() {
    let out = bailey_lab(&[
        "chain",
        "--group",
        "C",
        "--box",
        "2",
        "--step",
        "rho=2,sigma=3",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let out = bailey_lab(&[
        "lemma-check",
        "--group",
        "A",
        "--box",
        "2",
        "--alpha",
        "2",
        "--beta",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("--rho/--sigma"));
}

#[test]
fn inapplicable_flags_are_usage_errors() {
    let out = bailey_lab(&[
        "invert-check",
        "--group",
        "A",
        "--box",
        "2",
        "--rho",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("--rho"));

    let out = bailey_lab(&["reduce-classical", "--box", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("--box"));
}

#[test]
fn pair_check_sampled_passes() {
    let out = bailey_lab(&[
        "pair-check",
        "--group",
        "C",
        "--rank",
        "2",
        "--box",
        "2,2",
        "--seed",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).starts_with("CHECK pair C 2 2,2 pass\n"));
}

#[test]
fn reduce_classical_explicit_and_sampled() {
    let out = bailey_lab(&["reduce-classical", "--q", "1/2", "--a", "1/3", "--bound", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "CHECK classical A 1 4 pass\nPARAM q=1/2 a=1/3 x=1\n"
    );

    let out = bailey_lab(&["reduce-classical", "--trials", "3", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert_eq!(stdout_of(&out).matches("CHECK classical A 1 6 pass\n").count(), 3);

    // a = 1 is a pole of the closed forms at the origin
    let out = bailey_lab(&["reduce-classical", "--q", "1/2", "--a", "1", "--bound", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn human_format_renders_prose() {
    let out = bailey_lab(&[
        "invert-check",
        "--group",
        "A",
        "--box",
        "3",
        "--q",
        "1/2",
        "--a",
        "1/3",
        "--x",
        "1/3",
        "--format",
        "human",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "check inversion (family A, rank 1, box 3): PASS\n  params: q=1/2 a=1/3 x=1/3\n"
    );
}

#[test]
fn bad_format_is_a_usage_error() {
    let out = bailey_lab(&["invert-check", "--group", "A", "--box", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("--format"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "lemma-check",
        "--group",
        "C",
        "--rank",
        "2",
        "--box",
        "2,2",
        "--trials",
        "3",
        "--seed",
        "42",
    ];
    let first = bailey_lab(&args);
    let second = bailey_lab(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    // thread count must not influence the bytes
    let serial = bailey_lab(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(first.stdout, serial.stdout);
}

#[test]
fn jobs_env_fallback_is_honored_and_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_bailey-lab"))
        .args(["invert-check", "--group", "A", "--box", "2", "--seed", "3"])
        .env("BAILEY_LAB_JOBS", "2")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    let out = Command::new(env!("CARGO_BIN_EXE_bailey-lab"))
        .args(["invert-check", "--group", "A", "--box", "2"])
        .env("BAILEY_LAB_JOBS", "zero")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("BAILEY_LAB_JOBS"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        "# shared run settings\n\
         group = A\n\
         rank = 1\n\
         box = 6\n\
         seed = 3\n\
         trials = 2\n\
         q = 1/2\n\
         a = 1/3\n\
         x = 1/3\n",
    )
    .expect("write config");
    let config_path = config.to_str().expect("utf-8 path");

    // config alone: explicit params, one report on box 6
    let out = bailey_lab(&["invert-check", "--config", config_path]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert_eq!(
        stdout_of(&out),
        "CHECK inversion A 1 6 pass\nPARAM q=1/2 a=1/3 x=1/3\n"
    );

    // a flag overrides the file's box
    let out = bailey_lab(&["invert-check", "--config", config_path, "--box", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "CHECK inversion A 1 4 pass\nPARAM q=1/2 a=1/3 x=1/3\n"
    );

    let out = bailey_lab(&["invert-check", "--config", "/nonexistent/nope.conf"]);
    assert_eq!(out.status.code(), Some(3));

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "wibble = 3\n").expect("write config");
    let out = bailey_lab(&["invert-check", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("wibble"));
}

#[test]
fn config_steps_feed_chains() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = dir.path().join("chain.conf");
    std::fs::write(
        &config,
        "group = A\nbox = 3\nq = 1/2\na = 1/3\nx = 1/3\nstep = rho=2,sigma=3\nstep = rho=7,sigma=-2\n",
    )
    .expect("write config");
    let out = bailey_lab(&["chain", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let stdout = stdout_of(&out);
    assert!(stdout.starts_with("CHECK chain A 1 3 pass\n"));
    assert!(stdout.contains("PARAM rho=7 sigma=-2\n"));
}

#[test]
fn output_file_receives_the_reports() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("reports.txt");
    let out = bailey_lab(&[
        "invert-check",
        "--group",
        "C",
        "--box",
        "3",
        "--q",
        "1/2",
        "--x",
        "1/3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).is_empty());
    let written = std::fs::read_to_string(&path).expect("output file");
    assert_eq!(written, "CHECK inversion C 1 3 pass\nPARAM q=1/2 x=1/3\n");
}

#[test]
fn box_rank_consistency_is_enforced() {
    let out = bailey_lab(&["invert-check", "--group", "A", "--rank", "2", "--box", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("disagrees"));

    let out = bailey_lab(&["invert-check", "--group", "A", "--box", "-1,2"]);
    assert_eq!(out.status.code(), Some(3));
}
