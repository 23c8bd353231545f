//! Contract tests for the `dworklab` binary: stable exit codes, versioned
//! JSON-lines output, CSV projection, and thread-count determinism, all
//! exercised through a real spawned process.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dworklab"));
    cmd.args(args);
    // Keep spawned processes hermetic: the thread env var is part of the
    // contract under test, so clear it unless a test sets it explicitly.
    cmd.env_remove("DWORKLAB_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout_lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|line| serde_json::from_str(line).expect("every stdout line is JSON"))
        .collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exits normally")
}

#[test]
fn classify_emits_a_versioned_record() {
    let out = run(&["classify", "--n", "4", "--N", "5"]);
    assert_eq!(code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 1);
    let rec = &lines[0];
    assert_eq!(rec["schema"], "dworklab/1");
    assert_eq!(rec["n"], 4);
    assert_eq!(rec["N"], 5);
    assert_eq!(rec["p"], 2);
    assert_eq!(rec["verdict"], "S5");
    assert_eq!(rec["order"], "120");
    assert_eq!(rec["inv_form_dim"], 1);
}

#[test]
fn classify_resolves_the_larger_moduli() {
    let out = run(&["classify", "--n", "4", "--N", "7"]);
    assert_eq!(code(&out), 0);
    let rec = &stdout_lines(&out)[0];
    assert_eq!(rec["verdict"], "O+4(F8)");
    assert_eq!(rec["order"], "508032");
    assert_eq!(rec["form_type"], "plus");

    let out = run(&["classify", "--n", "2", "--N", "7"]);
    assert_eq!(code(&out), 0);
    let rec = &stdout_lines(&out)[0];
    assert_eq!(rec["verdict"], "D14");
    assert_eq!(rec["order"], "14");
}

#[test]
fn classify_rejects_bad_parameters_with_a_usage_exit() {
    let out = run(&["classify", "--n", "4", "--N", "6"]);
    assert_eq!(code(&out), 64);
    assert!(out.stdout.is_empty(), "no data on a usage error");
    assert!(!out.stderr.is_empty(), "the reason goes to stderr");
}

#[test]
fn count_resource_refusals_exit_3() {
    let out = run(&["count", "quintic", "--t", "2", "--q", "41"]);
    assert_eq!(code(&out), 3);
    let rec = &stdout_lines(&out)[0];
    assert_eq!(rec["good"], false);
    assert!(
        rec["skip_reason"].as_str().unwrap().contains("37"),
        "the refusal names the budget"
    );
}

#[test]
fn count_skips_are_data_not_errors() {
    // A content skip (bad reduction) still exits 0.
    let out = run(&["count", "hyperD", "--t", "1", "--q", "11"]);
    assert_eq!(code(&out), 0);
    let rec = &stdout_lines(&out)[0];
    assert_eq!(rec["good"], false);
    assert!(rec["skip_reason"].is_string());
}

#[test]
fn count_trinomial_matches_the_hand_count() {
    // 4x^5 + 1 over F_3 factors as (x + 1)(x^4 - x^3 + x^2 - x + 1): one root.
    let out = run(&["count", "trinomial", "--n", "4", "--t", "0", "--q", "3"]);
    assert_eq!(code(&out), 0);
    let rec = &stdout_lines(&out)[0];
    assert_eq!(rec["schema"], "dworklab/1");
    assert_eq!(rec["count"], 1);
    assert_eq!(rec["good"], true);
}

#[test]
fn count_rejects_a_non_prime_power_field_size() {
    let out = run(&["count", "zt", "--n", "4", "--t", "2", "--q", "12"]);
    assert_eq!(code(&out), 64);
}

#[test]
fn verify_exit_code_reflects_failures() {
    // The t^5 surface comparison holds everywhere on the default grid.
    let out = run(&["verify", "isogeny"]);
    assert_eq!(code(&out), 0);

    // Widening to both variants surfaces the false comparison at q = 11.
    let out = run(&["verify", "isogeny", "--variant", "both"]);
    assert_eq!(code(&out), 1);
    let lines = stdout_lines(&out);
    let b_fail = lines
        .iter()
        .find(|r| r["identity"] == "isogeny-B" && r["q"] == 11)
        .expect("the q = 11 comparison is reported");
    assert_eq!(b_fail["pass"], false);
    assert!(lines
        .iter()
        .any(|r| r["identity"] == "isogeny-A-t5" && r["q"] == 11 && r["pass"] == true));
    let summary = lines.last().unwrap();
    assert_eq!(summary["type"], "summary");
    assert!(summary["fail"].as_u64().unwrap() >= 1);
}

#[test]
fn verify_streams_one_record_per_place_plus_a_summary() {
    let out = run(&["verify", "reci", "--n", "4", "--t", "2", "--q-max", "30"]);
    assert_eq!(code(&out), 0);
    let lines = stdout_lines(&out);
    // Prime powers up to 30: 2,3,4,5,7,8,9,11,13,16,17,19,23,25,27,29.
    assert_eq!(lines.len(), 16 + 1);
    for rec in &lines[..16] {
        assert_eq!(rec["schema"], "dworklab/1");
        assert_eq!(rec["identity"], "reci");
    }
    let qs: Vec<u64> = lines[..16]
        .iter()
        .map(|r| r["q"].as_u64().unwrap())
        .collect();
    let mut sorted = qs.clone();
    sorted.sort_unstable();
    assert_eq!(qs, sorted, "reports stream in field-size order");
}

#[test]
fn csv_output_is_a_projection_of_the_same_reports() {
    let json_out = run(&["verify", "dtotal", "--q", "7,13"]);
    assert_eq!(code(&json_out), 0);
    let csv_out = run(&["verify", "dtotal", "--q", "7,13", "--format", "csv"]);
    assert_eq!(code(&csv_out), 0);
    let text = String::from_utf8_lossy(&csv_out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "header plus one row per place");
    assert!(lines[0].starts_with("schema,identity,"));
    assert!(lines[1].starts_with("dworklab/1,dtotal,"));
    // The summary moves to stderr in CSV mode.
    assert!(String::from_utf8_lossy(&csv_out.stderr).contains("pass="));
}

#[test]
fn thread_count_never_changes_the_bytes() {
    let one = run(&["--threads", "1", "verify", "reci", "--n", "4", "--t", "3", "--q-max", "60"]);
    let four = run(&["--threads", "4", "verify", "reci", "--n", "4", "--t", "3", "--q-max", "60"]);
    assert_eq!(code(&one), 0);
    assert_eq!(code(&four), 0);
    assert_eq!(one.stdout, four.stdout, "byte-identical across thread counts");

    let via_env = run_with_env(
        &["verify", "reci", "--n", "4", "--t", "3", "--q-max", "60"],
        &[("DWORKLAB_THREADS", "3")],
    );
    assert_eq!(code(&via_env), 0);
    assert_eq!(via_env.stdout, one.stdout, "env-configured pool matches");
}

#[test]
fn rational_parameters_parse_as_fractions() {
    let out = run(&["count", "zt", "--n", "4", "--t", "3/2", "--q", "7"]);
    assert_eq!(code(&out), 0);
    let rec = &stdout_lines(&out)[0];
    assert_eq!(rec["t"], "3/2");
    assert_eq!(rec["good"], true);
    // 3/2 = 5 in F_7; the count matches the integer specialization.
    let spec = run(&["count", "zt", "--n", "4", "--t", "5", "--q", "7"]);
    let spec_rec = &stdout_lines(&spec)[0];
    assert_eq!(rec["count"], spec_rec["count"]);
}

#[test]
fn unknown_subcommands_are_usage_errors() {
    let out = run(&["verify", "fermat"]);
    assert_eq!(code(&out), 64);
    let out = run(&["count", "cubic", "--t", "2", "--q", "5"]);
    assert_eq!(code(&out), 64);
}
