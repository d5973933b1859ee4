use std::process::{Command, Output};

fn autk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn autk_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autk"))
        .args(args)
        .env("AUTK_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_passing_family_exits_zero() {
    let o = autk(&[
        "verify",
        "--family",
        "metacyclic_odd",
        "--p",
        "3",
        "--m",
        "2",
        "--n",
        "2",
        "--r",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["manifest"]["command"], "verify");
    assert_eq!(v["result"]["report"]["orders"]["autk_oracle"], 54);
    assert_eq!(v["result"]["aut_order"], 486);
}

#[test]
fn mismatch_writes_report_and_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = autk(&[
        "verify",
        "--family",
        "metacyclic_odd",
        "--p",
        "3",
        "--m",
        "2",
        "--n",
        "1",
        "--r",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["report"]["orders"]["autk_oracle"], 18);
    assert_eq!(v["result"]["report"]["checks"]["equals_oracle"], false);
}

#[test]
fn invalid_parameters_exit_two() {
    for args in [
        &["verify", "--family", "G3", "--p", "4"][..],
        &["verify", "--family", "G3", "--p", "3"],
        &["verify", "--family", "nonsense", "--p", "5"],
        &[
            "build",
            "--family",
            "metacyclic_odd",
            "--p",
            "3",
            "--m",
            "2",
            "--n",
            "1",
            "--r",
            "2",
        ],
        &["verify", "--family", "G3"],
        &["frobnicate"],
    ] {
        assert_eq!(autk(args).status.code(), Some(2), "{args:?}");
    }
    let o = autk_env(&["fuzz", "--count", "1"], "zero");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_three() {
    let o = autk(&["verify", "--family", "G7", "--p", "5", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn empty_table_is_header_only() {
    let o = autk(&["table", "--family", "", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 1);
    assert!(s.starts_with("schema,family,p,"));
}

#[test]
fn table_csv_rows() {
    let o = autk(&[
        "table",
        "--family",
        "metacyclic_odd",
        "--p",
        "3",
        "--m",
        "2",
        "--n",
        "2",
        "--format",
        "csv",
    ]);
    // (2,1,1) disagrees with the decomposition, so the run reports a mismatch.
    assert_eq!(o.status.code(), Some(4));
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("1,metacyclic_odd,3,2,1,1,,27,1,6,6,18,18,54,3,"));
    assert!(rows[2].starts_with("1,metacyclic_odd,3,2,2,1,,81,3,18,54,54,54,486,9,yes,yes,"));
}

#[test]
fn build_reports_fingerprint() {
    let o = autk(&["build", "--family", "G1", "--p", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["order"], 625);
    assert_eq!(v["result"]["fingerprint"]["order"], 625);
    assert_eq!(v["manifest"]["specs"][0]["kind"], "G1");
}

#[test]
fn output_is_byte_identical_across_thread_counts() {
    let args = ["fuzz", "--seed", "9", "--count", "20", "--max-order", "60"];
    let a = autk_env(&args, "1");
    let b = autk_env(&args, "4");
    let c = autk(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v = autk_env(&["verify", "--family", "G2", "--p", "5", "--skip-aut"], "1");
    let w = autk_env(&["verify", "--family", "G2", "--p", "5", "--skip-aut"], "3");
    assert_eq!(v.stdout, w.stdout);
    assert_eq!(v.status.code(), w.status.code());
}

#[test]
fn fuzz_writes_counterexamples_next_to_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("summary.json");
    let o = autk(&[
        "fuzz",
        "--seed",
        "42",
        "--count",
        "100",
        "--max-order",
        "200",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(summary["result"]["passed"], 98);
    assert_eq!(summary["result"]["failed"], 2);
    let mut files: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files, ["fuzz-42-3.json", "fuzz-42-48.json", "summary.json"]);
    let ce: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fuzz-42-48.json")).unwrap()).unwrap();
    assert_eq!(ce["result"]["instance"]["order"], 192);
    assert!(ce["result"]["group"].is_object());
}

#[test]
fn text_format_names_the_verdict() {
    let o = autk(&["verify", "--family", "G1", "--p", "5", "--format", "text", "--skip-aut"]);
    let s = stdout(&o);
    assert!(s.contains("G1(p=5)"));
    assert!(s.contains("verdict:"));
}
