//! End-to-end behavior of the `nct` binary: exit codes, output formats,
//! config-file handling, and the file-based pipelines.

use std::io::Write;
use std::process::{Command, Output};

fn nct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nct"))
        .args(args)
        .output()
        .expect("spawn nct")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_json_verdict() {
    let v = stdout_json(&nct(&["classify", "--matrix", "1,1,1,2", "--theta", "1/5"]));
    assert_eq!(v["verdict"], "chaotic_shallow");
    assert_eq!(v["spectral"]["trace"], 3);
    assert_eq!(v["theta"], "1/5");
}

#[test]
fn classify_identity_exits_zero_nonchaotic() {
    let out = nct(&["classify", "--matrix", "1,0,0,1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "nonchaotic_finite_order_shallow");
    assert_eq!(v["spectral"]["matrix_order"], 1, "finite order serializes as a number");
    // no evidence and no rational-theta warning for a theorem-decided case
    assert!(String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn usage_errors_exit_two() {
    // unknown flag
    let out = nct(&["classify", "--matrix", "1,1,1,2", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // non-unimodular matrix
    let out = nct(&["classify", "--matrix", "1,0,0,2"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed matrix
    let out = nct(&["classify", "--matrix", "1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    // theta outside [0, 1/2]
    let out = nct(&["afl", "--matrix", "1,1,1,2", "--theta", "7/8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_tsv_carries_verdict_and_citations() {
    let out = nct(&["--out", "tsv", "classify", "--matrix", "1,1,1,2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# verdict\tchaotic_shallow"));
    assert!(text.contains("chaotic-implies-shallow"));
}

#[test]
fn sweep_tsv_has_expected_columns() {
    let out = nct(&["--out", "tsv", "sweep", "--max-entry", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "a\tb\tc\td\ttrace\tclass\torder\tlambda_decimal\tentropy_nats\tentropy_bits\tchaotic"
    );
    // 20 determinant-1 matrices with entries in [-1, 1]
    assert_eq!(lines.count(), 20);
}

#[test]
fn sweep_json_is_one_object_per_line() {
    let out = nct(&["sweep", "--max-entry", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut count = 0;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("NDJSON line");
        assert!(v["matrix"]["a"].is_i64());
        count += 1;
    }
    assert_eq!(count, 20);
}

#[test]
fn simulate_brudno_file_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let word_path = dir.path().join("orbit.nctw");
    // beyond the trustworthiness horizon the checked path must refuse...
    let out = nct(&[
        "--seed", "9", "simulate", "--matrix", "1,1,1,2", "--grid", "4", "--steps", "4096",
        "--words-out", word_path.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("precision budget"));
    // ...and the lattice flag produces the exact orbit of the quantized seed
    let out = nct(&[
        "--seed",
        "9",
        "simulate",
        "--matrix",
        "1,1,1,2",
        "--grid",
        "4",
        "--steps",
        "4096",
        "--lattice",
        "--words-out",
        word_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["alphabet"], 16);
    assert_eq!(v["seed"], 9);

    let header = std::fs::read(&word_path).unwrap();
    assert_eq!(&header[0..4], b"NCTW");

    let out = nct(&["brudno", "--input", word_path.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["length"], 4096);
    assert_eq!(v["label"], "compression proxy (upper bound)");
    let direct = v["rate_bits_per_symbol"].as_f64().unwrap();
    assert!(direct > 0.0);

    let out = nct(&["brudno", "--input", word_path.to_str().unwrap(), "--binary"]);
    let v = stdout_json(&out);
    assert_eq!(v["length"], 4 * 4096);
    assert_eq!(v["alphabet"], 2);
}

#[test]
fn simulate_exact_point_is_deterministic_text() {
    let out = nct(&[
        "--out",
        "tsv",
        "simulate",
        "--matrix",
        "1,1,1,2",
        "--grid",
        "2",
        "--steps",
        "9",
        "--point",
        "1/2,1/2",
    ]);
    assert!(out.status.success());
    let w = String::from_utf8(out.stdout).unwrap().trim().to_string();
    assert_eq!(w.len(), 9);
    // period-3 rational orbit: symbols repeat with period 3
    let b = w.as_bytes();
    for i in 0..6 {
        assert_eq!(b[i], b[i + 3]);
    }
}

#[test]
fn entropy_profile_rows() {
    let out = nct(&[
        "--seed",
        "4",
        "entropy",
        "--matrix",
        "1,1,1,2",
        "--grid",
        "2",
        "--samples",
        "2000",
        "--maxn",
        "6",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["unit"], "bits");
    assert_eq!(v["seed"], 4);
}

#[test]
fn nats_flag_rescales() {
    let bits = stdout_json(&nct(&[
        "afl", "--matrix", "1,0,0,1", "--theta", "1/5", "--partition", "weyl2", "--maxn", "2",
    ]));
    let nats = stdout_json(&nct(&[
        "--nats", "afl", "--matrix", "1,0,0,1", "--theta", "1/5", "--partition", "weyl2", "--maxn",
        "2",
    ]));
    let hb = bits["rows"][0]["h_bits"].as_f64().unwrap();
    let hn = nats["rows"][0]["h_bits"].as_f64().unwrap();
    assert!((hb - 1.0).abs() < 1e-9);
    assert!((hn - std::f64::consts::LN_2).abs() < 1e-9);
    assert_eq!(nats["unit"], "nats");
}

#[test]
fn rational_theta_warns_on_stderr() {
    let out = nct(&["afl", "--matrix", "1,1,1,2", "--theta", "1/5", "--partition", "weyl2", "--maxn", "2"]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("rational theta"), "stderr: {err}");
    // irrational theta stays quiet
    let out = nct(&["afl", "--matrix", "1,1,1,2", "--theta", "0.4142135623730950488", "--partition", "weyl2", "--maxn", "2"]);
    assert!(out.status.success());
    assert!(!String::from_utf8_lossy(&out.stderr).contains("rational theta"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("nct.conf");
    let mut f = std::fs::File::create(&cfg_path).unwrap();
    writeln!(f, "# defaults for the run").unwrap();
    writeln!(f, "seed = 123").unwrap();
    writeln!(f, "out = tsv").unwrap();
    writeln!(f, "trace-mode = hyperbolic").unwrap();
    drop(f);

    // config supplies seed/out/trace-mode
    let out = nct(&[
        "--config",
        cfg_path.to_str().unwrap(),
        "sweep",
        "--max-entry",
        "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("a\tb\tc"), "config out=tsv applies");

    // explicit flag beats the config
    let out = nct(&[
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        "json",
        "sweep",
        "--max-entry",
        "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_start().starts_with('{'), "flag out=json overrides config");

    // hyperbolic trace mode from config: trace -3 counts as chaotic
    let out = nct(&[
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        "json",
        "classify",
        "--matrix",
        "-1,-1,-1,-2",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "chaotic_shallow");
    assert_eq!(v["spectral"]["trace_mode"], "hyperbolic");
}

#[test]
fn depth_cache_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("table.nctd");
    let run1 = stdout_json(&nct(&[
        "depth", "--string", "0000", "--significance", "1", "--max-prog-len", "12", "--budget",
        "4096", "--cache", cache.to_str().unwrap(),
    ]));
    assert!(cache.exists());
    let run2 = stdout_json(&nct(&[
        "depth", "--string", "0000", "--significance", "1", "--max-prog-len", "12", "--budget",
        "4096", "--cache", cache.to_str().unwrap(),
    ]));
    assert_eq!(run1, run2, "cached run must be bit-identical");
    assert_eq!(run1["k_upper_bound"], 9);
    assert_eq!(run1["canonical_program"], "010010010");
    assert_eq!(run1["bracket"]["lower"], 13);
    assert_eq!(run1["bracket"]["upper"], 13);
}

#[test]
fn report_attaches_full_panel_even_for_chaotic() {
    let out = nct(&[
        "report",
        "--matrix",
        "1,1,1,2",
        "--theta",
        "1/5",
        "--brudno-length",
        "2048",
        "--brudno-seeds",
        "2",
        "--afl-maxn",
        "2",
        "--depth-max-prog-len",
        "12",
        "--depth-budget",
        "512",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "chaotic_shallow");
    assert!(v["evidence"]["afl"].is_object());
    assert!(v["evidence"]["brudno"].is_object());
    assert!(v["evidence"]["depth"].is_object());
    assert_eq!(
        v["evidence"]["brudno"]["label"],
        "compression proxy (upper bound)"
    );
    assert_eq!(
        v["evidence"]["afl"]["label"],
        "finite-n lower-bound proxy over a fixed partition family; not a limit"
    );
}

#[test]
fn parabolic_classify_attaches_evidence_lazily() {
    // parabolic: no theorem decides, so evidence arrives without --evidence
    let out = nct(&[
        "classify",
        "--matrix",
        "1,1,0,1",
        "--brudno-length",
        "2048",
        "--brudno-seeds",
        "2",
        "--afl-maxn",
        "2",
        "--depth-max-prog-len",
        "12",
        "--depth-budget",
        "512",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "nonchaotic_parabolic_indeterminate");
    assert!(v["evidence"]["brudno"].is_object());
    // chaotic without --evidence: theorems short-circuit
    let v = stdout_json(&nct(&["classify", "--matrix", "1,1,1,2"]));
    assert!(v["evidence"].get("brudno").is_none());
}
