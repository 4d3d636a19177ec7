//! End-to-end tests of the `treeprof` binary: output formats, closed-form
//! spot checks, the determinism contract (reruns and worker counts), the
//! manifest digest, exit codes, and the range-refusal path.

use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_treeprof"));
    // Tests control the cache explicitly; never inherit one from the
    // environment.
    cmd.env_remove("TREEPROF_CACHE_DIR");
    cmd
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary launched")
}

fn run_expect(args: &[&str], code: i32) -> Output {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "args {:?}\nstdout:\n{}\nstderr:\n{}",
        args,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone())
        .expect("utf-8 stdout")
        .lines()
        .map(str::to_string)
        .collect()
}

fn manifest_of(data: &Path) -> serde_json::Value {
    let path = data.with_extension(format!(
        "{}.manifest.json",
        data.extension().unwrap().to_str().unwrap()
    ));
    let raw = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("manifest {} unreadable: {e}", path.display()));
    serde_json::from_str(&raw).expect("manifest parses")
}

#[test]
fn constants_reports_bst_closed_forms() {
    let out_path = tmp("constants-bst.json");
    run_expect(
        &["constants", "--m", "2", "--t", "0", "--out", out_path.to_str().unwrap()],
        0,
    );
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let c = &doc["constants"];
    assert_eq!(c["alpha0"].as_f64().unwrap(), 1.0);
    assert_eq!(c["alpha_max"].as_f64().unwrap(), 2.0);
    let sqrt2 = 2f64.sqrt();
    assert!((c["i_prime"][0].as_f64().unwrap() - sqrt2).abs() < 1e-9);
    assert!((c["i_prime"][1].as_f64().unwrap() - (2.0 + sqrt2)).abs() < 1e-9);
    assert!((c["j_prime"][0].as_f64().unwrap() - (2.0 - sqrt2)).abs() < 1e-9);
    assert!((c["alpha_plus"].as_f64().unwrap() - 4.311070407).abs() < 1e-6);
    assert!((c["alpha_minus"].as_f64().unwrap() - 0.3733646177).abs() < 1e-6);
    // The probe grid must reproduce the dominant-root closed form 2β.
    let probes = doc["lambda1_probes"].as_array().unwrap();
    assert_eq!(probes.len(), 25);
    for probe in probes {
        let beta = probe["beta"].as_f64().unwrap();
        let lambda1 = probe["lambda1"].as_f64().unwrap();
        assert!(
            (lambda1 - 2.0 * beta).abs() < 1e-9,
            "lambda1({beta}) = {lambda1}"
        );
        assert!(probe["simple"].as_bool().unwrap());
    }
    // The manifest must reference the data file with its true digest.
    let manifest = manifest_of(&out_path);
    let digest = hex::encode(Sha256::digest(std::fs::read(&out_path).unwrap()));
    assert_eq!(manifest["outputs"][0]["sha256"].as_str().unwrap(), digest);
    assert_eq!(manifest["command"].as_str().unwrap(), "constants");
    assert!(manifest["excluded"]["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn exact_mean_table_contains_known_rational() {
    let out = run_expect(&["exact", "--m", "2", "--t", "0", "--nmax", "4", "--kmax", "4"], 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "n,k,mean");
    // E(keys at level 1 of a 3-key tree) = 4/3 in 17-significant-digit form.
    assert!(
        lines.iter().any(|l| l == "3,1,1.3333333333333333e0"),
        "expected the 4/3 row, got:\n{}",
        lines.join("\n")
    );
    // The root always holds one key as soon as the tree is nonempty.
    assert!(lines.iter().any(|l| l == "1,0,1.0000000000000000e0"));
}

#[test]
fn exact_series_at_unit_argument_counts_keys_and_gaps() {
    // At argument 1 the level polynomial collapses to the key count n
    // (internal) and the free-position count n+1 (external, binary case).
    let out = run_expect(
        &["exact", "--m", "2", "--t", "0", "--nmax", "6", "--z", "1,0"],
        0,
    );
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "n,re,im,m2");
    let row: Vec<&str> = lines[6].split(',').collect();
    assert_eq!(row[0], "5");
    let re: f64 = row[1].parse().unwrap();
    let m2: f64 = row[3].parse().unwrap();
    assert!((re - 5.0).abs() < 1e-12, "re = {re}");
    assert!((m2 - 25.0).abs() < 1e-9, "m2 = {m2}");

    let out = run_expect(
        &[
            "exact", "--m", "2", "--t", "0", "--nmax", "6", "--z", "1,0", "--external",
        ],
        0,
    );
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "n,re,im");
    let row: Vec<&str> = lines[6].split(',').collect();
    let re: f64 = row[1].parse().unwrap();
    assert!((re - 6.0).abs() < 1e-12, "external count at n=5: {re}");
}

#[test]
fn simulate_is_deterministic_across_reruns_and_workers() {
    let a = tmp("sim-a.csv");
    let b = tmp("sim-b.csv");
    let c = tmp("sim-c.csv");
    let base = [
        "simulate", "--m", "2", "--t", "0", "--n", "400", "--reps", "48", "--k", "4",
        "--seed", "42",
    ];
    for (path, workers) in [(&a, "1"), (&b, "4"), (&c, "1")] {
        let mut args: Vec<&str> = base.to_vec();
        args.extend(["--workers", workers, "--out", path.to_str().unwrap()]);
        run_expect(&args, 0);
    }
    let bytes_a = std::fs::read(&a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&b).unwrap(), "worker count changed the data");
    assert_eq!(bytes_a, std::fs::read(&c).unwrap(), "rerun changed the data");
    // Manifests agree on everything except wall time.
    let mut ma = manifest_of(&a);
    let mut mb = manifest_of(&b);
    for m in [&mut ma, &mut mb] {
        m["excluded"].take();
        m["config"]["workers"].take();
        m["config"]["out"].take();
        m["outputs"][0]["path"].take();
    }
    assert_eq!(ma, mb);
}

#[test]
fn simulate_level_gate_holds_and_csv_shape_is_stable() {
    let out = run_expect(
        &[
            "simulate", "--m", "3", "--t", "1", "--n", "300", "--reps", "60", "--k", "3",
        ],
        0,
    );
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "rep,count,ratio");
    assert_eq!(lines.len(), 61);
    for (i, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], i.to_string());
        let count: u64 = fields[1].parse().unwrap();
        let ratio: f64 = fields[2].parse().unwrap();
        assert!(ratio > 0.0 || count == 0);
    }
}

#[test]
fn simulate_type_identity_column_is_zero() {
    let out = run_expect(
        &[
            "simulate", "--m", "3", "--t", "0", "--n", "150", "--reps", "15", "--types",
        ],
        0,
    );
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "rep,level,keys,type0,type1,type2,identity_gap");
    assert!(lines.len() > 15);
    for line in &lines[1..] {
        assert!(line.ends_with(",0"), "nonzero identity gap in: {line}");
    }
}

#[test]
fn simulate_rejects_conflicting_variants() {
    run_expect(
        &["simulate", "--m", "2", "--t", "0", "--n", "50", "--types", "--external"],
        2,
    );
    run_expect(
        &["simulate", "--m", "2", "--t", "0", "--n", "50", "--types", "--k", "2"],
        2,
    );
}

#[test]
fn limit_unit_radius_is_degenerate_and_passes() {
    let out = run_expect(
        &[
            "limit", "--m", "2", "--t", "0", "--beta", "1.0", "--reps", "200", "--depth", "8",
        ],
        0,
    );
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "rep,value");
    assert_eq!(lines.len(), 201);
    for line in &lines[1..] {
        assert!(
            line.ends_with(",1.0000000000000000e0"),
            "draw at radius 1 must equal 1 exactly: {line}"
        );
    }
}

#[test]
fn limit_draws_are_worker_independent() {
    let a = tmp("limit-a.csv");
    let b = tmp("limit-b.csv");
    for (path, workers) in [(&a, "1"), (&b, "3")] {
        run_expect(
            &[
                "limit", "--m", "3", "--t", "1", "--beta", "0.8", "--reps", "300",
                "--depth", "10", "--workers", workers, "--out", path.to_str().unwrap(),
            ],
            0,
        );
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn invert_round_trip_passes_and_impossible_tolerance_fails() {
    let out = run_expect(&["invert", "--m", "2", "--t", "1", "--n", "80"], 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "k,exact,inverted,rel_err");
    assert!(lines.len() > 4, "expected several resolvable levels");
    // Same data, absurd tolerance: the check must fail with exit code 1.
    run_expect(
        &["invert", "--m", "2", "--t", "1", "--n", "80", "--tol", "1e-22"],
        1,
    );
}

#[test]
fn compare_refuses_alpha_outside_convergence_window() {
    let out = run_expect(&["compare", "--m", "2", "--t", "0", "--alpha", "0.5"], 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("--override-range"),
        "refusal must name the override flag: {stderr}"
    );
    assert!(
        stderr.contains("1.414"),
        "refusal must state the admissible window: {stderr}"
    );
}

#[test]
fn verify_rejects_unknown_criterion_id() {
    run_expect(&["verify", "--id", "12"], 2);
    run_expect(&["verify", "--id", "0"], 2);
}

#[test]
fn verify_single_criterion_prints_line_and_caches() {
    let cache = tmp("verify-cache");
    let expected = cache.join(format!(
        "verify-v{}-c03-s314159265.json",
        env!("CARGO_PKG_VERSION")
    ));
    let _ = std::fs::remove_file(&expected);
    let run_cached = || {
        let mut cmd = bin();
        cmd.args(["verify", "--id", "3"]);
        cmd.env("TREEPROF_CACHE_DIR", &cache);
        cmd.output().expect("binary launched")
    };
    let first = run_cached();
    assert_eq!(first.status.code(), Some(0));
    let first_line = String::from_utf8_lossy(&first.stdout).to_string();
    assert!(
        first_line.contains("criterion 03 [PASS]"),
        "unexpected verify output: {first_line}"
    );
    assert!(expected.is_file(), "cache entry missing at {}", expected.display());
    // Second run must serve the cached report and print the same line.
    let second = run_cached();
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn usage_errors_exit_with_code_two() {
    // Unknown flag (handled by the argument parser).
    run_expect(&["exact", "--m", "2", "--t", "0", "--nmax", "5", "--bogus"], 2);
    // Invalid model order.
    run_expect(&["exact", "--m", "1", "--t", "0", "--nmax", "5"], 2);
    // Malformed complex argument.
    run_expect(&["exact", "--m", "2", "--t", "0", "--nmax", "5", "--z", "nope"], 2);
    // --kmax has no meaning for a series evaluation.
    run_expect(
        &["exact", "--m", "2", "--t", "0", "--nmax", "5", "--z", "1,0", "--kmax", "3"],
        2,
    );
}

#[test]
fn exact_resource_caps_refuse_with_explanation() {
    // Mean table: (nmax+1)(kmax+1) cells over the cap.
    let out = run_expect(&["exact", "--m", "2", "--t", "0", "--nmax", "20000"], 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    // Second moments cost O(n^2); large --nmax refused up front.
    let out = run_expect(
        &["exact", "--m", "2", "--t", "0", "--nmax", "20001", "--z", "1.1,0"],
        2,
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}
