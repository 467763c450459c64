//! Process-level acceptance checks: exit codes, output byte-identity, and
//! the digest-staleness guard. Machine output is read from --out files so
//! stderr chatter never leaks into comparisons.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use abcsim_core::bits::row_space_equal;
use abcsim_core::families::cz_ladder;
use abcsim_core::io::parse_check_rows;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn abcsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abcsim"))
        .args(args)
        .output()
        .expect("spawn abcsim")
}

fn run_ok(args: &[&str]) -> Output {
    let out = abcsim(args);
    assert!(
        out.status.success(),
        "abcsim {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited normally")
}

/// The results JSON with the timing block blanked, for comparisons that must
/// ignore wall-clock noise.
fn sans_timings(text: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(text).expect("valid results JSON");
    let timings = v
        .as_object_mut()
        .expect("results are an object")
        .remove("timings");
    assert!(timings.is_some(), "results JSON lost its timings block");
    serde_json::to_string_pretty(&v).unwrap()
}

fn simulate_to(path: &Path, shards: &str, extra: &[&str]) {
    let circuit = fixture("ladder.circuit");
    let syndrome = fixture("ladder.syndrome");
    let logical = fixture("ladder.logical");
    let out_flag = path.to_str().unwrap();
    let mut args = vec![
        "simulate",
        "--circuit",
        circuit.to_str().unwrap(),
        "--syndrome",
        syndrome.to_str().unwrap(),
        "--logical",
        logical.to_str().unwrap(),
        "--noise",
        "p_gate=1e-2,p_meas=1e-2,p_idle=1e-3",
        "--shots",
        "10000",
        "--seed",
        "7",
        "--shards",
        shards,
        "--out",
        out_flag,
    ];
    args.extend_from_slice(extra);
    run_ok(&args);
}

#[test]
fn identical_invocations_are_byte_identical_modulo_timings() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    simulate_to(&a, "4", &[]);
    simulate_to(&b, "4", &[]);
    let a = std::fs::read_to_string(&a).unwrap();
    let b = std::fs::read_to_string(&b).unwrap();
    assert_eq!(sans_timings(&a), sans_timings(&b));
    println!("acceptance cli PASS: repeated invocations byte-identical modulo timings");
}

#[test]
fn shard_counts_1_4_16_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut rendered = Vec::new();
    for shards in ["1", "4", "16"] {
        let path = dir.path().join(format!("s{shards}.json"));
        simulate_to(&path, shards, &[]);
        rendered.push(sans_timings(&std::fs::read_to_string(&path).unwrap()));
    }
    assert_eq!(rendered[0], rendered[1], "1 vs 4 shards differ");
    assert_eq!(rendered[0], rendered[2], "1 vs 16 shards differ");
    let v: serde_json::Value = serde_json::from_str(&rendered[0]).unwrap();
    assert_eq!(v["n_samples"], 10_000);
    println!("acceptance cli PASS: shard counts 1/4/16 byte-identical modulo timings");
}

#[test]
fn both_engines_agree_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let naive = dir.path().join("naive.json");
    let abc = dir.path().join("abc.json");
    simulate_to(&naive, "4", &["--engine", "naive"]);
    simulate_to(&abc, "4", &["--engine", "abc"]);
    let read = |p: &Path| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
    };
    let (n, a) = (read(&naive), read(&abc));
    assert_eq!(n["n_fail"], a["n_fail"]);
    assert_eq!(n["rate"], a["rate"]);
    assert_eq!(n["wilson_ci_95"], a["wilson_ci_95"]);
    println!("acceptance cli PASS: naive and abc agree per seed through the CLI");
}

#[test]
fn missing_checks_file_exits_2_with_path() {
    let circuit = fixture("ladder.circuit");
    let out = abcsim(&[
        "simulate",
        "--circuit",
        circuit.to_str().unwrap(),
        "--syndrome",
        "/nonexistent/checks.syndrome",
        "--logical",
        "/nonexistent/checks.logical",
        "--noise",
        "p_gate=1e-3,p_meas=0,p_idle=0",
    ]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("/nonexistent/checks.syndrome"),
        "stderr does not name the missing file: {stderr}"
    );
    println!("acceptance cli PASS: missing checks file exits 2 naming the path");
}

#[test]
fn malformed_circuit_gets_line_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.circuit");
    std::fs::write(&bad, "QUBITS 3\nH 1\nCX 2 9\n").unwrap();
    let out = abcsim(&["validate", "--circuit", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "no line number in: {stderr}");

    let good = fixture("repetition_r3.circuit");
    let out = run_ok(&[
        "validate",
        "--circuit",
        good.to_str().unwrap(),
        "--syndrome",
        fixture("repetition_r3.syndrome").to_str().unwrap(),
        "--logical",
        fixture("repetition_r3.logical").to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ok"));
    println!("acceptance cli PASS: validate reports per-line diagnostics and exits 2");
}

#[test]
fn precompute_is_reproducible_and_guards_digests() {
    let dir = tempfile::tempdir().unwrap();
    let pre_a = dir.path().join("a.pre");
    let pre_b = dir.path().join("b.pre");
    let circuit = fixture("repetition_r3.circuit");
    let syndrome = fixture("repetition_r3.syndrome");
    let logical = fixture("repetition_r3.logical");
    for (path, extra) in [(&pre_a, &[][..]), (&pre_b, &["--periodic"][..])] {
        let mut args = vec![
            "precompute",
            "--circuit",
            circuit.to_str().unwrap(),
            "--syndrome",
            syndrome.to_str().unwrap(),
            "--logical",
            logical.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        run_ok(&args);
    }
    // The periodic path is an optimization, not a different artifact.
    let a = std::fs::read(&pre_a).unwrap();
    assert_eq!(a, std::fs::read(&pre_b).unwrap());

    // Same invocation again: bit-identical file.
    let pre_c = dir.path().join("c.pre");
    run_ok(&[
        "precompute",
        "--circuit",
        fixture("repetition_r3.circuit").to_str().unwrap(),
        "--syndrome",
        fixture("repetition_r3.syndrome").to_str().unwrap(),
        "--logical",
        fixture("repetition_r3.logical").to_str().unwrap(),
        "--out",
        pre_c.to_str().unwrap(),
    ]);
    assert_eq!(a, std::fs::read(&pre_c).unwrap());

    // Artifact against a different circuit: digest mismatch, exit 4.
    let out = abcsim(&[
        "simulate",
        "--circuit",
        fixture("ladder.circuit").to_str().unwrap(),
        "--syndrome",
        fixture("ladder.syndrome").to_str().unwrap(),
        "--logical",
        fixture("ladder.logical").to_str().unwrap(),
        "--pre",
        pre_a.to_str().unwrap(),
        "--noise",
        "p_gate=1e-3,p_meas=0,p_idle=0",
    ]);
    assert_eq!(exit_code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("digest mismatch"));

    // And the matching circuit accepts it.
    run_ok(&[
        "simulate",
        "--circuit",
        fixture("repetition_r3.circuit").to_str().unwrap(),
        "--syndrome",
        fixture("repetition_r3.syndrome").to_str().unwrap(),
        "--logical",
        fixture("repetition_r3.logical").to_str().unwrap(),
        "--pre",
        pre_a.to_str().unwrap(),
        "--noise",
        "p_gate=1e-3,p_meas=1e-3,p_idle=0",
        "--shots",
        "500",
    ]);
    println!("acceptance cli PASS: precompute reproducible, stale artifacts exit 4");
}

#[test]
fn derived_checks_match_fixture_row_space() {
    let out = run_ok(&[
        "derive-checks",
        "--circuit",
        fixture("ladder.circuit").to_str().unwrap(),
        "--seed",
        "5",
    ]);
    let (c, checks) = cz_ladder();
    let rows = parse_check_rows(
        &String::from_utf8(out.stdout).unwrap(),
        c.num_outcomes(),
    )
    .unwrap();
    assert!(
        row_space_equal(&rows, checks.syndrome_rows()),
        "derived matrix spans a different space than the fixture checks"
    );
    println!("acceptance cli PASS: derive-checks output spans the fixture row space");
}

#[test]
fn bench_writes_the_expected_csv() {
    let out = run_ok(&[
        "bench",
        "--rounds",
        "2,4",
        "--shots",
        "64",
        "--sites",
        "2",
        "--repeats",
        "1",
    ]);
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "rounds,engine,syndrome_ns_per_shot,depth,num_outcomes,num_syndrome_rows,\
         max_incidence,sites_per_shot,shots,precompute_direct_ns,precompute_periodic_ns"
    );
    assert_eq!(csv.lines().count(), 5, "two sizes x two engines + header");
    assert!(csv.lines().nth(1).unwrap().starts_with("2,naive,"));
    println!("acceptance cli PASS: bench emits the documented CSV");
}

#[test]
fn config_file_supplies_noise_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"noise": {"p_gate": 1e-2, "p_meas": 1e-2, "p_idle": 1e-3}, "shots": 10000, "seed": 7, "shards": 4}"#,
    )
    .unwrap();
    let from_config = dir.path().join("via_config.json");
    run_ok(&[
        "simulate",
        "--circuit",
        fixture("ladder.circuit").to_str().unwrap(),
        "--syndrome",
        fixture("ladder.syndrome").to_str().unwrap(),
        "--logical",
        fixture("ladder.logical").to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--out",
        from_config.to_str().unwrap(),
    ]);
    let from_flags = dir.path().join("via_flags.json");
    simulate_to(&from_flags, "4", &[]);
    assert_eq!(
        sans_timings(&std::fs::read_to_string(&from_config).unwrap()),
        sans_timings(&std::fs::read_to_string(&from_flags).unwrap()),
        "config file and equivalent flags disagree"
    );

    // A flag overrides the config value.
    let overridden = dir.path().join("override.json");
    run_ok(&[
        "simulate",
        "--circuit",
        fixture("ladder.circuit").to_str().unwrap(),
        "--syndrome",
        fixture("ladder.syndrome").to_str().unwrap(),
        "--logical",
        fixture("ladder.logical").to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--shots",
        "123",
        "--out",
        overridden.to_str().unwrap(),
    ]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&overridden).unwrap()).unwrap();
    assert_eq!(v["n_samples"], 123);

    // Unknown config keys are rejected.
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"noise": {"p_gate": 0.1, "p_meas": 0, "p_idle": 0}, "shotz": 5}"#)
        .unwrap();
    let out = abcsim(&[
        "simulate",
        "--circuit",
        fixture("ladder.circuit").to_str().unwrap(),
        "--syndrome",
        fixture("ladder.syndrome").to_str().unwrap(),
        "--logical",
        fixture("ladder.logical").to_str().unwrap(),
        "--config",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
    println!("acceptance cli PASS: config JSON accepted, flags override, unknown keys rejected");
}

#[test]
fn lookup_cache_round_trips_and_detects_staleness() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("table.lookup");
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let lookup_args = ["--decoder", "lookup", "--lookup-cache", cache.to_str().unwrap()];
    simulate_to(&first, "2", &lookup_args);
    assert!(cache.exists());
    let cache_bytes = std::fs::read(&cache).unwrap();
    simulate_to(&second, "2", &lookup_args);
    assert_eq!(cache_bytes, std::fs::read(&cache).unwrap(), "cache rewritten on reuse");
    assert_eq!(
        sans_timings(&std::fs::read_to_string(&first).unwrap()),
        sans_timings(&std::fs::read_to_string(&second).unwrap())
    );

    // Different noise: the cache is stale, gets rebuilt, run still succeeds.
    let third = dir.path().join("third.json");
    let out = run_ok(&[
        "simulate",
        "--circuit",
        fixture("ladder.circuit").to_str().unwrap(),
        "--syndrome",
        fixture("ladder.syndrome").to_str().unwrap(),
        "--logical",
        fixture("ladder.logical").to_str().unwrap(),
        "--noise",
        "p_gate=2e-2,p_meas=1e-2,p_idle=1e-3",
        "--shots",
        "1000",
        "--seed",
        "7",
        "--decoder",
        "lookup",
        "--lookup-cache",
        cache.to_str().unwrap(),
        "--out",
        third.to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("stale"));
    assert_ne!(cache_bytes, std::fs::read(&cache).unwrap());
    println!("acceptance cli PASS: lookup cache reused when fresh, rebuilt when stale");
}
