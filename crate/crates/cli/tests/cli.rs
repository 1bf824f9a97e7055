//! End-to-end tests of the command-line binary: exit codes, report
//! shapes, determinism, and diagnostics, all driven through real
//! processes on the committed fixture files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// A command with the ambient seed variable stripped, so the tests see
/// the same precedence order regardless of the caller's environment.
fn flatpencil(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_flatpencil"));
    cmd.args(args);
    cmd.env_remove("FLATPENCIL_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    flatpencil(args).output().expect("binary spawns")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exits normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not valid JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stage<'v>(report: &'v Value, name: &str) -> &'v Value {
    report["stages"]
        .as_array()
        .expect("report has a stages array")
        .iter()
        .find(|s| s["stage"] == name)
        .unwrap_or_else(|| panic!("no stage named {name}"))
}

fn check_ids(stage: &Value) -> Vec<String> {
    stage["checks"]
        .as_array()
        .expect("stage has a checks array")
        .iter()
        .map(|c| c["id"].as_str().expect("check id").to_string())
        .collect()
}

fn assert_all_checks_passed(stage: &Value) {
    for c in stage["checks"].as_array().expect("checks array") {
        assert_eq!(c["status"], "passed", "check {} in stage {}", c["id"], stage["stage"]);
    }
}

fn write_temp(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).expect("write temp instance");
    path
}

#[test]
fn verify_runs_every_stage_on_a_rank_two_chart() {
    let out = run(&["verify", fixture("a2.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["overall"], "passed");
    assert_eq!(report["seed"], 4054277869u64);
    assert_eq!(report["mode"], "generic");
    assert!(report["input_digest"]
        .as_str()
        .expect("digest string")
        .starts_with("sha256:"));
    let names: Vec<&str> = report["stages"]
        .as_array()
        .expect("stages array")
        .iter()
        .map(|s| s["stage"].as_str().expect("stage name"))
        .collect();
    assert_eq!(names, ["pencil", "build", "verify", "roundtrip", "uniqueness"]);
    for s in report["stages"].as_array().expect("stages array") {
        assert_eq!(s["status"], "passed", "stage {}", s["stage"]);
    }
    let axioms = stage(&report, "verify");
    assert_eq!(
        check_ids(axioms),
        [
            "commutativity",
            "associativity",
            "unit",
            "third_derivatives",
            "flat_metric",
            "flat_unit",
            "homogeneity_product",
            "homogeneity_metric",
            "euler_potential",
        ]
    );
    assert_all_checks_passed(axioms);
}

#[test]
fn check_pencil_runs_the_single_stage_with_all_identities() {
    let out = run(&["check-pencil", fixture("a1.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    let stages = report["stages"].as_array().expect("stages array");
    assert_eq!(stages.len(), 1);
    let pencil = &stages[0];
    assert_eq!(pencil["stage"], "pencil");
    assert_eq!(
        check_ids(pencil),
        [
            "unit_linearity",
            "companion_derivative",
            "torsion_identity",
            "quadratic_identity",
            "degenerate_rows",
            "lowered_symmetry",
            "pencil_flatness",
        ]
    );
    assert_all_checks_passed(pencil);
}

#[test]
fn build_reports_the_integrated_potential() {
    let out = run(&["build", fixture("a2.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    let build = stage(&report, "build");
    assert_eq!(build["status"], "passed");
    let ids = check_ids(build);
    assert_eq!(
        ids,
        ["structure_constants", "potential_integration", "potential_ambiguity"]
    );
    let terms = build["potential"]["p"].as_array().expect("potential terms");
    assert!(!terms.is_empty(), "the potential has polynomial terms");
}

#[test]
fn json_reports_are_byte_stable_across_runs() {
    let path = fixture("a1.json");
    let first = run(&["verify", path.to_str().unwrap()]);
    let second = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&first), 0);
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn corrupted_metric_fails_the_connection_solve_and_skips_downstream() {
    let dir = tempfile::tempdir().expect("tempdir");
    let raw = std::fs::read_to_string(fixture("a3.json")).expect("read fixture");
    let bad = raw.replace("\"coeff\": \"72\"", "\"coeff\": \"73\"");
    assert_ne!(bad, raw, "the targeted coefficient is present");
    let path = write_temp(&dir, "bad-a3.json", &bad);

    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["overall"], "failed");
    let pencil = stage(&report, "pencil");
    assert_eq!(pencil["status"], "failed");
    let err = pencil["error"].as_str().expect("pencil error");
    assert!(
        err.contains("pencil checks cannot be posed"),
        "error names the failing step: {err}"
    );
    for name in ["build", "verify", "roundtrip", "uniqueness"] {
        assert_eq!(stage(&report, name)["status"], "skipped", "stage {name}");
    }
}

#[test]
fn elliptic_charts_need_a_degenerate_last_coordinate() {
    let dir = tempfile::tempdir().expect("tempdir");
    let raw = std::fs::read(fixture("elliptic-n3-q8.json")).expect("read fixture");
    let mut doc: Value = serde_json::from_slice(&raw).expect("fixture is JSON");
    doc["degrees"][2] = Value::String("1/4".into());
    let path = write_temp(
        &dir,
        "bad-elliptic.json",
        &serde_json::to_string_pretty(&doc).expect("serialize"),
    );

    let out = run(&["check-pencil", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr_text(&out);
    assert!(
        err.contains("d^n must be 0 in elliptic mode"),
        "stderr: {err}"
    );
}

#[test]
fn unknown_fields_are_rejected_at_parse_time() {
    let dir = tempfile::tempdir().expect("tempdir");
    let raw = std::fs::read(fixture("a1.json")).expect("read fixture");
    let mut doc: Value = serde_json::from_slice(&raw).expect("fixture is JSON");
    doc["surprise"] = Value::Bool(true);
    let path = write_temp(
        &dir,
        "extra-field.json",
        &serde_json::to_string_pretty(&doc).expect("serialize"),
    );

    let out = run(&["check-pencil", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr_text(&out);
    assert!(err.contains("unknown field \"surprise\""), "stderr: {err}");
}

#[test]
fn missing_input_file_is_a_usage_error() {
    let out = run(&["verify", "does-not-exist.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_text(&out).contains("cannot read"), "stderr names the I/O problem");
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = run(&[]);
    assert_eq!(code(&out), 2);
}

#[test]
fn seed_precedence_is_flag_over_environment_over_file() {
    let path = fixture("a1.json");
    let path = path.to_str().unwrap();

    let out = flatpencil(&["check-pencil", path])
        .env("FLATPENCIL_SEED", "7")
        .output()
        .expect("binary spawns");
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    assert_eq!(stdout_json(&out)["seed"], 7);

    let out = flatpencil(&["check-pencil", path, "--seed", "9"])
        .env("FLATPENCIL_SEED", "7")
        .output()
        .expect("binary spawns");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["seed"], 9);

    let out = run(&["check-pencil", path]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["seed"], 4054277869u64);

    let out = flatpencil(&["check-pencil", path])
        .env("FLATPENCIL_SEED", "many")
        .output()
        .expect("binary spawns");
    assert_eq!(code(&out), 2);
    assert!(
        stderr_text(&out).contains("FLATPENCIL_SEED must be an unsigned integer"),
        "stderr: {}",
        stderr_text(&out)
    );
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let dest = dir.path().join("report.json");
    let out = run(&[
        "check-pencil",
        fixture("a1.json").to_str().unwrap(),
        "-o",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    assert!(out.stdout.is_empty(), "report goes to the file, not stdout");
    let written = std::fs::read(&dest).expect("report file written");
    let report: Value = serde_json::from_slice(&written).expect("file is valid JSON");
    assert_eq!(report["overall"], "passed");
}

#[test]
fn text_format_carries_stages_and_timings() {
    let out = run(&[
        "verify",
        fixture("a1.json").to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(text.contains("[pencil] passed"), "text: {text}");
    assert!(text.contains("overall: passed"), "text: {text}");
    assert!(text.contains(" ms)"), "text carries wall times: {text}");
}

#[test]
fn lambda_flags_feed_the_flatness_sweep() {
    let path = fixture("a1.json");
    let out = run(&[
        "check-pencil",
        path.to_str().unwrap(),
        "--lambda",
        "5",
        "--lambda=-1/3",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));

    let out = run(&["check-pencil", path.to_str().unwrap(), "--lambda", "x"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_text(&out).contains("--lambda"), "stderr names the flag");
}

#[test]
fn match_recognizes_equal_builds() {
    let path = fixture("a2.json");
    let out = run(&["match", path.to_str().unwrap(), path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["match"]["status"], "matched");
    assert_eq!(doc["match"]["factor"], "1");
    assert_eq!(doc["inputs"].as_array().expect("inputs").len(), 2);
}

#[test]
fn match_refuses_structures_of_different_shape() {
    let out = run(&[
        "match",
        fixture("a1.json").to_str().unwrap(),
        fixture("a2.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["match"]["status"], "incomparable");
    let detail = doc["match"]["detail"].as_str().expect("detail");
    assert!(
        detail.contains("different coordinate counts"),
        "detail: {detail}"
    );

    let out = run(&[
        "match",
        fixture("a2.json").to_str().unwrap(),
        fixture("b2.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["match"]["status"], "incomparable");
    let detail = doc["match"]["detail"].as_str().expect("detail");
    assert!(detail.contains("different degree data"), "detail: {detail}");
}

#[test]
fn coxeter_generation_reproduces_the_committed_fixture() {
    let first = run(&["coxeter", "--type", "A", "--rank", "2"]);
    let second = run(&["coxeter", "--type", "A", "--rank", "2"]);
    assert_eq!(code(&first), 0, "stderr: {}", stderr_text(&first));
    assert_eq!(first.stdout, second.stdout);
    let committed = std::fs::read(fixture("a2.json")).expect("read fixture");
    assert_eq!(first.stdout, committed);
}

#[test]
fn reports_match_the_committed_golden_bytes() {
    for (args, golden) in [
        (vec!["verify", "a1.json"], "a1.verify.json"),
        (vec!["verify", "a2.json"], "a2.verify.json"),
        (vec!["verify", "trivial-n2.json"], "trivial-n2.verify.json"),
        (
            vec!["fixture-series", "elliptic-n3-q8.json"],
            "elliptic-n3-q8.series.json",
        ),
    ] {
        let full: Vec<String> = args
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if i == 0 {
                    a.to_string()
                } else {
                    fixture(a).to_str().expect("fixture path").to_string()
                }
            })
            .collect();
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let out = run(&refs);
        assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
        let expected = std::fs::read(fixture("golden").join(golden)).expect("read golden");
        assert_eq!(
            out.stdout, expected,
            "fresh {golden} bytes differ from the committed report"
        );
    }
}

#[test]
fn coxeter_rejects_unknown_group_types() {
    let out = run(&["coxeter", "--type", "H", "--rank", "3"]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr_text(&out).contains("unknown group type"),
        "stderr: {}",
        stderr_text(&out)
    );
}

#[test]
fn series_oracle_agrees_with_the_pipeline() {
    let out = run(&["fixture-series", fixture("elliptic-n3-q8.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["overall"], "passed");
    assert_eq!(doc["truncation"], 8);
    let checks = doc["checks"].as_array().expect("checks array");
    let ids: Vec<&str> = checks
        .iter()
        .map(|c| c["id"].as_str().expect("check id"))
        .collect();
    assert_eq!(ids, ["series_solution", "oracle_pipeline_agreement"]);
    for c in checks {
        assert_eq!(c["status"], "passed", "check {}", c["id"]);
    }
    let terms = doc["potential"]["p"].as_array().expect("potential terms");
    assert!(!terms.is_empty());
}

#[test]
fn series_oracle_needs_seed_data() {
    let out = run(&["fixture-series", fixture("a1.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr_text(&out).contains("instance has no series_seed block"),
        "stderr: {}",
        stderr_text(&out)
    );
}

#[test]
fn truncation_override_shortens_the_series() {
    let out = run(&[
        "fixture-series",
        fixture("elliptic-n3-q8.json").to_str().unwrap(),
        "--truncation",
        "4",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["truncation"], 4);
    assert_eq!(doc["overall"], "passed");
}

mod axiom_diagnostics {
    use flatpencil_cli::pipeline::verify_stage_record;
    use flatpencil_cli::report::stage_to_value;
    use flatpencil_core::{
        CheckStatus, CoeffKind, ConstMetric, DegreeVector, FrobeniusStructure, GradedPoly, Mode,
        Potential, Rat, RingConfig, StructureConstants, TauPoly,
    };

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    /// A product-associativity violation cannot come out of the file
    /// pipeline, whose connection solve rejects non-flat inputs outright,
    /// so assemble one directly: take a valid rank-three potential, warp
    /// one coefficient, and derive the multiplication from it.
    #[test]
    fn axiom_reports_name_the_failing_quadruple_and_residual() {
        let dv =
            DegreeVector::new(vec![r(1, 1), r(3, 4), r(1, 2)], r(3, 2), Mode::Polynomial).unwrap();
        let ring = RingConfig::new(dv, CoeffKind::Rat);
        let mut p = GradedPoly::zero(&ring);
        p.add_term(vec![2, 0, 1], ring.lift(r(1, 2)));
        p.add_term(vec![1, 2, 0], ring.lift(r(1, 18)));
        p.add_term(vec![0, 2, 2], ring.lift(r(4, 9) + r(1, 1)));
        p.add_term(vec![0, 0, 5], ring.lift(r(64, 15)));
        let pot = Potential::new(TauPoly {
            p,
            tau: GradedPoly::zero(&ring),
        });
        let eta = ConstMetric::new(vec![
            vec![r(0, 1), r(0, 1), r(1, 1)],
            vec![r(0, 1), r(9, 1), r(0, 1)],
            vec![r(1, 1), r(0, 1), r(0, 1)],
        ])
        .unwrap();
        let n = 3;
        let mut c = vec![vec![vec![GradedPoly::zero(&ring); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for g in 0..n {
                    let mut acc = GradedPoly::zero(&ring);
                    for e in 0..n {
                        let ua = eta.upper(a, e);
                        if ua.is_zero() {
                            continue;
                        }
                        for m in 0..n {
                            let ub = eta.upper(b, m);
                            if ub.is_zero() {
                                continue;
                            }
                            acc = &acc
                                + &pot
                                    .third_derivative(e, m, g)
                                    .scale(&(ua.clone() * ub.clone()));
                        }
                    }
                    c[a][b][g] = acc;
                }
            }
        }
        let sc = StructureConstants::new(c).unwrap();
        let s = FrobeniusStructure::new(eta, sc, pot).unwrap();

        let record = verify_stage_record(&s);
        assert_eq!(record.status, CheckStatus::Fail);
        let assoc = record
            .checks
            .iter()
            .find(|c| c.id == "associativity")
            .expect("associativity check present");
        assert_eq!(assoc.status, CheckStatus::Fail);
        assert!(!assoc.failures.is_empty());

        let f = &assoc.failures[0];
        let inner = f
            .location
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or_else(|| panic!("location is a parenthesized tuple: {}", f.location));
        let (triple, unit) = inner
            .split_once("; ")
            .unwrap_or_else(|| panic!("location separates the free index: {}", f.location));
        let mut indices: Vec<usize> = triple
            .split(", ")
            .map(|t| t.parse().expect("coordinate label"))
            .collect();
        indices.push(unit.parse().expect("coordinate label"));
        assert_eq!(indices.len(), 4, "location: {}", f.location);
        assert!(
            indices.iter().all(|&i| (1..=3).contains(&i)),
            "one-based coordinate labels: {}",
            f.location
        );
        assert!(
            f.witness.starts_with("residual "),
            "witness prints the residual: {}",
            f.witness
        );
        assert!(f.witness.len() > "residual ".len());

        let rendered = serde_json::to_string(&stage_to_value(&record)).expect("render");
        assert!(rendered.contains(&f.location.replace('"', "")));
        assert!(rendered.contains("residual "));
    }
}
