//! Drivers behind the subcommands: resolve effective options, run the
//! work, and hand back canonical output bytes plus an overall verdict.
//!
//! Usage and I/O problems are `Err`; mathematical failures are encoded in
//! the returned document with a `false` verdict, so the process can exit
//! 2 and 1 respectively.

use std::path::Path;

use flatpencil_core::{
    build_structure, series_fixture, Christoffel, FrobeniusStructure, MatchResult, Rat,
    match_up_to_scaling, CoeffKind,
};
use serde_json::{Map, Value};

use crate::format::{canonical_bytes, metric_to_value, poly_to_value, rat_to_value, taupoly_to_value};
use crate::pipeline::{
    default_lambdas, realize_instance, run_pipeline, RunOptions, Stage, DEFAULT_SEED,
};
use crate::report::{report_to_text, report_to_value};
use crate::spec::{parse_instance_file, InstanceSpec, SpecOptions};

/// Flags shared by the instance-running subcommands, before merging with
/// file options and defaults.
#[derive(Clone, Default, Debug)]
pub struct CommonOpts {
    pub seed: Option<u64>,
    pub points: Option<usize>,
    pub lambdas: Option<Vec<Rat>>,
    pub truncation: Option<usize>,
    pub symbolic_curvature: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OutputFormat {
    Json,
    Text,
}

fn env_seed() -> Result<Option<u64>, String> {
    match std::env::var("FLATPENCIL_SEED") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| "FLATPENCIL_SEED must be an unsigned integer".to_string()),
        Err(_) => Ok(None),
    }
}

/// Merges command-line flags, the environment, the file's options block,
/// and built-in defaults, in that precedence order.
pub fn resolve_run_options(flags: &CommonOpts, file: &SpecOptions) -> Result<RunOptions, String> {
    let seed = match flags.seed {
        Some(s) => s,
        None => match env_seed()? {
            Some(s) => s,
            None => file.seed.unwrap_or(DEFAULT_SEED),
        },
    };
    Ok(RunOptions {
        seed,
        points: flags.points.or(file.points).unwrap_or(20),
        lambdas: flags
            .lambdas
            .clone()
            .or_else(|| file.lambdas.clone())
            .unwrap_or_else(default_lambdas),
        symbolic_curvature: flags.symbolic_curvature
            || file.symbolic_curvature.unwrap_or(false),
    })
}

/// Runs pipeline stages on an instance file. Returns the rendered report
/// and whether every executed stage passed.
pub fn run_stages_command(
    path: &Path,
    stages: &[Stage],
    flags: &CommonOpts,
    format: OutputFormat,
) -> Result<(Vec<u8>, bool), String> {
    let (spec, digest) = parse_instance_file(path, flags.truncation)?;
    let opts = resolve_run_options(flags, &spec.options)?;
    let report = run_pipeline(&spec, stages, &opts, digest);
    let bytes = match format {
        OutputFormat::Json => canonical_bytes(&report_to_value(&report)),
        OutputFormat::Text => report_to_text(&report).into_bytes(),
    };
    Ok((bytes, report.all_passed()))
}

fn build_structure_for(
    spec: &InstanceSpec,
    seed: u64,
) -> Result<FrobeniusStructure, String> {
    let (g, eta) = realize_instance(spec, seed)?;
    let chr = Christoffel::solve(&g).map_err(|e| format!("connection solve failed: {e}"))?;
    build_structure(&chr, &eta).map_err(|e| format!("structure construction failed: {e}"))
}

/// Compares two instance files up to the scaling action.
pub fn match_command(
    path_a: &Path,
    path_b: &Path,
    flags: &CommonOpts,
    format: OutputFormat,
) -> Result<(Vec<u8>, bool), String> {
    let (spec_a, digest_a) = parse_instance_file(path_a, flags.truncation)?;
    let (spec_b, digest_b) = parse_instance_file(path_b, flags.truncation)?;
    let opts_a = resolve_run_options(flags, &spec_a.options)?;
    let opts_b = resolve_run_options(flags, &spec_b.options)?;

    let mut m = Map::new();
    m.insert(
        "inputs".into(),
        Value::Array(vec![
            Value::String(digest_a),
            Value::String(digest_b),
        ]),
    );
    m.insert(
        "tool_version".into(),
        Value::String(env!("CARGO_PKG_VERSION").into()),
    );
    let mut verdict = Map::new();
    let mut matched = false;
    let outcome = build_structure_for(&spec_a, opts_a.seed)
        .and_then(|a| build_structure_for(&spec_b, opts_b.seed).map(|b| (a, b)));
    match outcome {
        Err(e) => {
            verdict.insert("status".into(), Value::String("error".into()));
            verdict.insert("detail".into(), Value::String(e));
        }
        Ok((a, b)) => match match_up_to_scaling(&a, &b) {
            Ok(MatchResult::Matched { factor }) => {
                matched = true;
                verdict.insert("status".into(), Value::String("matched".into()));
                verdict.insert("factor".into(), rat_to_value(&factor));
            }
            Ok(MatchResult::Mismatch { detail }) => {
                verdict.insert("status".into(), Value::String("mismatch".into()));
                verdict.insert("detail".into(), Value::String(detail));
            }
            Err(e) => {
                verdict.insert("status".into(), Value::String("incomparable".into()));
                verdict.insert("detail".into(), Value::String(e.to_string()));
            }
        },
    }
    m.insert("match".into(), Value::Object(verdict));
    let doc = Value::Object(m);
    let bytes = match format {
        OutputFormat::Json => canonical_bytes(&doc),
        OutputFormat::Text => {
            let mut s = String::new();
            let v = doc.get("match").expect("just inserted");
            s.push_str(&format!(
                "match: {}\n",
                v.get("status").and_then(Value::as_str).unwrap_or("?")
            ));
            if let Some(f) = v.get("factor").and_then(Value::as_str) {
                s.push_str(&format!("factor: {f}\n"));
            }
            if let Some(d) = v.get("detail").and_then(Value::as_str) {
                s.push_str(&format!("detail: {d}\n"));
            }
            s.into_bytes()
        }
    };
    Ok((bytes, matched))
}

/// Generates an orbit-space instance file for a reflection group.
pub fn coxeter_command(
    group_type: &str,
    rank: usize,
    seed: Option<u64>,
    label: Option<String>,
) -> Result<Vec<u8>, String> {
    let kind = match group_type {
        "A" | "a" => flatpencil_core::GroupKind::TypeA,
        "B" | "b" => flatpencil_core::GroupKind::TypeB,
        other => return Err(format!("unknown group type {other:?}: expected A or B")),
    };
    let seed = match seed {
        Some(s) => s,
        None => env_seed()?.unwrap_or(DEFAULT_SEED),
    };
    let inst = flatpencil_core::coxeter_instance(kind, rank, seed)
        .map_err(|e| format!("orbit-space construction failed: {e}"))?;
    let ring = inst.flat.g_flat.ring().clone();
    let dv = ring.degree();

    let mut m = Map::new();
    m.insert("mode".into(), Value::String("generic".into()));
    let label = label.unwrap_or_else(|| {
        format!(
            "{}{} orbit chart",
            match kind {
                flatpencil_core::GroupKind::TypeA => "A",
                flatpencil_core::GroupKind::TypeB => "B",
            },
            rank
        )
    });
    m.insert("label".into(), Value::String(label));
    m.insert("n".into(), Value::from(dv.n() as u64));
    m.insert(
        "degrees".into(),
        Value::Array(dv.degrees().iter().map(rat_to_value).collect()),
    );
    m.insert("charge".into(), rat_to_value(dv.charge()));
    m.insert("coefficients".into(), Value::String("rational".into()));
    m.insert("eta".into(), metric_to_value(&inst.flat.eta));
    m.insert(
        "metric".into(),
        crate::format::form_to_value(&inst.flat.g_flat),
    );
    let mut options = Map::new();
    options.insert("seed".into(), Value::from(seed));
    m.insert("options".into(), Value::Object(options));
    Ok(canonical_bytes(&Value::Object(m)))
}

/// Runs the series oracle on an instance whose file carries seed data,
/// cross-checking the pipeline potential when a metric block is present.
pub fn fixture_series_command(
    path: &Path,
    flags: &CommonOpts,
    format: OutputFormat,
) -> Result<(Vec<u8>, bool), String> {
    let (spec, digest) = parse_instance_file(path, flags.truncation)?;
    let seed_data = spec
        .series_seed
        .clone()
        .ok_or_else(|| format!("{}: instance has no series_seed block", path.display()))?;
    let ring = spec.ring.clone().expect("validated at parse time");
    let eta = spec.eta.clone().expect("validated at parse time");
    let CoeffKind::Ser { truncation } = ring.kind() else {
        unreachable!("series_seed implies series coefficients");
    };

    let mut m = Map::new();
    m.insert("input_digest".into(), Value::String(digest));
    m.insert(
        "tool_version".into(),
        Value::String(env!("CARGO_PKG_VERSION").into()),
    );
    m.insert("truncation".into(), Value::from(truncation as u64));
    let mut checks = Vec::new();
    let mut passed = true;

    match series_fixture(&ring, &eta, &seed_data) {
        Err(e) => {
            passed = false;
            let mut c = Map::new();
            c.insert("id".into(), Value::String("series_solution".into()));
            c.insert("status".into(), Value::String("failed".into()));
            c.insert("error".into(), Value::String(e.to_string()));
            checks.push(Value::Object(c));
        }
        Ok(pot) => {
            let mut c = Map::new();
            c.insert("id".into(), Value::String("series_solution".into()));
            c.insert("status".into(), Value::String("passed".into()));
            checks.push(Value::Object(c));
            m.insert("potential".into(), taupoly_to_value(pot.tau_poly()));

            if spec.metric.is_some() {
                let mut c = Map::new();
                c.insert(
                    "id".into(),
                    Value::String("oracle_pipeline_agreement".into()),
                );
                let opts = resolve_run_options(flags, &spec.options)?;
                match build_structure_for(&spec, opts.seed) {
                    Ok(s) if s.potential == pot => {
                        c.insert("status".into(), Value::String("passed".into()));
                    }
                    Ok(s) => {
                        passed = false;
                        c.insert("status".into(), Value::String("failed".into()));
                        c.insert(
                            "detail".into(),
                            Value::String(
                                "pipeline potential differs from the oracle solution".into(),
                            ),
                        );
                        c.insert(
                            "pipeline_potential".into(),
                            poly_to_value(&s.potential.tau_poly().p),
                        );
                    }
                    Err(e) => {
                        passed = false;
                        c.insert("status".into(), Value::String("failed".into()));
                        c.insert("detail".into(), Value::String(e));
                    }
                }
                checks.push(Value::Object(c));
            }
        }
    }
    m.insert("checks".into(), Value::Array(checks));
    m.insert(
        "overall".into(),
        Value::String(if passed { "passed" } else { "failed" }.into()),
    );
    let doc = Value::Object(m);
    let bytes = match format {
        OutputFormat::Json => canonical_bytes(&doc),
        OutputFormat::Text => {
            let mut s = String::new();
            for c in doc.get("checks").and_then(Value::as_array).unwrap_or(&vec![]) {
                s.push_str(&format!(
                    "{}: {}\n",
                    c.get("id").and_then(Value::as_str).unwrap_or("?"),
                    c.get("status").and_then(Value::as_str).unwrap_or("?")
                ));
            }
            s.push_str(&format!(
                "overall: {}\n",
                if passed { "passed" } else { "failed" }
            ));
            s.into_bytes()
        }
    };
    Ok((bytes, passed))
}
