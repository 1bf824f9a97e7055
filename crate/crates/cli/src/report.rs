//! Rendering pipeline reports.
//!
//! The JSON form is canonical: sorted keys, exact fractions as strings,
//! and no volatile data, so equal runs produce equal bytes. The text form
//! is a human-readable summary and carries wall times, which is why only
//! the JSON form is contractually byte-stable.

use flatpencil_core::{CheckResult, CheckStatus};
use serde_json::{Map, Value};

use crate::pipeline::{PipelineReport, StageRecord};

pub fn status_name(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "passed",
        CheckStatus::Fail => "failed",
        CheckStatus::Skipped => "skipped",
    }
}

fn check_to_value(c: &CheckResult) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), Value::String(c.id.to_string()));
    m.insert("status".into(), Value::String(status_name(c.status).into()));
    let failures: Vec<Value> = c
        .failures
        .iter()
        .map(|f| {
            let mut fm = Map::new();
            fm.insert("location".into(), Value::String(f.location.clone()));
            fm.insert("witness".into(), Value::String(f.witness.clone()));
            Value::Object(fm)
        })
        .collect();
    m.insert("failures".into(), Value::Array(failures));
    Value::Object(m)
}

pub fn stage_to_value(s: &StageRecord) -> Value {
    let mut m = Map::new();
    m.insert("stage".into(), Value::String(s.name.into()));
    m.insert("status".into(), Value::String(status_name(s.status).into()));
    if let Some(e) = &s.error {
        m.insert("error".into(), Value::String(e.clone()));
    }
    m.insert(
        "checks".into(),
        Value::Array(s.checks.iter().map(check_to_value).collect()),
    );
    for (k, v) in &s.payload {
        m.insert(k.clone(), v.clone());
    }
    Value::Object(m)
}

pub fn report_to_value(r: &PipelineReport) -> Value {
    let mut m = Map::new();
    m.insert("input_digest".into(), Value::String(r.digest.clone()));
    m.insert("mode".into(), Value::String(r.mode.into()));
    m.insert("seed".into(), Value::from(r.seed));
    m.insert(
        "tool_version".into(),
        Value::String(env!("CARGO_PKG_VERSION").into()),
    );
    m.insert(
        "stages".into(),
        Value::Array(r.stages.iter().map(stage_to_value).collect()),
    );
    m.insert(
        "overall".into(),
        Value::String(if r.all_passed() { "passed" } else { "failed" }.into()),
    );
    Value::Object(m)
}

pub fn report_to_text(r: &PipelineReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "input {}  mode {}  seed {}\n",
        r.digest, r.mode, r.seed
    ));
    for s in &r.stages {
        out.push_str(&format!(
            "[{}] {} ({} ms)\n",
            s.name,
            status_name(s.status),
            s.elapsed_ms
        ));
        if let Some(e) = &s.error {
            out.push_str(&format!("    error: {e}\n"));
        }
        for c in &s.checks {
            out.push_str(&format!("    {}: {}\n", c.id, status_name(c.status)));
            for f in &c.failures {
                out.push_str(&format!("        {} -> {}\n", f.location, f.witness));
            }
        }
    }
    out.push_str(&format!(
        "overall: {}\n",
        if r.all_passed() { "passed" } else { "failed" }
    ));
    out
}
