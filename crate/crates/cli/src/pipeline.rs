//! Stage orchestration: run requested pipeline stages in order, record
//! every outcome, and skip a stage only when the artifacts it consumes
//! could not be produced upstream.
//!
//! Mathematical failures never abort the run; they become report entries
//! and later stages still execute so the report is complete. A failed
//! identity check therefore does not hide what the remaining stages have
//! to say about the same input. Only usage and I/O problems are surfaced
//! as errors by the callers.

use std::time::Instant;

use flatpencil_core::pencil::checks::{check_pencil, PencilCheckOptions, PencilCheckOutcome};
use flatpencil_core::{
    build_potential, build_potential_from_structure, coxeter_instance, match_up_to_scaling,
    scale_structure, structure_constants, verify_frobenius, CheckResult, CheckStatus, ConstMetric,
    Failure, FrobeniusStructure, IntersectionForm, MatchResult, Rat,
};
use serde_json::{Map, Value};

use crate::format::taupoly_to_value;
use crate::spec::{InstanceSpec, SpecMode};

/// Effective tunables for one run, after merging flags, file options, and
/// defaults.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    pub points: usize,
    pub lambdas: Vec<Rat>,
    pub symbolic_curvature: bool,
}

pub fn default_lambdas() -> Vec<Rat> {
    vec![
        Rat::zero(),
        Rat::one(),
        Rat::from_int(-1),
        Rat::from_int(2),
        Rat::new(1, 3).expect("nonzero denominator"),
    ]
}

pub const DEFAULT_SEED: u64 = 0xf1a7_5eed;

/// One pipeline stage.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Stage {
    Pencil,
    Build,
    Verify,
    Roundtrip,
    Uniqueness,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Pencil => "pencil",
            Stage::Build => "build",
            Stage::Verify => "verify",
            Stage::Roundtrip => "roundtrip",
            Stage::Uniqueness => "uniqueness",
        }
    }

}

/// Outcome of one stage, with wall time for the text rendering only.
#[derive(Clone, Debug)]
pub struct StageRecord {
    pub name: &'static str,
    pub status: CheckStatus,
    pub error: Option<String>,
    pub checks: Vec<CheckResult>,
    pub payload: Map<String, Value>,
    pub elapsed_ms: u128,
}

impl StageRecord {
    fn skipped(stage: Stage) -> Self {
        StageRecord {
            name: stage.name(),
            status: CheckStatus::Skipped,
            error: None,
            checks: Vec::new(),
            payload: Map::new(),
            elapsed_ms: 0,
        }
    }
}

/// The full result of a pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub digest: String,
    pub mode: &'static str,
    pub seed: u64,
    pub stages: Vec<StageRecord>,
}

impl PipelineReport {
    /// True when every executed stage passed; skipped stages do not count
    /// against the run, failed ones do.
    pub fn all_passed(&self) -> bool {
        self.stages.iter().all(|s| s.status != CheckStatus::Fail)
    }
}

struct StageState {
    g: Option<IntersectionForm>,
    eta: Option<ConstMetric>,
    outcome: Option<PencilCheckOutcome>,
    structure: Option<FrobeniusStructure>,
}

/// Builds the intersection form and pairing an instance describes,
/// running the orbit-space construction when the instance names a
/// reflection group.
pub fn realize_instance(
    spec: &InstanceSpec,
    seed: u64,
) -> Result<(IntersectionForm, ConstMetric), String> {
    match spec.mode {
        SpecMode::Coxeter => {
            let (kind, rank) = spec.coxeter.expect("validated at parse time");
            let inst = coxeter_instance(kind, rank, seed)
                .map_err(|e| format!("orbit-space construction failed: {e}"))?;
            Ok((inst.flat.g_flat, inst.flat.eta))
        }
        _ => {
            let g = spec
                .metric
                .clone()
                .ok_or_else(|| "instance has no metric block".to_string())?;
            let eta = spec.eta.clone().expect("validated at parse time");
            Ok((g, eta))
        }
    }
}

fn finish(
    stage: Stage,
    start: Instant,
    error: Option<String>,
    checks: Vec<CheckResult>,
    payload: Map<String, Value>,
) -> StageRecord {
    let failed = error.is_some() || checks.iter().any(|c| c.status == CheckStatus::Fail);
    StageRecord {
        name: stage.name(),
        status: if failed {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        },
        error,
        checks,
        payload,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn run_pencil(spec: &InstanceSpec, opts: &RunOptions, state: &mut StageState) -> StageRecord {
    let start = Instant::now();
    let (g, eta) = match realize_instance(spec, opts.seed) {
        Ok(pair) => pair,
        Err(e) => return finish(Stage::Pencil, start, Some(e), Vec::new(), Map::new()),
    };
    let copts = PencilCheckOptions {
        seed: opts.seed,
        points: opts.points,
        lambdas: opts.lambdas.clone(),
        symbolic_curvature: opts.symbolic_curvature,
    };
    let record = match check_pencil(&g, Some(&eta), &copts) {
        Ok(outcome) => {
            let checks = outcome.report.checks.clone();
            state.outcome = Some(outcome);
            finish(Stage::Pencil, start, None, checks, Map::new())
        }
        Err(e) => finish(
            Stage::Pencil,
            start,
            Some(format!("pencil checks cannot be posed: {e}")),
            Vec::new(),
            Map::new(),
        ),
    };
    state.g = Some(g);
    state.eta = Some(eta);
    record
}

fn run_build(state: &mut StageState) -> StageRecord {
    let start = Instant::now();
    let chr = &state.outcome.as_ref().expect("connection solved").christoffel;
    let eta = state.eta.as_ref().expect("instance realized");
    let mut checks = Vec::new();
    let mut payload = Map::new();

    let sc = match structure_constants(chr, eta) {
        Ok(sc) => {
            checks.push(CheckResult::pass("structure_constants"));
            sc
        }
        Err(e) => {
            checks.push(CheckResult::from_failures(
                "structure_constants",
                vec![Failure::new("construction", e.to_string())],
            ));
            checks.push(CheckResult::skipped("potential_integration"));
            checks.push(CheckResult::skipped("potential_ambiguity"));
            return finish(Stage::Build, start, None, checks, payload);
        }
    };
    let potential = match build_potential(chr, eta) {
        Ok(p) => {
            checks.push(CheckResult::pass("potential_integration"));
            p
        }
        Err(e) => {
            checks.push(CheckResult::from_failures(
                "potential_integration",
                vec![Failure::new("integration", e.to_string())],
            ));
            checks.push(CheckResult::skipped("potential_ambiguity"));
            return finish(Stage::Build, start, None, checks, payload);
        }
    };
    match build_potential_from_structure(&sc, eta) {
        Ok(other) if other == potential => {
            checks.push(CheckResult::pass("potential_ambiguity"));
        }
        Ok(_) => {
            checks.push(CheckResult::from_failures(
                "potential_ambiguity",
                vec![Failure::new(
                    "comparison",
                    "the two integration orders disagree after normalization",
                )],
            ));
        }
        Err(e) => {
            checks.push(CheckResult::from_failures(
                "potential_ambiguity",
                vec![Failure::new("second integration order", e.to_string())],
            ));
        }
    }
    payload.insert("potential".into(), taupoly_to_value(potential.tau_poly()));
    match FrobeniusStructure::new(eta.clone(), sc, potential) {
        Ok(s) => state.structure = Some(s),
        Err(e) => {
            checks.push(CheckResult::from_failures(
                "structure_assembly",
                vec![Failure::new("assembly", e.to_string())],
            ));
        }
    }
    finish(Stage::Build, start, None, checks, payload)
}

fn run_verify(state: &StageState) -> StageRecord {
    let s = state.structure.as_ref().expect("structure assembled");
    verify_stage_record(s)
}

/// Runs the axiom stage on an already assembled structure. The pipeline
/// uses it after a build; callers holding a structure from elsewhere can
/// use it to get the same report entry.
pub fn verify_stage_record(s: &FrobeniusStructure) -> StageRecord {
    let start = Instant::now();
    let checks = verify_frobenius(s).checks;
    finish(Stage::Verify, start, None, checks, Map::new())
}

fn run_roundtrip(state: &StageState) -> StageRecord {
    let start = Instant::now();
    let s = state.structure.as_ref().expect("structure assembled");
    let g = state.g.as_ref().expect("instance realized");
    let mut failures = Vec::new();
    match s.intersection_form() {
        Ok(recovered) => {
            let n = g.n();
            for a in 0..n {
                for b in 0..n {
                    if recovered.entry(a, b) != g.entry(a, b) {
                        failures.push(Failure::new(
                            format!("entry ({},{})", a + 1, b + 1),
                            format!(
                                "input has {}, recovered {}",
                                g.entry(a, b),
                                recovered.entry(a, b)
                            ),
                        ));
                    }
                }
            }
        }
        Err(e) => failures.push(Failure::new("assembly", e.to_string())),
    }
    let checks = vec![CheckResult::from_failures("intersection_roundtrip", failures)];
    finish(Stage::Roundtrip, start, None, checks, Map::new())
}

fn run_uniqueness(state: &StageState) -> StageRecord {
    let start = Instant::now();
    let s = state.structure.as_ref().expect("structure assembled");
    let mut failures = Vec::new();
    let baseline = s.intersection_form().ok();
    let base_report = verify_frobenius(s);
    let factors = [
        Rat::one(),
        Rat::from_int(-1),
        Rat::from_int(2),
        Rat::new(1, 3).expect("nonzero denominator"),
    ];
    for c in &factors {
        let scaled = match scale_structure(s, c) {
            Ok(scaled) => scaled,
            Err(e) => {
                failures.push(Failure::new(format!("c={c}"), e.to_string()));
                continue;
            }
        };
        let report = verify_frobenius(&scaled);
        for (check, base) in report.checks.iter().zip(&base_report.checks) {
            if check.status != base.status {
                failures.push(Failure::new(
                    format!("c={c}"),
                    format!(
                        "axiom check {} changes status under scaling",
                        check.id
                    ),
                ));
            }
        }
        match (&baseline, scaled.intersection_form().ok()) {
            (Some(b), Some(r)) if b == &r => {}
            _ => failures.push(Failure::new(
                format!("c={c}"),
                "recovered intersection form changed under scaling",
            )),
        }
        match match_up_to_scaling(s, &scaled) {
            Ok(MatchResult::Matched { factor }) if &factor == c => {}
            Ok(MatchResult::Matched { factor }) => failures.push(Failure::new(
                format!("c={c}"),
                format!("matching recovered {factor} instead"),
            )),
            Ok(MatchResult::Mismatch { detail }) => {
                failures.push(Failure::new(format!("c={c}"), detail))
            }
            Err(e) => failures.push(Failure::new(format!("c={c}"), e.to_string())),
        }
    }
    let checks = vec![CheckResult::from_failures("uniqueness_scaling", failures)];
    finish(Stage::Uniqueness, start, None, checks, Map::new())
}

/// Runs the requested stages in order. The caller passes stages in
/// dependency order; a stage whose upstream artifact is missing (no
/// solved connection, no assembled structure) is recorded as skipped,
/// while mere check failures upstream do not stop later stages.
pub fn run_pipeline(
    spec: &InstanceSpec,
    stages: &[Stage],
    opts: &RunOptions,
    digest: String,
) -> PipelineReport {
    let mut state = StageState {
        g: None,
        eta: None,
        outcome: None,
        structure: None,
    };
    let mut records: Vec<StageRecord> = Vec::new();
    for &stage in stages {
        let ready = match stage {
            Stage::Pencil => true,
            Stage::Build => state.outcome.is_some(),
            Stage::Verify | Stage::Roundtrip | Stage::Uniqueness => state.structure.is_some(),
        };
        if !ready {
            records.push(StageRecord::skipped(stage));
            continue;
        }
        let record = match stage {
            Stage::Pencil => run_pencil(spec, opts, &mut state),
            Stage::Build => {
                let mut r = run_build(&mut state);
                if r.status == CheckStatus::Pass && state.structure.is_none() {
                    r.status = CheckStatus::Fail;
                }
                r
            }
            Stage::Verify => run_verify(&state),
            Stage::Roundtrip => run_roundtrip(&state),
            Stage::Uniqueness => run_uniqueness(&state),
        };
        records.push(record);
    }
    PipelineReport {
        digest,
        mode: spec.mode.name(),
        seed: opts.seed,
        stages: records,
    }
}
