//! Instance files: the single structured format every subcommand reads.
//!
//! An instance names a coordinate ring (mode, degrees, charge,
//! coefficient domain), a constant pairing, and one of three payloads: an
//! explicit metric block, a reflection-group block to construct one, or
//! seed data for the series oracle. All type invariants are enforced at
//! parse time with field-precise diagnostics; anything that parses is
//! ready to run.

use std::path::Path;

use flatpencil_core::{
    CoeffKind, ConstMetric, DegreeVector, GroupKind, IntersectionForm, Mode, Rat, RingConfig,
    SeriesSeed,
};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::format::{
    fail, form_from_value, metric_from_value, poly_from_value, rat_from_value, usize_from_value,
    ParseResult,
};

/// How the instance's ring is specified.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpecMode {
    /// Polynomial ring, every degree positive.
    Generic,
    /// Last coordinate degenerate, charge one.
    Elliptic,
    /// Ring and metric constructed from a reflection group.
    Coxeter,
}

impl SpecMode {
    pub fn name(self) -> &'static str {
        match self {
            SpecMode::Generic => "generic",
            SpecMode::Elliptic => "elliptic",
            SpecMode::Coxeter => "coxeter",
        }
    }
}

/// Optional tunables carried inside an instance file. Command-line flags
/// override these; built-in defaults fill whatever remains unset.
#[derive(Clone, Default, Debug)]
pub struct SpecOptions {
    pub seed: Option<u64>,
    pub points: Option<usize>,
    pub lambdas: Option<Vec<Rat>>,
    pub symbolic_curvature: Option<bool>,
}

/// A parsed and validated instance.
#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub mode: SpecMode,
    pub ring: Option<RingConfig>,
    pub eta: Option<ConstMetric>,
    pub metric: Option<IntersectionForm>,
    pub coxeter: Option<(GroupKind, usize)>,
    pub series_seed: Option<SeriesSeed>,
    pub options: SpecOptions,
}

fn require<'v>(m: &'v serde_json::Map<String, Value>, key: &str) -> ParseResult<&'v Value> {
    m.get(key)
        .ok_or_else(|| format!("missing required field \"{key}\""))
}

fn forbid(m: &serde_json::Map<String, Value>, key: &str, mode: &str) -> ParseResult<()> {
    if m.contains_key(key) {
        return Err(fail(key, format!("not allowed in {mode} mode")));
    }
    Ok(())
}

fn parse_options(v: &Value) -> ParseResult<SpecOptions> {
    let m = v
        .as_object()
        .ok_or_else(|| fail("options", "expected an object"))?;
    let mut out = SpecOptions::default();
    for (k, entry) in m {
        match k.as_str() {
            "seed" => {
                out.seed = Some(
                    entry
                        .as_u64()
                        .ok_or_else(|| fail("options.seed", "expected an unsigned integer"))?,
                );
            }
            "points" => out.points = Some(usize_from_value(entry, "options.points")?),
            "lambdas" => {
                let arr = entry
                    .as_array()
                    .ok_or_else(|| fail("options.lambdas", "expected an array of rationals"))?;
                let mut ls = Vec::new();
                for (i, l) in arr.iter().enumerate() {
                    ls.push(rat_from_value(l, &format!("options.lambdas[{i}]"))?);
                }
                out.lambdas = Some(ls);
            }
            "symbolic_curvature" => {
                out.symbolic_curvature = Some(entry.as_bool().ok_or_else(|| {
                    fail("options.symbolic_curvature", "expected a boolean")
                })?);
            }
            other => return Err(fail("options", format!("unknown field \"{other}\""))),
        }
    }
    Ok(out)
}

fn parse_coxeter_block(v: &Value) -> ParseResult<(GroupKind, usize)> {
    let m = v
        .as_object()
        .ok_or_else(|| fail("coxeter", "expected an object"))?;
    for k in m.keys() {
        if k != "type" && k != "rank" {
            return Err(fail("coxeter", format!("unknown field \"{k}\"")));
        }
    }
    let kind = match require(m, "type").map_err(|e| fail("coxeter", e))?.as_str() {
        Some("A") | Some("a") => GroupKind::TypeA,
        Some("B") | Some("b") => GroupKind::TypeB,
        _ => return Err(fail("coxeter.type", "expected \"A\" or \"B\"")),
    };
    let rank = usize_from_value(
        require(m, "rank").map_err(|e| fail("coxeter", e))?,
        "coxeter.rank",
    )?;
    Ok((kind, rank))
}

fn parse_series_seed(ring: &RingConfig, v: &Value) -> ParseResult<SeriesSeed> {
    let m = v
        .as_object()
        .ok_or_else(|| fail("series_seed", "expected an object"))?;
    for k in m.keys() {
        if k != "q0_extra" && k != "pinned" {
            return Err(fail("series_seed", format!("unknown field \"{k}\"")));
        }
    }
    let q0_extra = match m.get("q0_extra") {
        Some(v) => poly_from_value(ring, v, "series_seed.q0_extra")?,
        None => flatpencil_core::GradedPoly::zero(ring),
    };
    let mut pinned = Vec::new();
    if let Some(pins) = m.get("pinned") {
        let arr = pins
            .as_array()
            .ok_or_else(|| fail("series_seed.pinned", "expected an array"))?;
        for (i, pin) in arr.iter().enumerate() {
            let pp = format!("series_seed.pinned[{i}]");
            let pm = pin
                .as_object()
                .ok_or_else(|| fail(&pp, "expected an object"))?;
            for k in pm.keys() {
                if k != "order" && k != "exponents" && k != "value" {
                    return Err(fail(&pp, format!("unknown field \"{k}\"")));
                }
            }
            let order = usize_from_value(
                require(pm, "order").map_err(|e| fail(&pp, e))?,
                &format!("{pp}.order"),
            )?;
            let exps = require(pm, "exponents").map_err(|e| fail(&pp, e))?;
            let exps = exps
                .as_array()
                .ok_or_else(|| fail(&format!("{pp}.exponents"), "expected an array"))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .and_then(|u| u32::try_from(u).ok())
                        .ok_or_else(|| {
                            fail(
                                &format!("{pp}.exponents"),
                                "exponents must be small unsigned integers",
                            )
                        })
                })
                .collect::<ParseResult<Vec<u32>>>()?;
            let value = rat_from_value(
                require(pm, "value").map_err(|e| fail(&pp, e))?,
                &format!("{pp}.value"),
            )?;
            pinned.push((order, exps, value));
        }
    }
    Ok(SeriesSeed { q0_extra, pinned })
}

/// Parses an instance document. `truncation_override` replaces the series
/// truncation from the file before any coefficient is decoded.
pub fn parse_instance(v: &Value, truncation_override: Option<usize>) -> ParseResult<InstanceSpec> {
    let m = v
        .as_object()
        .ok_or_else(|| "instance file must contain a JSON object".to_string())?;
    const KNOWN: &[&str] = &[
        "mode",
        "n",
        "label",
        "degrees",
        "charge",
        "coefficients",
        "eta",
        "metric",
        "coxeter",
        "series_seed",
        "options",
    ];
    for k in m.keys() {
        if !KNOWN.contains(&k.as_str()) {
            return Err(format!("unknown field \"{k}\""));
        }
    }
    let mode = match require(m, "mode")?.as_str() {
        Some("generic") => SpecMode::Generic,
        Some("elliptic") => SpecMode::Elliptic,
        Some("coxeter") => SpecMode::Coxeter,
        _ => return Err(fail("mode", "expected \"generic\", \"elliptic\", or \"coxeter\"")),
    };
    if let Some(label) = m.get("label") {
        if !label.is_string() {
            return Err(fail("label", "expected a string"));
        }
    }
    let options = match m.get("options") {
        Some(v) => parse_options(v)?,
        None => SpecOptions::default(),
    };

    if mode == SpecMode::Coxeter {
        for key in ["degrees", "charge", "coefficients", "eta", "metric", "series_seed"] {
            forbid(m, key, "coxeter")?;
        }
        let (kind, rank) = parse_coxeter_block(require(m, "coxeter")?)?;
        if let Some(nv) = m.get("n") {
            let n = usize_from_value(nv, "n")?;
            if n != rank {
                return Err(fail("n", format!("does not match coxeter.rank = {rank}")));
            }
        }
        return Ok(InstanceSpec {
            mode,
            ring: None,
            eta: None,
            metric: None,
            coxeter: Some((kind, rank)),
            series_seed: None,
            options,
        });
    }

    forbid(m, "coxeter", mode.name())?;
    let degrees_v = require(m, "degrees")?
        .as_array()
        .ok_or_else(|| fail("degrees", "expected an array of rational strings"))?;
    let mut degrees = Vec::new();
    for (i, d) in degrees_v.iter().enumerate() {
        degrees.push(rat_from_value(d, &format!("degrees[{i}]"))?);
    }
    if let Some(nv) = m.get("n") {
        let n = usize_from_value(nv, "n")?;
        if n != degrees.len() {
            return Err(fail(
                "n",
                format!("does not match the {} entries of \"degrees\"", degrees.len()),
            ));
        }
    }
    if mode == SpecMode::Elliptic {
        match degrees.last() {
            Some(last) if last.is_zero() => {}
            _ => return Err(fail("degrees", "d^n must be 0 in elliptic mode")),
        }
    }
    let charge = rat_from_value(require(m, "charge")?, "charge")?;
    let core_mode = match mode {
        SpecMode::Generic => Mode::Polynomial,
        SpecMode::Elliptic => Mode::Elliptic,
        SpecMode::Coxeter => unreachable!(),
    };
    let dv = DegreeVector::new(degrees, charge, core_mode).map_err(|e| fail("degrees", e))?;

    let kind = match m.get("coefficients") {
        None => CoeffKind::Rat,
        Some(Value::String(s)) if s == "rational" => CoeffKind::Rat,
        Some(Value::Object(cm)) => {
            for k in cm.keys() {
                if k != "series" {
                    return Err(fail("coefficients", format!("unknown field \"{k}\"")));
                }
            }
            let sm = cm
                .get("series")
                .and_then(Value::as_object)
                .ok_or_else(|| fail("coefficients.series", "expected an object"))?;
            for k in sm.keys() {
                if k != "truncation" {
                    return Err(fail("coefficients.series", format!("unknown field \"{k}\"")));
                }
            }
            let truncation = usize_from_value(
                sm.get("truncation")
                    .ok_or_else(|| fail("coefficients.series", "missing \"truncation\""))?,
                "coefficients.series.truncation",
            )?;
            if truncation == 0 {
                return Err(fail("coefficients.series.truncation", "must be positive"));
            }
            CoeffKind::Ser { truncation }
        }
        Some(_) => {
            return Err(fail(
                "coefficients",
                "expected \"rational\" or {\"series\": {\"truncation\": N}}",
            ))
        }
    };
    let kind = match (kind, truncation_override) {
        (CoeffKind::Ser { .. }, Some(t)) if t > 0 => CoeffKind::Ser { truncation: t },
        (k, _) => k,
    };
    let ring = RingConfig::new(dv, kind);

    let eta = metric_from_value(require(m, "eta")?, "eta")?;
    if eta.n() != ring.degree().n() {
        return Err(fail(
            "eta",
            format!(
                "size {} does not match the {} coordinates",
                eta.n(),
                ring.degree().n()
            ),
        ));
    }

    let metric = match m.get("metric") {
        Some(v) => Some(form_from_value(&ring, v, "metric")?),
        None => None,
    };
    let series_seed = match m.get("series_seed") {
        Some(v) => {
            if !matches!(ring.kind(), CoeffKind::Ser { .. }) || mode != SpecMode::Elliptic {
                return Err(fail(
                    "series_seed",
                    "only allowed for elliptic instances with series coefficients",
                ));
            }
            Some(parse_series_seed(&ring, v)?)
        }
        None => None,
    };
    if metric.is_none() && series_seed.is_none() {
        return Err("one of \"metric\" or \"series_seed\" is required".to_string());
    }

    Ok(InstanceSpec {
        mode,
        ring: Some(ring),
        eta: Some(eta),
        metric,
        coxeter: None,
        series_seed,
        options,
    })
}

/// Reads and parses an instance file, returning the spec together with
/// the digest of the raw bytes.
pub fn parse_instance_file(
    path: &Path,
    truncation_override: Option<usize>,
) -> ParseResult<(InstanceSpec, String)> {
    let raw = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let v: Value = serde_json::from_slice(&raw)
        .map_err(|e| format!("{} is not valid JSON: {e}", path.display()))?;
    let spec = parse_instance(&v, truncation_override)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((spec, digest_bytes(&raw)))
}

/// The digest recorded in every report: lowercase hex of the raw input.
pub fn digest_bytes(raw: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(raw);
    format!("sha256:{:x}", h.finalize())
}
