//! Exact JSON encoding of the core types.
//!
//! Rationals travel as `"p"` or `"p/q"` strings, never as floats.
//! Polynomials are lists of terms sorted by exponent vector; series
//! coefficients are lists of rational strings ordered by power. Decoding
//! always validates against a concrete coefficient ring, and every
//! diagnostic names the field it refers to.

use flatpencil_core::{
    Coeff, CoeffKind, ConstMetric, GradedPoly, IntersectionForm, QSeries, Rat, RingConfig, TauPoly,
};
use serde_json::{Map, Value};

pub type ParseResult<T> = Result<T, String>;

pub fn fail(path: &str, msg: impl core::fmt::Display) -> String {
    format!("field \"{path}\": {msg}")
}

pub fn rat_to_value(r: &Rat) -> Value {
    Value::String(r.to_string())
}

pub fn rat_from_value(v: &Value, path: &str) -> ParseResult<Rat> {
    match v {
        Value::String(s) => Rat::parse(s).map_err(|e| fail(path, e)),
        _ => Err(fail(path, "expected a rational encoded as a string")),
    }
}

pub fn usize_from_value(v: &Value, path: &str) -> ParseResult<usize> {
    v.as_u64()
        .and_then(|u| usize::try_from(u).ok())
        .ok_or_else(|| fail(path, "expected an unsigned integer"))
}

fn exp_from_value(v: &Value, arity: usize, path: &str) -> ParseResult<Vec<u32>> {
    let arr = v
        .as_array()
        .ok_or_else(|| fail(path, "expected an array of exponents"))?;
    if arr.len() != arity {
        return Err(fail(
            path,
            format!("expected {arity} exponents, found {}", arr.len()),
        ));
    }
    arr.iter()
        .map(|e| {
            e.as_u64()
                .and_then(|u| u32::try_from(u).ok())
                .ok_or_else(|| fail(path, "exponents must be small unsigned integers"))
        })
        .collect()
}

fn series_to_value(s: &QSeries) -> Value {
    let coeffs: Vec<Value> = s.coeffs().iter().map(rat_to_value).collect();
    let mut m = Map::new();
    m.insert("q".into(), Value::Array(coeffs));
    Value::Object(m)
}

fn coeff_to_value(c: &Coeff) -> Value {
    match c {
        Coeff::Rat(r) => rat_to_value(r),
        Coeff::Ser(s) => {
            if s.is_constant() {
                rat_to_value(&s.coeff(0))
            } else {
                series_to_value(s)
            }
        }
    }
}

/// Decodes a coefficient for the given ring. A plain rational string is
/// lifted into series rings as a constant; a `{"q": [...]}` object is
/// only accepted in series rings, padded or cut to the ring truncation.
fn coeff_from_value(ring: &RingConfig, v: &Value, path: &str) -> ParseResult<Coeff> {
    match v {
        Value::String(_) => Ok(ring.lift(rat_from_value(v, path)?)),
        Value::Object(m) => {
            let CoeffKind::Ser { truncation } = ring.kind() else {
                return Err(fail(path, "series coefficient in a rational instance"));
            };
            for k in m.keys() {
                if k != "q" {
                    return Err(fail(path, format!("unknown field \"{k}\"")));
                }
            }
            let list = m
                .get("q")
                .and_then(Value::as_array)
                .ok_or_else(|| fail(path, "\"q\" must be an array of rationals"))?;
            let mut coeffs = vec![Rat::zero(); truncation];
            for (k, entry) in list.iter().enumerate().take(truncation) {
                coeffs[k] = rat_from_value(entry, path)?;
            }
            Ok(Coeff::Ser(QSeries::from_coeffs(coeffs)))
        }
        _ => Err(fail(path, "expected a rational string or a series object")),
    }
}

pub fn poly_to_value(p: &GradedPoly) -> Value {
    let mut terms = Vec::new();
    for (e, c) in p.terms() {
        let mut t = Map::new();
        t.insert(
            "exp".into(),
            Value::Array(e.iter().map(|&x| Value::from(x)).collect()),
        );
        t.insert("coeff".into(), coeff_to_value(c));
        terms.push(Value::Object(t));
    }
    Value::Array(terms)
}

pub fn poly_from_value(ring: &RingConfig, v: &Value, path: &str) -> ParseResult<GradedPoly> {
    let arr = v
        .as_array()
        .ok_or_else(|| fail(path, "expected an array of terms"))?;
    let mut p = GradedPoly::zero(ring);
    for (i, term) in arr.iter().enumerate() {
        let tp = format!("{path}[{i}]");
        let m = term
            .as_object()
            .ok_or_else(|| fail(&tp, "expected a term object"))?;
        for k in m.keys() {
            if k != "exp" && k != "coeff" {
                return Err(fail(&tp, format!("unknown field \"{k}\"")));
            }
        }
        let exp = m
            .get("exp")
            .ok_or_else(|| fail(&tp, "missing \"exp\""))
            .and_then(|e| exp_from_value(e, ring.var_count(), &format!("{tp}.exp")))?;
        let coeff = m
            .get("coeff")
            .ok_or_else(|| fail(&tp, "missing \"coeff\""))
            .and_then(|c| coeff_from_value(ring, c, &format!("{tp}.coeff")))?;
        p.add_term(exp, coeff);
    }
    Ok(p)
}

pub fn metric_to_value(eta: &ConstMetric) -> Value {
    let n = eta.n();
    let rows: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| rat_to_value(eta.upper(i, j))).collect()))
        .collect();
    Value::Array(rows)
}

pub fn metric_from_value(v: &Value, path: &str) -> ParseResult<ConstMetric> {
    let rows = v
        .as_array()
        .ok_or_else(|| fail(path, "expected a square matrix of rationals"))?;
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = row
            .as_array()
            .ok_or_else(|| fail(&rp, "expected a row array"))?;
        let mut r = Vec::new();
        for (j, entry) in row.iter().enumerate() {
            r.push(rat_from_value(entry, &format!("{rp}[{j}]"))?);
        }
        out.push(r);
    }
    ConstMetric::new(out).map_err(|e| fail(path, e))
}

pub fn form_to_value(g: &IntersectionForm) -> Value {
    let n = g.n();
    let rows: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| poly_to_value(g.entry(i, j))).collect()))
        .collect();
    Value::Array(rows)
}

pub fn form_from_value(ring: &RingConfig, v: &Value, path: &str) -> ParseResult<IntersectionForm> {
    let n = ring.degree().n();
    let rows = v
        .as_array()
        .ok_or_else(|| fail(path, "expected a square matrix of polynomials"))?;
    if rows.len() != n {
        return Err(fail(
            path,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = row
            .as_array()
            .ok_or_else(|| fail(&rp, "expected a row array"))?;
        if row.len() != n {
            return Err(fail(
                &rp,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        let mut r = Vec::new();
        for (j, entry) in row.iter().enumerate() {
            r.push(poly_from_value(ring, entry, &format!("{rp}[{j}]"))?);
        }
        out.push(r);
    }
    IntersectionForm::new(out).map_err(|e| fail(path, e))
}

pub fn taupoly_to_value(f: &TauPoly) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), poly_to_value(&f.p));
    m.insert("tau".into(), poly_to_value(&f.tau));
    Value::Object(m)
}

/// Canonical bytes of a report or fixture document: pretty-printed with
/// sorted keys and a trailing newline. Byte-stable for equal values.
pub fn canonical_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serializing a finite document");
    s.push('\n');
    s.into_bytes()
}
