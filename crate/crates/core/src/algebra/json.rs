//! JSON encodings. Exact numbers are always strings.

use serde_json::{json, Value};

use super::matrix::QMat;
use super::mpoly::MPoly;
use super::proj::ProjPoint;
use super::scalar::Scalar;
use crate::error::{Error, Result};

pub fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn scalars(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

pub fn point(p: &ProjPoint) -> Value {
    scalars(p.coords())
}

pub fn matrix(m: &QMat) -> Value {
    Value::Array((0..m.rows()).map(|i| scalars(&m.row(i))).collect())
}

/// `{vars, degree, terms: [{exp, num, den}]}`; extension coefficients use `ext` instead.
pub fn mpoly(p: &MPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .rev()
        .map(|(m, c)| match c.as_rational() {
            Some(r) => json!({
                "exp": m.0,
                "num": r.numer().to_string(),
                "den": r.denom().to_string(),
            }),
            None => json!({ "exp": m.0, "ext": c.to_string() }),
        })
        .collect();
    json!({ "vars": p.nvars(), "degree": p.degree().unwrap_or(0), "terms": terms })
}

pub fn mpoly_from(v: &Value) -> Result<MPoly> {
    let bad = |what: &str| Error::Parse(format!("polynomial json: {what}"));
    let nvars = v["vars"].as_u64().ok_or_else(|| bad("vars"))? as usize;
    let mut terms = Vec::new();
    for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
        let exp: Vec<u32> = t["exp"]
            .as_array()
            .ok_or_else(|| bad("exp"))?
            .iter()
            .map(|e| e.as_u64().map(|x| x as u32).ok_or_else(|| bad("exp entry")))
            .collect::<Result<_>>()?;
        let c: Scalar = if let Some(s) = t["ext"].as_str() {
            s.parse()?
        } else {
            let num = t["num"].as_str().ok_or_else(|| bad("num"))?;
            let den = t["den"].as_str().unwrap_or("1");
            format!("{num}/{den}").parse()?
        };
        terms.push((exp, c));
    }
    MPoly::from_terms(nvars, terms)
}
