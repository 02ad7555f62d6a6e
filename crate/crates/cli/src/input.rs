use std::str::FromStr;

use klein_core::cf1d::QuadraticSurd;
use klein_core::sail3d::Cone;
use klein_core::{Error, IntMatrix, IntPolynomial};
use num_bigint::BigInt;
use serde_json::Value;

/// Read `@path` as a file, anything else verbatim.
pub fn text(arg: &str) -> Result<String, Error> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Parse { position: 0, message: format!("{path}: {e}") }),
        None => Ok(arg.to_string()),
    }
}

fn int_at(s: &str, offset: usize) -> Result<BigInt, Error> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse { position: offset, message: format!("bad integer {:?}", s.trim()) })
}

fn json_int(v: &Value, what: &str) -> Result<BigInt, Error> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(Error::Parse { position: 0, message: format!("{what}: expected an integer") }),
    };
    int_at(&s, 0)
}

/// A square integer matrix as JSON rows `[[0,1],[1,1]]` or as `0 1; 1 1`.
pub fn matrix(arg: &str) -> Result<IntMatrix, Error> {
    let s = text(arg)?;
    let t = s.trim();
    let rows: Vec<Vec<BigInt>> = if t.starts_with('[') {
        let v: Value = serde_json::from_str(t)
            .map_err(|e| Error::Parse { position: e.column().saturating_sub(1), message: e.to_string() })?;
        let rows = v.as_array().ok_or(Error::Parse { position: 0, message: "expected an array of rows".into() })?;
        rows.iter()
            .map(|r| {
                r.as_array()
                    .ok_or(Error::Parse { position: 0, message: "expected a row array".into() })?
                    .iter()
                    .map(|x| json_int(x, "entry"))
                    .collect()
            })
            .collect::<Result<_, _>>()?
    } else {
        let mut offset = 0;
        let mut rows = Vec::new();
        for row in t.split(';') {
            let mut r = Vec::new();
            let mut pos = offset;
            for tok in row.split([' ', ',', '\t', '\n']) {
                if !tok.is_empty() {
                    r.push(int_at(tok, pos)?);
                }
                pos += tok.len() + 1;
            }
            offset += row.len() + 1;
            rows.push(r);
        }
        rows
    };
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) || n == 0 {
        return Err(Error::Parse { position: 0, message: format!("expected a square matrix, got {n} rows of lengths {:?}", rows.iter().map(Vec::len).collect::<Vec<_>>()) });
    }
    IntMatrix::from_rows(rows)
}

/// `(P+sqrt(D))/Q`, or JSON `{"P":…,"Q":…,"D":…}`.
pub fn surd(arg: &str) -> Result<QuadraticSurd, Error> {
    let s = text(arg)?;
    let t = s.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t)
            .map_err(|e| Error::Parse { position: e.column().saturating_sub(1), message: e.to_string() })?;
        let field = |k: &str| {
            v.get(k).ok_or(Error::Parse { position: 0, message: format!("missing field {k}") }).and_then(|x| json_int(x, k))
        };
        QuadraticSurd::new(field("P")?, field("Q")?, field("D")?)
    } else {
        QuadraticSurd::from_str(t)
    }
}

/// Comma-separated coefficients, constant term first.
pub fn poly(arg: &str) -> Result<IntPolynomial, Error> {
    let mut pos = 0;
    let mut c = Vec::new();
    for tok in arg.split(',') {
        c.push(int_at(tok, pos)?);
        pos += tok.len() + 1;
    }
    Ok(IntPolynomial::new(c))
}

pub fn cone(arg: &str) -> Result<Cone, Error> {
    Cone::from_str(arg)
}
