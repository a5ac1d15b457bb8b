//! JSON encodings shared by all file formats: rationals as `"p/q"` strings,
//! vectors as arrays of such strings, matrices as row-major arrays of rows.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qlinalg::{parse_rational, Matrix, Poly, Rational};

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector(r)).collect())
}

/// Column vectors of `m` as a list.
pub fn column_list(m: &Matrix) -> Value {
    Value::Array(m.columns().iter().map(|c| vector(c)).collect())
}

pub fn poly(p: &Poly) -> Value {
    vector(p.coeffs())
}

pub fn parse_rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(crate::qlinalg::rat(n.as_i64().unwrap())),
        other => Err(Error::Parse(format!(
            "expected rational string, got {other}"
        ))),
    }
}

pub fn parse_vector(v: &Value) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("expected array, got {v}")))?
        .iter()
        .map(parse_rational_value)
        .collect()
}

pub fn parse_matrix(v: &Value) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected matrix as array of rows".into()))?
        .iter()
        .map(parse_vector)
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    Matrix::from_rows(&rows).map_err(|e| Error::Parse(format!("ragged matrix: {e}")))
}

/// List of column vectors, all of length `n`.
pub fn parse_column_list(v: &Value, n: usize) -> Result<Matrix> {
    let cols = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected list of vectors".into()))?
        .iter()
        .map(parse_vector)
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = cols.iter().find(|c| c.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    Ok(Matrix::from_columns(n, &cols))
}

pub fn weights(w: &[i64]) -> Value {
    json!({ "weights": w })
}
