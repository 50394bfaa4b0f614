//! JSON encoding of fields, scalars, matrices, subspaces and parameter sets.

use serde_json::{json, Value};
use tdpair::leonard::LeonardParameterSet;
use tdpair::{Field, Matrix, Scalar, Subspace};

pub type ParseResult<T> = Result<T, String>;

pub fn field_to_json(field: Field) -> Value {
    match field.modulus() {
        None => json!({"kind": "Q"}),
        Some(p) => json!({"kind": "GFp", "p": p}),
    }
}

pub fn field_from_json(v: &Value) -> ParseResult<Field> {
    match v.get("kind").and_then(Value::as_str) {
        Some("Q") => Ok(Field::Rationals),
        Some("GFp") => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or("field GFp needs an integer \"p\"")?;
            let p = u32::try_from(p).map_err(|_| format!("modulus {p} out of range"))?;
            Field::prime(p).map_err(|e| e.to_string())
        }
        _ => Err(format!("unknown field {v}")),
    }
}

/// Parses `gf7`, `GF(7)` or `Q`.
pub fn field_from_flag(text: &str) -> ParseResult<Field> {
    let t = text.trim().to_ascii_lowercase();
    if t == "q" {
        return Ok(Field::Rationals);
    }
    let digits = t
        .strip_prefix("gf")
        .map(|r| r.trim_start_matches('(').trim_end_matches(')'))
        .ok_or_else(|| format!("unknown field {text:?}"))?;
    let p: u32 = digits.parse().map_err(|_| format!("unknown field {text:?}"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn scalars_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn scalar_from_json(field: Field, v: &Value) -> ParseResult<Scalar> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => return Err(format!("scalar must be a string, got {other}")),
    };
    field.parse_scalar(&text).map_err(|e| e.to_string())
}

pub fn scalars_from_json(field: Field, v: &Value, what: &str) -> ParseResult<Vec<Scalar>> {
    v.as_array()
        .ok_or_else(|| format!("{what} must be an array"))?
        .iter()
        .map(|x| scalar_from_json(field, x))
        .collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let entries: Vec<Value> = (0..m.rows()).map(|r| scalars_to_json(m.row(r))).collect();
    json!({
        "field": field_to_json(m.field()),
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": entries,
    })
}

pub fn matrix_from_json(v: &Value) -> ParseResult<Matrix> {
    let field = field_from_json(v.get("field").ok_or("matrix needs a \"field\"")?)?;
    let dim = |key: &str| {
        v.get(key)
            .and_then(Value::as_u64)
            .map(|n| n as usize)
            .ok_or_else(|| format!("matrix needs an integer {key:?}"))
    };
    let (rows, cols) = (dim("rows")?, dim("cols")?);
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or("matrix needs an \"entries\" array")?;
    if entries.len() != rows {
        return Err(format!("expected {rows} rows, found {}", entries.len()));
    }
    let parsed = entries
        .iter()
        .map(|row| scalars_from_json(field, row, "matrix row"))
        .collect::<ParseResult<Vec<_>>>()?;
    Matrix::from_rows(field, cols, parsed).map_err(|e| e.to_string())
}

/// Basis rows of the canonical echelon basis.
pub fn subspace_to_json(s: &Subspace) -> Value {
    Value::Array(s.basis_vectors().iter().map(|v| scalars_to_json(v)).collect())
}

/// Documents produced by this tool wrap their content in `payload`; inputs
/// may be given either bare or wrapped.
pub fn unwrap_payload(v: &Value) -> &Value {
    v.get("payload").unwrap_or(v)
}

pub fn candidate_to_json(a: &Matrix, astar: &Matrix) -> Value {
    json!({"A": matrix_to_json(a), "Astar": matrix_to_json(astar)})
}

pub fn candidate_from_json(v: &Value) -> ParseResult<(Matrix, Matrix)> {
    let v = unwrap_payload(v);
    let a = matrix_from_json(v.get("A").ok_or("candidate needs \"A\"")?)?;
    let astar = matrix_from_json(v.get("Astar").ok_or("candidate needs \"Astar\"")?)?;
    Ok((a, astar))
}

pub fn params_to_json(p: &LeonardParameterSet) -> Value {
    json!({
        "field": field_to_json(p.field()),
        "theta": scalars_to_json(&p.theta),
        "thetaStar": scalars_to_json(&p.theta_star),
        "varphi": scalars_to_json(&p.varphi),
        "phi": scalars_to_json(&p.phi),
    })
}

/// Accepts a bare parameter set, or a document carrying one under `params`.
pub fn params_from_json(v: &Value) -> ParseResult<LeonardParameterSet> {
    let v = unwrap_payload(v);
    let v = v.get("params").unwrap_or(v);
    let field = field_from_json(v.get("field").ok_or("parameters need a \"field\"")?)?;
    let seq = |key: &str| scalars_from_json(field, v.get(key).unwrap_or(&Value::Null), key);
    LeonardParameterSet::new(seq("theta")?, seq("thetaStar")?, seq("varphi")?, seq("phi")?)
        .map_err(|e| e.to_string())
}
