use serde_json::{json, Map, Value};

use super::Lattice;
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, RatMatrix, RatVec};

pub(crate) fn matrix_to_json(m: &RatMatrix) -> Value {
    Value::Array(
        m.to_rat_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(format_rational(x))).collect()))
            .collect(),
    )
}

pub(crate) fn matrix_from_json(v: &Value, field: &str) -> Result<Vec<RatVec>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::parse(field, "expected an array of rows"))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row
                .as_array()
                .ok_or_else(|| Error::parse(format!("{field}[{i}]"), "expected an array"))?;
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    let loc = format!("{field}[{i}][{j}]");
                    match x {
                        Value::String(s) => parse_rational(s)
                            .ok_or_else(|| Error::parse(loc, format!("bad fraction {s:?}"))),
                        Value::Number(n) => n
                            .as_i64()
                            .map(crate::linalg::int_rat)
                            .ok_or_else(|| Error::parse(loc, "expected an integer")),
                        _ => Err(Error::parse(loc, "expected a fraction string")),
                    }
                })
                .collect()
        })
        .collect()
}

/// `{"embedding"?, "gram", "name"?, "rank"}` with fractions as "p/q".
pub fn lattice_to_json(l: &Lattice) -> Value {
    let mut m = Map::new();
    m.insert("rank".into(), json!(l.rank()));
    m.insert("gram".into(), matrix_to_json(l.gram()));
    if let Some(name) = l.name() {
        m.insert("name".into(), json!(name));
    }
    if let Some(e) = l.embedding() {
        m.insert("embedding".into(), matrix_to_json(e));
    }
    Value::Object(m)
}

pub fn lattice_from_json(v: &Value) -> Result<Lattice> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse("lattice", "expected an object"))?;
    let gram_v = obj
        .get("gram")
        .ok_or_else(|| Error::parse("gram", "missing field"))?;
    let rows = matrix_from_json(gram_v, "gram")?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::parse("gram", "gram matrix must be square"));
    }
    if let Some(rank) = obj.get("rank") {
        if rank.as_u64() != Some(n as u64) {
            return Err(Error::parse("rank", format!("rank does not match gram size {n}")));
        }
    }
    let gram = if n == 0 {
        RatMatrix::zeros(0, 0)
    } else {
        RatMatrix::from_rat_rows(&rows)
    };
    let mut l = Lattice::new(gram)?;
    if let Some(name) = obj.get("name") {
        let name = name
            .as_str()
            .ok_or_else(|| Error::parse("name", "expected a string"))?;
        l = l.with_name(name);
    }
    if let Some(e) = obj.get("embedding") {
        let rows = matrix_from_json(e, "embedding")?;
        if rows.len() != n {
            return Err(Error::parse("embedding", "one row per basis vector expected"));
        }
        l = l.with_embedding(RatMatrix::from_rat_rows(&rows));
    }
    Ok(l)
}
