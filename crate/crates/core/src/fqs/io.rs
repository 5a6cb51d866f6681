use num_rational::BigRational;
use serde_json::{json, Value};

use super::FiniteQuadraticSpace;
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational};

pub fn space_to_json(s: &FiniteQuadraticSpace) -> Value {
    let k = s.num_generators();
    let q: Vec<String> = (0..k).map(|i| format_rational(&s.q_gen(i))).collect();
    let b: Vec<Vec<String>> = (0..k)
        .map(|i| (0..k).map(|j| format_rational(&s.b_gen(i, j))).collect())
        .collect();
    json!({ "b": b, "orders": s.orders(), "q": q })
}

fn rat_at(v: &Value, loc: String) -> Result<BigRational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(Error::parse(loc, "expected a rational string")),
    };
    parse_rational(&text).ok_or_else(|| Error::parse(loc, format!("bad rational {text:?}")))
}

pub fn space_from_json(v: &Value) -> Result<FiniteQuadraticSpace> {
    let orders = v
        .get("orders")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("orders", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, x)| x.as_u64().ok_or_else(|| Error::parse(format!("orders[{i}]"), "expected a positive integer")))
        .collect::<Result<Vec<u64>>>()?;
    let q = v
        .get("q")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("q", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, x)| rat_at(x, format!("q[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let b = v
        .get("b")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("b", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.as_array()
                .ok_or_else(|| Error::parse(format!("b[{i}]"), "expected an array"))?
                .iter()
                .enumerate()
                .map(|(j, x)| rat_at(x, format!("b[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteQuadraticSpace::new(orders, q, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{root_lattice, RootSystem};

    #[test]
    fn round_trip() {
        let s = FiniteQuadraticSpace::from_lattice(&root_lattice(RootSystem::D(5)).unwrap()).unwrap();
        assert_eq!(space_from_json(&space_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn bad_entry_has_location() {
        let v = json!({ "orders": [2], "q": ["x"], "b": [["0"]] });
        let e = space_from_json(&v).unwrap_err().to_string();
        assert!(e.contains("q[0]"), "{e}");
    }
}
