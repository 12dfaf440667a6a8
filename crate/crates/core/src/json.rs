//! JSON encodings of fields, elements, matrices, algebras and reports.
//!
//! Elements are written as coefficient sequences, low degree first
//! (`[2, 1]` is `2 + x`). On input a bare integer is also accepted and read
//! as the element's canonical index, which for a prime field is its value.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{AlgebraSpec, DefiningMatrix};
use crate::brace::Verdict;
use crate::classify::IsoWitness;
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, FieldSpec};
use crate::holomorph::AffineMap;
use crate::matfp::MatFp;
use crate::vector::Vector;

fn bad(what: impl Into<String>) -> Error {
    Error::InvalidInput(what.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing \"{key}\"")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("\"{what}\" must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

pub fn field_to_json(f: &Field) -> Value {
    serde_json::to_value(f.spec()).expect("FieldSpec serializes")
}

/// `{"p", "k", "modulus"}`; without `modulus` the default irreducible is used.
pub fn field_from_json(v: &Value) -> Result<Arc<Field>> {
    let p = get(v, "p")?.as_u64().ok_or_else(|| bad("\"p\" must be an integer"))?;
    let k = v.get("k").map(|k| as_usize(k, "k")).transpose()?.unwrap_or(1) as u32;
    match v.get("modulus") {
        None | Some(Value::Null) => Field::new(p, k),
        Some(m) => {
            let modulus = as_array(m, "modulus")?
                .iter()
                .map(|c| {
                    c.as_u64()
                        .map(|c| c as u32)
                        .ok_or_else(|| bad("modulus coefficients must be integers"))
                })
                .collect::<Result<Vec<_>>>()?;
            if p > u32::MAX as u64 {
                return Err(Error::FieldTooLarge(p));
            }
            Field::from_spec(FieldSpec {
                p: p as u32,
                k,
                modulus,
            })
        }
    }
}

pub fn element_to_json(f: &Field, a: FieldElement) -> Value {
    json!(f.coeffs(a))
}

pub fn element_from_json(f: &Field, v: &Value) -> Result<FieldElement> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_u64()
                .ok_or_else(|| bad(format!("element {n} must be a non-negative integer")))?;
            if i >= f.order() as u64 {
                return Err(bad(format!("element index {i} outside a field of order {}", f.order())));
            }
            f.element(i as u32)
        }
        Value::Array(cs) => {
            let coeffs = cs
                .iter()
                .map(|c| {
                    c.as_u64()
                        .map(|c| c as u32)
                        .ok_or_else(|| bad("coefficients must be integers"))
                })
                .collect::<Result<Vec<_>>>()?;
            f.from_coeffs(&coeffs)
        }
        other => Err(bad(format!("cannot read a field element from {other}"))),
    }
}

pub fn vector_to_json(f: &Field, v: &[FieldElement]) -> Value {
    Value::Array(v.iter().map(|&x| element_to_json(f, x)).collect())
}

pub fn vector_from_json(f: &Field, v: &Value) -> Result<Vector> {
    as_array(v, "vector")?.iter().map(|x| element_from_json(f, x)).collect()
}

fn rows_to_json(m: &MatFp) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector_to_json(m.field(), r)).collect())
}

pub fn matrix_to_json(m: &MatFp) -> Value {
    json!({"field": field_to_json(m.field()), "rows": rows_to_json(m)})
}

pub fn matrix_from_rows(f: &Arc<Field>, rows: &Value) -> Result<MatFp> {
    let rows = as_array(rows, "rows")?
        .iter()
        .map(|r| vector_from_json(f, r))
        .collect::<Result<Vec<_>>>()?;
    MatFp::from_rows(f.clone(), rows)
}

pub fn matrix_from_json(v: &Value) -> Result<MatFp> {
    let f = field_from_json(get(v, "field")?)?;
    matrix_from_rows(&f, get(v, "rows")?)
}

/// `{"field", "n", "d", "theta"}` with `theta` an `m × m` grid of cells,
/// each a sequence of `d` elements.
pub fn algebra_to_json(alg: &AlgebraSpec) -> Value {
    let f = alg.field();
    let grid: Vec<Value> = alg
        .theta()
        .cells()
        .iter()
        .map(|row| Value::Array(row.iter().map(|cell| vector_to_json(f, cell)).collect()))
        .collect();
    json!({"field": field_to_json(f), "n": alg.n(), "d": alg.d(), "theta": grid})
}

/// Cell reader. A cell is a list of `d` elements; when `d = 1` a single
/// element is accepted as well.
fn cell_from_json(f: &Field, d: usize, v: &Value) -> Result<Vector> {
    let is_sequence = match v {
        Value::Array(items) => d > 1 || items.iter().all(|x| x.is_array()) && !items.is_empty(),
        _ => false,
    };
    let cell = if is_sequence {
        vector_from_json(f, v)?
    } else {
        vec![element_from_json(f, v)?]
    };
    if cell.len() != d {
        return Err(bad(format!("theta cell has {} entries, expected d = {d}", cell.len())));
    }
    Ok(cell)
}

/// Reads the grid of an algebra. `n` may be omitted and defaults to
/// `m + d`; `d` defaults to 1.
pub fn algebra_from_json(v: &Value) -> Result<AlgebraSpec> {
    let f = field_from_json(get(v, "field")?)?;
    let theta = theta_from_json(&f, v)?;
    let n = v
        .get("n")
        .map(|x| as_usize(x, "n"))
        .transpose()?
        .unwrap_or(theta.m() + theta.d());
    AlgebraSpec::new(f, n, theta.d(), theta)
}

/// The defining matrix of an algebra document, without validating it.
pub fn theta_from_json(f: &Arc<Field>, v: &Value) -> Result<DefiningMatrix> {
    let d = v.get("d").map(|x| as_usize(x, "d")).transpose()?.unwrap_or(1);
    let grid = as_array(get(v, "theta")?, "theta")?;
    let cells = grid
        .iter()
        .map(|row| {
            as_array(row, "theta row")?
                .iter()
                .map(|c| cell_from_json(f, d, c))
                .collect()
        })
        .collect::<Result<Vec<Vec<Vector>>>>()?;
    if cells.iter().any(|r| r.len() != cells.len()) {
        return Err(Error::DimensionMismatch("theta must be square".into()));
    }
    if cells.is_empty() {
        return Err(Error::DimensionMismatch("theta must be non-empty".into()));
    }
    DefiningMatrix::from_cells(cells)
}

pub fn affine_to_json(a: &AffineMap) -> Value {
    json!({"linear": rows_to_json(&a.linear), "translation": vector_to_json(a.field(), &a.translation)})
}

pub fn affine_from_json(f: &Arc<Field>, v: &Value) -> Result<AffineMap> {
    AffineMap::new(
        matrix_from_rows(f, get(v, "linear")?)?,
        vector_from_json(f, get(v, "translation")?)?,
    )
}

pub fn verdict_to_json(f: &Field, v: &Verdict) -> Value {
    let witness = v
        .witness
        .as_ref()
        .map(|w| Value::Array(w.iter().map(|x| vector_to_json(f, x)).collect()))
        .unwrap_or(Value::Null);
    json!({
        "pass": v.pass,
        "axiom": v.axiom,
        "witness": witness,
        "mode": v.mode,
        "seed": v.seed,
    })
}

pub fn witness_to_json(w: &IsoWitness) -> Value {
    let f = w.a.field();
    json!({"A": rows_to_json(&w.a), "l": element_to_json(f, w.l)})
}
