//! Wire formats. Matrices are `{"rows","cols","entries":[[re,im],…]}` in
//! row-major order; floats are written in shortest round-trip form, so
//! `f64` data survives a write/read cycle bit for bit.

use nalgebra::{Complex, DVector};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extremality::ExtremalityReport;
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::maps::{ChoiMap, DecomposableSpec};
use crate::scalar::Real;
use crate::states::{BipartiteMatrix, ProductTerm};

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field '{key}'")))
}

fn as_usize(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| bad(format!("field '{key}' must be a nonnegative integer")))
}

fn as_real<T: Real>(v: &Value) -> Result<T> {
    v.as_f64()
        .map(T::lit)
        .ok_or_else(|| bad("expected a number"))
}

fn complex_to_json<T: Real>(z: Complex<T>) -> Value {
    json!([z.re.as_f64(), z.im.as_f64()])
}

fn complex_from_json<T: Real>(v: &Value) -> Result<Complex<T>> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex::new(as_real(re)?, as_real(im)?)),
        _ => Err(bad("complex entries are [re, im] pairs")),
    }
}

pub fn vector_to_json<T: Real>(v: &DVector<Complex<T>>) -> Value {
    Value::Array(v.iter().map(|&z| complex_to_json(z)).collect())
}

pub fn vector_from_json<T: Real>(v: &Value) -> Result<DVector<Complex<T>>> {
    let items = v.as_array().ok_or_else(|| bad("vector must be an array"))?;
    let entries = items.iter().map(complex_from_json).collect::<Result<Vec<_>>>()?;
    Ok(DVector::from_vec(entries))
}

pub fn matrix_to_json<T: Real>(m: &ComplexMatrix<T>) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.row_major_entries().into_iter().map(complex_to_json).collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json<T: Real>(v: &Value) -> Result<ComplexMatrix<T>> {
    let rows = as_usize(v, "rows")?;
    let cols = as_usize(v, "cols")?;
    let entries = field(v, "entries")?
        .as_array()
        .ok_or_else(|| bad("'entries' must be an array"))?
        .iter()
        .map(complex_from_json)
        .collect::<Result<Vec<_>>>()?;
    ComplexMatrix::new(rows, cols, entries)
}

pub fn bipartite_to_json<T: Real>(x: &BipartiteMatrix<T>) -> Value {
    json!({
        "m": x.m(),
        "n": x.n(),
        "matrix": matrix_to_json(&x.matrix().to_complex_matrix()),
    })
}

pub fn bipartite_from_json<T: Real>(v: &Value) -> Result<BipartiteMatrix<T>> {
    let m = as_usize(v, "m")?;
    let n = as_usize(v, "n")?;
    let matrix = HermitianMatrix::new(matrix_from_json(field(v, "matrix")?)?)?;
    BipartiteMatrix::new(m, n, matrix)
}

pub fn choi_to_json<T: Real>(phi: &ChoiMap<T>) -> Value {
    json!({ "m": phi.m(), "n": phi.n(), "choi": bipartite_to_json(phi.choi()) })
}

pub fn choi_from_json<T: Real>(v: &Value) -> Result<ChoiMap<T>> {
    let choi = bipartite_from_json(field(v, "choi")?)?;
    if (choi.m(), choi.n()) != (as_usize(v, "m")?, as_usize(v, "n")?) {
        return Err(bad("map dimensions disagree with its Choi matrix"));
    }
    Ok(ChoiMap::from_choi(choi))
}

pub fn spec_to_json<T: Real>(spec: &DecomposableSpec<T>) -> Value {
    json!({
        "Vs": spec.vs().iter().map(matrix_to_json).collect::<Vec<_>>(),
        "Ws": spec.ws().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn spec_from_json<T: Real>(v: &Value) -> Result<DecomposableSpec<T>> {
    let list = |key: &str| -> Result<Vec<ComplexMatrix<T>>> {
        match v.get(key) {
            None => Ok(Vec::new()),
            Some(a) => a
                .as_array()
                .ok_or_else(|| bad(format!("'{key}' must be an array")))?
                .iter()
                .map(matrix_from_json)
                .collect(),
        }
    };
    DecomposableSpec::new(list("Vs")?, list("Ws")?)
}

pub fn report_to_json<T: Real>(r: &ExtremalityReport<T>) -> Value {
    json!({
        "dim_ker_D": r.dim_ker_d,
        "dim_ker_E": r.dim_ker_e,
        "dim_intersection": r.dim_intersection,
        "is_extreme": r.is_extreme,
        "generator": r.generator.as_ref().map(bipartite_to_json),
    })
}

pub fn product_terms_to_json<T: Real>(parts: &[ProductTerm<T>]) -> Value {
    Value::Array(
        parts
            .iter()
            .map(|p| json!({"xi": vector_to_json(&p.xi), "eta": vector_to_json(&p.eta), "weight": p.weight.as_f64()}))
            .collect(),
    )
}

pub fn product_terms_from_json<T: Real>(v: &Value) -> Result<Vec<ProductTerm<T>>> {
    v.as_array()
        .ok_or_else(|| bad("product decomposition must be an array"))?
        .iter()
        .map(|p| {
            Ok(ProductTerm {
                xi: vector_from_json(field(p, "xi")?)?,
                eta: vector_from_json(field(p, "eta")?)?,
                weight: as_real(field(p, "weight")?)?,
            })
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(e.to_string()))
}
