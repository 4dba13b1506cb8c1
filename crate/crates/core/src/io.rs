//! JSON interchange for rings, scalars, operators and structure files.
//!
//! Structure files look like
//! `{ "ring": {...}, "dim": d, "mu": d×d×d, "delta": d×d×d, "alpha": d×d,
//!    "c": d (optional), "R": d×d (optional) }`
//! with `mu[i][j][k]` the coefficient of `e_k` in `e_i e_j`,
//! `delta[k][i][j]` the coefficient of `e_i ⊗ e_j` in `Δ(e_k)`, and
//! `alpha[i][j]` the coefficient of `e_i` in `α(e_j)`.
//! A complex scalar is `[re, im]` (a bare number is read as real); an
//! h-series is `[[re, im], ...]` with coefficients of `h^0..h^order`.
//! The ring is `{"kind": "complex"}` or `{"kind": "series", "order": N}`,
//! each with an optional `"tolerance"`.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::homstruct::HomBialgebra;
use crate::quasitri::QTHomBialgebra;
use crate::scalars::{HSeries, RingKind, Scalar, ScalarRing};
use crate::tensor::{LinearOperator, TensorElement};

fn finite(x: f64, path: &str) -> Result<Value> {
    if x.is_finite() {
        Ok(json!(x))
    } else {
        Err(Error::parse(
            path,
            format!("cannot serialize non-finite value {x}"),
        ))
    }
}

fn complex_to_json(z: Complex64, path: &str) -> Result<Value> {
    Ok(Value::Array(vec![finite(z.re, path)?, finite(z.im, path)?]))
}

fn complex_from_json(v: &Value, path: &str) -> Result<Complex64> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(Error::parse(path, "expected numeric [re, im]")),
        },
        _ => Err(Error::parse(
            path,
            format!("expected a complex number [re, im], got {v}"),
        )),
    }
}

pub fn ring_to_json(ring: &ScalarRing) -> Value {
    match ring.series_order() {
        None => json!({"kind": "complex", "tolerance": ring.tolerance()}),
        Some(o) => json!({"kind": "series", "order": o, "tolerance": ring.tolerance()}),
    }
}

pub fn ring_from_json(v: &Value, path: &str) -> Result<ScalarRing> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse(path, "ring must be an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse(format!("{path}.kind"), "missing ring kind"))?;
    let ring = match kind {
        "complex" => ScalarRing::complex(),
        "series" => {
            let order = obj.get("order").and_then(Value::as_u64).ok_or_else(|| {
                Error::parse(
                    format!("{path}.order"),
                    "series ring needs a positive integer order",
                )
            })?;
            ScalarRing::series(order as usize)
                .map_err(|e| Error::parse(format!("{path}.order"), e.to_string()))?
        }
        other => {
            return Err(Error::parse(
                format!("{path}.kind"),
                format!("unknown ring kind {other:?}; expected \"complex\" or \"series\""),
            ))
        }
    };
    match obj.get("tolerance") {
        None => Ok(ring),
        Some(t) => {
            let t = t.as_f64().ok_or_else(|| {
                Error::parse(format!("{path}.tolerance"), "tolerance must be a number")
            })?;
            ring.with_tolerance(t)
                .map_err(|e| Error::parse(format!("{path}.tolerance"), e.to_string()))
        }
    }
}

pub fn scalar_to_json(s: &Scalar, path: &str) -> Result<Value> {
    match s {
        Scalar::Complex(z) => complex_to_json(*z, path),
        Scalar::Series(h) => h
            .coeffs()
            .iter()
            .map(|z| complex_to_json(*z, path))
            .collect::<Result<Vec<_>>>()
            .map(Value::Array),
    }
}

pub fn scalar_from_json(v: &Value, ring: &ScalarRing, path: &str) -> Result<Scalar> {
    match ring.kind() {
        RingKind::ApproxComplex => complex_from_json(v, path).map(Scalar::Complex),
        RingKind::HSeries => {
            let order = ring.series_order().expect("series ring");
            let items = v
                .as_array()
                .ok_or_else(|| Error::parse(path, "expected a series [[re, im], ...]"))?;
            if items.len() != order + 1 {
                return Err(Error::parse(
                    path,
                    format!(
                        "series needs {} coefficients, got {}",
                        order + 1,
                        items.len()
                    ),
                ));
            }
            let coeffs = items
                .iter()
                .enumerate()
                .map(|(i, z)| complex_from_json(z, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            HSeries::new(coeffs)
                .map(Scalar::Series)
                .map_err(|e| Error::parse(path, e.to_string()))
        }
    }
}

/// Reads a nested array of the given shape, in row-major order.
fn nested_from_json(
    v: &Value,
    shape: &[usize],
    ring: &ScalarRing,
    path: &str,
) -> Result<Vec<Scalar>> {
    let mut out = Vec::with_capacity(shape.iter().product());
    fn walk(
        v: &Value,
        shape: &[usize],
        ring: &ScalarRing,
        path: &str,
        out: &mut Vec<Scalar>,
    ) -> Result<()> {
        let Some((&n, rest)) = shape.split_first() else {
            out.push(scalar_from_json(v, ring, path)?);
            return Ok(());
        };
        let items = v
            .as_array()
            .ok_or_else(|| Error::parse(path, format!("expected an array of length {n}")))?;
        if items.len() != n {
            return Err(Error::parse(
                path,
                format!("expected length {n}, got {}", items.len()),
            ));
        }
        for (i, item) in items.iter().enumerate() {
            walk(item, rest, ring, &format!("{path}[{i}]"), out)?;
        }
        Ok(())
    }
    walk(v, shape, ring, path, &mut out)?;
    Ok(out)
}

fn nested_to_json(values: &[Scalar], shape: &[usize], path: &str) -> Result<Value> {
    let Some((&n, rest)) = shape.split_first() else {
        return scalar_to_json(&values[0], path);
    };
    let stride: usize = rest.iter().product();
    (0..n)
        .map(|i| nested_to_json(&values[i * stride..(i + 1) * stride], rest, path))
        .collect::<Result<Vec<_>>>()
        .map(Value::Array)
}

/// A `d x d` matrix `m[row][col]` as an operator `[d] -> [d]`.
pub fn matrix_from_json(
    v: &Value,
    ring: &ScalarRing,
    d: usize,
    path: &str,
) -> Result<LinearOperator> {
    let entries = nested_from_json(v, &[d, d], ring, path)?;
    LinearOperator::from_rows(*ring, &[d], &[d], entries)
}

pub fn matrix_to_json(op: &LinearOperator, path: &str) -> Result<Value> {
    nested_to_json(op.entries(), &[op.rows(), op.cols()], path)
}

/// `{ "ring", "out_dims", "in_dims", "matrix" }` with `matrix[row][col]`.
pub fn operator_to_json(op: &LinearOperator) -> Result<Value> {
    Ok(json!({
        "ring": ring_to_json(op.ring()),
        "out_dims": op.out_dims(),
        "in_dims": op.in_dims(),
        "matrix": matrix_to_json(op, "$.matrix")?,
    }))
}

pub fn operator_from_json(v: &Value) -> Result<LinearOperator> {
    let ring = ring_from_json(field(v, "ring", "$")?, "$.ring")?;
    let dims = |name: &str| -> Result<Vec<usize>> {
        let arr = field(v, name, "$")?
            .as_array()
            .ok_or_else(|| Error::parse(format!("$.{name}"), "expected an array of dimensions"))?;
        arr.iter()
            .enumerate()
            .map(|(i, d)| {
                d.as_u64()
                    .filter(|&d| d > 0)
                    .map(|d| d as usize)
                    .ok_or_else(|| {
                        Error::parse(format!("$.{name}[{i}]"), "expected a positive integer")
                    })
            })
            .collect()
    };
    let out_dims = dims("out_dims")?;
    let in_dims = dims("in_dims")?;
    let rows = out_dims.iter().product();
    let cols = in_dims.iter().product();
    let entries = nested_from_json(field(v, "matrix", "$")?, &[rows, cols], &ring, "$.matrix")?;
    LinearOperator::from_rows(ring, &out_dims, &in_dims, entries)
}

fn field<'a>(v: &'a Value, name: &str, path: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| Error::parse(format!("{path}.{name}"), "missing field"))
}

/// Contents of a structure file.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureFile {
    pub bialgebra: HomBialgebra,
    pub r: Option<TensorElement>,
}

impl StructureFile {
    pub fn from_qt(q: &QTHomBialgebra) -> Self {
        StructureFile {
            bialgebra: q.base().clone(),
            r: Some(q.r().clone()),
        }
    }

    /// The quasi-triangular structure, if `R` is present.
    pub fn qt(&self) -> Option<Result<QTHomBialgebra>> {
        self.r
            .as_ref()
            .map(|r| QTHomBialgebra::new(self.bialgebra.clone(), r.clone()))
    }

    pub fn ring(&self) -> &ScalarRing {
        self.bialgebra.ring()
    }

    pub fn to_json(&self) -> Result<Value> {
        let b = &self.bialgebra;
        let d = b.dim();
        let mu: Vec<Scalar> = (0..d * d * d)
            .map(|flat| {
                let (ij, k) = (flat / d, flat % d);
                b.mu().entry(k, ij).clone()
            })
            .collect();
        let delta: Vec<Scalar> = (0..d * d * d)
            .map(|flat| {
                let (k, ij) = (flat / (d * d), flat % (d * d));
                b.delta().entry(ij, k).clone()
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("ring".into(), ring_to_json(b.ring()));
        obj.insert("dim".into(), json!(d));
        obj.insert("mu".into(), nested_to_json(&mu, &[d, d, d], "$.mu")?);
        obj.insert(
            "delta".into(),
            nested_to_json(&delta, &[d, d, d], "$.delta")?,
        );
        obj.insert("alpha".into(), matrix_to_json(b.alpha(), "$.alpha")?);
        if let Some(c) = b.weak_unit() {
            obj.insert("c".into(), nested_to_json(c.coeffs(), &[d], "$.c")?);
        }
        if let Some(r) = &self.r {
            obj.insert("R".into(), nested_to_json(r.coeffs(), &[d, d], "$.R")?);
        }
        Ok(Value::Object(obj))
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json()?).expect("values are serializable"))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if !v.is_object() {
            return Err(Error::parse("$", "structure file must be a JSON object"));
        }
        let ring = ring_from_json(field(v, "ring", "$")?, "$.ring")?;
        let d = field(v, "dim", "$")?
            .as_u64()
            .ok_or_else(|| Error::parse("$.dim", "dim must be a non-negative integer"))?
            as usize;
        if d == 0 {
            return Err(Error::parse("$.dim", "dim must be at least 1"));
        }
        let mu = nested_from_json(field(v, "mu", "$")?, &[d, d, d], &ring, "$.mu")?;
        let delta = nested_from_json(field(v, "delta", "$")?, &[d, d, d], &ring, "$.delta")?;
        let alpha = matrix_from_json(field(v, "alpha", "$")?, &ring, d, "$.alpha")?;
        let mu_op = LinearOperator::from_fn(ring, &[d], &[d, d], |k, ij| mu[ij * d + k].clone());
        let delta_op =
            LinearOperator::from_fn(ring, &[d, d], &[d], |ij, k| delta[k * d * d + ij].clone());
        let c = match v.get("c") {
            None | Some(Value::Null) => None,
            Some(c) => Some(TensorElement::from_coeffs(
                ring,
                &[d],
                nested_from_json(c, &[d], &ring, "$.c")?,
            )?),
        };
        let r = match v.get("R") {
            None | Some(Value::Null) => None,
            Some(r) => Some(TensorElement::from_coeffs(
                ring,
                &[d, d],
                nested_from_json(r, &[d, d], &ring, "$.R")?,
            )?),
        };
        let bialgebra = HomBialgebra::new(mu_op, delta_op, alpha, c)?;
        Ok(StructureFile { bialgebra, r })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        Self::from_json(&v)
    }
}

/// Parses raw JSON text with a line/column diagnostic on failure.
pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

/// A square matrix file: either a bare nested array or an object with the
/// matrix under `key`. Scalars are read in `ring`.
pub fn square_matrix_file(
    v: &Value,
    key: &str,
    ring: &ScalarRing,
    d: usize,
) -> Result<LinearOperator> {
    if v.is_array() {
        return matrix_from_json(v, ring, d, "$");
    }
    let m = field(v, key, "$")?;
    matrix_from_json(m, ring, d, &format!("$.{key}"))
}
