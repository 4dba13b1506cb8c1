//! Reading and writing JSON files, with the per-invocation tolerance and
//! order overrides applied before parsing.

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::Path;

use homqg::io::{self, StructureFile};
use homqg::{LinearOperator, ScalarRing};
use serde_json::{json, Value};

use crate::outcome::Failure;

#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub order: Option<usize>,
}

pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    io::parse_value(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn is_complex_pair(v: &Value) -> bool {
    matches!(v.as_array().map(Vec::as_slice), Some([a, b]) if a.is_number() && b.is_number())
}

/// Truncates every series scalar (an array of `[re, im]` pairs) to `keep`
/// coefficients.
fn truncate_series(v: &mut Value, keep: usize) {
    if let Value::Array(items) = v {
        if !items.is_empty() && items.iter().all(is_complex_pair) {
            items.truncate(keep);
        } else {
            items.iter_mut().for_each(|x| truncate_series(x, keep));
        }
    }
}

/// Rewrites the `ring` of a file in place. A series file can be read at a
/// lower order than it was written at, never a higher one.
pub fn apply_overrides(v: &mut Value, ov: Overrides) -> Result<(), Failure> {
    let Some(ring) = v.get_mut("ring").filter(|r| r.is_object()) else {
        return Ok(());
    };
    if let Some(t) = ov.tolerance {
        ring["tolerance"] = json!(t);
    }
    if let (Some(order), Some("series")) = (ov.order, ring.get("kind").and_then(Value::as_str)) {
        let written = ring.get("order").and_then(Value::as_u64).unwrap_or(0) as usize;
        if order > written {
            return Err(Failure::input(format!(
                "--order {order} exceeds the order {written} the file was written at"
            )));
        }
        ring["order"] = json!(order);
        if let Some(obj) = v.as_object_mut() {
            for (key, field) in obj.iter_mut() {
                if key != "ring" && key != "dim" && key != "out_dims" && key != "in_dims" {
                    truncate_series(field, order + 1);
                }
            }
        }
    }
    Ok(())
}

fn with_path<T>(path: &Path, r: homqg::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::from(e).context(path.display().to_string()))
}

pub fn read_structure(path: &Path, ov: Overrides) -> Result<StructureFile, Failure> {
    let mut v = read_json(path)?;
    apply_overrides(&mut v, ov)?;
    with_path(path, StructureFile::from_json(&v))
}

/// Re-reads an emitted structure under the overrides, so that verification
/// sees exactly what was written.
pub fn reload_structure(s: &StructureFile, ov: Overrides) -> Result<StructureFile, Failure> {
    let mut v = s.to_json()?;
    apply_overrides(&mut v, ov)?;
    Ok(StructureFile::from_json(&v)?)
}

/// An operator file, with its optional `alpha` matrix.
pub fn read_operator(
    path: &Path,
    ov: Overrides,
) -> Result<(LinearOperator, Option<LinearOperator>), Failure> {
    let mut v = read_json(path)?;
    apply_overrides(&mut v, ov)?;
    let op = with_path(path, io::operator_from_json(&v))?;
    let alpha = match v.get("alpha") {
        None | Some(Value::Null) => None,
        Some(a) => {
            let d = op.out_dims().first().copied().unwrap_or(0);
            Some(with_path(
                path,
                io::matrix_from_json(a, op.ring(), d, "$.alpha"),
            )?)
        }
    };
    Ok((op, alpha))
}

/// A square matrix file, either bare or under `key`.
pub fn read_matrix(
    path: &Path,
    key: &str,
    ring: &ScalarRing,
    d: usize,
) -> Result<LinearOperator, Failure> {
    let v = read_json(path)?;
    with_path(path, io::square_matrix_file(&v, key, ring, d))
}

pub fn operator_with_alpha(
    op: &LinearOperator,
    alpha: Option<&LinearOperator>,
) -> Result<Value, Failure> {
    let mut v = io::operator_to_json(op)?;
    if let Some(a) = alpha {
        v["alpha"] = io::matrix_to_json(a, "$.alpha")?;
    }
    Ok(v)
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != ErrorKind::BrokenPipe => {
                    Err(Failure::input(format!("stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}
