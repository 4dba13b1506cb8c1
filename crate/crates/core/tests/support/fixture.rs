//! The committed `B_α` fixture: oracle output for a few values of `c`.

#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::b_alpha_oracle::{b_alpha_v1, Series};

pub const ORDER: usize = 8;
pub const CASES: [Complex64; 3] = [
    Complex64::new(0.0, 0.0),
    Complex64::new(0.3, 0.0),
    Complex64::new(1.0, 0.5),
];

pub struct Case {
    pub c: Complex64,
    pub matrix: [[Series; 4]; 4],
}

/// The fixture lives with the core crate; other crates reach it from the
/// workspace layout.
pub fn path() -> PathBuf {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let core = if env!("CARGO_PKG_NAME") == "homqg" {
        manifest
    } else {
        manifest.join("../core")
    };
    core.join("tests/fixtures/b_alpha_v1.json")
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn unpair(v: &Value) -> Complex64 {
    Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

pub fn generate() -> Value {
    let cases: Vec<Value> = CASES
        .iter()
        .map(|&c| {
            let m = b_alpha_v1(c, ORDER);
            let rows: Vec<Value> = m
                .iter()
                .map(|row| {
                    Value::Array(
                        row.iter()
                            .map(|s| Value::Array(s.iter().copied().map(pair).collect()))
                            .collect(),
                    )
                })
                .collect();
            json!({"c": pair(c), "matrix": rows})
        })
        .collect();
    json!({
        "basis": ["v0v0", "v0v1", "v1v0", "v1v1"],
        "order": ORDER,
        "cases": cases,
    })
}

pub fn load() -> Vec<Case> {
    let text = std::fs::read_to_string(path()).expect("fixture present");
    let v: Value = serde_json::from_str(&text).expect("fixture is JSON");
    assert_eq!(v["order"].as_u64(), Some(ORDER as u64));
    v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|case| {
            let matrix = std::array::from_fn(|r| {
                std::array::from_fn(|col| {
                    case["matrix"][r][col]
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(unpair)
                        .collect()
                })
            });
            Case {
                c: unpair(&case["c"]),
                matrix,
            }
        })
        .collect()
}
