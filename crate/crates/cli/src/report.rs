use num_complex::Complex64;
use serde_json::{json, Map, Value as Json};

use irrstokes_core::field::Value;
use irrstokes_core::formal::{Direction, Q};
use irrstokes_core::linalg::Mat;

pub const SCHEMA_VERSION: &str = "1";

pub fn complex(z: Complex64) -> Json {
    json!({ "re": z.re, "im": z.im })
}

/// Exact values become strings; floats become `{re, im}`.
pub fn value(v: &Value) -> Json {
    match v {
        Value::Exact(c) => Json::String(c.to_string()),
        Value::Float(z) => complex(*z),
    }
}

pub fn rational(q: &Q) -> Json {
    Json::String(q.to_string())
}

pub fn direction(d: &Direction) -> Json {
    match d {
        Direction::Exact(q) => rational(q),
        Direction::Approx(x) => json!(x),
    }
}

pub fn value_matrix(m: &Mat<Value>) -> Json {
    Json::Array(
        (0..m.rows())
            .map(|i| Json::Array(m.row(i).iter().map(value).collect()))
            .collect(),
    )
}

pub fn complex_matrix(m: &Mat<Complex64>) -> Json {
    Json::Array(
        (0..m.rows())
            .map(|i| Json::Array(m.row(i).iter().copied().map(complex).collect()))
            .collect(),
    )
}

pub fn complex_list(v: &[Complex64]) -> Json {
    Json::Array(v.iter().copied().map(complex).collect())
}

pub fn value_list(v: &[Value]) -> Json {
    Json::Array(v.iter().map(value).collect())
}

/// Accumulates the pieces of one report.
#[derive(Default)]
pub struct Report {
    pub inputs: Map<String, Json>,
    pub outputs: Map<String, Json>,
    pub residuals: Map<String, Json>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn input(&mut self, k: &str, v: impl Into<Json>) {
        self.inputs.insert(k.to_string(), v.into());
    }

    pub fn output(&mut self, k: &str, v: impl Into<Json>) {
        self.outputs.insert(k.to_string(), v.into());
    }

    pub fn residual(&mut self, k: &str, v: f64) {
        self.residuals.insert(k.to_string(), json!(v));
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    pub fn finish(self, command: &[String], timing: Option<f64>) -> Json {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "residuals": self.residuals,
            "warnings": self.warnings,
            "timing": timing.map(|ms| json!({ "elapsed_ms": ms })),
        })
    }
}
