//! Report construction with deterministic key order and 12-significant-digit
//! float formatting. Keys are emitted in insertion order; every float is
//! rounded before it enters a `Value`, so identical inputs always produce
//! identical bytes.

use serde_json::{json, Map, Value};

/// Round to 12 significant digits; serde_json then prints the shortest
/// representation of the rounded value.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap()
}

pub fn num(x: f64) -> Value {
    json!(sig12(x))
}

pub fn num_list(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn complex(re: f64, im: f64) -> Value {
    Value::Array(vec![num(re), num(im)])
}

pub struct Report {
    command: String,
    status: &'static str,
    payload: Option<Value>,
    code: Option<String>,
    diagnostics: Vec<String>,
}

impl Report {
    pub fn ok(command: &str, payload: Value) -> Self {
        Report {
            command: command.into(),
            status: "ok",
            payload: Some(payload),
            code: None,
            diagnostics: Vec::new(),
        }
    }

    pub fn error(command: &str, code: &str, message: String) -> Self {
        Report {
            command: command.into(),
            status: "error",
            payload: None,
            code: Some(code.into()),
            diagnostics: vec![message],
        }
    }

    pub fn undecided(command: &str, message: String) -> Self {
        Report {
            command: command.into(),
            status: "undecided",
            payload: None,
            code: Some("undecidable".into()),
            diagnostics: vec![message],
        }
    }

    pub fn unsupported(command: &str, code: &str, message: String) -> Self {
        Report {
            command: command.into(),
            status: "unsupported",
            payload: None,
            code: Some(code.into()),
            diagnostics: vec![message],
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            "ok" => 0,
            "undecided" | "unsupported" => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("status".into(), json!(self.status));
        if let Some(p) = &self.payload {
            m.insert("payload".into(), p.clone());
        }
        if let Some(c) = &self.code {
            m.insert("code".into(), json!(c));
        }
        m.insert("diagnostics".into(), json!(self.diagnostics));
        serde_json::to_string(&Value::Object(m)).unwrap()
    }
}
