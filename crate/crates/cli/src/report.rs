use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One JSON document per invocation.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub results: Vec<Value>,
    pub status: Status,
    pub elapsed_ms: String,
}

pub struct ReportBuilder {
    command: String,
    inputs: Vec<String>,
    results: Vec<Value>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(command: &str, inputs: Vec<String>) -> Self {
        Self { command: command.into(), inputs, results: Vec::new(), started: Instant::now() }
    }

    pub fn push(&mut self, kind: &str, value: impl Serialize) {
        let mut v = serde_json::to_value(value).unwrap_or(Value::Null);
        if let Value::Object(map) = &mut v {
            map.insert("kind".into(), Value::String(kind.into()));
        } else {
            v = serde_json::json!({ "kind": kind, "value": v });
        }
        self.results.push(stringify_numbers(v));
    }

    pub fn finish(self, status: Status) -> Report {
        Report {
            command: self.command,
            inputs: self.inputs,
            results: self.results,
            status,
            elapsed_ms: self.started.elapsed().as_millis().to_string(),
        }
    }
}

/// Rewrites every JSON number as its decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(items) => Value::Array(items.into_iter().map(stringify_numbers).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}
