use std::process::Command;

use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", self.stdout))
    }
}

pub fn sktour(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_sktour"))
        .args(args)
        .env_remove("SKTOUR_THREADS")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Structural check against `schema/report.schema.json`: required keys,
/// no extra keys, and the declared JSON types.
pub fn assert_matches_schema(report: &Value) {
    let schema: Value =
        serde_json::from_str(include_str!("../../schema/report.schema.json")).expect("schema parses");
    let obj = report.as_object().expect("report is an object");
    for key in schema["required"].as_array().unwrap() {
        assert!(obj.contains_key(key.as_str().unwrap()), "missing {key}");
    }
    let props = schema["properties"].as_object().unwrap();
    for (key, value) in obj {
        let prop = props.get(key).unwrap_or_else(|| panic!("unexpected key {key}"));
        let ok = match prop["type"].as_str().unwrap() {
            "string" => value.is_string(),
            "object" => value.is_object(),
            "integer" => value.is_u64(),
            other => panic!("schema type {other} not handled"),
        };
        assert!(ok, "{key} has wrong type: {value}");
        if let Some(allowed) = prop.get("enum").and_then(Value::as_array) {
            assert!(allowed.contains(value), "{key} = {value} not in enum");
        }
    }
}
