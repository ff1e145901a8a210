//! Versioned JSON envelopes and their validation against the shipped schema.

use std::sync::OnceLock;

use serde_json::{json, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// The schema file, also shipped at `schemas/report.schema.json`.
pub const SCHEMA: &str = include_str!("../../../schemas/report.schema.json");

pub fn envelope(command: &str, input: Value, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": input,
        "result": result,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub valid: bool,
    pub reasons: Vec<String>,
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value = serde_json::from_str(SCHEMA).expect("shipped schema is JSON");
        jsonschema::validator_for(&schema).expect("shipped schema compiles")
    })
}

/// Checks a report against the schema. A report written under another
/// schema version is rejected with a reason naming both versions.
pub fn schema_validate(report: &Value) -> Validation {
    let mut reasons = Vec::new();
    match report.get("schema_version").and_then(Value::as_u64) {
        Some(v) if v == SCHEMA_VERSION => {}
        Some(v) => reasons.push(format!(
            "version mismatch: report has schema_version {v}, expected {SCHEMA_VERSION}"
        )),
        None => reasons.push("missing or non-integer schema_version".into()),
    }
    for e in validator().iter_errors(report) {
        let at = e.instance_path.to_string();
        reasons.push(if at.is_empty() {
            e.to_string()
        } else {
            format!("{at}: {e}")
        });
    }
    Validation {
        valid: reasons.is_empty(),
        reasons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit_report() -> Value {
        envelope(
            "orbit",
            json!({ "map": "x^2+t", "depth": 2 }),
            json!({
                "map": "x^2+t",
                "ring": "Z[t]",
                "depth": 2,
                "c": ["-t", "t^2+t"],
                "crit0": ["t", "t^2+t"],
            }),
        )
    }

    #[test]
    fn fresh_report_is_valid() {
        let v = schema_validate(&orbit_report());
        assert!(v.valid, "{:?}", v.reasons);
    }

    #[test]
    fn missing_field_is_invalid() {
        let mut r = orbit_report();
        r["result"].as_object_mut().unwrap().remove("c");
        assert!(!schema_validate(&r).valid);
        let mut r = orbit_report();
        r.as_object_mut().unwrap().remove("input");
        assert!(!schema_validate(&r).valid);
    }

    #[test]
    fn old_version_names_the_mismatch() {
        let mut r = orbit_report();
        r["schema_version"] = json!(0);
        let v = schema_validate(&r);
        assert!(!v.valid);
        assert!(v.reasons[0].contains("version mismatch"));
    }

    #[test]
    fn unknown_command_is_rejected() {
        let mut r = orbit_report();
        r["command"] = json!("plot");
        assert!(!schema_validate(&r).valid);
    }
}
