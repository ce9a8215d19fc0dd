#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

pub fn chancut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chancut"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(args: &[&str]) -> String {
    let out = chancut(args);
    assert!(
        out.status.success(),
        "chancut {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

pub fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).expect("valid JSON")
}

pub fn schema_path(command: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(format!("{command}.schema.json"))
}

/// Validation error messages; empty when `payload` conforms.
pub fn schema_errors(command: &str, payload: &Value) -> Vec<String> {
    let text = std::fs::read_to_string(schema_path(command)).expect("schema file exists");
    let schema: Value = serde_json::from_str(&text).expect("schema is JSON");
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    let result = compiled.validate(payload);
    match result {
        Ok(()) => Vec::new(),
        Err(errors) => errors
            .map(|e| format!("{}: {}", e.instance_path, e))
            .collect(),
    }
}

/// `(subcommand name, arguments)` exercising every subcommand.
pub const INVOCATIONS: [(&str, &[&str]); 7] = [
    (
        "probs",
        &[
            "probs",
            "--beta",
            "30",
            "--phi",
            "77",
            "--beta-prime",
            "12.5",
            "--phi-prime",
            "-40",
        ],
    ),
    ("bell-test", &["bell-test"]),
    ("bell-test", &["bell-test", "--visibility", "0.65"]),
    (
        "scan",
        &[
            "scan",
            "--format",
            "json",
            "--grid",
            "phi=0:90:90",
            "--grid",
            "phi_prime=-45:45:90",
        ],
    ),
    ("swap", &["swap"]),
    ("noise-threshold", &["noise-threshold"]),
    (
        "teleport-fidelity",
        &["teleport-fidelity", "--beta", "30", "--phi", "77"],
    ),
];
