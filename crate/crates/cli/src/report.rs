use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Failure before any verdict was reached: bad flags, unreadable files,
/// inputs outside a cap.
#[derive(Debug)]
pub struct ConfigError {
    pub kind: &'static str,
    pub message: String,
}

impl ConfigError {
    pub fn usage(message: impl Into<String>) -> ConfigError {
        ConfigError { kind: "usage", message: message.into() }
    }

    pub fn input(message: impl fmt::Display) -> ConfigError {
        ConfigError { kind: "input", message: message.to_string() }
    }

    pub fn compute(message: impl fmt::Display) -> ConfigError {
        ConfigError { kind: "compute", message: message.to_string() }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind, "message": self.message } }).to_string()
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

pub type CliResult<T> = Result<T, ConfigError>;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// The outcome of one subcommand, before the run configuration is attached.
#[derive(Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub result: Value,
    pub hashes: BTreeMap<String, String>,
    /// Files written, by role.
    pub outputs: BTreeMap<String, String>,
}

impl Outcome {
    pub fn new(pass: bool, result: Value) -> Outcome {
        Outcome { pass, result, ..Outcome::default() }
    }

    pub fn hash(mut self, role: &str, h: String) -> Outcome {
        self.hashes.insert(role.to_string(), h);
        self
    }

    pub fn wrote(mut self, role: &str, path: &str, contents: &[u8]) -> Outcome {
        self.outputs.insert(role.to_string(), path.to_string());
        self.hashes.insert(format!("{role}_sha256"), sha256_hex(contents));
        self
    }
}

/// Full report: tool version, run configuration, hashes, verdict, result.
/// `serde_json` maps are ordered, so equal inputs serialize identically.
pub fn envelope(command: &str, config: Value, out: &Outcome) -> Value {
    json!({
        "tool": "ipskit",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "hashes": out.hashes,
        "outputs": out.outputs,
        "verdict": if out.pass { "pass" } else { "fail" },
        "result": out.result,
    })
}

pub fn render_text(report: &Value) -> String {
    let mut s = format!(
        "{} {}: {}\n",
        report["tool"].as_str().unwrap_or(""),
        report["command"].as_str().unwrap_or(""),
        report["verdict"].as_str().unwrap_or("")
    );
    for section in ["config", "hashes", "outputs", "result"] {
        if let Some(map) = report[section].as_object() {
            for (k, v) in map {
                let v = match v {
                    Value::String(t) => t.clone(),
                    other => other.to_string(),
                };
                s.push_str(&format!("{section}.{k}: {v}\n"));
            }
        }
    }
    s
}
