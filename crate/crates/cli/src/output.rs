use std::fmt::Display;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_PREFIX: &str = "dsc";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn new(kind: &'static str, e: impl Display) -> Self {
        CliError {
            kind,
            message: e.to_string(),
            code: 1,
        }
    }

    pub fn usage(e: impl Display) -> Self {
        CliError {
            kind: "usage",
            message: e.to_string(),
            code: 2,
        }
    }

    pub fn report(&self) -> ExitCode {
        let v = json!({
            "schema": schema_tag("error"),
            "error": { "kind": self.kind, "message": self.message },
        });
        eprintln!("{v}");
        ExitCode::from(self.code)
    }
}

pub fn schema_tag(name: &str) -> String {
    format!("{SCHEMA_PREFIX}/{name}/v{SCHEMA_VERSION}")
}

/// Serialize `body` and add the schema tag as its first-level `schema` key.
pub fn tagged<T: Serialize>(name: &str, body: &T) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(body).map_err(|e| CliError::new("serialize", e))?;
    match v.as_object_mut() {
        Some(obj) => {
            obj.insert("schema".into(), Value::String(schema_tag(name)));
            Ok(v)
        }
        None => Err(CliError::new("serialize", "output is not a JSON object")),
    }
}

pub fn print_json(v: &Value) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| CliError::new("io", e))?;
    writeln!(out).map_err(|e| CliError::new("io", e))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}
