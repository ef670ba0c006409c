//! Human and JSON report rendering.

use serde_json::Value;

use crate::Format;

/// A command's result: a human rendering, a JSON value, and the exit code.
pub struct Report {
    pub human: String,
    pub json: Value,
    pub exit: u8,
}

impl Report {
    pub fn ok(human: String, json: Value) -> Self {
        Report { human, json, exit: 0 }
    }

    pub fn print(&self, format: Format) {
        match format {
            Format::Human => println!("{}", self.human.trim_end()),
            Format::Json => println!("{}", self.json),
        }
    }
}

/// Right-pad a field name for the aligned human layout.
pub fn field(name: &str, value: impl std::fmt::Display) -> String {
    format!("{name:<12} {value}\n")
}
