use std::io::Write;

use serde_json::{json, Value};

use orbitcodes::Error;

/// A finished command: its JSON document, the text rendering, and the exit code.
pub struct Output {
    pub doc: Value,
    pub text: String,
    pub code: u8,
}

impl Output {
    pub fn new(command: &str, mut doc: Value, text: String, code: u8) -> Output {
        if let Value::Object(m) = &mut doc {
            m.insert("command".into(), json!(command));
        }
        Output { doc, text, code }
    }

    pub fn emit(&self, json: bool) {
        let body = if json {
            serde_json::to_string_pretty(&self.doc).expect("serializable") + "\n"
        } else {
            self.text.clone()
        };
        // a closed pipe (`| head`) is not an error worth reporting
        let _ = std::io::stdout().lock().write_all(body.as_bytes());
    }
}

pub fn emit_error(e: &Error, json: bool) {
    if json {
        let doc = json!({
            "command": "error",
            "error": e.to_string(),
            "exit_code": crate::error_code(e),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        eprintln!("error: {e}");
    }
}

/// Appends `key: value` lines.
pub struct Text(String);

impl Text {
    pub fn new() -> Text {
        Text(String::new())
    }

    pub fn line(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Text {
        self.0.push_str(&format!("{key}: {value}\n"));
        self
    }

    pub fn raw(&mut self, s: &str) -> &mut Text {
        self.0.push_str(s);
        self.0.push('\n');
        self
    }

    pub fn finish(&mut self) -> String {
        std::mem::take(&mut self.0)
    }
}
