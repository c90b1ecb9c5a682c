use serde_json::{Map, Value};

/// Text lines for humans plus the same facts as a JSON object.
#[derive(Debug, Default)]
pub struct Report {
    pub passed: bool,
    lines: Vec<String>,
    data: Map<String, Value>,
}

impl Report {
    pub fn new() -> Self {
        Report { passed: true, ..Default::default() }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn print(&self, json: bool) {
        if json {
            let mut data = self.data.clone();
            data.insert("passed".into(), self.passed.into());
            println!("{}", serde_json::to_string_pretty(&Value::Object(data)).expect("report serializes"));
        } else {
            for l in &self.lines {
                println!("{l}");
            }
        }
    }
}

/// An error that stops a command, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<octarec::Error> for Failure {
    fn from(e: octarec::Error) -> Self {
        let code = match e {
            octarec::Error::PathMismatch(..) | octarec::Error::NonIntegralExponent { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::invalid(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::invalid(format!("bad document: {e}"))
    }
}
