use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rosen_core::Error;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) | Failure::Io(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Check(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Consistency(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// What a command prints, what it writes to `--out`, and whether its checks passed.
pub struct Report {
    pub stdout: String,
    pub file: Option<(PathBuf, String)>,
    pub passed: bool,
    /// Printed on stderr when the checks failed.
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(stdout: String, passed: bool) -> Report {
        Report { stdout, file: None, passed, failures: Vec::new() }
    }

    /// Sends the body to `out` when given, leaving a one-line note on stdout.
    pub fn routed(mut self, out: Option<&Path>, command: &str) -> Report {
        if let Some(path) = out {
            let body = std::mem::take(&mut self.stdout);
            self.stdout = format!("{command}: wrote {}\n", path.display());
            self.file = Some((path.to_path_buf(), body));
        }
        self
    }

    pub fn emit(self) -> Result<u8, Failure> {
        if let Some((path, body)) = &self.file {
            fs::write(path, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
        }
        let mut out = std::io::stdout().lock();
        out.write_all(self.stdout.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?;
        if self.passed {
            return Ok(0);
        }
        for f in &self.failures {
            eprintln!("FAILED: {f}");
        }
        Ok(1)
    }
}

/// Pretty JSON with a trailing newline.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Decimal digits carried by `bits` of binary precision.
pub fn decimal_digits(bits: u32) -> usize {
    (f64::from(bits) * std::f64::consts::LOG10_2).floor() as usize
}
