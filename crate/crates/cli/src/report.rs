//! Reports printed as human-readable lines followed by `key=value` lines.

use std::fmt::Write as _;
use std::path::Path;

use tsimg::{Error, Result};

#[derive(Debug, Default)]
pub struct Report {
    human: Vec<String>,
    pairs: Vec<String>,
}

impl Report {
    pub fn line(&mut self, text: impl Into<String>) {
        self.human.push(text.into());
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.pairs.push(format!("{key}={value}"));
    }

    /// Several pairs on one machine-readable line.
    pub fn record(&mut self, fields: &[(&str, String)]) {
        let mut line = String::new();
        for (k, (key, value)) in fields.iter().enumerate() {
            if k > 0 {
                line.push(' ');
            }
            let _ = write!(line, "{key}={value}");
        }
        self.pairs.push(line);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in self.human.iter().chain(&self.pairs) {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    /// Prints to stdout and, when `path` is given, writes the same text there.
    pub fn emit(&self, path: Option<&Path>) -> Result<()> {
        let text = self.render();
        print!("{text}");
        if let Some(p) = path {
            std::fs::write(p, &text).map_err(|e| Error::io(p, e))?;
        }
        Ok(())
    }
}
