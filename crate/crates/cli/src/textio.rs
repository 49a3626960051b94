//! The array text format: one signed 64-bit integer per line; lines
//! starting with `#` and blank lines are skipped.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::Failure;

pub fn parse_keys(text: &str) -> Result<Vec<i64>, String> {
    let mut keys = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let k = line.parse::<i64>().map_err(|e| format!("line {}: {line:?}: {e}", no + 1))?;
        keys.push(k);
    }
    Ok(keys)
}

pub fn read_keys(path: &Path) -> Result<Vec<i64>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let keys = parse_keys(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    if keys.is_empty() {
        return Err(Failure::Io(format!("{}: no keys", path.display())));
    }
    Ok(keys)
}

pub fn format_keys(header: Option<&str>, keys: impl IntoIterator<Item = i64>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    for k in keys {
        out.push_str(&k.to_string());
        out.push('\n');
    }
    out
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}
