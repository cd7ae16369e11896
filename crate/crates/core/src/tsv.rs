//! Tab-separated file helpers.
//!
//! All input files are UTF-8 TSV. Decoding is done line by line so a broken
//! byte sequence can be reported with its line number. Empty lines are
//! skipped; a trailing `\r` (CRLF input) is stripped.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Reads `path` and returns its non-empty lines as `(line_number, line)`
/// pairs. Line numbers are 1-based.
pub fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        if raw.is_empty() {
            continue;
        }
        let line = std::str::from_utf8(raw).map_err(|_| {
            Error::data(format!(
                "{}: line {}: invalid UTF-8",
                path.display(),
                idx + 1
            ))
        })?;
        out.push((idx + 1, line.to_string()));
    }
    Ok(out)
}

/// Splits a line into exactly `n` tab-separated fields, or `None` if the
/// column count does not match.
pub fn split_fields(line: &str, n: usize) -> Option<Vec<&str>> {
    let fields: Vec<&str> = line.split('\t').collect();
    (fields.len() == n).then_some(fields)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Formats a score with 12 significant digits, the fixed width used by all
/// ranking TSV outputs.
pub fn format_score(x: f64) -> String {
    format!("{:.11e}", x)
}
