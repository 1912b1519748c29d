//! Deterministic result writers: identical configuration must produce
//! byte-identical output. Floats are printed with 17 significant digits
//! (lossless round trip); JSON keys serialize in sorted order.

use std::fs;
use std::path::PathBuf;

use crate::Failure;

/// 17-significant-digit float field.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes to the given file, or to standard output when there is none.
pub fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Assembles a CSV body from a header and pre-formatted rows.
pub fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    text
}

pub fn json(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("value serializes");
    text.push('\n');
    text
}
