use std::fs;
use std::io::Write;
use std::path::Path;

use waldspace::io::Table;
use waldspace::{Error, Result};

use crate::Format;

pub fn render(t: &Table, format: Format) -> String {
    match format {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json(),
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    fs::write(path, text).map_err(|e| io_error(path, e))
}

/// Writes to `out`, or stdout when absent.
pub fn emit_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::InvalidArgument(format!("cannot write to stdout: {e}")))
        }
    }
}

pub fn emit(t: &Table, format: Format, out: Option<&Path>) -> Result<()> {
    emit_text(&render(t, format), out)
}

pub fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))
}
