use std::fs;
use std::path::Path;

use qwm_core::analysis::PositionDistribution;
use serde::Serialize;

use crate::error::CliError;

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    fs::write(dir.join(name), text)?;
    Ok(())
}

/// Writes `t,x,p` rows for every step, positions in increasing order.
pub fn write_distributions(dir: &Path, name: &str, history: &[PositionDistribution]) -> Result<(), CliError> {
    let mut w = writer(dir, name)?;
    w.write_record(["t", "x", "p"]).map_err(|e| CliError::Io(e.to_string()))?;
    for d in history {
        for (x, p) in d.iter() {
            w.serialize((d.t, x, p)).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_rows<R: Serialize>(dir: &Path, name: &str, header: &[&str], rows: &[R]) -> Result<(), CliError> {
    let mut w = writer(dir, name)?;
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Headers are written explicitly so every file has the same first line
/// regardless of the row type.
fn writer(dir: &Path, name: &str) -> Result<csv::Writer<fs::File>, CliError> {
    csv::WriterBuilder::new().has_headers(false).from_path(dir.join(name)).map_err(|e| CliError::Io(e.to_string()))
}

pub fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}
