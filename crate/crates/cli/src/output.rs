use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::settings::{Format, Settings};
use crate::CliError;

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("output failed: {e}"))
}

/// Writes the whole buffer to `--out` or standard output in one go.
pub fn emit(settings: &Settings, bytes: &[u8]) -> Result<(), CliError> {
    match &settings.out {
        Some(path) => write_file(path, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).map_err(io)?;
            stdout.flush().map_err(io)
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// The `# moller ...` echo line when `--echo-config` is set, else nothing.
pub fn echo_prefix(command: &str, settings: &Settings) -> Vec<u8> {
    if !settings.echo_config {
        return Vec::new();
    }
    let pairs: Vec<String> = settings.echo_pairs().iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("# moller {command} {}\n", pairs.join(" ")).into_bytes()
}

/// Serializes rows as CSV (header row) or `{"config": {...}, "records": [...]}`.
pub fn render<T: Serialize>(command: &str, settings: &Settings, rows: &[T]) -> Result<Vec<u8>, CliError> {
    match settings.format() {
        Format::Csv => {
            let mut buf = echo_prefix(command, settings);
            let mut w = csv::Writer::from_writer(&mut buf);
            for row in rows {
                w.serialize(row).map_err(io)?;
            }
            w.flush().map_err(io)?;
            drop(w);
            Ok(buf)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a, T> {
                command: &'a str,
                config: BTreeMap<&'static str, String>,
                records: &'a [T],
            }
            let doc = Doc { command, config: settings.echo_pairs(), records: rows };
            let mut buf = serde_json::to_vec_pretty(&doc).map_err(io)?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}
