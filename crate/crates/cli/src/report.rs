//! Deterministic report emission: canonical JSON (alphabetical keys, all
//! numbers as decimal strings) and fixed-width plain-text tables.

use std::str::FromStr;

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?}; expected \"json\" or \"text\"")),
        }
    }
}

/// A command's outcome: the canonical JSON value, its plain-text
/// projection, and the overall verdict that selects the exit code.
pub struct Report {
    pub json: Value,
    /// Table rows, the first being the header; may be empty.
    pub table: Vec<Vec<String>>,
    pub passed: bool,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out =
                serde_json::to_string_pretty(&report.json).expect("reports serialize");
            out.push('\n');
            out
        }
        Format::Text => {
            let mut widths: Vec<usize> = Vec::new();
            for row in &report.table {
                for (i, cell) in row.iter().enumerate() {
                    if i >= widths.len() {
                        widths.push(0);
                    }
                    widths[i] = widths[i].max(cell.len());
                }
            }
            let mut out = String::new();
            for row in &report.table {
                let line = row
                    .iter()
                    .enumerate()
                    .map(|(i, cell)| format!("{cell:<width$}", width = widths[i]))
                    .collect::<Vec<_>>()
                    .join("  ");
                out.push_str(line.trim_end());
                out.push('\n');
            }
            out
        }
    }
}
