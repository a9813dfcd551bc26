use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{Format, ScenarioConfig};
use crate::error::CliError;

/// Plot-ready numeric data with a header row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<Value>> =
            self.rows.iter().map(|r| r.iter().map(|v| json!(format!("{v:.16e}"))).collect()).collect();
        let mut text = serde_json::to_string_pretty(&json!({ "columns": self.header, "rows": rows }))
            .expect("table serializes");
        text.push('\n');
        text
    }
}

/// What a command produced, before anything touches the filesystem.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub report: Value,
    pub gates: Vec<(String, bool)>,
    pub error: Option<String>,
}

impl Outcome {
    pub fn new(table: Table, report: Value, gates: Vec<(&str, bool)>) -> Self {
        Self { table, report, gates: gates.into_iter().map(|(n, ok)| (n.to_string(), ok)).collect(), error: None }
    }

    /// A numerical failure still produces a report carrying the cause.
    pub fn failed(table: Table, report: Value, error: String) -> Self {
        Self { table, report, gates: vec![("computation".to_string(), false)], error: Some(error) }
    }

    pub fn failing_gates(&self) -> Vec<String> {
        self.gates.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()).collect()
    }
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'static str,
    config: &'a ScenarioConfig,
    wall_time_seconds: f64,
    gates: BTreeMap<String, bool>,
    checksums: BTreeMap<String, String>,
}

fn write(path: &Path, text: &str) -> Result<String, CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

pub fn write_outputs(
    command: &str,
    config: &ScenarioConfig,
    outcome: &Outcome,
    out_dir: &Path,
    wall_time_seconds: f64,
) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let mut checksums = BTreeMap::new();

    let (data_name, data) = match config.format {
        Format::Csv => (format!("{command}.csv"), outcome.table.to_csv()),
        Format::Json => (format!("{command}.json"), outcome.table.to_json()),
    };
    checksums.insert(data_name.clone(), write(&out_dir.join(&data_name), &data)?);

    let gates: BTreeMap<String, bool> = outcome.gates.iter().cloned().collect();
    let mut report = json!({
        "command": command,
        "gates": gates,
        "results": outcome.report,
    });
    if let Some(err) = &outcome.error {
        report["error"] = json!(err);
    }
    let mut report_text = serde_json::to_string_pretty(&report).expect("report serializes");
    report_text.push('\n');
    let report_name = format!("{command}.report.json");
    checksums.insert(report_name.clone(), write(&out_dir.join(&report_name), &report_text)?);

    let manifest = Manifest {
        command,
        version: contactwave::VERSION,
        config,
        wall_time_seconds,
        gates,
        checksums,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write(&out_dir.join("manifest.json"), &text)?;
    Ok(())
}
