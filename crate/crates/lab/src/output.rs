//! Writes a run to disk: one CSV per table plus `summary.json`.

use std::fs;
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::LabError;
use crate::experiments::{RunOutput, Table};

pub const SUMMARY_FILE: &str = "summary.json";

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the resolved configuration's canonical JSON.
pub fn config_hash(config: &ExperimentConfig) -> String {
    sha256_hex(config.to_json().as_bytes())
}

/// RFC-4180 bytes of a table, `\n` line endings.
pub fn table_bytes(table: &Table) -> Result<Vec<u8>, LabError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.into_inner().map_err(|e| LabError::Io(e.into_error()))
}

/// Timing of a run, kept out of the CSV files so they stay reproducible.
#[derive(Clone, Copy, Debug)]
pub struct RunTimes {
    pub started: DateTime<Utc>,
    pub finished: DateTime<Utc>,
}

/// Writes every table and the summary into `dir` and returns the summary.
pub fn write_run(dir: &Path, config: &ExperimentConfig, run: &RunOutput, times: RunTimes) -> Result<Value, LabError> {
    fs::create_dir_all(dir)?;
    let mut files = Map::new();
    for table in &run.tables {
        let bytes = table_bytes(table)?;
        fs::write(dir.join(table.name), &bytes)?;
        files.insert(table.name.into(), json!(sha256_hex(&bytes)));
    }
    let stamp = |t: DateTime<Utc>| t.to_rfc3339_opts(SecondsFormat::Millis, true);
    let summary = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "experiment": config.experiment.name(),
        "config": config,
        "config_hash": config_hash(config),
        "started": stamp(times.started),
        "finished": stamp(times.finished),
        "files": files,
        "metrics": run.metrics,
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    fs::write(dir.join(SUMMARY_FILE), text)?;
    Ok(summary)
}
