use std::path::Path;

use serde::Serialize;

use crate::config::{RunConfig, Tolerances, SCHEMA_VERSION};
use crate::error::{CliError, Result};

/// Envelope shared by every JSON report.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub schema: String,
    pub schema_version: u32,
    pub config_hash: String,
    pub tolerances: Tolerances,
    pub config: RunConfig,
    pub passed: bool,
    pub failures: Vec<String>,
    pub body: T,
}

/// What a command produced, before it is written anywhere.
#[derive(Debug)]
pub struct CommandOutput {
    pub command: &'static str,
    pub json: String,
    pub csv: Option<String>,
    /// Human-readable lines.
    pub summary: Vec<String>,
    pub failures: Vec<String>,
}

impl CommandOutput {
    pub fn new<T: Serialize>(
        command: &'static str,
        config: &RunConfig,
        body: T,
        summary: Vec<String>,
        failures: Vec<String>,
    ) -> Result<Self> {
        let report = Report {
            schema: format!("filament.{command}"),
            schema_version: SCHEMA_VERSION,
            config_hash: config.hash(),
            tolerances: config.tolerances.clone(),
            config: config.clone(),
            passed: failures.is_empty(),
            failures: failures.clone(),
            body,
        };
        let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Numerical(e.to_string()))?;
        Ok(Self { command, json, csv: None, summary, failures })
    }

    /// Writes `<command>.json` (and `.csv`) under `out`, or the JSON to
    /// stdout. Tolerance failures surface after the report is written.
    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        match out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join(format!("{}.json", self.command)), &self.json)?;
                if let Some(csv) = &self.csv {
                    std::fs::write(dir.join(format!("{}.csv", self.command)), csv)?;
                }
                for line in &self.summary {
                    println!("{line}");
                }
            }
            None => {
                println!("{}", self.json);
                for line in &self.summary {
                    eprintln!("{line}");
                }
            }
        }
        if self.failures.is_empty() {
            Ok(())
        } else {
            Err(CliError::Tolerance(self.failures.join("; ")))
        }
    }
}
