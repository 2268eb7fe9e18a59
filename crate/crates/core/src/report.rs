//! Machine readable verification reports.
//!
//! Reports carry no timestamp, so a fixed seed gives byte-identical output.

use serde::{Deserialize, Serialize};

use crate::error::{MockError, Result};
use crate::registry::{checks_for, run_checks, CheckContext, CheckOutcome, Suite};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub order: i64,
    pub tol_override: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ReportConfig,
    pub summary: Summary,
    pub entries: Vec<CheckOutcome>,
}

impl Report {
    pub fn new(config: ReportConfig, entries: Vec<CheckOutcome>) -> Self {
        let passed = entries.iter().filter(|e| e.pass).count();
        let summary = Summary { total: entries.len(), passed, failed: entries.len() - passed };
        Self {
            schema_version: REPORT_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            summary,
            entries,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| MockError::Data(format!("serializing report: {e}")))
    }
}

/// Runs every check of the given suites.
pub fn verify(suites: &[Suite], ctx: &CheckContext) -> Report {
    let checks = checks_for(suites);
    let entries = run_checks(&checks, ctx);
    let mut suites = suites.to_vec();
    suites.sort();
    suites.dedup();
    Report::new(ReportConfig { suites, seed: ctx.seed, order: ctx.order, tol_override: ctx.tol }, entries)
}
