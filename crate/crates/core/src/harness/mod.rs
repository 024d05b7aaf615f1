//! Identity suites, exact oracles, scenarios and run configuration.

mod config;
pub mod oracle;
mod scenarios;
mod suites;

pub use config::{NGrid, RunConfig};
pub use scenarios::{run_scenario, Check, ScenarioReport, SCENARIOS};
pub use suites::{
    check_manifest, run_suite, CaseResult, SatCoefficient, SuiteResult, DEFAULT_WINDOW, FLOAT_TOL,
    SUITE_MANIFEST,
};

use serde::Serialize;

use crate::constants::SCHEMA_VERSION;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub seed: u64,
    pub window: usize,
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
}

/// Runs the named suites (`all` for the whole manifest) in manifest order.
pub fn verify(names: &[String], config: &RunConfig) -> Result<VerifyReport> {
    check_manifest()?;
    let selected: Vec<&str> = if names.iter().any(|n| n == "all") || names.is_empty() {
        SUITE_MANIFEST.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    let suites = selected
        .iter()
        .map(|n| run_suite(n, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        seed: config.seed,
        window: config.window.unwrap_or(DEFAULT_WINDOW),
        pass: suites.iter().all(|s| s.pass),
        suites,
    })
}

/// Pretty JSON with a trailing newline; the byte-level format every report uses.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
