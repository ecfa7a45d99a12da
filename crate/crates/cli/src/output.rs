//! CSV tables and the run manifest.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use thz_relay::SweepCell;

use crate::scenario::ScenarioFile;

pub const THROUGHPUT_HEADER: &str =
    "lambda,sigma_s,strategy,successful_drops,failed_drops,mean_throughput_bps,stderr_bps";
pub const FIGURE2_HEADER: &str = "lambda,sigma_s,strategy,mean_throughput_bps,stderr_bps";
pub const CDF_HEADER: &str = "lambda,sigma_s,strategy,C_thr_bps,P_C";

/// Mean throughput per cell and strategy, with drop accounting.
pub fn throughput_csv(cells: &[SweepCell]) -> String {
    let mut out = format!("{THROUGHPUT_HEADER}\n");
    for cell in cells {
        if let Ok(stats) = &cell.stats {
            for s in &stats.per_strategy {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    cell.lambda,
                    cell.sigma_s,
                    s.strategy,
                    cell.successful_drops,
                    cell.failed_drops,
                    s.mean,
                    s.stderr
                );
            }
        }
    }
    out
}

pub fn figure2_csv(cells: &[SweepCell]) -> String {
    let mut out = format!("{FIGURE2_HEADER}\n");
    for cell in cells {
        if let Ok(stats) = &cell.stats {
            for s in &stats.per_strategy {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    cell.lambda, cell.sigma_s, s.strategy, s.mean, s.stderr
                );
            }
        }
    }
    out
}

/// `P_C(C_thr)` per cell, strategy and threshold.
pub fn cdf_csv(cells: &[SweepCell]) -> String {
    let mut out = format!("{CDF_HEADER}\n");
    for cell in cells {
        if let Ok(stats) = &cell.stats {
            for s in &stats.per_strategy {
                for (thr, p) in &s.p_c {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        cell.lambda, cell.sigma_s, s.strategy, thr, p
                    );
                }
            }
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct CellSummary {
    pub lambda: f64,
    pub sigma_s: f64,
    pub successful_drops: usize,
    pub failed_drops: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct StrategySummary {
    pub strategy: String,
    pub mean_throughput_bps: f64,
    pub stderr_bps: f64,
    pub pair_records: usize,
    pub outage_fraction: f64,
}

#[derive(Debug, Serialize)]
pub struct CellResult {
    pub lambda: f64,
    pub sigma_s: f64,
    pub successful_drops: usize,
    pub failed_drops: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub strategies: Vec<StrategySummary>,
}

/// Per-cell headline numbers, as pretty JSON.
pub fn summary_json(cells: &[SweepCell]) -> String {
    let rows: Vec<CellResult> = cells
        .iter()
        .map(|c| CellResult {
            lambda: c.lambda,
            sigma_s: c.sigma_s,
            successful_drops: c.successful_drops,
            failed_drops: c.failed_drops,
            error: c.stats.as_ref().err().map(|e| e.to_string()),
            strategies: c
                .stats
                .as_ref()
                .map(|st| {
                    st.per_strategy
                        .iter()
                        .map(|s| StrategySummary {
                            strategy: s.strategy.to_string(),
                            mean_throughput_bps: s.mean,
                            stderr_bps: s.stderr,
                            pair_records: s.samples.len(),
                            outage_fraction: if s.samples.is_empty() {
                                0.0
                            } else {
                                s.cdf(0.0)
                            },
                        })
                        .collect()
                })
                .unwrap_or_default(),
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("summary serializes") + "\n"
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub command: &'a str,
    pub version: &'a str,
    pub timestamp_unix: u64,
    pub master_seed: u64,
    pub threads: usize,
    pub files: Vec<String>,
    pub cells: Vec<CellSummary>,
    pub scenario: &'a ScenarioFile,
}

impl<'a> Manifest<'a> {
    pub fn new(
        command: &'a str,
        scenario: &'a ScenarioFile,
        cells: &[SweepCell],
        files: Vec<String>,
    ) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            timestamp_unix,
            master_seed: scenario.scenario.master_seed,
            threads: rayon::current_num_threads(),
            files,
            cells: cells
                .iter()
                .map(|c| CellSummary {
                    lambda: c.lambda,
                    sigma_s: c.sigma_s,
                    successful_drops: c.successful_drops,
                    failed_drops: c.failed_drops,
                    error: c.stats.as_ref().err().map(|e| e.to_string()),
                })
                .collect(),
            scenario,
        }
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(dir.join("manifest.json"), json + "\n")
    }
}
