//! Library side of the `sim` binary: scenario files, commands and output
//! tables.

pub mod output;
pub mod scenario;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use thz_relay::{sweep, SweepCell};

pub use scenario::{parse_scenario, ScenarioError, ScenarioFile};

/// Jitter values of the throughput and CDF figures, m.
pub const FIGURE_SIGMAS: [f64; 3] = [0.0, 0.05, 0.2];
/// Intensities of the CDF figure, UEs/m².
pub const FIGURE3_LAMBDAS: [f64; 2] = [0.3, 1.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Sweep,
    Figure2,
    Figure3,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Sweep => "sweep",
            Command::Figure2 => "figure2",
            Command::Figure3 => "figure3",
            Command::Validate => "validate",
        }
    }
}

/// Command-line overrides applied on top of the scenario file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub drops: Option<u64>,
    pub out: Option<PathBuf>,
}

/// Loads a scenario and applies the overrides.
pub fn load(path: &Path, overrides: &Overrides) -> anyhow::Result<ScenarioFile> {
    let mut file = parse_scenario(path)?;
    if let Some(seed) = overrides.seed {
        file.scenario.master_seed = seed;
    }
    if let Some(drops) = overrides.drops {
        file.scenario.drops = drops;
    }
    if let Some(out) = &overrides.out {
        file.output.dir = Some(out.clone());
    }
    file.validate()?;
    Ok(file)
}

/// Runs `command` and writes its tables and manifest into the output
/// directory. Returns the simulated cells (empty for `validate`).
pub fn execute(command: Command, file: &ScenarioFile) -> anyhow::Result<Vec<SweepCell>> {
    if command == Command::Validate {
        return Ok(Vec::new());
    }
    let Some(dir) = file.output.dir.as_deref() else {
        bail!("no output directory: pass --out or set output.dir");
    };
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;

    let cfg = &file.scenario;
    let grid = &file.thresholds.c_thr_bps;
    let (lambdas, sigmas): (Vec<f64>, Vec<f64>) = match command {
        Command::Run => (vec![cfg.lambda], vec![cfg.sigma_s]),
        Command::Sweep => (file.sweep.lambdas.clone(), file.sweep.sigmas.clone()),
        Command::Figure2 => (file.sweep.lambdas.clone(), FIGURE_SIGMAS.to_vec()),
        Command::Figure3 => (FIGURE3_LAMBDAS.to_vec(), FIGURE_SIGMAS.to_vec()),
        Command::Validate => unreachable!(),
    };
    let cells = sweep(cfg, &lambdas, &sigmas, grid)?;
    for cell in &cells {
        match &cell.stats {
            Ok(_) => log::info!(
                "lambda={} sigma_s={}: {} drops ok, {} failed",
                cell.lambda,
                cell.sigma_s,
                cell.successful_drops,
                cell.failed_drops
            ),
            Err(e) => log::warn!("lambda={} sigma_s={} failed: {e}", cell.lambda, cell.sigma_s),
        }
    }

    let mut tables: Vec<(&str, String)> = match command {
        Command::Run | Command::Sweep => vec![
            ("throughput.csv", output::throughput_csv(&cells)),
            ("cdf.csv", output::cdf_csv(&cells)),
        ],
        Command::Figure2 => vec![("figure2.csv", output::figure2_csv(&cells))],
        Command::Figure3 => vec![("figure3.csv", output::cdf_csv(&cells))],
        Command::Validate => unreachable!(),
    };
    tables.push(("summary.json", output::summary_json(&cells)));
    for (name, body) in &tables {
        std::fs::write(dir.join(name), body)
            .with_context(|| format!("cannot write {}", dir.join(name).display()))?;
    }
    let files = tables.iter().map(|(n, _)| n.to_string()).collect();
    output::Manifest::new(command.name(), file, &cells, files)
        .write(dir)
        .context("cannot write manifest")?;

    if cells.iter().all(|c| c.stats.is_err()) {
        bail!("every cell failed; see manifest.json");
    }
    Ok(cells)
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
