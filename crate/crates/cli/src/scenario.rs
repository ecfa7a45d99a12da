//! Scenario files.
//!
//! A scenario is a TOML document with four optional tables:
//!
//! ```toml
//! [scenario]          # any ScenarioConfig field, e.g. lambda = 0.7
//! [sweep]             # lambdas = [...], sigmas = [...]
//! [thresholds]        # c_thr_bps = [...]
//! [output]            # dir = "results"
//! ```
//!
//! Missing keys take the default values; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use thz_relay::ScenarioConfig;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed scenario: {0}")]
    Syntax(String),
    #[error("invalid value for {key}: {reason}")]
    Invalid { key: String, reason: String },
}

/// `(λ, σ_s)` grids for sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    /// UEs/m².
    pub lambdas: Vec<f64>,
    /// m.
    pub sigmas: Vec<f64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            lambdas: vec![0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5],
            sigmas: vec![0.0, 0.05, 0.2],
        }
    }
}

/// Threshold grid at which `P_C` is reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdGrid {
    pub c_thr_bps: Vec<f64>,
}

impl Default for ThresholdGrid {
    fn default() -> Self {
        // 0 to 200 Gbit/s in 5 Gbit/s steps
        Self {
            c_thr_bps: (0..=40).map(|i| i as f64 * 5e9).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioFile {
    pub scenario: ScenarioConfig,
    pub sweep: SweepSpec,
    pub thresholds: ThresholdGrid,
    pub output: OutputSpec,
}

const SECTIONS: [&str; 4] = ["scenario", "sweep", "thresholds", "output"];

impl ScenarioFile {
    /// Parses and validates a scenario document.
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| ScenarioError::Syntax(e.to_string()))?;
        log_defaults(&table);
        let file: ScenarioFile = table
            .try_into()
            .map_err(|e: toml::de::Error| ScenarioError::Syntax(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.scenario.validate().map_err(|e| ScenarioError::Invalid {
            key: format!("scenario.{}", e.key),
            reason: e.reason,
        })?;
        let check_list = |key: &str, values: &[f64], min: f64| {
            if values.is_empty() {
                return Err(ScenarioError::Invalid {
                    key: key.into(),
                    reason: "must not be empty".into(),
                });
            }
            match values.iter().find(|v| !(v.is_finite() && **v >= min)) {
                Some(v) => Err(ScenarioError::Invalid {
                    key: key.into(),
                    reason: format!("{v} is out of range"),
                }),
                None => Ok(()),
            }
        };
        check_list("sweep.lambdas", &self.sweep.lambdas, f64::MIN_POSITIVE)?;
        check_list("sweep.sigmas", &self.sweep.sigmas, 0.0)?;
        check_list("thresholds.c_thr_bps", &self.thresholds.c_thr_bps, 0.0)?;
        if self.thresholds.c_thr_bps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ScenarioError::Invalid {
                key: "thresholds.c_thr_bps".into(),
                reason: "must be strictly increasing".into(),
            });
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes to TOML")
    }
}

fn log_defaults(table: &toml::Table) {
    for section in SECTIONS {
        match table.get(section) {
            None => log::info!("[{section}] not given, using defaults"),
            Some(toml::Value::Table(t)) if section == "scenario" => {
                let defaults = toml::Table::try_from(ScenarioConfig::default())
                    .expect("default config serializes");
                for key in defaults.keys().filter(|k| !t.contains_key(*k)) {
                    log::info!("scenario.{key} defaulted to {}", defaults[key]);
                }
            }
            _ => {}
        }
    }
}

/// Reads and validates a scenario file.
pub fn parse_scenario(path: &Path) -> Result<ScenarioFile, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioFile::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let file = ScenarioFile::parse("").unwrap();
        assert_eq!(file, ScenarioFile::default());
        let cfg = &file.scenario;
        assert_eq!(cfg.bandwidth_hz, 50e9);
        assert_eq!(cfg.center_frequency_hz, 300e9);
        assert_eq!(cfg.theta_3db_deg, 0.9);
        assert_eq!(cfg.network_radius, 5.0);
        assert_eq!(cfg.c_m_bps, 1e9);
        assert_eq!(cfg.body_radius, 0.2);
        assert_eq!(cfg.p_e, 0.6);
        assert_eq!(cfg.g_db, 100.0);
    }

    #[test]
    fn probability_out_of_range() {
        let err = ScenarioFile::parse("[scenario]\np_e = 1.4\n").unwrap_err();
        match err {
            ScenarioError::Invalid { key, reason } => {
                assert_eq!(key, "scenario.p_e");
                assert!(reason.contains("[0, 1]"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            ScenarioFile::parse("[scenario]\nlamda = 0.3\n"),
            Err(ScenarioError::Syntax(_))
        ));
        assert!(matches!(
            ScenarioFile::parse("[plots]\n"),
            Err(ScenarioError::Syntax(_))
        ));
        assert!(matches!(
            ScenarioFile::parse("[scenario.policy]\nhalf_duplex = true\n"),
            Err(ScenarioError::Syntax(_))
        ));
    }

    #[test]
    fn malformed_syntax() {
        assert!(matches!(
            ScenarioFile::parse("[scenario\n"),
            Err(ScenarioError::Syntax(_))
        ));
    }

    #[test]
    fn defaults_round_trip() {
        let defaults = ScenarioFile::default();
        let again = ScenarioFile::parse(&defaults.to_toml()).unwrap();
        assert_eq!(again, defaults);
    }

    #[test]
    fn nested_settings() {
        let text = r#"
            [scenario]
            lambda = 0.7
            sigma_s = 0.05
            strategies = ["random"]
            absorption = { mode = "constant", k_per_m = 0.0 }

            [scenario.policy]
            relay_trigger = "blocked_only"
            half_duplex_factor = true

            [scenario.quadrature]
            panels = 32

            [sweep]
            lambdas = [0.3]

            [thresholds]
            c_thr_bps = [1e9, 2e9]
        "#;
        let file = ScenarioFile::parse(text).unwrap();
        assert_eq!(file.scenario.lambda, 0.7);
        assert_eq!(file.scenario.quadrature.panels, 32);
        assert!(file.scenario.policy.half_duplex_factor);
        assert_eq!(file.sweep.sigmas, SweepSpec::default().sigmas);
        assert_eq!(file.thresholds.c_thr_bps, vec![1e9, 2e9]);
    }

    #[test]
    fn threshold_grid_must_increase() {
        let err = ScenarioFile::parse("[thresholds]\nc_thr_bps = [2e9, 1e9]\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Invalid { ref key, .. } if key == "thresholds.c_thr_bps"));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            parse_scenario(Path::new("/nonexistent/scenario.toml")),
            Err(ScenarioError::Io { .. })
        ));
    }
}
