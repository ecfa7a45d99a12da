//! Scenario configuration.

use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::capacity::QuadratureSpec;
use crate::channel::{AbsorptionModel, AbsorptionTable, ChannelParams};
use crate::relay::{RelayPolicy, RelayTrigger, Strategy};

/// A configuration field that failed validation.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{key}: {reason}")]
pub struct ConfigError {
    pub key: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

/// Where `k(f)` comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum AbsorptionSource {
    /// Bundled standard-atmosphere table, 275–325 GHz.
    #[default]
    StandardAtmosphere,
    Constant { k_per_m: f64 },
    /// Two-column text file `frequency_Hz k_per_m`.
    Table { path: PathBuf },
}

/// Modelling choices that are not pinned down by the physics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolicySwitches {
    /// Halve relayed end-to-end capacity for half-duplex time sharing.
    pub half_duplex_factor: bool,
    pub relay_trigger: RelayTrigger,
    /// A UE relays for at most one pair per drop.
    pub relay_exclusivity: bool,
    /// Inactive UEs may serve as relays.
    pub inactive_relays: bool,
    /// Count outages (zero capacity) in average throughput and `P_C`.
    pub average_includes_outages: bool,
}

impl Default for PolicySwitches {
    fn default() -> Self {
        Self {
            half_duplex_factor: false,
            relay_trigger: RelayTrigger::BlockedOrBelowThreshold,
            relay_exclusivity: false,
            inactive_relays: true,
            average_includes_outages: true,
        }
    }
}

/// Every physical and experimental parameter of a run. Lengths in meters,
/// frequencies in Hz, rates in bit/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    /// UE intensity, UEs/m².
    pub lambda: f64,
    /// Pointing-error jitter standard deviation.
    pub sigma_s: f64,
    /// UE body radius `r_B`.
    pub body_radius: f64,
    /// Network disc radius `R_N`.
    pub network_radius: f64,
    /// Transmission probability `P_E`.
    pub p_e: f64,
    pub bandwidth_hz: f64,
    pub center_frequency_hz: f64,
    /// Lumped link budget `g = P_t G_t G_r / N_0`, dB.
    pub g_db: f64,
    /// Full half-power beamwidth, degrees.
    pub theta_3db_deg: f64,
    /// Receive aperture radius.
    pub rx_aperture_radius: f64,
    /// QoS threshold `C_m`.
    pub c_m_bps: f64,
    pub drops: u64,
    pub master_seed: u64,
    /// Rejections allowed per UE before hard-core placement gives up.
    pub max_rejections: u32,
    pub quadrature: QuadratureSpec,
    pub absorption: AbsorptionSource,
    pub strategies: Vec<Strategy>,
    pub policy: PolicySwitches,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            lambda: 0.3,
            sigma_s: 0.0,
            body_radius: 0.2,
            network_radius: 5.0,
            p_e: 0.6,
            bandwidth_hz: 50e9,
            center_frequency_hz: 300e9,
            g_db: 100.0,
            theta_3db_deg: 0.9,
            rx_aperture_radius: 0.046,
            c_m_bps: 1e9,
            drops: 2000,
            master_seed: 1,
            max_rejections: 10_000,
            quadrature: QuadratureSpec::default(),
            absorption: AbsorptionSource::default(),
            strategies: vec![Strategy::Best, Strategy::Random],
            policy: PolicySwitches::default(),
        }
    }
}

impl ScenarioConfig {
    /// Linear `g`.
    pub fn gain_budget(&self) -> f64 {
        10f64.powf(self.g_db / 10.0)
    }

    pub fn relay_policy(&self) -> RelayPolicy {
        RelayPolicy {
            c_m: self.c_m_bps,
            trigger: self.policy.relay_trigger,
            half_duplex_factor: self.policy.half_duplex_factor,
        }
    }

    /// Checks every field range; the first violation is reported.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("lambda", self.lambda),
            ("body_radius", self.body_radius),
            ("network_radius", self.network_radius),
            ("bandwidth_hz", self.bandwidth_hz),
            ("center_frequency_hz", self.center_frequency_hz),
            ("rx_aperture_radius", self.rx_aperture_radius),
            ("c_m_bps", self.c_m_bps),
        ];
        for (key, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConfigError::new(key, format!("must be positive and finite, got {value}")));
            }
        }
        if !(self.sigma_s.is_finite() && self.sigma_s >= 0.0) {
            return Err(ConfigError::new("sigma_s", format!("must be >= 0, got {}", self.sigma_s)));
        }
        if !(0.0..=1.0).contains(&self.p_e) {
            return Err(ConfigError::new("p_e", format!("must lie in [0, 1], got {}", self.p_e)));
        }
        if !self.g_db.is_finite() {
            return Err(ConfigError::new("g_db", "must be finite"));
        }
        if !(self.theta_3db_deg > 0.0 && self.theta_3db_deg < 180.0) {
            return Err(ConfigError::new(
                "theta_3db_deg",
                format!("must lie in (0, 180), got {}", self.theta_3db_deg),
            ));
        }
        if self.center_frequency_hz - 0.5 * self.bandwidth_hz <= 0.0 {
            return Err(ConfigError::new("bandwidth_hz", "band must stay above 0 Hz"));
        }
        if self.drops < 1 {
            return Err(ConfigError::new("drops", "must be >= 1"));
        }
        if self.max_rejections < 1 {
            return Err(ConfigError::new("max_rejections", "must be >= 1"));
        }
        if self.strategies.is_empty() {
            return Err(ConfigError::new("strategies", "at least one strategy is required"));
        }
        let mut seen = self.strategies.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.strategies.len() {
            return Err(ConfigError::new("strategies", "duplicate strategy"));
        }
        self.quadrature
            .validate()
            .map_err(|e| ConfigError::new("quadrature", e.to_string()))?;
        if let AbsorptionSource::Constant { k_per_m } = self.absorption {
            if !(k_per_m.is_finite() && k_per_m >= 0.0) {
                return Err(ConfigError::new("absorption.k_per_m", "must be >= 0"));
            }
        }
        Ok(())
    }

    /// Resolves the channel parameters, loading the absorption table if needed.
    pub fn channel_params(&self) -> Result<ChannelParams, ConfigError> {
        self.validate()?;
        let absorption = match &self.absorption {
            AbsorptionSource::StandardAtmosphere => AbsorptionModel::standard_atmosphere(),
            AbsorptionSource::Constant { k_per_m } => AbsorptionModel::Constant(*k_per_m),
            AbsorptionSource::Table { path } => AbsorptionModel::Table(Arc::new(
                AbsorptionTable::from_file(path)
                    .map_err(|e| ConfigError::new("absorption.path", e.to_string()))?,
            )),
        };
        let params = ChannelParams {
            center_frequency: self.center_frequency_hz,
            bandwidth: self.bandwidth_hz,
            gain_budget: self.gain_budget(),
            half_power_beamwidth: self.theta_3db_deg.to_radians(),
            jitter_std: self.sigma_s,
            rx_aperture_radius: self.rx_aperture_radius,
            absorption,
        };
        params
            .validate()
            .map_err(|e| ConfigError::new("channel", e.to_string()))?;
        Ok(params)
    }
}
