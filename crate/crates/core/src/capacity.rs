//! Wideband link capacity.
//!
//! The capacity of an unblocked link integrates the Shannon spectral
//! efficiency across the transmission band `[f_c - B/2, f_c + B/2]`:
//!
//! ```text
//! C = ∫ log2(1 + γ(f)) df,   γ(f) = g · (c / (4π f d))² · exp(-k(f) d) · h_φ²
//! ```
//!
//! A blocked link has zero SNR and therefore zero capacity. A dual-hop
//! decode-and-forward path delivers the minimum of its two leg capacities.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{check_distance, molecular_absorption, spreading, ChannelError, ChannelParams};
use crate::geometry::UeIndex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CapacityError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(
        "quadrature did not converge after {levels} refinements: last estimates {previous} and {last}"
    )]
    QuadratureFailure {
        levels: u32,
        previous: f64,
        last: f64,
    },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
}

/// Adaptive composite-Simpson settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    /// Initial number of subintervals (even, at least 2).
    pub panels: usize,
    /// Relative tolerance between successive doublings.
    pub rtol: f64,
    /// Maximum number of doublings.
    pub max_levels: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels: 64,
            rtol: 1e-6,
            max_levels: 14,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), CapacityError> {
        if self.panels < 2 || self.panels % 2 != 0 {
            return Err(CapacityError::InvalidSpec(format!(
                "panels must be even and >= 2, got {}",
                self.panels
            )));
        }
        if !(self.rtol > 0.0 && self.rtol.is_finite()) {
            return Err(CapacityError::InvalidSpec(format!(
                "rtol must be positive, got {}",
                self.rtol
            )));
        }
        Ok(())
    }
}

/// Integrates `f` over `[a, b]` with composite Simpson, doubling the panel
/// count until two successive estimates agree to `spec.rtol`.
pub fn integrate_simpson<F>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64, CapacityError>
where
    F: FnMut(f64) -> Result<f64, CapacityError>,
{
    spec.validate()?;
    let mut n = spec.panels;
    let mut h = (b - a) / n as f64;
    let ends = f(a)? + f(b)?;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let y = f(a + i as f64 * h)?;
        if i % 2 == 1 {
            odd += y;
        } else {
            even += y;
        }
    }
    let mut estimate = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
    let mut previous = f64::NAN;

    for _ in 0..spec.max_levels {
        n *= 2;
        h *= 0.5;
        even += odd;
        odd = 0.0;
        for i in (1..n).step_by(2) {
            odd += f(a + i as f64 * h)?;
        }
        let refined = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
        let diff = (refined - estimate).abs();
        if diff <= spec.rtol * refined.abs() || diff == 0.0 {
            return Ok(refined);
        }
        previous = estimate;
        estimate = refined;
    }
    Err(CapacityError::QuadratureFailure {
        levels: spec.max_levels,
        previous,
        last: estimate,
    })
}

/// Per-frequency SNR `γ(f)` of an unblocked link.
pub fn snr_density(
    params: &ChannelParams,
    frequency: f64,
    distance: f64,
    h_phi: f64,
) -> Result<f64, ChannelError> {
    check_distance(distance)?;
    let k = molecular_absorption(&params.absorption, frequency)?;
    let spread = spreading(frequency, distance);
    Ok(params.gain_budget * spread * spread * (-k * distance).exp() * h_phi * h_phi)
}

/// Capacity in bit/s of a single link.
pub fn link_capacity(
    params: &ChannelParams,
    distance: f64,
    unblocked: bool,
    h_phi: f64,
    quad: &QuadratureSpec,
) -> Result<f64, CapacityError> {
    check_distance(distance)?;
    if !unblocked || h_phi == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi) = params.band();
    integrate_simpson(
        |f| Ok(snr_density(params, f, distance, h_phi)?.ln_1p() * std::f64::consts::LOG2_E),
        lo,
        hi,
        quad,
    )
}

/// Zero-absorption, zero-pointing-error, lowest-frequency ceiling on
/// [`link_capacity`] for a link of length `distance`.
pub fn capacity_upper_bound(params: &ChannelParams, distance: f64, a0: f64) -> f64 {
    let spread = spreading(params.band().0, distance);
    params.bandwidth * (1.0 + params.gain_budget * spread * spread * a0 * a0).log2()
}

/// State of one directed link within a drop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub source: UeIndex,
    pub dest: UeIndex,
    /// m.
    pub distance: f64,
    pub unblocked: bool,
    pub h_phi: f64,
    /// bit/s.
    pub capacity: f64,
}

impl LinkBudget {
    pub fn beta(&self) -> u8 {
        u8::from(self.unblocked)
    }
}

/// Which path an end-to-end capacity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Direct,
    Relayed,
}

/// End-to-end capacity of the chosen path: the direct capacity, or the
/// smaller leg of a decode-and-forward relay.
pub fn end_to_end_capacity(
    direct: &LinkBudget,
    relayed: Option<(&LinkBudget, &LinkBudget)>,
) -> (f64, PathKind) {
    match relayed {
        Some((first, second)) => {
            debug_assert_eq!(first.dest, second.source, "relay legs must share the relay");
            (first.capacity.min(second.capacity), PathKind::Relayed)
        }
        None => (direct.capacity, PathKind::Direct),
    }
}
