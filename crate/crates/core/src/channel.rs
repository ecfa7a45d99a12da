//! Deterministic path gain and antenna-misalignment fading.
//!
//! The path gain of a line-of-sight link is the free-space spreading term
//! scaled by the antenna gains and the molecular-absorption loss,
//!
//! ```text
//! h_l(f, d) = c / (4π f d) · sqrt(G_t G_r) · exp(-k(f) d / 2)
//! ```
//!
//! Pointing error is modelled with a Gaussian beam falling on a circular
//! receive aperture. The radial displacement `ρ` between beam centre and
//! aperture centre is Rayleigh distributed with jitter `σ_s`, and the
//! fraction of collected power decays as `h_φ = A_0 · exp(-2ρ² / R_eq²)`.

use std::f64::consts::PI;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const STANDARD_ATMOSPHERE_TABLE: &str =
    include_str!("../data/standard_atmosphere_275_325ghz.txt");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("frequency {frequency} Hz outside absorption table coverage [{min}, {max}] Hz")]
    OutOfRange { frequency: f64, min: f64, max: f64 },
    #[error("link distance must be positive and finite, got {0} m")]
    InvalidDistance(f64),
    #[error("absorption table line {line}: {reason}")]
    TableParse { line: usize, reason: String },
    #[error("cannot read absorption table {path}: {reason}")]
    TableIo { path: String, reason: String },
    #[error("invalid channel parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

/// Tabulated `k(f)` with linear interpolation between knots.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionTable {
    frequencies: Vec<f64>,
    coefficients: Vec<f64>,
}

impl AbsorptionTable {
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self, ChannelError> {
        if entries.len() < 2 {
            return Err(ChannelError::TableParse {
                line: 0,
                reason: "at least two entries are required".into(),
            });
        }
        for (i, &(f, k)) in entries.iter().enumerate() {
            if !(f.is_finite() && f > 0.0) || !(k.is_finite() && k >= 0.0) {
                return Err(ChannelError::TableParse {
                    line: i + 1,
                    reason: format!("invalid entry ({f}, {k})"),
                });
            }
            if i > 0 && f <= entries[i - 1].0 {
                return Err(ChannelError::TableParse {
                    line: i + 1,
                    reason: "frequencies must be strictly increasing".into(),
                });
            }
        }
        let (frequencies, coefficients) = entries.into_iter().unzip();
        Ok(Self {
            frequencies,
            coefficients,
        })
    }

    /// Reads a table from a file; see [`AbsorptionTable::from_str`] for the format.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ChannelError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ChannelError::TableIo {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        text.parse()
    }

    /// Standard-atmosphere table covering 275–325 GHz shipped with the crate.
    pub fn standard_atmosphere() -> Self {
        STANDARD_ATMOSPHERE_TABLE
            .parse()
            .expect("bundled absorption table is well formed")
    }

    pub fn coverage(&self) -> (f64, f64) {
        (self.frequencies[0], *self.frequencies.last().unwrap())
    }

    pub fn entries(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.frequencies
            .iter()
            .copied()
            .zip(self.coefficients.iter().copied())
    }

    pub fn lookup(&self, frequency: f64) -> Result<f64, ChannelError> {
        let (min, max) = self.coverage();
        if !(min..=max).contains(&frequency) {
            return Err(ChannelError::OutOfRange {
                frequency,
                min,
                max,
            });
        }
        let hi = self.frequencies.partition_point(|&f| f < frequency);
        if self.frequencies[hi] == frequency {
            return Ok(self.coefficients[hi]);
        }
        let lo = hi - 1;
        let (f0, f1) = (self.frequencies[lo], self.frequencies[hi]);
        let (k0, k1) = (self.coefficients[lo], self.coefficients[hi]);
        let t = (frequency - f0) / (f1 - f0);
        Ok(k0 + t * (k1 - k0))
    }
}

/// Two whitespace-separated columns `frequency_Hz k_per_m`, ascending, with
/// `#` comments and blank lines ignored.
impl FromStr for AbsorptionTable {
    type Err = ChannelError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split_whitespace();
            let parse = |col: Option<&str>| -> Result<f64, ChannelError> {
                col.ok_or_else(|| ChannelError::TableParse {
                    line: n + 1,
                    reason: "expected two columns".into(),
                })?
                .parse::<f64>()
                .map_err(|e| ChannelError::TableParse {
                    line: n + 1,
                    reason: e.to_string(),
                })
            };
            let f = parse(cols.next())?;
            let k = parse(cols.next())?;
            if cols.next().is_some() {
                return Err(ChannelError::TableParse {
                    line: n + 1,
                    reason: "expected two columns".into(),
                });
            }
            entries.push((f, k));
        }
        Self::new(entries)
    }
}

/// Molecular absorption coefficient `k(f)` in 1/m.
#[derive(Debug, Clone, PartialEq)]
pub enum AbsorptionModel {
    Constant(f64),
    Table(Arc<AbsorptionTable>),
}

impl AbsorptionModel {
    pub fn standard_atmosphere() -> Self {
        AbsorptionModel::Table(Arc::new(AbsorptionTable::standard_atmosphere()))
    }
}

/// Looks up `k(f)`. Table models interpolate linearly and never extrapolate.
pub fn molecular_absorption(model: &AbsorptionModel, frequency: f64) -> Result<f64, ChannelError> {
    match model {
        AbsorptionModel::Constant(k) => Ok(*k),
        AbsorptionModel::Table(table) => table.lookup(frequency),
    }
}

/// Physical channel parameters shared by every link of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    /// Hz.
    pub center_frequency: f64,
    /// Hz.
    pub bandwidth: f64,
    /// Lumped linear budget `g = P_t G_t G_r / N_0`.
    pub gain_budget: f64,
    /// Full half-power beamwidth, radians.
    pub half_power_beamwidth: f64,
    /// Pointing-error jitter standard deviation, m.
    pub jitter_std: f64,
    /// Receive aperture radius, m.
    pub rx_aperture_radius: f64,
    pub absorption: AbsorptionModel,
}

impl ChannelParams {
    pub fn band(&self) -> (f64, f64) {
        let half = 0.5 * self.bandwidth;
        (self.center_frequency - half, self.center_frequency + half)
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        let bad = |name, value| Err(ChannelError::InvalidParameter { name, value });
        if !(self.center_frequency > 0.0 && self.center_frequency.is_finite()) {
            return bad("center_frequency", self.center_frequency);
        }
        if !(self.bandwidth > 0.0 && self.band().0 > 0.0) {
            return bad("bandwidth", self.bandwidth);
        }
        if !(self.gain_budget > 0.0 && self.gain_budget.is_finite()) {
            return bad("gain_budget", self.gain_budget);
        }
        if !(self.half_power_beamwidth > 0.0 && self.half_power_beamwidth < PI) {
            return bad("half_power_beamwidth", self.half_power_beamwidth);
        }
        if !(self.jitter_std >= 0.0 && self.jitter_std.is_finite()) {
            return bad("jitter_std", self.jitter_std);
        }
        if !(self.rx_aperture_radius > 0.0 && self.rx_aperture_radius.is_finite()) {
            return bad("rx_aperture_radius", self.rx_aperture_radius);
        }
        match &self.absorption {
            AbsorptionModel::Constant(k) if !(*k >= 0.0 && k.is_finite()) => bad("k_const", *k),
            AbsorptionModel::Table(table) => {
                let (lo, hi) = self.band();
                let (min, max) = table.coverage();
                if lo < min {
                    bad("absorption table coverage", lo)
                } else if hi > max {
                    bad("absorption table coverage", hi)
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Free-space spreading amplitude `c / (4π f d)`.
pub(crate) fn spreading(frequency: f64, distance: f64) -> f64 {
    SPEED_OF_LIGHT / (4.0 * PI * frequency * distance)
}

pub(crate) fn check_distance(distance: f64) -> Result<(), ChannelError> {
    if distance > 0.0 && distance.is_finite() {
        Ok(())
    } else {
        Err(ChannelError::InvalidDistance(distance))
    }
}

/// Deterministic amplitude path gain `h_l(f, d)`.
pub fn path_gain(
    params: &ChannelParams,
    frequency: f64,
    distance: f64,
    tx_gain: f64,
    rx_gain: f64,
) -> Result<f64, ChannelError> {
    check_distance(distance)?;
    if frequency.is_nan() || frequency <= 0.0 {
        return Err(ChannelError::InvalidParameter {
            name: "frequency",
            value: frequency,
        });
    }
    let k = molecular_absorption(&params.absorption, frequency)?;
    Ok(spreading(frequency, distance) * (tx_gain * rx_gain).sqrt() * (-0.5 * k * distance).exp())
}

/// Beam footprint and collection parameters at the receiver plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    /// Fraction of power collected at zero pointing error.
    pub a0: f64,
    /// Equivalent beam radius, m. May be `+inf` when the aperture dwarfs the beam.
    pub r_eq: f64,
    /// Beam radius `w_d` at the receiver, m.
    pub beam_radius: f64,
    /// Receive aperture radius `a`, m.
    pub aperture_radius: f64,
}

/// Gaussian beam on a circular aperture:
/// `w_d = d·tan(θ_3dB/2)`, `v = sqrt(π/2)·a/w_d`, `A_0 = erf(v)²`,
/// `R_eq² = w_d²·sqrt(π)·erf(v) / (2v·exp(-v²))`.
pub fn beam_geometry(params: &ChannelParams, distance: f64) -> Result<BeamGeometry, ChannelError> {
    check_distance(distance)?;
    let beam_radius = distance * (0.5 * params.half_power_beamwidth).tan();
    let aperture_radius = params.rx_aperture_radius;
    let v = (PI / 2.0).sqrt() * aperture_radius / beam_radius;
    let erf_v = libm::erf(v);
    // exp(v²) overflows to +inf for very wide apertures, which is the right limit
    let r_eq_sq = beam_radius * beam_radius * PI.sqrt() * erf_v * (v * v).exp() / (2.0 * v);
    Ok(BeamGeometry {
        a0: erf_v * erf_v,
        r_eq: r_eq_sq.sqrt(),
        beam_radius,
        aperture_radius,
    })
}

/// One pointing-error draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisalignmentSample {
    /// Radial displacement, m.
    pub rho: f64,
    /// Misalignment gain in `[0, A_0]`.
    pub h_phi: f64,
}

/// `h_φ(ρ) = A_0 · exp(-2ρ²/R_eq²)`.
pub fn misalignment_gain(geo: &BeamGeometry, rho: f64) -> f64 {
    if rho == 0.0 {
        return geo.a0;
    }
    geo.a0 * (-2.0 * rho * rho / (geo.r_eq * geo.r_eq)).exp()
}

/// Rayleigh(σ) draw by inversion.
pub fn sample_rayleigh<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1], keeping the logarithm finite
    let u: f64 = rng.random();
    sigma * (-2.0 * (1.0 - u).ln()).sqrt()
}

/// Draws a pointing error for one link. With zero jitter no randomness is
/// consumed and the link sees `h_φ = A_0`.
pub fn sample_misalignment<R: Rng + ?Sized>(
    params: &ChannelParams,
    geo: &BeamGeometry,
    rng: &mut R,
) -> MisalignmentSample {
    if params.jitter_std == 0.0 {
        return MisalignmentSample {
            rho: 0.0,
            h_phi: geo.a0,
        };
    }
    let rho = sample_rayleigh(params.jitter_std, rng);
    MisalignmentSample {
        rho,
        h_phi: misalignment_gain(geo, rho),
    }
}
