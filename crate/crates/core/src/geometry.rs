//! Network topologies and line-of-sight blockage.
//!
//! UE centres are drawn from a hard-core Poisson process inside a disc of
//! radius `R_N`: the point count is Poisson with mean `λ·π·R_N²` and points
//! are placed one at a time, rejecting candidates that land closer than
//! `2·r_B` to an already accepted centre. Every UE is a body disc of radius
//! `r_B`, and a link is blocked when some third body intersects the segment
//! between its endpoints.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::ScenarioConfig;

/// Index of a UE inside a [`Topology`].
pub type UeIndex = usize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(
        "hard-core placement infeasible: UE {placed} of {requested} rejected {rejections} times \
         (λ·π·(2r_B)² = {packing:.3})"
    )]
    DensityInfeasible {
        placed: usize,
        requested: usize,
        rejections: u32,
        packing: f64,
    },
    #[error("UE index {index} out of range for topology with {len} UEs")]
    InvalidIndex { index: UeIndex, len: usize },
    #[error("link endpoints must differ (got {0} twice)")]
    DegenerateLink(UeIndex),
    #[error("invalid topology parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

/// A point in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance_squared(&self, other: &Point2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// One network realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub ues: Vec<Point2D>,
    pub active: Vec<bool>,
    /// Source/destination pairs; no UE appears in more than one pair.
    pub pairs: Vec<(UeIndex, UeIndex)>,
    pub network_radius: f64,
    pub body_radius: f64,
}

impl Topology {
    /// Builds a topology from explicit positions, with every UE inactive and no
    /// pairs. Mostly useful for hand-made scenarios and tests.
    pub fn from_points(ues: Vec<Point2D>, network_radius: f64, body_radius: f64) -> Self {
        let active = vec![false; ues.len()];
        Self {
            ues,
            active,
            pairs: Vec::new(),
            network_radius,
            body_radius,
        }
    }

    pub fn len(&self) -> usize {
        self.ues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ues.is_empty()
    }

    pub fn position(&self, index: UeIndex) -> Result<Point2D, GeometryError> {
        self.ues
            .get(index)
            .copied()
            .ok_or(GeometryError::InvalidIndex {
                index,
                len: self.ues.len(),
            })
    }

    pub fn distance(&self, a: UeIndex, b: UeIndex) -> Result<f64, GeometryError> {
        Ok(self.position(a)?.distance(&self.position(b)?))
    }

    /// Returns `true` when `index` is a source or destination of some pair.
    pub fn is_paired(&self, index: UeIndex) -> bool {
        self.pairs.iter().any(|&(s, d)| s == index || d == index)
    }

    /// Smallest centre-to-centre distance, or `None` with fewer than two UEs.
    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, p) in self.ues.iter().enumerate() {
            for q in &self.ues[i + 1..] {
                let d = p.distance(q);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }
}

/// Result of a line-of-sight test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockageVerdict {
    pub blocker_ids: Vec<UeIndex>,
}

impl BlockageVerdict {
    pub fn is_blocked(&self) -> bool {
        !self.blocker_ids.is_empty()
    }

    /// `1` for an unblocked link, `0` for a blocked one.
    pub fn beta(&self) -> u8 {
        u8::from(!self.is_blocked())
    }
}

/// Draws a uniformly distributed point in the disc of the given radius
/// centred at the origin.
pub fn sample_in_disc<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point2D {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = 2.0 * PI * rng.random::<f64>();
    Point2D::new(r * theta.cos(), r * theta.sin())
}

/// Generates one hard-core Poisson topology and pairs up its active UEs.
///
/// Activity flags are Bernoulli(`P_E`). Active UEs are shuffled and matched
/// consecutively into source/destination pairs; a leftover active UE stays
/// unpaired.
pub fn generate_topology<R: Rng + ?Sized>(
    cfg: &ScenarioConfig,
    rng: &mut R,
) -> Result<Topology, GeometryError> {
    let lambda = cfg.lambda;
    let radius = cfg.network_radius;
    let body = cfg.body_radius;
    for (name, value) in [
        ("lambda", lambda),
        ("network_radius", radius),
        ("body_radius", body),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(GeometryError::InvalidParameter { name, value });
        }
    }
    if !(0.0..=1.0).contains(&cfg.p_e) {
        return Err(GeometryError::InvalidParameter {
            name: "p_e",
            value: cfg.p_e,
        });
    }

    let mean = lambda * PI * radius * radius;
    let requested = Poisson::new(mean)
        .map_err(|_| GeometryError::InvalidParameter {
            name: "lambda",
            value: lambda,
        })?
        .sample(rng) as usize;

    let min_dist_sq = (2.0 * body) * (2.0 * body);
    let mut ues: Vec<Point2D> = Vec::with_capacity(requested);
    while ues.len() < requested {
        let mut rejections = 0u32;
        loop {
            let candidate = sample_in_disc(radius, rng);
            if ues
                .iter()
                .all(|p| p.distance_squared(&candidate) >= min_dist_sq)
            {
                ues.push(candidate);
                break;
            }
            rejections += 1;
            if rejections >= cfg.max_rejections {
                return Err(GeometryError::DensityInfeasible {
                    placed: ues.len(),
                    requested,
                    rejections,
                    packing: lambda * PI * 4.0 * body * body,
                });
            }
        }
    }

    let active: Vec<bool> = (0..ues.len()).map(|_| rng.random_bool(cfg.p_e)).collect();
    let mut transmitters: Vec<UeIndex> = (0..ues.len()).filter(|&i| active[i]).collect();
    transmitters.shuffle(rng);
    let pairs = transmitters
        .chunks_exact(2)
        .map(|chunk| (chunk[0], chunk[1]))
        .collect();

    Ok(Topology {
        ues,
        active,
        pairs,
        network_radius: radius,
        body_radius: body,
    })
}

/// Returns `true` iff the closed segment `[a, b]` comes within `radius` of
/// `center`. Tangency counts as an intersection.
pub fn segment_disc_intersects(a: Point2D, b: Point2D, center: Point2D, radius: f64) -> bool {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq > 0.0 {
        (((center.x - a.x) * dx + (center.y - a.y) * dy) / len_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let closest = Point2D::new(a.x + t * dx, a.y + t * dy);
    closest.distance_squared(&center) <= radius * radius
}

/// Line-of-sight test for the link `s → d`: every UE other than the two
/// endpoints whose body disc touches the segment is a blocker.
pub fn check_blockage(
    topo: &Topology,
    s: UeIndex,
    d: UeIndex,
) -> Result<BlockageVerdict, GeometryError> {
    let a = topo.position(s)?;
    let b = topo.position(d)?;
    if s == d {
        return Err(GeometryError::DegenerateLink(s));
    }
    let blocker_ids = topo
        .ues
        .iter()
        .enumerate()
        .filter(|&(i, c)| i != s && i != d && segment_disc_intersects(a, b, *c, topo.body_radius))
        .map(|(i, _)| i)
        .collect();
    Ok(BlockageVerdict { blocker_ids })
}
