//! Monte-Carlo link-level simulation of dense THz networks in which human
//! bodies block line-of-sight links and narrow beams suffer pointing error.
//! Blocked or weak source/destination pairs can recover through a
//! decode-and-forward relay picked by a best or random strategy.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: hard-core Poisson topologies and line-of-sight blockage.
//! * [`channel`]: path gain with molecular absorption and misalignment fading.
//! * [`capacity`]: wideband capacity integral and end-to-end capacity.
//! * [`relay`]: candidate sets and the two selection strategies.
//! * [`simulation`]: drops, aggregation and `(λ, σ_s)` sweeps.
//!
//! ```
//! use thz_relay::{ScenarioConfig, Simulator};
//!
//! let cfg = ScenarioConfig { drops: 20, ..ScenarioConfig::default() };
//! let outcome = Simulator::new(cfg).unwrap().run();
//! let stats = thz_relay::aggregate(&outcome.results, &[30e9]).unwrap();
//! for s in &stats.per_strategy {
//!     println!("{}: {:.2} Gbit/s", s.strategy, s.mean / 1e9);
//! }
//! ```

pub mod capacity;
pub mod channel;
pub mod config;
pub mod geometry;
pub mod relay;
pub mod simulation;
pub mod streams;

pub use capacity::{end_to_end_capacity, link_capacity, snr_density, LinkBudget, PathKind, QuadratureSpec};
pub use channel::{
    beam_geometry, molecular_absorption, path_gain, sample_misalignment, AbsorptionModel,
    AbsorptionTable, BeamGeometry, ChannelParams, MisalignmentSample,
};
pub use config::{AbsorptionSource, ConfigError, PolicySwitches, ScenarioConfig};
pub use geometry::{
    check_blockage, generate_topology, segment_disc_intersects, BlockageVerdict, Point2D, Topology,
    UeIndex,
};
pub use relay::{
    build_candidate_set, resolve_pair, select_best, select_random, LinkBudgets, RelayCandidate,
    RelayCandidateSet, RelayDecision, RelayMode, RelayPolicy, RelayTrigger, Strategy,
};
pub use simulation::{
    aggregate, aggregate_with, run_cell, run_drop, sweep, AggregateStats, DropResult, PairRecord,
    RunOutcome, SimError, Simulator, StrategyStats, SweepCell,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/topology.md")]
    mod topology {}
    #[doc = include_str!("../../../book/src/channel.md")]
    mod channel {}
    #[doc = include_str!("../../../book/src/capacity.md")]
    mod capacity {}
    #[doc = include_str!("../../../book/src/relays.md")]
    mod relays {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
}
