//! Monte-Carlo drops, aggregation and parameter sweeps.
//!
//! A drop draws one topology, computes the direct link of every pair and, for
//! pairs that need help, both legs through every potential relay. All
//! requested strategies are then evaluated on that frozen drop, so strategy
//! comparisons are paired.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::capacity::{link_capacity, CapacityError, LinkBudget};
use crate::channel::{beam_geometry, sample_misalignment, ChannelError, ChannelParams};
use crate::config::{ConfigError, ScenarioConfig};
use crate::geometry::{check_blockage, generate_topology, GeometryError, Topology, UeIndex};
use crate::relay::{resolve_pair, LinkBudgets, RelayDecision, RelayTrigger, Strategy};
use crate::streams::{drop_stream, keyed_stream, StreamLabel};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error("no successful drops to aggregate")]
    NoSuccessfulDrops,
    #[error("sweep needs at least one {0} value")]
    EmptySweep(&'static str),
}

/// Everything recorded for one source/destination pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub direct: LinkBudget,
    /// One decision per requested strategy, in configuration order.
    pub decisions: Vec<(Strategy, RelayDecision)>,
}

impl PairRecord {
    pub fn decision(&self, strategy: Strategy) -> Option<&RelayDecision> {
        self.decisions
            .iter()
            .find(|(s, _)| *s == strategy)
            .map(|(_, d)| d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DropResult {
    pub drop_index: u64,
    pub ue_count: usize,
    pub pairs: Vec<PairRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DropFailure {
    pub drop_index: u64,
    pub error: SimError,
}

/// Outcome of a batch of drops.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub results: Vec<DropResult>,
    pub failures: Vec<DropFailure>,
}

impl RunOutcome {
    pub fn requested(&self) -> usize {
        self.results.len() + self.failures.len()
    }
}

/// A validated scenario ready to run drops.
#[derive(Debug, Clone)]
pub struct Simulator {
    cfg: ScenarioConfig,
    channel: ChannelParams,
}

impl Simulator {
    pub fn new(cfg: ScenarioConfig) -> Result<Self, SimError> {
        let channel = cfg.channel_params()?;
        Ok(Self { cfg, channel })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn channel(&self) -> &ChannelParams {
        &self.channel
    }

    /// Computes the budget of the directed link `s → r` with its own
    /// pointing-error draw.
    pub fn link_budget(
        &self,
        topo: &Topology,
        drop_index: u64,
        s: UeIndex,
        r: UeIndex,
    ) -> Result<LinkBudget, SimError> {
        let distance = topo.distance(s, r)?;
        let unblocked = !check_blockage(topo, s, r)?.is_blocked();
        let geo = beam_geometry(&self.channel, distance)?;
        let mut rng = keyed_stream(self.cfg.master_seed, drop_index, StreamLabel::Misalignment, s, r);
        let h_phi = sample_misalignment(&self.channel, &geo, &mut rng).h_phi;
        let capacity = link_capacity(&self.channel, distance, unblocked, h_phi, &self.cfg.quadrature)?;
        Ok(LinkBudget {
            source: s,
            dest: r,
            distance,
            unblocked,
            h_phi,
            capacity,
        })
    }

    /// UEs that may relay: everyone outside the transmitting pairs, optionally
    /// restricted to active UEs.
    pub fn relay_pool(&self, topo: &Topology) -> Vec<UeIndex> {
        let paired: HashSet<UeIndex> = topo.pairs.iter().flat_map(|&(s, d)| [s, d]).collect();
        (0..topo.len())
            .filter(|i| !paired.contains(i))
            .filter(|&i| self.cfg.policy.inactive_relays || topo.active[i])
            .collect()
    }

    fn needs_relay(&self, direct: &LinkBudget) -> bool {
        match self.cfg.policy.relay_trigger {
            RelayTrigger::BlockedOrBelowThreshold => {
                !direct.unblocked || direct.capacity < self.cfg.c_m_bps
            }
            RelayTrigger::BlockedOnly => !direct.unblocked,
        }
    }

    /// Draws the topology of a drop.
    pub fn topology(&self, drop_index: u64) -> Result<Topology, SimError> {
        let mut rng = drop_stream(self.cfg.master_seed, drop_index, StreamLabel::Topology);
        Ok(generate_topology(&self.cfg, &mut rng)?)
    }

    /// Runs one drop on its own random streams.
    pub fn run_drop(&self, drop_index: u64) -> Result<DropResult, SimError> {
        let topo = self.topology(drop_index)?;
        self.run_drop_on(&topo, drop_index)
    }

    /// Evaluates a drop on a given topology. Channel and selection draws still
    /// come from the streams of `drop_index`.
    pub fn run_drop_on(&self, topo: &Topology, drop_index: u64) -> Result<DropResult, SimError> {
        let pool = self.relay_pool(topo);
        let mut budgets = LinkBudgets::new();
        let mut directs = Vec::with_capacity(topo.pairs.len());
        for &(s, d) in &topo.pairs {
            let direct = self.link_budget(topo, drop_index, s, d)?;
            if self.needs_relay(&direct) {
                for &r in &pool {
                    budgets.insert(self.link_budget(topo, drop_index, s, r)?);
                    budgets.insert(self.link_budget(topo, drop_index, r, d)?);
                }
            }
            budgets.insert(direct.clone());
            directs.push(direct);
        }

        let policy = self.cfg.relay_policy();
        let mut order: Vec<usize> = (0..topo.pairs.len()).collect();
        if self.cfg.policy.relay_exclusivity {
            let mut rng = drop_stream(self.cfg.master_seed, drop_index, StreamLabel::PairOrder);
            order.shuffle(&mut rng);
        }

        let mut decisions: Vec<Vec<(Strategy, RelayDecision)>> =
            vec![Vec::with_capacity(self.cfg.strategies.len()); topo.pairs.len()];
        for &strategy in &self.cfg.strategies {
            let mut available = pool.clone();
            for &p in &order {
                let pair = topo.pairs[p];
                let mut rng = keyed_stream(
                    self.cfg.master_seed,
                    drop_index,
                    StreamLabel::RandomSelection,
                    pair.0,
                    pair.1,
                );
                let decision = resolve_pair(&available, &budgets, pair, strategy, &policy, &mut rng);
                if self.cfg.policy.relay_exclusivity {
                    if let Some(r) = decision.relay {
                        available.retain(|&u| u != r);
                    }
                }
                decisions[p].push((strategy, decision));
            }
        }

        let pairs = directs
            .into_iter()
            .zip(decisions)
            .map(|(direct, decisions)| PairRecord { direct, decisions })
            .collect();
        Ok(DropResult {
            drop_index,
            ue_count: topo.len(),
            pairs,
        })
    }

    /// Runs drops `0..cfg.drops` in parallel. Results are ordered by drop index.
    pub fn run(&self) -> RunOutcome {
        let outcomes: Vec<(u64, Result<DropResult, SimError>)> = (0..self.cfg.drops)
            .into_par_iter()
            .map(|i| (i, self.run_drop(i)))
            .collect();
        let mut results = Vec::new();
        let mut failures = Vec::new();
        for (drop_index, outcome) in outcomes {
            match outcome {
                Ok(r) => results.push(r),
                Err(error) => failures.push(DropFailure { drop_index, error }),
            }
        }
        RunOutcome { results, failures }
    }
}

/// Convenience wrapper: validates `cfg` and runs a single drop.
pub fn run_drop(cfg: &ScenarioConfig, drop_index: u64) -> Result<DropResult, SimError> {
    Simulator::new(cfg.clone())?.run_drop(drop_index)
}

/// Pooled end-to-end capacities of one strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyStats {
    pub strategy: Strategy,
    /// Pooled `C̃` values, ascending, bit/s.
    pub samples: Vec<f64>,
    pub mean: f64,
    pub stderr: f64,
    /// `(C_thr, P_C)` on the requested grid.
    pub p_c: Vec<(f64, f64)>,
}

impl StrategyStats {
    fn from_samples(strategy: Strategy, mut samples: Vec<f64>, grid: &[f64]) -> Self {
        samples.sort_by(f64::total_cmp);
        let n = samples.len() as f64;
        let (mean, stderr) = if samples.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            let mean = samples.iter().sum::<f64>() / n;
            let var = if samples.len() > 1 {
                samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            (mean, (var / n).sqrt())
        };
        let p_c = grid
            .iter()
            .map(|&thr| (thr, empirical_cdf(&samples, thr)))
            .collect();
        Self {
            strategy,
            samples,
            mean,
            stderr,
            p_c,
        }
    }

    /// `P_C` at an arbitrary threshold.
    pub fn cdf(&self, threshold: f64) -> f64 {
        empirical_cdf(&self.samples, threshold)
    }
}

/// `Pr(X ≤ threshold)` over an ascending sample.
pub fn empirical_cdf(sorted: &[f64], threshold: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    sorted.partition_point(|&x| x <= threshold) as f64 / sorted.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub successful_drops: usize,
    pub pair_records: usize,
    pub per_strategy: Vec<StrategyStats>,
}

impl AggregateStats {
    pub fn strategy(&self, strategy: Strategy) -> Option<&StrategyStats> {
        self.per_strategy.iter().find(|s| s.strategy == strategy)
    }
}

/// Pools every pair-level `C̃`, outages included, per strategy.
pub fn aggregate(results: &[DropResult], grid: &[f64]) -> Result<AggregateStats, SimError> {
    aggregate_with(results, grid, true)
}

/// As [`aggregate`]; with `include_outages == false` outage records are left
/// out of the pool.
pub fn aggregate_with(
    results: &[DropResult],
    grid: &[f64],
    include_outages: bool,
) -> Result<AggregateStats, SimError> {
    if results.is_empty() {
        return Err(SimError::NoSuccessfulDrops);
    }
    let mut strategies: Vec<Strategy> = Vec::new();
    for record in results.iter().flat_map(|r| &r.pairs) {
        for (s, _) in &record.decisions {
            if !strategies.contains(s) {
                strategies.push(*s);
            }
        }
    }
    let pair_records = results.iter().map(|r| r.pairs.len()).sum();
    let per_strategy = strategies
        .into_iter()
        .map(|strategy| {
            let samples = results
                .iter()
                .flat_map(|r| &r.pairs)
                .filter_map(|rec| rec.decision(strategy))
                .filter(|d| include_outages || d.mode != crate::relay::RelayMode::Outage)
                .map(|d| d.e2e_capacity)
                .collect();
            StrategyStats::from_samples(strategy, samples, grid)
        })
        .collect();
    Ok(AggregateStats {
        successful_drops: results.len(),
        pair_records,
        per_strategy,
    })
}

/// One `(λ, σ_s)` cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub lambda: f64,
    pub sigma_s: f64,
    pub successful_drops: usize,
    pub failed_drops: usize,
    pub stats: Result<AggregateStats, SimError>,
}

/// Runs the Cartesian product of `lambdas × sigmas`. Each cell uses the
/// template's seed, so a cell is reproduced by running its configuration on
/// its own; a failing cell is recorded and the sweep carries on.
pub fn sweep(
    template: &ScenarioConfig,
    lambdas: &[f64],
    sigmas: &[f64],
    grid: &[f64],
) -> Result<Vec<SweepCell>, SimError> {
    if lambdas.is_empty() {
        return Err(SimError::EmptySweep("lambda"));
    }
    if sigmas.is_empty() {
        return Err(SimError::EmptySweep("sigma_s"));
    }
    let mut cells = Vec::with_capacity(lambdas.len() * sigmas.len());
    for &lambda in lambdas {
        for &sigma_s in sigmas {
            let cfg = ScenarioConfig {
                lambda,
                sigma_s,
                ..template.clone()
            };
            cells.push(run_cell(cfg, grid));
        }
    }
    Ok(cells)
}

/// Runs and aggregates one configuration.
pub fn run_cell(cfg: ScenarioConfig, grid: &[f64]) -> SweepCell {
    let (lambda, sigma_s) = (cfg.lambda, cfg.sigma_s);
    let include_outages = cfg.policy.average_includes_outages;
    match Simulator::new(cfg) {
        Ok(sim) => {
            let outcome = sim.run();
            SweepCell {
                lambda,
                sigma_s,
                successful_drops: outcome.results.len(),
                failed_drops: outcome.failures.len(),
                stats: aggregate_with(&outcome.results, grid, include_outages),
            }
        }
        Err(e) => SweepCell {
            lambda,
            sigma_s,
            successful_drops: 0,
            failed_drops: 0,
            stats: Err(e),
        },
    }
}
