//! Dual-hop relay selection.
//!
//! A UE is an eligible relay for a source/destination pair when both of its
//! legs are unblocked and each carries at least the QoS threshold `C_m`. The
//! best strategy takes the candidate whose weaker leg is strongest; the random
//! strategy picks uniformly among the candidates.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::LinkBudget;
use crate::geometry::UeIndex;

/// Relay selection strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Best,
    Random,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Best => "best",
            Strategy::Random => "random",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// When a pair abandons its direct link and looks for a relay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelayTrigger {
    /// Relay when the direct link is blocked or falls below `C_m`.
    BlockedOrBelowThreshold,
    /// Relay only when the direct link is blocked.
    BlockedOnly,
}

/// Knobs that shape a relay decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayPolicy {
    /// QoS threshold, bit/s.
    pub c_m: f64,
    pub trigger: RelayTrigger,
    /// Scale relayed end-to-end capacity by 1/2 for half-duplex time sharing.
    pub half_duplex_factor: bool,
}

/// Link budgets of a drop, keyed by directed `(source, dest)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinkBudgets {
    links: HashMap<(UeIndex, UeIndex), LinkBudget>,
}

impl LinkBudgets {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, link: LinkBudget) {
        self.links.insert((link.source, link.dest), link);
    }

    pub fn get(&self, source: UeIndex, dest: UeIndex) -> Option<&LinkBudget> {
        self.links.get(&(source, dest))
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

impl FromIterator<LinkBudget> for LinkBudgets {
    fn from_iter<I: IntoIterator<Item = LinkBudget>>(iter: I) -> Self {
        let mut budgets = LinkBudgets::new();
        for link in iter {
            budgets.insert(link);
        }
        budgets
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelayCandidate {
    pub relay: UeIndex,
    /// Source-to-relay capacity, bit/s.
    pub c_sr: f64,
    /// Relay-to-destination capacity, bit/s.
    pub c_rd: f64,
}

impl RelayCandidate {
    pub fn min_leg(&self) -> f64 {
        self.c_sr.min(self.c_rd)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelayCandidateSet {
    pub pair: (UeIndex, UeIndex),
    /// Sorted by relay index.
    pub candidates: Vec<RelayCandidate>,
}

impl RelayCandidateSet {
    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn contains(&self, relay: UeIndex) -> bool {
        self.candidates.iter().any(|c| c.relay == relay)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelayMode {
    Direct,
    Relayed,
    Outage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelayDecision {
    pub pair: (UeIndex, UeIndex),
    pub mode: RelayMode,
    pub relay: Option<UeIndex>,
    /// End-to-end capacity, bit/s.
    pub e2e_capacity: f64,
}

impl RelayDecision {
    pub fn outage(pair: (UeIndex, UeIndex)) -> Self {
        Self {
            pair,
            mode: RelayMode::Outage,
            relay: None,
            e2e_capacity: 0.0,
        }
    }

    fn relayed(pair: (UeIndex, UeIndex), candidate: &RelayCandidate) -> Self {
        Self {
            pair,
            mode: RelayMode::Relayed,
            relay: Some(candidate.relay),
            e2e_capacity: candidate.min_leg(),
        }
    }
}

/// Collects every UE of `pool` that can relay for `pair`: both legs present in
/// `budgets`, unblocked, and at or above `c_m`. The pool is expected to exclude
/// UEs that are themselves transmitting; `s` and `d` are skipped regardless.
pub fn build_candidate_set(
    pool: &[UeIndex],
    budgets: &LinkBudgets,
    pair: (UeIndex, UeIndex),
    c_m: f64,
) -> RelayCandidateSet {
    let (s, d) = pair;
    let mut candidates: Vec<RelayCandidate> = pool
        .iter()
        .copied()
        .filter(|&r| r != s && r != d)
        .filter_map(|r| {
            let sr = budgets.get(s, r)?;
            let rd = budgets.get(r, d)?;
            let eligible =
                sr.unblocked && rd.unblocked && sr.capacity >= c_m && rd.capacity >= c_m;
            eligible.then_some(RelayCandidate {
                relay: r,
                c_sr: sr.capacity,
                c_rd: rd.capacity,
            })
        })
        .collect();
    candidates.sort_by_key(|c| c.relay);
    candidates.dedup_by_key(|c| c.relay);
    RelayCandidateSet { pair, candidates }
}

/// Picks the candidate maximizing the weaker leg; ties go to the lowest UE
/// index. An empty set yields an outage.
pub fn select_best(set: &RelayCandidateSet) -> RelayDecision {
    let mut best: Option<&RelayCandidate> = None;
    for c in &set.candidates {
        best = match best {
            Some(b) if c.min_leg() > b.min_leg() || (c.min_leg() == b.min_leg() && c.relay < b.relay) => Some(c),
            Some(b) => Some(b),
            None => Some(c),
        };
    }
    best.map_or_else(
        || RelayDecision::outage(set.pair),
        |c| RelayDecision::relayed(set.pair, c),
    )
}

/// Picks a candidate uniformly at random. An empty set yields an outage and
/// draws nothing from `rng`.
pub fn select_random<R: Rng + ?Sized>(set: &RelayCandidateSet, rng: &mut R) -> RelayDecision {
    if set.is_empty() {
        return RelayDecision::outage(set.pair);
    }
    let pick = rng.random_range(0..set.len());
    RelayDecision::relayed(set.pair, &set.candidates[pick])
}

/// Decides how `pair` is served: directly when the direct link is good enough
/// under `policy.trigger`, otherwise through a relay chosen by `strategy`.
pub fn resolve_pair<R: Rng + ?Sized>(
    pool: &[UeIndex],
    budgets: &LinkBudgets,
    pair: (UeIndex, UeIndex),
    strategy: Strategy,
    policy: &RelayPolicy,
    rng: &mut R,
) -> RelayDecision {
    let direct = budgets.get(pair.0, pair.1);
    if let Some(direct) = direct {
        let keep_direct = match policy.trigger {
            RelayTrigger::BlockedOrBelowThreshold => direct.unblocked && direct.capacity >= policy.c_m,
            RelayTrigger::BlockedOnly => direct.unblocked,
        };
        if keep_direct {
            return RelayDecision {
                pair,
                mode: RelayMode::Direct,
                relay: None,
                e2e_capacity: direct.capacity,
            };
        }
    }
    let set = build_candidate_set(pool, budgets, pair, policy.c_m);
    let mut decision = match strategy {
        Strategy::Best => select_best(&set),
        Strategy::Random => select_random(&set, rng),
    };
    if policy.half_duplex_factor && decision.mode == RelayMode::Relayed {
        decision.e2e_capacity *= 0.5;
    }
    decision
}
