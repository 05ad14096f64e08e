//! Adaptive gate deciding, once per generation, whether the LLM operator runs.
//!
//! The default auxiliary score is
//!
//! ```text
//! S = -mean(finite crowding distances) + mean(front index)
//! ```
//!
//! and is `-inf` when no crowding distance is finite. The LLM fires when the
//! score rose by at least `delta` since the previous generation.

use serde::{Deserialize, Serialize};

use crate::nsga2::FrontPartition;
use crate::types::Individual;

/// Pluggable population score. Implementations see a ranked and crowded population.
pub trait AuxiliaryFunction: Send + Sync {
    fn score(&self, members: &[Individual], partition: &FrontPartition) -> f64;
}

/// Negated mean finite crowding distance plus mean front index.
#[derive(Clone, Copy, Debug, Default)]
pub struct CrowdingRankScore;

impl AuxiliaryFunction for CrowdingRankScore {
    fn score(&self, members: &[Individual], partition: &FrontPartition) -> f64 {
        auxiliary_score(members, partition)
    }
}

/// Default auxiliary score. Ranks and crowding must already be set.
pub fn auxiliary_score(members: &[Individual], partition: &FrontPartition) -> f64 {
    debug_assert_eq!(partition.size(), members.len());
    let finite: Vec<f64> = members
        .iter()
        .map(|m| m.crowding.expect("auxiliary score needs crowding distances"))
        .filter(|c| c.is_finite())
        .collect();
    if finite.is_empty() || members.is_empty() {
        return f64::NEG_INFINITY;
    }
    let mean_crowding = finite.iter().sum::<f64>() / finite.len() as f64;
    let mean_front = members
        .iter()
        .map(|m| m.rank.expect("auxiliary score needs ranks") as f64)
        .sum::<f64>()
        / members.len() as f64;
    -mean_crowding + mean_front
}

/// One gate decision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub generation: usize,
    pub score: f64,
    pub delta: f64,
    pub invoked: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateState {
    prev_score: f64,
    delta: f64,
    history: Vec<GateRecord>,
}

impl GateState {
    /// Starts with a previous score of 0. Panics unless `delta > 0`
    /// (`+inf` is allowed and disables the gate).
    pub fn new(delta: f64) -> Self {
        assert!(delta > 0.0, "decision threshold must be positive (got {delta})");
        Self {
            prev_score: 0.0,
            delta,
            history: Vec::new(),
        }
    }

    pub fn prev_score(&self) -> f64 {
        self.prev_score
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn history(&self) -> &[GateRecord] {
        &self.history
    }

    pub fn invocations(&self) -> usize {
        self.history.iter().filter(|r| r.invoked).count()
    }

    /// The decision for `score` without recording it.
    pub fn would_invoke(&self, score: f64) -> bool {
        score.is_finite() && self.prev_score.is_finite() && score - self.prev_score >= self.delta
    }

    /// Appends a record and makes `score` the new previous score.
    pub fn record(&mut self, generation: usize, score: f64, invoked: bool) {
        self.history.push(GateRecord {
            generation,
            score,
            delta: self.delta,
            invoked,
        });
        self.prev_score = score;
    }

    /// Decides, records and advances in one step.
    pub fn should_invoke(&mut self, score: f64) -> bool {
        let invoke = self.would_invoke(score);
        let generation = self.history.len();
        self.record(generation, score, invoke);
        invoke
    }
}
