use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::config::{Algorithm, RunConfig};
use crate::error::Result;
use crate::gate::{auxiliary_score, GateRecord, GateState};
use crate::llm_operator::{llm_variation, nsga2_variation, Reproduction};
use crate::metrics::{hypervolume, igd, MetricContext};
use crate::nsga2::{environmental_selection, rank_and_crowd, FrontPartition};
use crate::population::{evaluate, initialize_population};
use crate::problems::make_problem;
use crate::providers::{usage_report, Exchange, Provider, UsageReport};
use crate::rng::RngStream;
use crate::types::{Individual, ObjectiveVector, Population};

/// One row of the convergence series, describing population `P_t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub generation: usize,
    pub evaluations: usize,
    pub hv: f64,
    pub igd: f64,
    /// Auxiliary score of `P_t`; `-inf` when no crowding distance is finite.
    pub score: f64,
    /// Whether the LLM took part in producing `P_t`.
    pub invoked: bool,
    /// Cumulative tokens up to and including this generation.
    pub tokens: u64,
}

/// Per-generation log record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationLog {
    pub row: SeriesRow,
    /// Gate decision taken on `P_t` (absent for the last population).
    pub gate: Option<GateRecord>,
    /// Exchanges made while producing `P_t`.
    pub exchanges: Vec<Exchange>,
    pub injected: usize,
    pub fell_back: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalMember {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub config: RunConfig,
    pub log: Vec<GenerationLog>,
    pub final_population: Vec<FinalMember>,
    /// Gate approvals (or every generation for the always-on arm).
    pub invocations: usize,
    pub usage: UsageReport,
    pub wall_time: Duration,
}

impl RunReport {
    pub fn series(&self) -> impl Iterator<Item = &SeriesRow> {
        self.log.iter().map(|g| &g.row)
    }

    pub fn last(&self) -> &SeriesRow {
        &self.log.last().expect("a run has at least the initial generation").row
    }

    pub fn final_hv(&self) -> f64 {
        self.last().hv
    }

    pub fn final_igd(&self) -> f64 {
        self.last().igd
    }

    pub fn total_tokens(&self) -> u64 {
        self.usage.usage.total
    }

    /// Objective vectors of the final first front.
    pub fn final_front(&self) -> Vec<Vec<f64>> {
        self.final_population
            .iter()
            .filter(|m| m.rank == 1)
            .map(|m| m.f.clone())
            .collect()
    }

    pub fn exchanges(&self) -> impl Iterator<Item = &Exchange> {
        self.log.iter().flat_map(|g| g.exchanges.iter())
    }
}

fn first_front(members: &[Individual], partition: &FrontPartition) -> Vec<ObjectiveVector> {
    partition
        .fronts
        .first()
        .map(|f| f.iter().map(|&i| members[i].objectives().clone()).collect())
        .unwrap_or_default()
}

/// Runs one configuration end to end with the configured provider.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    run_observed(config, None, &mut |_| {})
}

/// Like [`run`], with an optional provider override and a callback that sees
/// every population `P_t` after ranking.
pub fn run_observed(
    config: &RunConfig,
    provider: Option<Arc<dyn Provider>>,
    observer: &mut dyn FnMut(&Population),
) -> Result<RunReport> {
    config.validate()?;
    let started = Instant::now();
    let provider: Option<Arc<dyn Provider>> = match (config.algorithm.uses_llm(), provider) {
        (false, _) => None,
        (true, Some(p)) => Some(p),
        (true, None) => Some(config.provider.build()?),
    };
    let spec = make_problem(&config.problem, config.dim)?;
    let pf = spec.pf_samples(config.pf_samples);
    let ctx = MetricContext::from_front(&pf)?;
    let n = config.pop_size;
    let s = config.s;
    let settings = config.llm_settings();
    let charge = !config.free_llm_evals;
    let gate_delta = match config.algorithm {
        Algorithm::Nsga2Llm => config.delta,
        _ => f64::INFINITY,
    };
    let mut gate = GateState::new(gate_delta);
    let mut rng = RngStream::new(config.seed);

    let mut pop = initialize_population(&spec, n, &mut rng);
    evaluate(&spec, &mut pop)?;
    let mut partition = rank_and_crowd(&mut pop.members);

    let mut tokens = 0u64;
    let mut log: Vec<GenerationLog> = Vec::new();
    let mut invocations = 0;
    let mut pending = (Vec::new(), 0, false, false);
    let cap = config.generation_cap();
    loop {
        observer(&pop);
        let front = first_front(&pop.members, &partition);
        let score = auxiliary_score(&pop.members, &partition);
        let (exchanges, injected, fell_back, invoked) = std::mem::take(&mut pending);
        log.push(GenerationLog {
            row: SeriesRow {
                generation: pop.generation,
                evaluations: pop.evaluations_used,
                hv: hypervolume(&front, &ctx),
                igd: igd(&front, &pf),
                score,
                invoked,
                tokens,
            },
            gate: None,
            exchanges,
            injected,
            fell_back,
        });

        let remaining = config.max_evaluations.saturating_sub(pop.evaluations_used);
        if remaining < n || pop.generation >= cap {
            break;
        }
        let invoke = match config.algorithm {
            Algorithm::Nsga2 => false,
            Algorithm::Nsga2Llm => gate.would_invoke(score),
            Algorithm::Nsga2LlmAlways => true,
        };
        if invoke && charge && remaining < n + s {
            break;
        }
        gate.record(pop.generation, score, invoke);
        log.last_mut().expect("just pushed").gate = gate.history().last().copied();

        let repro: Reproduction = match (&provider, invoke) {
            (Some(p), true) => {
                invocations += 1;
                let target = pop.generation + 1;
                llm_variation(
                    &mut pop,
                    &spec,
                    &config.variation,
                    p.as_ref(),
                    &settings,
                    target,
                    charge,
                    &mut rng,
                )?
            }
            _ => nsga2_variation(&pop, &spec, &config.variation, &mut rng),
        };
        tokens += repro.tokens().total;

        let mut union = pop.members.clone();
        for x in repro.children {
            let child = pop.spawn(x);
            union.push(child);
        }
        let mut next = pop.with_members(union);
        evaluate(&spec, &mut next)?;
        let mut next = environmental_selection(next, n);
        next.generation = pop.generation + 1;
        partition = rank_and_crowd(&mut next.members);
        pop = next;
        pending = (repro.exchanges, repro.injected, repro.fell_back, invoke);
    }

    let final_population = pop
        .members
        .iter()
        .map(|m| FinalMember {
            x: m.x.to_vec(),
            f: m.objectives().to_vec(),
            rank: m.rank.expect("ranked"),
        })
        .collect();
    let all: Vec<Exchange> = log.iter().flat_map(|g| g.exchanges.iter().cloned()).collect();
    let usage = usage_report(&all);
    log::info!(
        "{} {} seed {}: {} generations, {} evaluations, HV {:.4}, IGD {:.4}, {} LLM calls",
        config.problem,
        config.algorithm,
        config.seed,
        log.len(),
        pop.evaluations_used,
        log.last().map_or(0.0, |g| g.row.hv),
        log.last().map_or(0.0, |g| g.row.igd),
        invocations
    );
    Ok(RunReport {
        config: config.clone(),
        log,
        final_population,
        invocations,
        usage,
        wall_time: started.elapsed(),
    })
}
