//! LLM-assisted reproduction: mating pool, frequency-ranked elites, prompt
//! construction, response parsing with retries, and offspring injection.

pub mod grammar;
mod prompt;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use prompt::{build_prompt, parse_response, ParseFailure, ParsedOffspring, PromptBundle};

use crate::error::Result;
use crate::nsga2::{binary_tournament_select, crowded_order, reproduce, VariationParams};
use crate::population::evaluate_members;
use crate::providers::{Exchange, Provider, TokenUsage};
use crate::rng::RngStream;
use crate::types::{DecisionVector, Individual, Population, ProblemSpec};

/// `n` binary-tournament winners drawn with replacement (copies).
pub fn build_mating_pool(members: &[Individual], n: usize, rng: &mut RngStream) -> Vec<Individual> {
    (0..n).map(|_| binary_tournament_select(members, rng).clone()).collect()
}

/// The `l` most frequent mating-pool members.
#[derive(Clone, Debug, PartialEq)]
pub struct ElitePool {
    pub members: Vec<Individual>,
    /// Occurrences of each id in the mating pool.
    pub frequency: BTreeMap<u64, usize>,
}

fn frequency_table(pool: &[Individual]) -> (BTreeMap<u64, usize>, Vec<&Individual>) {
    let mut freq = BTreeMap::new();
    let mut distinct = Vec::new();
    for ind in pool {
        let count = freq.entry(ind.id).or_insert(0);
        if *count == 0 {
            distinct.push(ind);
        }
        *count += 1;
    }
    (freq, distinct)
}

fn elite_order(freq: &BTreeMap<u64, usize>, a: &Individual, b: &Individual) -> Ordering {
    freq[&b.id].cmp(&freq[&a.id]).then_with(|| crowded_order(a, b))
}

/// Frequency descending, then lower rank, higher crowding, lower id.
pub fn select_elites(pool: &[Individual], l: usize) -> ElitePool {
    assert!(!pool.is_empty(), "empty mating pool");
    let (frequency, mut distinct) = frequency_table(pool);
    distinct.sort_by(|a, b| elite_order(&frequency, a, b));
    distinct.truncate(l);
    ElitePool {
        members: distinct.into_iter().cloned().collect(),
        frequency,
    }
}

/// Replaces `offspring.len()` pool slots. Second-and-later occurrences of
/// repeated individuals go first (most frequent id first, earliest slot
/// first); any remaining offspring overwrite the worst slots by rank and
/// crowding.
pub fn inject_offspring(pool: &mut [Individual], offspring: Vec<Individual>) {
    assert!(offspring.len() <= pool.len(), "more offspring than pool slots");
    if offspring.is_empty() {
        return;
    }
    let (freq, mut ids) = frequency_table(pool);
    ids.sort_by(|a, b| elite_order(&freq, a, b));
    let order: Vec<u64> = ids.iter().map(|i| i.id).collect();
    let mut targets = Vec::with_capacity(offspring.len());
    for id in order {
        let mut seen = false;
        for (slot, ind) in pool.iter().enumerate() {
            if ind.id == id {
                if seen {
                    targets.push(slot);
                }
                seen = true;
            }
        }
    }
    targets.truncate(offspring.len());
    if targets.len() < offspring.len() {
        let mut rest: Vec<usize> = (0..pool.len()).filter(|i| !targets.contains(i)).collect();
        rest.sort_by(|&i, &j| crowded_order(&pool[j], &pool[i]).then(j.cmp(&i)));
        let missing = offspring.len() - targets.len();
        targets.extend(rest.into_iter().take(missing));
    }
    for (slot, child) in targets.into_iter().zip(offspring) {
        pool[slot] = child;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlmSettings {
    /// Elites shown in the prompt.
    pub l: usize,
    /// Solutions requested per call.
    pub s: usize,
    /// Extra attempts after the first failed one.
    pub retries: usize,
}

impl Default for LlmSettings {
    fn default() -> Self {
        Self { l: 5, s: 3, retries: 3 }
    }
}

/// Result of one reproduction step.
#[derive(Clone, Debug, PartialEq)]
pub struct Reproduction {
    /// `N` unevaluated children.
    pub children: Vec<DecisionVector>,
    pub exchanges: Vec<Exchange>,
    /// LLM offspring placed into the mating pool (0 on fallback).
    pub injected: usize,
    pub fell_back: bool,
    /// Evaluations spent on injected offspring.
    pub evaluations: usize,
}

impl Reproduction {
    pub fn tokens(&self) -> TokenUsage {
        self.exchanges
            .iter()
            .fold(TokenUsage::default(), |acc, e| acc + e.usage)
    }
}

/// Plain NSGA-II variation: tournament mating pool, SBX, polynomial mutation.
pub fn nsga2_variation(
    pop: &Population,
    spec: &ProblemSpec,
    params: &VariationParams,
    rng: &mut RngStream,
) -> Reproduction {
    let pool = build_mating_pool(&pop.members, pop.len(), rng);
    let xs: Vec<&DecisionVector> = pool.iter().map(|m| &m.x).collect();
    Reproduction {
        children: reproduce(&xs, pop.len(), params, spec.bounds(), rng),
        exchanges: Vec::new(),
        injected: 0,
        fell_back: false,
        evaluations: 0,
    }
}

/// Asks the provider for new solutions, retrying with a fresh single-turn
/// session on any failure. On success they are evaluated, injected into the
/// mating pool, and ordinary variation runs over the modified pool; after
/// `1 + retries` failed attempts the unmodified pool is used instead.
///
/// Offspring ids are taken from `pop`; their evaluations are added to
/// `pop.evaluations_used` when `charge` is set.
#[allow(clippy::too_many_arguments)]
pub fn llm_variation(
    pop: &mut Population,
    spec: &ProblemSpec,
    params: &VariationParams,
    provider: &dyn Provider,
    settings: &LlmSettings,
    generation: usize,
    charge: bool,
    rng: &mut RngStream,
) -> Result<Reproduction> {
    let n = pop.len();
    let mut pool = build_mating_pool(&pop.members, n, rng);
    let elites = select_elites(&pool, settings.l);
    let prompt = build_prompt(&elites, spec, settings.s);
    let mut exchanges = Vec::new();
    let mut parsed = None;
    for attempt in 1..=settings.retries + 1 {
        let (response, usage, latency_ms, outcome) = match provider.complete(&prompt.rendered, settings.s) {
            Ok(c) => {
                let outcome = parse_response(&c.text, spec, settings.s);
                (c.text, c.usage, c.latency_ms, outcome)
            }
            Err(e) => (
                String::new(),
                TokenUsage::default(),
                0,
                Err(ParseFailure::Provider(e.to_string())),
            ),
        };
        let error = outcome.as_ref().err().map(ToString::to_string);
        if let Some(msg) = &error {
            log::debug!("generation {generation}, attempt {attempt}: {msg}");
        }
        exchanges.push(Exchange {
            generation,
            attempt,
            prompt: prompt.rendered.clone(),
            response,
            usage,
            latency_ms,
            error,
        });
        if let Ok(mut p) = outcome {
            p.attempts = attempt;
            parsed = Some(p);
            break;
        }
    }
    let Some(parsed) = parsed else {
        log::info!(
            "generation {generation}: no usable response after {} attempts, using plain variation",
            exchanges.len()
        );
        let xs: Vec<&DecisionVector> = pool.iter().map(|m| &m.x).collect();
        return Ok(Reproduction {
            children: reproduce(&xs, n, params, spec.bounds(), rng),
            exchanges,
            injected: 0,
            fell_back: true,
            evaluations: 0,
        });
    };
    let mut offspring: Vec<Individual> = parsed.vectors.into_iter().map(|x| pop.spawn(x)).collect();
    let evaluations = evaluate_members(spec, &mut offspring)?;
    if charge {
        pop.evaluations_used += evaluations;
    }
    let injected = offspring.len().min(n);
    offspring.truncate(injected);
    inject_offspring(&mut pool, offspring);
    let xs: Vec<&DecisionVector> = pool.iter().map(|m| &m.x).collect();
    Ok(Reproduction {
        children: reproduce(&xs, n, params, spec.bounds(), rng),
        exchanges,
        injected,
        fell_back: false,
        evaluations,
    })
}
