//! NSGA-II with an adaptively gated LLM offspring operator.
//!
//! The evolutionary backbone is plain NSGA-II (fast non-dominated sort,
//! crowding distance, binary tournament, SBX and polynomial mutation). Each
//! generation an auxiliary population score is compared with the previous
//! generation's score; only when it rises by at least a threshold is a
//! language model asked to propose a handful of new solutions, which are
//! mixed into the mating pool before ordinary variation. Token spend is
//! tracked per exchange so that gated and always-on runs can be compared.
//!
//! Crate layout:
//!
//! * [`types`], [`dominance`], [`population`], [`rng`]: shared domain model.
//! * [`nsga2`]: sorting, crowding, selection and variation operators.
//! * [`gate`]: the auxiliary score and the invoke/skip decision.
//! * [`llm_operator`]: mating pool, elites, prompt grammar and injection.
//! * [`providers`]: completion backends (HTTP chat, offline mock, chaos).
//! * [`problems`]: ZDT and UF benchmark problems with Pareto front samplers.
//! * [`metrics`]: normalized hypervolume and IGD.
//! * [`harness`]: the run loop, batches, threshold sweeps and file outputs.

pub mod dominance;
pub mod error;
pub mod gate;
pub mod harness;
pub mod llm_operator;
pub mod metrics;
pub mod nsga2;
pub mod population;
pub mod problems;
pub mod providers;
pub mod rng;
pub mod types;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use types::{Bounds, DecisionVector, Individual, ObjectiveVector, Population, ProblemSpec};
