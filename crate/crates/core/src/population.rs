//! Random initialization and budget-aware objective evaluation.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{DecisionVector, Individual, Population, ProblemSpec};

/// `n` individuals with components `l_i + (u_i - l_i) * r`, `r` uniform on `(0, 1)`.
///
/// Panics when `n < 2`.
pub fn initialize_population(spec: &ProblemSpec, n: usize, rng: &mut RngStream) -> Population {
    assert!(n >= 2, "population size must be at least 2 (got {n})");
    let bounds = spec.bounds();
    let mut pop = Population::empty();
    for _ in 0..n {
        let x: Vec<f64> = bounds
            .lower
            .iter()
            .zip(&bounds.upper)
            .map(|(&lo, &hi)| affine(lo, hi, rng.open_unit()))
            .collect();
        let ind = pop.spawn(DecisionVector::new(x));
        pop.members.push(ind);
    }
    pop
}

#[inline]
pub(crate) fn affine(lo: f64, hi: f64, r: f64) -> f64 {
    lo + (hi - lo) * r
}

/// Evaluates every unevaluated member, charging one evaluation each.
/// Returns the number of newly evaluated members.
pub fn evaluate(spec: &ProblemSpec, pop: &mut Population) -> Result<usize> {
    let fresh = evaluate_members(spec, &mut pop.members)?;
    pop.evaluations_used += fresh;
    Ok(fresh)
}

/// Evaluates the unevaluated individuals of a slice without touching any
/// budget counter. Returns how many were evaluated.
pub fn evaluate_members(spec: &ProblemSpec, members: &mut [Individual]) -> Result<usize> {
    let mut fresh = 0;
    for ind in members.iter_mut().filter(|m| m.f.is_none()) {
        let f = spec.objectives_at(&ind.x);
        if !f.is_finite() {
            return Err(Error::NonFiniteObjective {
                id: ind.id,
                x: ind.x.to_vec(),
                values: f.into_inner(),
            });
        }
        ind.f = Some(f);
        fresh += 1;
    }
    Ok(fresh)
}
