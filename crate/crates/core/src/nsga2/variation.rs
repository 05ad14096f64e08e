use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{Bounds, DecisionVector};

/// Parameters of SBX crossover and polynomial mutation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VariationParams {
    /// SBX distribution index.
    pub sbx_eta: f64,
    /// Per-variable mutation probability is `mutation_prob_scale / d`.
    pub mutation_prob_scale: f64,
    /// Polynomial mutation distribution index.
    pub pm_eta: f64,
    /// Probability that a parent pair is recombined at all.
    pub crossover_prob: f64,
    /// Probability that an individual variable takes part in SBX.
    pub sbx_var_prob: f64,
}

impl Default for VariationParams {
    fn default() -> Self {
        Self {
            sbx_eta: 20.0,
            mutation_prob_scale: 1.0,
            pm_eta: 20.0,
            crossover_prob: 1.0,
            sbx_var_prob: 0.5,
        }
    }
}

impl VariationParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if !(self.sbx_eta > 0.0 && self.pm_eta > 0.0) {
            return Err(Error::Config("distribution indices must be positive".into()));
        }
        if !(self.mutation_prob_scale >= 0.0) {
            return Err(Error::Config("mutation probability scale must be non-negative".into()));
        }
        if !unit(self.crossover_prob) || !unit(self.sbx_var_prob) {
            return Err(Error::Config("crossover probabilities must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

const SAME_VALUE_EPS: f64 = 1e-14;

/// Simulated binary crossover. Each variable takes part with probability
/// `sbx_var_prob`; the two child values of a crossed variable are swapped
/// with probability 1/2. Children are clipped to `bounds`.
pub fn sbx_crossover(
    p1: &DecisionVector,
    p2: &DecisionVector,
    params: &VariationParams,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> (DecisionVector, DecisionVector) {
    assert_eq!(p1.len(), p2.len(), "parents differ in dimension");
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.unit() >= params.crossover_prob {
        return (c1.into(), c2.into());
    }
    let exponent = 1.0 / (params.sbx_eta + 1.0);
    for i in 0..c1.len() {
        let crosses = rng.unit() < params.sbx_var_prob;
        let u = rng.unit();
        let swap = rng.unit() < 0.5;
        let (y1, y2) = (p1[i], p2[i]);
        if !crosses || (y1 - y2).abs() <= SAME_VALUE_EPS {
            continue;
        }
        let beta = if u <= 0.5 {
            (2.0 * u).powf(exponent)
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(exponent)
        };
        let mean = 0.5 * (y1 + y2);
        let half_spread = 0.5 * beta * (y1 - y2);
        let (a, b) = (mean + half_spread, mean - half_spread);
        (c1[i], c2[i]) = if swap { (b, a) } else { (a, b) };
    }
    bounds.clip(&mut c1);
    bounds.clip(&mut c2);
    (c1.into(), c2.into())
}

/// Bounded polynomial mutation; each variable mutates independently with
/// probability `mutation_prob_scale / d`. The result is clipped to `bounds`.
pub fn polynomial_mutation(
    x: &DecisionVector,
    params: &VariationParams,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> DecisionVector {
    let d = x.len();
    let prob = params.mutation_prob_scale / d as f64;
    let exponent = params.pm_eta + 1.0;
    let mut y = x.to_vec();
    for i in 0..d {
        if rng.unit() >= prob {
            continue;
        }
        let u = rng.unit();
        let (lo, hi) = (bounds.lower[i], bounds.upper[i]);
        let span = hi - lo;
        let delta = if u < 0.5 {
            let d1 = (y[i] - lo) / span;
            (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(exponent)).powf(1.0 / exponent) - 1.0
        } else {
            let d2 = (hi - y[i]) / span;
            1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(exponent)).powf(1.0 / exponent)
        };
        y[i] += delta * span;
    }
    bounds.clip(&mut y);
    y.into()
}

/// Produces `n` children from a mating pool by pairing consecutive slots
/// (`0,1`, `2,3`, ...; an odd tail pairs with slot 0), applying SBX and then
/// mutating both children.
pub fn reproduce(
    pool: &[&DecisionVector],
    n: usize,
    params: &VariationParams,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> Vec<DecisionVector> {
    assert!(!pool.is_empty(), "empty mating pool");
    let mut children = Vec::with_capacity(n + 1);
    let mut k = 0;
    while children.len() < n {
        let a = pool[k % pool.len()];
        let b = pool[(k + 1) % pool.len()];
        let (c1, c2) = sbx_crossover(a, b, params, bounds, rng);
        children.push(polynomial_mutation(&c1, params, bounds, rng));
        children.push(polynomial_mutation(&c2, params, bounds, rng));
        k += 2;
    }
    children.truncate(n);
    children
}
