//! Domain model shared by every module: vectors, individuals, populations
//! and the problem description.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in decision space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecisionVector(Vec<f64>);

/// A point in objective space (all objectives minimized).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(Vec<f64>);

macro_rules! real_vector {
    ($name:ident) => {
        impl $name {
            pub fn new(values: Vec<f64>) -> Self {
                Self(values)
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }

            pub fn as_mut_slice(&mut self) -> &mut [f64] {
                &mut self.0
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|v| v.is_finite())
            }
        }

        impl Deref for $name {
            type Target = [f64];

            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl AsRef<[f64]> for $name {
            fn as_ref(&self) -> &[f64] {
                &self.0
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(values: Vec<f64>) -> Self {
                Self(values)
            }
        }

        impl<const N: usize> From<[f64; N]> for $name {
            fn from(values: [f64; N]) -> Self {
                Self(values.to_vec())
            }
        }
    };
}

real_vector!(DecisionVector);
real_vector!(ObjectiveVector);

/// One candidate solution together with its NSGA-II bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    /// Unique within a run; used as the final deterministic tiebreak.
    pub id: u64,
    pub x: DecisionVector,
    /// `None` until evaluated.
    pub f: Option<ObjectiveVector>,
    /// 1-based front index; `None` until sorted.
    pub rank: Option<usize>,
    /// Non-negative or `+inf`; only set once `rank` is set.
    pub crowding: Option<f64>,
}

impl Individual {
    pub fn new(id: u64, x: DecisionVector) -> Self {
        Self {
            id,
            x,
            f: None,
            rank: None,
            crowding: None,
        }
    }

    pub fn is_evaluated(&self) -> bool {
        self.f.is_some()
    }

    /// Objective vector. Panics on an unevaluated individual.
    pub fn objectives(&self) -> &ObjectiveVector {
        self.f
            .as_ref()
            .unwrap_or_else(|| panic!("individual {} has not been evaluated", self.id))
    }

    /// Rank or `usize::MAX` when unsorted, so unsorted members lose every comparison.
    pub fn rank_or_worst(&self) -> usize {
        self.rank.unwrap_or(usize::MAX)
    }

    /// Crowding or `-inf` when unset.
    pub fn crowding_or_worst(&self) -> f64 {
        self.crowding.unwrap_or(f64::NEG_INFINITY)
    }
}

/// An ordered multiset of individuals plus run bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub members: Vec<Individual>,
    pub generation: usize,
    /// First-time objective evaluations charged so far.
    pub evaluations_used: usize,
    next_id: u64,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Self {
        let next_id = members.iter().map(|m| m.id + 1).max().unwrap_or(0);
        Self {
            members,
            generation: 0,
            evaluations_used: 0,
            next_id,
        }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Allocates a fresh id and wraps `x` in an unevaluated individual.
    /// The individual is not added to `members`.
    pub fn spawn(&mut self, x: DecisionVector) -> Individual {
        let id = self.next_id;
        self.next_id += 1;
        Individual::new(id, x)
    }

    pub fn next_id(&self) -> u64 {
        self.next_id
    }

    /// Builds a population sharing this one's id counter and budget.
    pub(crate) fn with_members(&self, members: Vec<Individual>) -> Self {
        let next_id = members.iter().map(|m| m.id + 1).max().unwrap_or(0).max(self.next_id);
        Self {
            members,
            generation: self.generation,
            evaluations_used: self.evaluations_used,
            next_id,
        }
    }
}

/// Box bounds of a decision space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::Config(format!(
                "bounds need equal, non-zero lengths (got {} and {})",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] < upper[i])) {
            return Err(Error::Config(format!(
                "lower bound {} is not below upper bound {} for variable {}",
                lower[i], upper[i], i
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(d: usize, lower: f64, upper: f64) -> Self {
        Self::new(vec![lower; d], vec![upper; d]).expect("uniform bounds must satisfy lower < upper")
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn clip(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        for ((v, &lo), &hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(lo, hi);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }
}

pub type Evaluator = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type FrontSampler = Arc<dyn Fn(usize) -> Vec<ObjectiveVector> + Send + Sync>;

/// A box-constrained multi-objective minimization problem.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    /// Number of objectives.
    pub m: usize,
    bounds: Bounds,
    evaluator: Evaluator,
    pf_sampler: FrontSampler,
}

impl ProblemSpec {
    pub fn new(
        name: impl Into<String>,
        bounds: Bounds,
        m: usize,
        evaluator: Evaluator,
        pf_sampler: FrontSampler,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("a problem needs at least one objective".into()));
        }
        Ok(Self {
            name: name.into(),
            m,
            bounds,
            evaluator,
            pf_sampler,
        })
    }

    /// Decision-space dimension.
    pub fn d(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    /// Evaluates one decision vector. The caller checks finiteness.
    pub fn objectives_at(&self, x: &[f64]) -> ObjectiveVector {
        assert_eq!(x.len(), self.d(), "decision vector has the wrong dimension");
        let f = (self.evaluator)(x);
        assert_eq!(f.len(), self.m, "evaluator returned the wrong number of objectives");
        ObjectiveVector(f)
    }

    /// `n` points sampled from the analytic Pareto front.
    pub fn pf_samples(&self, n: usize) -> Vec<ObjectiveVector> {
        (self.pf_sampler)(n)
    }
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("d", &self.d())
            .field("m", &self.m)
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}
