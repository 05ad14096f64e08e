//! Benchmark suite: ZDT1-4, ZDT6 and UF1-UF10, addressable by
//! case-insensitive name, each with an analytic Pareto front sampler.

pub mod uf;
pub mod zdt;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::types::{Bounds, ObjectiveVector, ProblemSpec};

pub const PROBLEM_NAMES: [&str; 15] = [
    "ZDT1", "ZDT2", "ZDT3", "ZDT4", "ZDT6", "UF1", "UF2", "UF3", "UF4", "UF5", "UF6", "UF7", "UF8", "UF9", "UF10",
];

/// Default reference-front size for IGD.
pub const DEFAULT_PF_SAMPLES: usize = 10_000;

type Objective = fn(&[f64]) -> Vec<f64>;

/// Static description of one suite member.
#[derive(Clone, Copy, Debug)]
pub struct SuiteEntry {
    pub name: &'static str,
    pub m: usize,
    pub default_d: usize,
    pub min_d: usize,
    objective: Objective,
    front: FrontShape,
}

/// Shape of the analytic Pareto front, used for sampling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FrontShape {
    /// `f2 = 1 - sqrt(f1)`, `f1` in `[0, 1]`.
    Convex,
    /// `f2 = 1 - f1^2` over `f1` in `[lo, 1]`.
    Concave { lo: f64 },
    /// `f2 = 1 - f1`, `f1` in `[0, 1]`.
    Linear,
    /// ZDT3's five disconnected pieces.
    Zdt3,
    /// UF5: `2k+1` isolated points `(i/2k, 1 - i/2k)`.
    LinearPoints { k: usize },
    /// UF6: `(0, 1)` plus `f2 = 1 - f1` on `[(2i-1)/2k, 2i/2k]`, `i = 1..k`.
    LinearSegments { k: usize },
    /// Positive octant of the unit sphere.
    Sphere,
    /// UF9: simplex `f1 + f2 + f3 = 1` restricted to
    /// `f1 <= (1-f3)/4` or `f1 >= 3(1-f3)/4`.
    SplitPlane,
}

fn entry(name: &str) -> Option<SuiteEntry> {
    use FrontShape::*;
    let e = |name, m, default_d, min_d, objective, front| SuiteEntry {
        name,
        m,
        default_d,
        min_d,
        objective,
        front,
    };
    let found = match name.to_ascii_uppercase().as_str() {
        "ZDT1" => e("ZDT1", 2, 30, 2, zdt::zdt1 as Objective, Convex),
        "ZDT2" => e("ZDT2", 2, 30, 2, zdt::zdt2, Concave { lo: 0.0 }),
        "ZDT3" => e("ZDT3", 2, 30, 2, zdt::zdt3, Zdt3),
        "ZDT4" => e("ZDT4", 2, 10, 2, zdt::zdt4, Convex),
        "ZDT6" => e("ZDT6", 2, 10, 2, zdt::zdt6, Concave { lo: zdt::ZDT6_F1_MIN }),
        "UF1" => e("UF1", 2, 30, 3, uf::uf1, Convex),
        "UF2" => e("UF2", 2, 30, 3, uf::uf2, Convex),
        "UF3" => e("UF3", 2, 30, 3, uf::uf3, Convex),
        "UF4" => e("UF4", 2, 30, 3, uf::uf4, Concave { lo: 0.0 }),
        "UF5" => e("UF5", 2, 30, 3, uf::uf5, LinearPoints { k: 10 }),
        "UF6" => e("UF6", 2, 30, 3, uf::uf6, LinearSegments { k: 2 }),
        "UF7" => e("UF7", 2, 30, 3, uf::uf7, Linear),
        "UF8" => e("UF8", 3, 30, 5, uf::uf8, Sphere),
        "UF9" => e("UF9", 3, 30, 5, uf::uf9, SplitPlane),
        "UF10" => e("UF10", 3, 30, 5, uf::uf10, Sphere),
        _ => return None,
    };
    Some(found)
}

/// Looks up a suite member by case-insensitive name.
pub fn suite_entry(name: &str) -> Result<SuiteEntry> {
    entry(name).ok_or_else(|| Error::UnknownProblem {
        name: name.to_string(),
        valid: PROBLEM_NAMES.join(", "),
    })
}

impl SuiteEntry {
    pub fn front_shape(&self) -> FrontShape {
        self.front
    }

    pub fn bounds(&self, d: usize) -> Bounds {
        let (lower, upper): (Vec<f64>, Vec<f64>) = (0..d)
            .map(|i| match self.name {
                "ZDT1" | "ZDT2" | "ZDT3" | "ZDT6" | "UF3" => (0.0, 1.0),
                "ZDT4" if i > 0 => (-5.0, 5.0),
                "UF1" | "UF2" | "UF5" | "UF6" | "UF7" if i > 0 => (-1.0, 1.0),
                "UF4" if i > 0 => (-2.0, 2.0),
                "UF8" | "UF9" | "UF10" if i > 1 => (-2.0, 2.0),
                _ => (0.0, 1.0),
            })
            .unzip();
        Bounds::new(lower, upper).expect("suite bounds are well-formed")
    }
}

/// Builds the problem `name` with `d` decision variables (suite default when `None`).
pub fn make_problem(name: &str, d: Option<usize>) -> Result<ProblemSpec> {
    let e = suite_entry(name)?;
    let d = d.unwrap_or(e.default_d);
    if d < e.min_d {
        return Err(Error::Config(format!(
            "{} needs at least {} decision variables (got {d})",
            e.name, e.min_d
        )));
    }
    let objective = e.objective;
    let front = e.front;
    ProblemSpec::new(
        e.name,
        e.bounds(d),
        e.m,
        Arc::new(move |x: &[f64]| objective(x)),
        Arc::new(move |n| sample_front(front, n)),
    )
}

/// `n` (approximately, for discrete and three-objective fronts) points of
/// the analytic Pareto front of `name`.
///
/// UF5's front has only 21 points, which are returned regardless of `n`.
/// Three-objective fronts use the simplex lattice whose size is closest to `n`.
pub fn true_pf_samples(name: &str, n: usize) -> Result<Vec<ObjectiveVector>> {
    Ok(sample_front(suite_entry(name)?.front, n))
}

fn sample_front(shape: FrontShape, n: usize) -> Vec<ObjectiveVector> {
    assert!(n >= 2, "need at least two front samples (got {n})");
    use FrontShape::*;
    match shape {
        Convex => curve(&[(0.0, 1.0)], n, |f1| 1.0 - f1.sqrt()),
        Concave { lo } => curve(&[(lo, 1.0)], n, |f1| 1.0 - f1 * f1),
        Linear => curve(&[(0.0, 1.0)], n, |f1| 1.0 - f1),
        Zdt3 => curve(&zdt::ZDT3_SEGMENTS, n, zdt::zdt3_front),
        LinearPoints { k } => (0..=2 * k)
            .map(|i| {
                let f1 = i as f64 / (2 * k) as f64;
                ObjectiveVector::new(vec![f1, 1.0 - f1])
            })
            .collect(),
        LinearSegments { k } => {
            let segments: Vec<(f64, f64)> = (1..=k)
                .map(|i| ((2 * i - 1) as f64 / (2 * k) as f64, (2 * i) as f64 / (2 * k) as f64))
                .collect();
            let mut pts = vec![ObjectiveVector::new(vec![0.0, 1.0])];
            pts.extend(curve(&segments, n - 1, |f1| 1.0 - f1));
            pts
        }
        Sphere => simplex_front(
            n,
            |_| true,
            |w| {
                let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                w.map(|v| v / norm)
            },
        ),
        SplitPlane => simplex_front(n, split_plane_keeps, |w| w),
    }
}

/// `n` points spaced uniformly in f1 across the given intervals.
fn curve(intervals: &[(f64, f64)], n: usize, f2: impl Fn(f64) -> f64) -> Vec<ObjectiveVector> {
    let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut t = if n == 1 { 0.0 } else { total * k as f64 / (n - 1) as f64 };
        let mut f1 = intervals[intervals.len() - 1].1;
        for &(a, b) in intervals {
            let len = b - a;
            if t <= len {
                f1 = a + t;
                break;
            }
            t -= len;
        }
        out.push(ObjectiveVector::new(vec![f1, f2(f1)]));
    }
    out
}

fn split_plane_keeps(w: &[f64; 3]) -> bool {
    const TOL: f64 = 1e-12;
    let rest = 1.0 - w[2];
    w[0] <= 0.25 * rest + TOL || w[0] >= 0.75 * rest - TOL
}

fn lattice(h: usize) -> impl Iterator<Item = [f64; 3]> {
    (0..=h).flat_map(move |i| {
        (0..=h - i).map(move |j| {
            let hf = h as f64;
            [i as f64 / hf, j as f64 / hf, (h - i - j) as f64 / hf]
        })
    })
}

/// Simplex lattice (filtered by `keep`) whose size is closest to `n`,
/// mapped onto the front by `map`.
fn simplex_front(
    n: usize,
    keep: impl Fn(&[f64; 3]) -> bool,
    map: impl Fn([f64; 3]) -> [f64; 3],
) -> Vec<ObjectiveVector> {
    let count = |h: usize| lattice(h).filter(|w| keep(w)).count();
    let mut best_h = 1;
    let mut best_gap = usize::MAX;
    let mut h = 1;
    loop {
        let c = count(h);
        let gap = c.abs_diff(n);
        if gap < best_gap {
            best_gap = gap;
            best_h = h;
        }
        if c >= n {
            break;
        }
        h += 1;
    }
    lattice(best_h)
        .filter(|w| keep(w))
        .map(|w| ObjectiveVector::new(map(w).to_vec()))
        .collect()
}
