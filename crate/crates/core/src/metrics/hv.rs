use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::ObjectiveVector;

/// Normalization frame for hypervolume: objectives are mapped through
/// `(f - ideal) / (nadir - ideal)` and measured against the reference point
/// `(ref_multiplier, ..., ref_multiplier)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricContext {
    pub ideal: Vec<f64>,
    pub nadir: Vec<f64>,
    pub ref_multiplier: f64,
}

impl MetricContext {
    pub const DEFAULT_REF_MULTIPLIER: f64 = 1.1;

    pub fn new(ideal: Vec<f64>, nadir: Vec<f64>, ref_multiplier: f64) -> Result<Self> {
        if ideal.len() != nadir.len() || ideal.is_empty() {
            return Err(Error::Config(
                "ideal and nadir must have the same non-zero length".into(),
            ));
        }
        if ideal.iter().zip(&nadir).any(|(i, n)| !(i < n)) {
            return Err(Error::Config(format!(
                "ideal {ideal:?} must be strictly below nadir {nadir:?}"
            )));
        }
        if !(ref_multiplier > 0.0) {
            return Err(Error::Config("reference multiplier must be positive".into()));
        }
        Ok(Self {
            ideal,
            nadir,
            ref_multiplier,
        })
    }

    /// Ideal and nadir points of a reference front sample.
    pub fn from_front(pf: &[ObjectiveVector]) -> Result<Self> {
        let m = pf
            .first()
            .ok_or_else(|| Error::Config("empty reference front".into()))?
            .len();
        let mut ideal = vec![f64::INFINITY; m];
        let mut nadir = vec![f64::NEG_INFINITY; m];
        for p in pf {
            for k in 0..m {
                ideal[k] = ideal[k].min(p[k]);
                nadir[k] = nadir[k].max(p[k]);
            }
        }
        Self::new(ideal, nadir, Self::DEFAULT_REF_MULTIPLIER)
    }

    pub fn m(&self) -> usize {
        self.ideal.len()
    }

    fn normalize(&self, p: &[f64]) -> Vec<f64> {
        assert_eq!(p.len(), self.m(), "point dimension does not match the metric context");
        p.iter()
            .zip(self.ideal.iter().zip(&self.nadir))
            .map(|(v, (lo, hi))| (v - lo) / (hi - lo))
            .collect()
    }

    /// Normalized points that strictly dominate the reference point.
    fn surviving(&self, points: &[impl AsRef<[f64]>]) -> Vec<Vec<f64>> {
        let r = self.ref_multiplier;
        points
            .iter()
            .map(|p| self.normalize(p.as_ref()))
            .filter(|q| q.iter().all(|&v| v < r))
            .collect()
    }

    fn box_volume(&self) -> f64 {
        self.ref_multiplier.powi(self.m() as i32)
    }
}

/// Normalized hypervolume in `[0, 1]`: the dominated volume below the
/// reference point divided by the volume of the reference box.
///
/// Exact sweeps for two and three objectives; panics for more.
pub fn hypervolume<P: AsRef<[f64]>>(points: &[P], ctx: &MetricContext) -> f64 {
    let pts = ctx.surviving(points);
    if pts.is_empty() {
        return 0.0;
    }
    let r = ctx.ref_multiplier;
    let volume = match ctx.m() {
        1 => r - pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        2 => {
            let mut xy: Vec<(f64, f64)> = pts.iter().map(|p| (p[0], p[1])).collect();
            area_2d(&mut xy, r, r)
        }
        3 => volume_3d(pts, r),
        m => panic!("exact hypervolume is only implemented for up to 3 objectives (got {m})"),
    };
    volume / ctx.box_volume()
}

/// Area dominated by `pts` inside `[., rx] x [., ry]`. Sorts `pts` in place.
fn area_2d(pts: &mut [(f64, f64)], rx: f64, ry: f64) -> f64 {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut area = 0.0;
    let mut best_y = ry;
    for &(x, y) in pts.iter() {
        if y < best_y {
            area += (rx - x) * (best_y - y);
            best_y = y;
        }
    }
    area
}

/// Sweep along the third objective, maintaining the non-dominated
/// staircase of the projections seen so far.
fn volume_3d(mut pts: Vec<Vec<f64>>, r: f64) -> f64 {
    pts.sort_by(|a, b| a[2].total_cmp(&b[2]));
    // staircase sorted by x ascending, y strictly descending
    let mut stair: Vec<(f64, f64)> = Vec::new();
    let mut area = 0.0;
    let mut volume = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let q = (p[0], p[1]);
        let pos = stair.partition_point(|s| s.0 <= q.0);
        let covered = pos > 0 && stair[pos - 1].1 <= q.1;
        if !covered {
            // drop staircase points that q dominates: x >= q.x and y >= q.y
            let mut end = pos;
            while end < stair.len() && stair[end].1 >= q.1 {
                end += 1;
            }
            let mut start = pos;
            while start > 0 && stair[start - 1].0 >= q.0 && stair[start - 1].1 >= q.1 {
                start -= 1;
            }
            stair.splice(start..end, std::iter::once(q));
            area = staircase_area(&stair, r, r);
        }
        let next_z = pts.get(i + 1).map_or(r, |n| n[2]);
        volume += area * (next_z - p[2]);
    }
    volume
}

fn staircase_area(stair: &[(f64, f64)], rx: f64, ry: f64) -> f64 {
    let mut area = 0.0;
    for (k, &(x, y)) in stair.iter().enumerate() {
        let next_x = stair.get(k + 1).map_or(rx, |n| n.0);
        area += (next_x - x) * (ry - y);
    }
    area
}

/// Monte-Carlo hypervolume estimate on the same normalization as
/// [`hypervolume`], for cross-checking the exact sweeps.
pub fn hypervolume_monte_carlo<P: AsRef<[f64]>>(
    points: &[P],
    ctx: &MetricContext,
    samples: usize,
    rng: &mut RngStream,
) -> f64 {
    let pts = ctx.surviving(points);
    if pts.is_empty() || samples == 0 {
        return 0.0;
    }
    let m = ctx.m();
    let r = ctx.ref_multiplier;
    let lo: Vec<f64> = (0..m)
        .map(|k| pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min))
        .collect();
    let sample_box: f64 = lo.iter().map(|l| r - l).product();
    let mut s = vec![0.0; m];
    let mut hits = 0usize;
    for _ in 0..samples {
        for k in 0..m {
            s[k] = lo[k] + (r - lo[k]) * rng.unit();
        }
        if pts.iter().any(|p| p.iter().zip(&s).all(|(a, b)| a <= b)) {
            hits += 1;
        }
    }
    sample_box * hits as f64 / samples as f64 / ctx.box_volume()
}
