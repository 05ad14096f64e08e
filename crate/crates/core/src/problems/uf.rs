//! The unconstrained UF1-UF10 problems of the CEC 2009 MOEA competition.
//!
//! Variables are 1-indexed in the index-set definitions below (`j` runs from
//! 2 or 3 up to `n`), matching the original problem statements.

use std::f64::consts::PI;

/// Accumulates a per-group term over the odd (`J1`) and even (`J2`) tail indices.
struct Groups2 {
    sum: [f64; 2],
    prod: [f64; 2],
    count: [usize; 2],
}

impl Groups2 {
    fn new() -> Self {
        Self {
            sum: [0.0; 2],
            prod: [1.0; 2],
            count: [0; 2],
        }
    }

    fn slot(j: usize) -> usize {
        // J1 = odd j, J2 = even j
        if j % 2 == 1 {
            0
        } else {
            1
        }
    }

    fn add(&mut self, j: usize, value: f64) {
        let k = Self::slot(j);
        self.sum[k] += value;
        self.count[k] += 1;
    }

    fn mul(&mut self, j: usize, value: f64) {
        self.prod[Self::slot(j)] *= value;
    }

    fn mean2(&self, k: usize) -> f64 {
        2.0 * self.sum[k] / self.count[k] as f64
    }
}

fn sine_offset(x: &[f64], j: usize) -> f64 {
    let n = x.len() as f64;
    x[j - 1] - (6.0 * PI * x[0] + j as f64 * PI / n).sin()
}

pub fn uf1(x: &[f64]) -> Vec<f64> {
    let mut g = Groups2::new();
    for j in 2..=x.len() {
        let y = sine_offset(x, j);
        g.add(j, y * y);
    }
    vec![x[0] + g.mean2(0), 1.0 - x[0].sqrt() + g.mean2(1)]
}

pub fn uf2(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let x1 = x[0];
    let mut g = Groups2::new();
    for j in 2..=x.len() {
        let jf = j as f64;
        let amp = 0.3 * x1 * x1 * (24.0 * PI * x1 + 4.0 * jf * PI / n).cos() + 0.6 * x1;
        let phase = 6.0 * PI * x1 + jf * PI / n;
        let y = if j % 2 == 1 {
            x[j - 1] - amp * phase.cos()
        } else {
            x[j - 1] - amp * phase.sin()
        };
        g.add(j, y * y);
    }
    vec![x1 + g.mean2(0), 1.0 - x1.sqrt() + g.mean2(1)]
}

/// `4 * sum(y^2) - 2 * prod(cos(20 y pi / sqrt(j))) + 2`, scaled by `2/|J|`.
fn rastrigin_like(g: &Groups2, k: usize) -> f64 {
    2.0 / g.count[k] as f64 * (4.0 * g.sum[k] - 2.0 * g.prod[k] + 2.0)
}

pub fn uf3(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let x1 = x[0];
    let mut g = Groups2::new();
    for j in 2..=x.len() {
        let jf = j as f64;
        let y = x[j - 1] - x1.powf(0.5 * (1.0 + 3.0 * (jf - 2.0) / (n - 2.0)));
        g.add(j, y * y);
        g.mul(j, (20.0 * y * PI / jf.sqrt()).cos());
    }
    vec![x1 + rastrigin_like(&g, 0), 1.0 - x1.sqrt() + rastrigin_like(&g, 1)]
}

pub fn uf4(x: &[f64]) -> Vec<f64> {
    let mut g = Groups2::new();
    for j in 2..=x.len() {
        let y = sine_offset(x, j).abs();
        g.add(j, y / (1.0 + (2.0 * y).exp()));
    }
    vec![x[0] + g.mean2(0), 1.0 - x[0] * x[0] + g.mean2(1)]
}

pub fn uf5(x: &[f64]) -> Vec<f64> {
    const N: f64 = 10.0;
    const EPS: f64 = 0.1;
    let mut g = Groups2::new();
    for j in 2..=x.len() {
        let y = sine_offset(x, j);
        g.add(j, 2.0 * y * y - (4.0 * PI * y).cos() + 1.0);
    }
    let h = (0.5 / N + EPS) * (2.0 * N * PI * x[0]).sin().abs();
    vec![x[0] + h + g.mean2(0), 1.0 - x[0] + h + g.mean2(1)]
}

pub fn uf6(x: &[f64]) -> Vec<f64> {
    const N: f64 = 2.0;
    const EPS: f64 = 0.1;
    let mut g = Groups2::new();
    for j in 2..=x.len() {
        let y = sine_offset(x, j);
        g.add(j, y * y);
        g.mul(j, (20.0 * y * PI / (j as f64).sqrt()).cos());
    }
    let h = (2.0 * (0.5 / N + EPS) * (2.0 * N * PI * x[0]).sin()).max(0.0);
    vec![x[0] + h + rastrigin_like(&g, 0), 1.0 - x[0] + h + rastrigin_like(&g, 1)]
}

pub fn uf7(x: &[f64]) -> Vec<f64> {
    let mut g = Groups2::new();
    for j in 2..=x.len() {
        let y = sine_offset(x, j);
        g.add(j, y * y);
    }
    let r = x[0].powf(0.2);
    vec![r + g.mean2(0), 1.0 - r + g.mean2(1)]
}

/// Sums over `J1 = {j : (j-1) % 3 == 0}`, `J2 = {j : (j-2) % 3 == 0}`,
/// `J3 = {j : j % 3 == 0}` for `j` in `3..=n`, each scaled by `2/|J|`.
fn three_group_means(x: &[f64], term: impl Fn(f64) -> f64) -> [f64; 3] {
    let n = x.len() as f64;
    let mut sum = [0.0; 3];
    let mut count = [0usize; 3];
    for j in 3..=x.len() {
        let y = x[j - 1] - 2.0 * x[1] * (2.0 * PI * x[0] + j as f64 * PI / n).sin();
        let k = match j % 3 {
            1 => 0,
            2 => 1,
            _ => 2,
        };
        sum[k] += term(y);
        count[k] += 1;
    }
    [0, 1, 2].map(|k| 2.0 * sum[k] / count[k] as f64)
}

fn sphere_base(x: &[f64]) -> [f64; 3] {
    let (a, b) = (0.5 * PI * x[0], 0.5 * PI * x[1]);
    [a.cos() * b.cos(), a.cos() * b.sin(), a.sin()]
}

pub fn uf8(x: &[f64]) -> Vec<f64> {
    let base = sphere_base(x);
    let t = three_group_means(x, |y| y * y);
    (0..3).map(|k| base[k] + t[k]).collect()
}

pub fn uf9(x: &[f64]) -> Vec<f64> {
    const EPS: f64 = 0.1;
    let t = three_group_means(x, |y| y * y);
    let bump = ((1.0 + EPS) * (1.0 - 4.0 * (2.0 * x[0] - 1.0).powi(2))).max(0.0);
    vec![
        0.5 * (bump + 2.0 * x[0]) * x[1] + t[0],
        0.5 * (bump - 2.0 * x[0] + 2.0) * x[1] + t[1],
        1.0 - x[1] + t[2],
    ]
}

pub fn uf10(x: &[f64]) -> Vec<f64> {
    let base = sphere_base(x);
    let t = three_group_means(x, |y| 4.0 * y * y - (8.0 * PI * y).cos() + 1.0);
    (0..3).map(|k| base[k] + t[k]).collect()
}
