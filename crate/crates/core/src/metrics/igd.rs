/// Inverted generational distance: mean over `pf` of the Euclidean distance
/// to the nearest member of `points`, in raw objective space.
///
/// Returns `+inf` when `points` is empty. Panics on an empty `pf`.
pub fn igd<P: AsRef<[f64]>, Q: AsRef<[f64]>>(points: &[P], pf: &[Q]) -> f64 {
    assert!(!pf.is_empty(), "IGD needs a non-empty reference front");
    if points.is_empty() {
        return f64::INFINITY;
    }
    let total: f64 = pf
        .iter()
        .map(|r| {
            let r = r.as_ref();
            points
                .iter()
                .map(|p| squared_distance(p.as_ref(), r))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    total / pf.len() as f64
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
