//! Log-log slope fitting for decay-law verification.

/// `n` points spaced evenly in `log x` on `[a, b]`, endpoints exact.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && n >= 2);
    let (la, lb) = (a.ln(), b.ln());
    let mut v: Vec<f64> = (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect();
    v[0] = a;
    v[n - 1] = b;
    v
}

/// Least-squares slope of `log y` against `log x`.
///
/// Returns NaN when fewer than two positive pairs are available.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (lx, ly) in &pts {
        sxy += (lx - mx) * (ly - my);
        sxx += (lx - mx) * (lx - mx);
    }
    sxy / sxx
}

/// Multiplier that removes the logarithmic factor of the spherical laws so
/// that a pure power remains: `√(log x)` for `j = 2`, otherwise 1.
pub fn log_correction(x: f64, geom: crate::Geometry) -> f64 {
    match geom {
        crate::Geometry::Spherical => x.ln().sqrt(),
        _ => 1.0,
    }
}

/// `max/min - 1` over a positive sequence.
pub fn spread(ys: &[f64]) -> f64 {
    let max = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = ys.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min - 1.0
}
