//! First-order Richardson extrapolation to `x = 0` on sampled sequences.

/// Linear extrapolation to `x = 0` through each consecutive pair of samples.
pub fn pairwise_richardson(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len());
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| {
            let dx = x[0] - x[1];
            if dx == 0.0 {
                y[1]
            } else {
                y[1] - x[1] * (y[0] - y[1]) / dx
            }
        })
        .collect()
}

/// Value of the last iterate and the spread of the last three as uncertainty.
/// With a single iterate the spread is taken against the last raw sample.
pub fn settle(iterates: &[f64], last_sample: f64) -> (f64, f64) {
    match iterates.len() {
        0 => (last_sample, 0.0),
        1 => (iterates[0], (iterates[0] - last_sample).abs()),
        k => {
            let tail = &iterates[k.saturating_sub(3)..];
            let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
            (iterates[k - 1], hi - lo)
        }
    }
}

/// Samples ordered so that `xs` decreases toward 0.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let it = pairwise_richardson(xs, ys);
    settle(&it, *ys.last().unwrap_or(&0.0))
}
