//! Gauss-Legendre panels, trapezoid rules and semi-infinite integrals.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// 16-point Gauss-Legendre on `[a, b]`.
pub fn gl_panel(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = gl16();
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    half * x.iter().zip(w).map(|(&xi, &wi)| wi * f(mid + half * xi)).sum::<f64>()
}

/// Composite Gauss-Legendre with `panels` equal panels on `[a, b]`.
pub fn gl_composite(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels).map(|k| gl_panel(&mut f, a + k as f64 * h, a + (k + 1) as f64 * h)).sum()
}

/// `int_{a}^{inf} f` over panels of doubling width, stopping once a panel
/// contributes less than `1e-17` of the running total.
pub fn semi_infinite(mut f: impl FnMut(f64) -> f64, a: f64, first_width: f64) -> f64 {
    let mut total = 0.0;
    let mut lo = a;
    let mut width = first_width;
    for _ in 0..200 {
        let part = gl_panel(&mut f, lo, lo + width);
        total += part;
        lo += width;
        if part.abs() <= 1e-17 * total.abs() || (total == 0.0 && part == 0.0 && lo > a + 64.0 * first_width) {
            break;
        }
        width *= 2.0;
    }
    total
}

pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

/// Running trapezoid integral, starting at 0.
pub fn cumulative_trapezoid(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = 0.0;
    out.push(0.0);
    for (x, y) in xs.windows(2).zip(ys.windows(2)) {
        acc += 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
        out.push(acc);
    }
    out.truncate(xs.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m30: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((m30 - 2.0 / 31.0).abs() < 1e-13);
        let (x3, w3) = gauss_legendre(3);
        assert!((x3[2] - (0.6f64).sqrt()).abs() < 1e-15);
        assert!((w3[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn semi_infinite_matches_closed_forms() {
        let v = semi_infinite(|x| (-x).exp(), 0.0, 1.0);
        assert!((v - 1.0).abs() < 1e-13);
        let v = semi_infinite(|x| 1.0 / (x * x), 1.0, 1.0);
        assert!((v - 1.0).abs() < 1e-12);
        let v = semi_infinite(|x| (-0.01 * x).exp(), 0.0, 1.0);
        assert!((v - 100.0).abs() < 1e-9);
    }

    #[test]
    fn trapezoid_rules() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 1.0, 2.0];
        assert_eq!(trapezoid(&xs, &ys), 2.0);
        assert_eq!(cumulative_trapezoid(&xs, &ys), vec![0.0, 0.5, 2.0]);
    }
}
