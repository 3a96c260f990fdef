//! Smooth `exp(-1/x)` ramp from 0 to 1 and the Fourier constant of its derivative.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

fn unit_ramp(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let (a, b) = (bump(u), bump(1.0 - u));
        a / (a + b)
    }
}

fn unit_ramp_derivative(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let (a, b) = (bump(u), bump(1.0 - u));
    let (da, db) = (a / (u * u), b / ((1.0 - u) * (1.0 - u)));
    (da * b + a * db) / ((a + b) * (a + b))
}

/// 0 for `x <= lo`, 1 for `x >= hi`, `C^inf` and nondecreasing in between.
pub fn smooth_transition_profile(x: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("profile needs lo < hi, got {lo} >= {hi}")));
    }
    Ok(unit_ramp((x - lo) / (hi - lo)))
}

/// `int |F(S')(xi)| dxi` for the unit ramp `S`, with
/// `F(f)(xi) = int f(x) e^{2 pi i xi x} dx`. Computed once by dense quadrature.
pub fn mollifier_fourier_constant() -> f64 {
    static K1: OnceLock<f64> = OnceLock::new();
    *K1.get_or_init(|| {
        let (gx, gw) = gauss_legendre(16);
        let panels = 200;
        let mut nodes = Vec::with_capacity(panels * 16);
        let mut weights = Vec::with_capacity(panels * 16);
        for p in 0..panels {
            let (a, b) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
            for (x, w) in gx.iter().zip(&gw) {
                let u = (a + b) / 2.0 + (b - a) / 2.0 * x;
                nodes.push(u - 0.5);
                weights.push((b - a) / 2.0 * w * unit_ramp_derivative(u));
            }
        }
        // S' is symmetric about 1/2, so |F(S')(xi)| is the modulus of a cosine transform.
        let transform = |xi: f64| -> f64 {
            nodes.iter().zip(&weights).map(|(u, w)| w * (2.0 * PI * xi * u).cos()).sum::<f64>().abs()
        };
        let (xi_max, steps) = (100.0, 10_000);
        let h = xi_max / steps as f64;
        let mut acc = 0.5 * (transform(0.0) + transform(xi_max));
        for k in 1..steps {
            acc += transform(k as f64 * h);
        }
        2.0 * acc * h
    })
}

/// `||F(phi')||_1` for the ramp on `[lo, hi]`: the unit constant over `hi - lo`.
pub fn fourier_derivative_l1(lo: f64, hi: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("profile needs lo < hi, got {lo} >= {hi}")));
    }
    Ok(mollifier_fourier_constant() / (hi - lo))
}
