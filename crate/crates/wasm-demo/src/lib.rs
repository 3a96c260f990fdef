//! Curve operations on model sequences, exported to JavaScript.
//!
//! Each export returns a flat array `[x_0..x_{k-1}, y_0..y_{k-1}]` (the
//! Cesàro curve appends a third block for the mean).

use ncint::curve::geometric_grid;
use ncint::factory::{model_diagonal, ModelSequence};
use ncint::trace_space::{sigma_many, PowerSums};
use ncint::zeta_heat::{cesaro_function, heat_fn_profile};
use ncint::{Error, Result};
use wasm_bindgen::prelude::*;

/// Upper bound on grid points per curve.
pub const MAX_POINTS: usize = 2000;

fn model(kind: &str, param: f64, n: usize) -> Result<ModelSequence> {
    let params = if param.is_finite() { vec![param] } else { Vec::new() };
    model_diagonal(kind, n, &params)
}

fn check_count(count: usize) -> Result<()> {
    if !(2..=MAX_POINTS).contains(&count) {
        return Err(Error::InvalidInput(format!("point count {count} outside 2..={MAX_POINTS}")));
    }
    Ok(())
}

/// `(s - 1) zeta(s)` for `s - 1` on a log grid in `[eps_lo, eps_hi]`.
pub fn residue_curve(kind: &str, param: f64, n: usize, eps_lo: f64, eps_hi: f64, count: usize) -> Result<Vec<f64>> {
    check_count(count)?;
    let m = model(kind, param, n)?;
    let eps = geometric_grid(eps_lo, eps_hi, count)?;
    let mut out: Vec<f64> = eps.clone();
    out.extend(eps.iter().map(|e| e * m.power_sum(1.0 + e)));
    Ok(out)
}

/// Heat function `f(lambda)` and its Cesàro mean on a log grid above 1.
pub fn heat_cesaro_curve(kind: &str, param: f64, n: usize, lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    check_count(count)?;
    let m = model(kind, param, n)?;
    let grid = geometric_grid(lo, hi, count)?;
    let f: Vec<f64> = grid.iter().map(|&l| heat_fn_profile(&m, l)).collect::<Result<_>>()?;
    let (mean, _) = cesaro_function(|l| heat_fn_profile(&m, l).unwrap_or(f64::NAN), &grid, 0.02)?;
    let mut out = grid;
    out.extend(f);
    out.extend_from_slice(mean.values());
    Ok(out)
}

/// `sigma_t / log(1 + t)` on a log grid in `[lo, hi]`.
pub fn sigma_ratio_curve(kind: &str, param: f64, n: usize, lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    check_count(count)?;
    let m = model(kind, param, n)?;
    let grid = geometric_grid(lo, hi, count)?;
    let sig = sigma_many(&m, &grid)?;
    let mut out = grid.clone();
    out.extend(grid.iter().zip(&sig).map(|(t, s)| s / t.ln_1p()));
    Ok(out)
}

fn to_js(r: Result<Vec<f64>>) -> std::result::Result<Vec<f64>, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = residueCurve)]
pub fn residue_curve_js(
    kind: &str,
    param: f64,
    n: usize,
    eps_lo: f64,
    eps_hi: f64,
    count: usize,
) -> std::result::Result<Vec<f64>, JsValue> {
    to_js(residue_curve(kind, param, n, eps_lo, eps_hi, count))
}

#[wasm_bindgen(js_name = heatCesaroCurve)]
pub fn heat_cesaro_curve_js(
    kind: &str,
    param: f64,
    n: usize,
    lo: f64,
    hi: f64,
    count: usize,
) -> std::result::Result<Vec<f64>, JsValue> {
    to_js(heat_cesaro_curve(kind, param, n, lo, hi, count))
}

#[wasm_bindgen(js_name = sigmaRatioCurve)]
pub fn sigma_ratio_curve_js(
    kind: &str,
    param: f64,
    n: usize,
    lo: f64,
    hi: f64,
    count: usize,
) -> std::result::Result<Vec<f64>, JsValue> {
    to_js(sigma_ratio_curve(kind, param, n, lo, hi, count))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_residue_tends_to_c() {
        let v = residue_curve("harmonic", 2.0, 1_000_000, 1e-4, 1e-1, 8).unwrap();
        let ys = &v[8..];
        // (s - 1) c zeta(s) = c (1 + (s - 1) gamma + ...)
        assert!((ys[0] - 2.0).abs() < 2.0 * 1e-3, "{}", ys[0]);
        assert!(ys.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sigma_ratio_matches_partial_harmonic_sums() {
        let v = sigma_ratio_curve("harmonic", f64::NAN, 1000, 1.0, 1000.0, 4).unwrap();
        let (xs, ys) = v.split_at(4);
        for (x, y) in xs.iter().zip(ys) {
            let k = x.round() as usize;
            let h: f64 = (1..=k).map(|j| 1.0 / j as f64).sum();
            assert!((y - h / x.ln_1p()).abs() < 1e-12);
        }
    }

    #[test]
    fn heat_cesaro_blocks_have_grid_length() {
        let v = heat_cesaro_curve("log-harmonic", f64::NAN, 100_000, 2.0, 1e4, 16).unwrap();
        assert_eq!(v.len(), 48);
        assert!(v[16..].iter().all(|y| y.is_finite() && *y >= 0.0));
        assert!(heat_cesaro_curve("nope", 1.0, 10, 2.0, 10.0, 4).is_err());
        assert!(sigma_ratio_curve("harmonic", 1.0, 10, 1.0, 10.0, 1).is_err());
    }
}
