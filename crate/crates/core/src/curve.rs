//! Sampled scalar curves, grids and limit estimates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Logarithmic,
}

/// Scalar function sampled on a strictly increasing positive grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    scale: Scale,
}

impl FunctionalCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, scale: Scale) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::ShapeError(format!("{} grid points, {} values", grid.len(), values.len())));
        }
        check_grid(&grid)?;
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite curve value {v}")));
        }
        Ok(Self { grid, values, scale })
    }

    pub fn sample(grid: Vec<f64>, scale: Scale, f: impl FnMut(f64) -> f64) -> Result<Self> {
        let values = grid.iter().copied().map(f).collect();
        Self::new(grid, values, scale)
    }

    pub fn try_sample(grid: Vec<f64>, scale: Scale, mut f: impl FnMut(f64) -> Result<f64>) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values, scale)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::InvalidInput("grid points must be finite and positive".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `count` points from `lo` to `hi` inclusive, equally spaced in `log x`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) || count < 2 {
        return Err(Error::InvalidInput(format!("bad geometric grid {lo}:{hi}:{count}")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect();
    g[0] = lo;
    g[count - 1] = hi;
    Ok(g)
}

/// `count` points from `lo` to `hi` inclusive, equally spaced.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(hi > lo && lo.is_finite() && hi.is_finite()) || count < 2 {
        return Err(Error::InvalidInput(format!("bad linear grid {lo}:{hi}:{count}")));
    }
    Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    CutoffRatio,
    Cesaro,
    Richardson,
}

/// Constructive stand-in for a generalized limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub uncertainty: f64,
    pub method: Method,
    pub samples: FunctionalCurve,
    /// Set when a matrix-mode estimate had to drop scales below `1/log(rank)`.
    pub truncation_limited: bool,
}

impl LimitEstimate {
    pub fn new(value: f64, uncertainty: f64, method: Method, samples: FunctionalCurve) -> Result<Self> {
        if !value.is_finite() || !(uncertainty >= 0.0) || !uncertainty.is_finite() {
            return Err(Error::InvalidInput(format!("bad estimate {value} +/- {uncertainty}")));
        }
        Ok(Self { value, uncertainty, method, samples, truncation_limited: false })
    }

    pub fn contains(&self, target: f64, tol: f64) -> bool {
        (self.value - target).abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = geometric_grid(1.0, 1000.0, 4).unwrap();
        for (a, b) in g.iter().zip([1.0, 10.0, 100.0, 1000.0]) {
            assert!((a / b - 1.0).abs() < 1e-14);
        }
        assert_eq!(linear_grid(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(geometric_grid(0.0, 1.0, 3).is_err());
        assert!(linear_grid(1.0, 1.0, 3).is_err());
    }

    #[test]
    fn curve_validation() {
        assert!(FunctionalCurve::new(vec![1.0, 1.0], vec![0.0, 0.0], Scale::Linear).is_err());
        assert!(FunctionalCurve::new(vec![1.0, 2.0], vec![0.0, f64::NAN], Scale::Linear).is_err());
        assert!(FunctionalCurve::new(vec![-1.0, 2.0], vec![0.0, 0.0], Scale::Linear).is_err());
        assert!(FunctionalCurve::new(vec![1.0], vec![0.0, 0.0], Scale::Linear).is_err());
        let c = FunctionalCurve::sample(vec![1.0, 2.0], Scale::Logarithmic, |x| x * x).unwrap();
        assert_eq!(c.values(), &[1.0, 4.0]);
    }
}
