//! Bilinear zeta and heat functionals, the multiplicative Cesàro mean, the
//! zeta and heat-kernel norms, and residue estimators.

use crate::curve::{FunctionalCurve, LimitEstimate, Method, Scale};
use crate::error::{Error, Result};
use crate::extrapolate::extrapolate_to_zero;
use crate::linalg::{eigh, DenseHermitian, EigenDecomposition, Matrix, C64, PSD_CLAMP};
use crate::trace_space::{mu, PowerSums, TraceWeights};

/// Accepted overshoot of `||G||` above 1.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Largest log-step used by the dense Cesàro quadrature.
pub const CESARO_LOG_STEP: f64 = 0.05;

/// `tau(a f(G) b)` reduced to the eigenbasis of `G`: `sum_k c_k f(g_k)` with
/// `c_k = (V* b W a V)_kk`.
#[derive(Clone, Debug)]
pub struct Pairing {
    g: Vec<f64>,
    c: Vec<C64>,
    rank: f64,
    norm: f64,
}

fn check_eigs(values: &[f64]) -> Result<f64> {
    let norm = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if let Some(&l) = values.first() {
        if l < -PSD_CLAMP * norm.max(1.0) {
            return Err(Error::NotPositive(format!("G has eigenvalue {l:e}")));
        }
    }
    Ok(norm)
}

impl Pairing {
    pub fn new(a: &Matrix, b: &Matrix, g: &DenseHermitian, weights: &TraceWeights) -> Result<Self> {
        Self::from_decomposition(a, b, &eigh(g)?, weights)
    }

    pub fn from_decomposition(a: &Matrix, b: &Matrix, g: &EigenDecomposition, weights: &TraceWeights) -> Result<Self> {
        let n = g.values.len();
        for m in [a, b] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::ShapeError(format!("{}x{} against G of size {n}", m.rows(), m.cols())));
            }
        }
        weights.check_dim(n)?;
        let norm = check_eigs(&g.values)?;
        let v = &g.vectors;
        let left = v.adjoint().matmul(b)?.mul_diag_right(weights.as_slice());
        let right = a.matmul(v)?;
        let c = (0..n).map(|k| (0..n).map(|i| left[(k, i)] * right[(i, k)]).sum()).collect();
        Ok(Self { g: g.values.clone(), c, rank: weights.as_slice().iter().sum(), norm })
    }

    /// The pair `(a*, a)`, whose coefficients are `sum_i w_i |(a* V)_ik|^2 >= 0`.
    pub fn quadratic(a: &Matrix, g: &DenseHermitian, weights: &TraceWeights) -> Result<Self> {
        Self::quadratic_from(a, &eigh(g)?, weights)
    }

    pub fn quadratic_from(a: &Matrix, g: &EigenDecomposition, weights: &TraceWeights) -> Result<Self> {
        let n = g.values.len();
        if a.rows() != n || a.cols() != n {
            return Err(Error::ShapeError(format!("{}x{} against G of size {n}", a.rows(), a.cols())));
        }
        weights.check_dim(n)?;
        let norm = check_eigs(&g.values)?;
        let x = a.adjoint().matmul(&g.vectors)?;
        let w = weights.as_slice();
        let c = (0..n)
            .map(|k| C64::new((0..n).map(|i| w[i] * x[(i, k)].norm_sqr()).sum(), 0.0))
            .collect();
        Ok(Self { g: g.values.clone(), c, rank: w.iter().sum(), norm })
    }

    /// Scalar model `tau(f(G))` with `G = diag(g)`, unit coefficients.
    pub fn from_spectrum(g: &[f64]) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::InvalidInput("empty spectrum".into()));
        }
        let mut values = g.to_vec();
        values.sort_by(f64::total_cmp);
        let norm = check_eigs(&values)?;
        Ok(Self { c: vec![C64::new(1.0, 0.0); g.len()], g: values, rank: g.len() as f64, norm })
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.c
    }

    pub fn g_norm(&self) -> f64 {
        self.norm
    }

    fn check_normalized(&self) -> Result<()> {
        if self.norm > 1.0 + NORMALIZATION_TOL {
            return Err(Error::NotNormalized(self.norm));
        }
        Ok(())
    }

    /// `tau(a G^s b)`.
    pub fn zeta(&self, s: f64) -> Result<C64> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidExponent(s));
        }
        self.check_normalized()?;
        Ok(self.g.iter().zip(&self.c).filter(|(g, _)| **g > 0.0).map(|(g, c)| c * g.powf(s)).sum())
    }

    /// `(1/lambda) tau(a exp(-G^{-1}/lambda) b)`.
    pub fn heat(&self, lambda: f64) -> Result<C64> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::DomainError(format!("lambda = {lambda}")));
        }
        if self.g.first().is_some_and(|&l| l <= PSD_CLAMP * self.norm) {
            return Err(Error::Singular("G has a zero eigenvalue".into()));
        }
        Ok(self.heat_terms(lambda) / lambda)
    }

    fn heat_terms(&self, lambda: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (g, c) in self.g.iter().zip(&self.c).rev() {
            let arg = 1.0 / (lambda * g);
            if arg > 745.0 {
                break;
            }
            acc += c * (-arg).exp();
        }
        acc
    }
}

impl PowerSums for Pairing {
    fn power_sum(&self, s: f64) -> f64 {
        self.g.iter().zip(&self.c).filter(|(g, _)| **g > 0.0).map(|(g, c)| c.re * g.powf(s)).sum()
    }

    fn heat_sum(&self, lambda: f64) -> f64 {
        self.heat_terms(lambda).re
    }

    fn effective_rank(&self) -> Option<f64> {
        Some(self.rank)
    }
}

/// `tau(a G^s b)`.
pub fn zeta_bilinear(a: &Matrix, b: &Matrix, g: &DenseHermitian, s: f64, weights: &TraceWeights) -> Result<C64> {
    Pairing::new(a, b, g, weights)?.zeta(s)
}

/// `(1/lambda) tau(a exp(-G^{-1}/lambda) b)`.
pub fn heat_bilinear(a: &Matrix, b: &Matrix, g: &DenseHermitian, lambda: f64, weights: &TraceWeights) -> Result<C64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::DomainError(format!("lambda = {lambda}")));
    }
    Pairing::new(a, b, g, weights)?.heat(lambda)
}

/// `f_T(lambda) = tau(exp(-1/(lambda |T|))) / lambda` on any spectral model.
pub fn heat_fn_profile<P: PowerSums + ?Sized>(profile: &P, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::DomainError(format!("lambda = {lambda}")));
    }
    Ok(profile.heat_sum(lambda) / lambda)
}

/// `f_T(lambda)` for a matrix; `T` must be injective.
pub fn heat_fn(t: &DenseHermitian, lambda: f64, weights: &TraceWeights) -> Result<f64> {
    let m = mu(t.matrix(), weights)?;
    let steps = m.steps();
    let top = steps.first().map_or(0.0, |s| s.value);
    if steps.last().is_none_or(|s| s.value <= PSD_CLAMP * top) {
        return Err(Error::Singular("T has a zero singular value".into()));
    }
    heat_fn_profile(&m, lambda)
}

/// `(Mf)(lambda) = (1/log lambda) int_1^lambda f(t) dt/t` by trapezoids in
/// `log t`, at every grid point above 1.
pub fn cesaro_mean(f: &FunctionalCurve) -> Result<FunctionalCurve> {
    let grid = f.grid();
    let vals = f.values();
    let first = *grid.first().ok_or_else(|| Error::InsufficientGrid("empty curve".into()))?;
    if first > 1.0 {
        return Err(Error::InsufficientGrid(format!("grid starts at {first} > 1")));
    }
    let start = grid.partition_point(|&t| t <= 1.0);
    if start == grid.len() {
        return Err(Error::InsufficientGrid("no grid point above 1".into()));
    }
    // value at t = 1, interpolated linearly in log t when 1 is not a node
    let j = start - 1;
    let f1 = if grid[j] == 1.0 {
        vals[j]
    } else {
        let (x0, x1) = (grid[j].ln(), grid[start].ln());
        vals[j] + (vals[start] - vals[j]) * (0.0 - x0) / (x1 - x0)
    };
    let mut out_grid = Vec::with_capacity(grid.len() - start);
    let mut out = Vec::with_capacity(grid.len() - start);
    let (mut x, mut y, mut acc) = (0.0, f1, 0.0);
    for k in start..grid.len() {
        let xk = grid[k].ln();
        acc += 0.5 * (xk - x) * (y + vals[k]);
        x = xk;
        y = vals[k];
        out_grid.push(grid[k]);
        out.push(acc / xk);
    }
    FunctionalCurve::new(out_grid, out, Scale::Logarithmic)
}

fn dense_cesaro(f: &mut impl FnMut(f64) -> f64, lambdas: &[f64], step: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(lambdas.len());
    let (mut x, mut y, mut acc) = (0.0, f(1.0), 0.0);
    for &lam in lambdas {
        let target = lam.ln();
        let pieces = ((target - x) / step).ceil().max(1.0) as usize;
        let h = (target - x) / pieces as f64;
        for i in 1..=pieces {
            let xi = if i == pieces { target } else { x + h * i as f64 };
            let yi = f(xi.exp());
            acc += 0.5 * h * (y + yi);
            y = yi;
        }
        x = target;
        out.push(acc / target);
    }
    out
}

/// `(Mf)` of a function at each `lambda > 1`, with a log-step of at most
/// `max_step`. Returns the curve and the grid-halving error estimate.
pub fn cesaro_function(
    mut f: impl FnMut(f64) -> f64,
    lambdas: &[f64],
    max_step: f64,
) -> Result<(FunctionalCurve, f64)> {
    if lambdas.is_empty() || lambdas[0] <= 1.0 {
        return Err(Error::InsufficientGrid("Cesàro targets must lie above 1".into()));
    }
    if !(max_step > 0.0) {
        return Err(Error::InvalidInput(format!("step {max_step}")));
    }
    let coarse = dense_cesaro(&mut f, lambdas, max_step);
    let fine = dense_cesaro(&mut f, lambdas, max_step / 2.0);
    let err = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok((FunctionalCurve::new(lambdas.to_vec(), fine, Scale::Logarithmic)?, err))
}

fn check_s_grid(s_grid: &[f64]) -> Result<()> {
    if s_grid.is_empty() {
        return Err(Error::InvalidInput("empty s grid".into()));
    }
    if let Some(s) = s_grid.iter().find(|s| !(**s > 1.0 && **s <= 2.0)) {
        return Err(Error::InvalidInput(format!("s = {s} outside (1, 2]")));
    }
    Ok(())
}

/// `sup_s sqrt(s - 1) zeta(s)^{1/2}` over a grid in `(1, 2]`, where `zeta`
/// is the model's power sum.
pub fn zeta_norm<P: PowerSums + ?Sized>(profile: &P, s_grid: &[f64]) -> Result<f64> {
    check_s_grid(s_grid)?;
    Ok(s_grid
        .iter()
        .map(|&s| ((s - 1.0) * profile.power_sum(s).max(0.0)).sqrt())
        .fold(0.0, f64::max))
}

/// Matrix form of [`zeta_norm`] for `zeta(a*, a; s)`.
pub fn zeta_norm_of(a: &Matrix, g: &DenseHermitian, weights: &TraceWeights, s_grid: &[f64]) -> Result<f64> {
    let p = Pairing::quadratic(a, g, weights)?;
    p.check_normalized()?;
    zeta_norm(&p, s_grid)
}

/// `sup_lambda (M g)(lambda)^{1/2}` with `g(lambda) = heat_sum(lambda)/lambda`.
/// The Cesàro integral is refined internally to [`CESARO_LOG_STEP`].
pub fn hk_norm<P: PowerSums + ?Sized>(profile: &P, lambda_grid: &[f64]) -> Result<f64> {
    if lambda_grid.is_empty() {
        return Err(Error::InvalidInput("empty lambda grid".into()));
    }
    let targets: Vec<f64> = lambda_grid.iter().copied().filter(|&l| l > 1.0).collect();
    if targets.is_empty() {
        return Err(Error::InvalidInput("lambda grid has no point above 1".into()));
    }
    let (m, _) = cesaro_function(|t| profile.heat_sum(t) / t, &targets, CESARO_LOG_STEP)?;
    Ok(m.max_value().max(0.0).sqrt())
}

pub fn hk_norm_of(a: &Matrix, g: &DenseHermitian, weights: &TraceWeights, lambda_grid: &[f64]) -> Result<f64> {
    hk_norm(&Pairing::quadratic(a, g, weights)?, lambda_grid)
}

/// Keeps `r <= log(rank)` in matrix mode; reports whether anything was cut.
fn admissible_scales<P: PowerSums + ?Sized>(profile: &P, r_grid: &[f64]) -> Result<(Vec<f64>, bool)> {
    if r_grid.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: r_grid.len() });
    }
    if r_grid.windows(2).any(|w| !(w[1] > w[0])) || !(r_grid[0] > 0.0) {
        return Err(Error::InvalidInput("r grid must be positive and increasing".into()));
    }
    let kept: Vec<f64> = match profile.effective_rank() {
        Some(rank) => {
            let cap = rank.max(1.0).ln();
            r_grid.iter().copied().filter(|&r| r <= cap).collect()
        }
        None => r_grid.to_vec(),
    };
    let limited = kept.len() < r_grid.len();
    if kept.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: kept.len() });
    }
    Ok((kept, limited))
}

/// Richardson limit of `(1/r) zeta(1 + 1/r)` in `1/r`.
pub fn residue_estimate<P: PowerSums + ?Sized>(profile: &P, r_grid: &[f64]) -> Result<LimitEstimate> {
    let (rs, limited) = admissible_scales(profile, r_grid)?;
    let ys: Vec<f64> = rs.iter().map(|&r| profile.power_sum(1.0 + 1.0 / r) / r).collect();
    let xs: Vec<f64> = rs.iter().map(|r| 1.0 / r).collect();
    let (value, uncertainty) = extrapolate_to_zero(&xs, &ys);
    let mut est = LimitEstimate::new(value, uncertainty, Method::Richardson, FunctionalCurve::new(rs, ys, Scale::Logarithmic)?)?;
    est.truncation_limited = limited;
    Ok(est)
}

/// Matrix form of [`residue_estimate`] for `zeta(a*, a; .)`.
pub fn residue_estimate_of(a: &Matrix, g: &DenseHermitian, weights: &TraceWeights, r_grid: &[f64]) -> Result<LimitEstimate> {
    let p = Pairing::quadratic(a, g, weights)?;
    p.check_normalized()?;
    residue_estimate(&p, r_grid)
}

/// Richardson limit of `(M g)(e^r)` in `1/r`; the quadrature error enters the
/// uncertainty.
pub fn heat_cesaro_estimate<P: PowerSums + ?Sized>(profile: &P, r_grid: &[f64]) -> Result<LimitEstimate> {
    let (rs, limited) = admissible_scales(profile, r_grid)?;
    let lambdas: Vec<f64> = rs.iter().map(|r| r.exp()).collect();
    let (m, quad_err) = cesaro_function(|t| profile.heat_sum(t) / t, &lambdas, CESARO_LOG_STEP)?;
    let xs: Vec<f64> = rs.iter().map(|r| 1.0 / r).collect();
    let (value, spread) = extrapolate_to_zero(&xs, m.values());
    let samples = FunctionalCurve::new(rs, m.values().to_vec(), Scale::Logarithmic)?;
    let mut est = LimitEstimate::new(value, spread + quad_err, Method::Cesaro, samples)?;
    est.truncation_limited = limited;
    Ok(est)
}

/// Residue estimate and Cesàro-heat estimate on matched scales `r_k` and
/// `lambda_k = e^{r_k}`.
pub fn karamata_compare<P: PowerSums + ?Sized>(profile: &P, r_grid: &[f64]) -> Result<(LimitEstimate, LimitEstimate)> {
    Ok((residue_estimate(profile, r_grid)?, heat_cesaro_estimate(profile, r_grid)?))
}

pub fn karamata_compare_of(
    a: &Matrix,
    g: &DenseHermitian,
    weights: &TraceWeights,
    r_grid: &[f64],
) -> Result<(LimitEstimate, LimitEstimate)> {
    let p = Pairing::quadratic(a, g, weights)?;
    p.check_normalized()?;
    karamata_compare(&p, r_grid)
}

/// `s -> zeta(s)` sampled on a grid.
pub fn zeta_curve<P: PowerSums + ?Sized>(profile: &P, s_grid: &[f64]) -> Result<FunctionalCurve> {
    FunctionalCurve::sample(s_grid.to_vec(), Scale::Linear, |s| profile.power_sum(s))
}

/// `lambda -> g(lambda)` sampled on a grid.
pub fn heat_curve<P: PowerSums + ?Sized>(profile: &P, lambda_grid: &[f64]) -> Result<FunctionalCurve> {
    FunctionalCurve::sample(lambda_grid.to_vec(), Scale::Logarithmic, |l| profile.heat_sum(l) / l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::geometric_grid;
    use crate::factory::{ModelKind, ModelSequence};
    use crate::linalg::fractional_power;
    use crate::random::{random_matrix, random_psd, seeded};

    fn eps_grid() -> Vec<f64> {
        geometric_grid(1e-3, 1.0, 64).unwrap().into_iter().map(|e| 1.0 + e).collect()
    }

    #[test]
    fn diagonal_zeta_and_heat() {
        let g = [0.2, 0.5, 0.9];
        let d = DenseHermitian::from_diag(&g).unwrap();
        let i = Matrix::identity(3);
        let w = TraceWeights::unit(3);
        let z = zeta_bilinear(&i, &i, &d, 1.7, &w).unwrap();
        let expect: f64 = g.iter().map(|x| x.powf(1.7)).sum();
        assert!((z.re - expect).abs() < 1e-14 && z.im.abs() < 1e-15);
        assert_eq!(zeta_bilinear(&Matrix::zeros(3, 3), &i, &d, 1.5, &w).unwrap(), C64::new(0.0, 0.0));
        let h = heat_bilinear(&Matrix::identity(4), &Matrix::identity(4), &DenseHermitian::identity(4), 2.0, &TraceWeights::unit(4)).unwrap();
        assert!((h.re - 2.0 * (-0.5_f64).exp()).abs() < 1e-14);
        let tiny = heat_bilinear(&Matrix::identity(4), &Matrix::identity(4), &DenseHermitian::identity(4), 1e-3, &TraceWeights::unit(4)).unwrap();
        assert_eq!(tiny.re, 0.0);
    }

    #[test]
    fn errors() {
        let i = Matrix::identity(2);
        let w = TraceWeights::unit(2);
        let big = DenseHermitian::from_diag(&[2.0, 0.5]).unwrap();
        assert!(matches!(zeta_bilinear(&i, &i, &big, 1.5, &w), Err(Error::NotNormalized(_))));
        let neg = DenseHermitian::from_diag(&[-0.5, 0.5]).unwrap();
        assert!(matches!(zeta_bilinear(&i, &i, &neg, 1.5, &w), Err(Error::NotPositive(_))));
        let sing = DenseHermitian::from_diag(&[0.0, 0.5]).unwrap();
        assert!(matches!(heat_bilinear(&i, &i, &sing, 1.0, &w), Err(Error::Singular(_))));
        assert!(matches!(heat_bilinear(&i, &i, &DenseHermitian::identity(2), 0.0, &w), Err(Error::DomainError(_))));
        assert!(matches!(heat_fn(&sing, 1.0, &w), Err(Error::Singular(_))));
        let m = ModelSequence::new(ModelKind::Harmonic { c: 1.0 }, 100).unwrap();
        assert!(matches!(residue_estimate(&m, &[1.0, 2.0]), Err(Error::InsufficientData { .. })));
        assert!(zeta_norm(&m, &[]).is_err());
        assert!(zeta_norm(&m, &[1.0]).is_err());
        assert!(hk_norm(&m, &[]).is_err());
    }

    #[test]
    fn cyclicity() {
        let mut rng = seeded(11);
        let n = 12;
        let b = random_matrix(n, n, false, &mut rng);
        let a = b.adjoint();
        let g = random_psd(n, false, &mut rng);
        let w = TraceWeights::unit(n);
        let z = zeta_bilinear(&a, &b, &g, 1.0, &w).unwrap();
        let half = fractional_power(&g, 0.5).unwrap();
        let other = w.trace(&(&(half.matrix() * &(&b * &a)) * half.matrix())).unwrap();
        assert!((z - other).norm() < 1e-9 * other.norm());
    }

    #[test]
    fn weighted_pairing_matches_direct_trace() {
        let mut rng = seeded(12);
        let n = 9;
        let a = random_matrix(n, n, false, &mut rng);
        let b = random_matrix(n, n, false, &mut rng);
        let g = random_psd(n, false, &mut rng);
        let w = TraceWeights::new((0..n).map(|i| 1.0 + 0.3 * i as f64).collect()).unwrap();
        let z = zeta_bilinear(&a, &b, &g, 1.3, &w).unwrap();
        let gs = fractional_power(&g, 1.3).unwrap();
        let direct = w.trace(&(&(&a * gs.matrix()) * &b)).unwrap();
        assert!((z - direct).norm() < 1e-10 * direct.norm().max(1.0));
        let q = Pairing::quadratic(&a, &g, &w).unwrap().zeta(1.3).unwrap();
        let qd = zeta_bilinear(&a.adjoint(), &a, &g, 1.3, &w).unwrap();
        assert!((q - qd).norm() < 1e-10 * qd.norm());
    }

    #[test]
    fn single_state_heat() {
        let t = DenseHermitian::from_diag(&[1.0]).unwrap();
        let w = TraceWeights::unit(1);
        let grid = geometric_grid(0.1, 10.0, 201).unwrap();
        let (arg, best) = grid
            .iter()
            .map(|&l| (l, heat_fn(&t, l, &w).unwrap()))
            .fold((0.0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        assert!((arg - 1.0).abs() < 0.03);
        assert!((best - (-1.0_f64).exp()).abs() < 1e-3);
    }

    #[test]
    fn cesaro_examples() {
        let grid = geometric_grid(1.0, 1e4, 2001).unwrap();
        let c = FunctionalCurve::sample(grid.clone(), Scale::Logarithmic, |_| 3.0).unwrap();
        assert!(cesaro_mean(&c).unwrap().values().iter().all(|v| (v - 3.0).abs() < 1e-12));
        let l = FunctionalCurve::sample(grid.clone(), Scale::Logarithmic, f64::ln).unwrap();
        for (lam, m) in cesaro_mean(&l).unwrap().points() {
            assert!((m - lam.ln() / 2.0).abs() < 1e-12);
        }
        let lam = 1e4_f64;
        let ind = FunctionalCurve::sample(grid, Scale::Logarithmic, |t| if t <= lam.sqrt() { 1.0 } else { 0.0 }).unwrap();
        let m = cesaro_mean(&ind).unwrap();
        assert!((m.values().last().unwrap() - 0.5).abs() < 2e-3);
        let late = FunctionalCurve::sample(vec![2.0, 3.0], Scale::Linear, |t| t).unwrap();
        assert!(matches!(cesaro_mean(&late), Err(Error::InsufficientGrid(_))));
        let early = FunctionalCurve::sample(vec![0.5, 2.0], Scale::Linear, |t| t).unwrap();
        let m = cesaro_mean(&early).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn dense_cesaro_of_log() {
        let (m, err) = cesaro_function(f64::ln, &[10.0, 1e3], 0.05).unwrap();
        for (lam, v) in m.points() {
            assert!((v - lam.ln() / 2.0).abs() < 1e-12);
        }
        assert!(err < 1e-12);
    }

    #[test]
    fn harmonic_zeta_norm() {
        let m = ModelSequence::new(ModelKind::Harmonic { c: 1.0 }, 1000).unwrap();
        let z = zeta_norm(&m, &eps_grid()).unwrap();
        assert!((z - (std::f64::consts::PI.powi(2) / 6.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn one_state_hk_norm_against_quadrature() {
        let p = Pairing::from_spectrum(&[0.5]).unwrap();
        let grid = geometric_grid(1.0, 1e3, 64).unwrap();
        let got = hk_norm(&p, &grid).unwrap();
        // closed form: int_1^L e^{-2/t} dt/t^2 = (e^{-2/L} - e^{-2}) / 2
        let best = grid[1..]
            .iter()
            .map(|&l| ((-2.0 / l).exp() - (-2.0_f64).exp()) / 2.0 / l.ln())
            .fold(0.0, f64::max);
        assert!((got - best.sqrt()).abs() < 1e-5, "{got} vs {}", best.sqrt());
    }

    #[test]
    fn harmonic_residues() {
        let rs = [4.0, 8.0, 16.0, 32.0, 64.0];
        for (c, target, tol) in [(1.0, 1.0, 0.01), (2.0, 2.0, 0.02)] {
            let m = ModelSequence::new(ModelKind::Harmonic { c }, 1000).unwrap();
            let (res, heat) = karamata_compare(&m, &rs).unwrap();
            assert!(res.contains(target, tol), "{res:?}");
            assert!(heat.contains(target, 1.5 * tol), "{heat:?}");
            assert!(!res.truncation_limited);
        }
        let sq = ModelSequence::new(ModelKind::Square, 1000).unwrap();
        let (res, heat) = karamata_compare(&sq, &rs).unwrap();
        assert!(res.value.abs() < 2e-3 && res.value.abs() <= res.uncertainty, "{res:?}");
        assert!(heat.value.abs() < 0.01, "{heat:?}");
    }

    #[test]
    fn matrix_mode_is_capped() {
        let g = DenseHermitian::from_diag(&(1..=50).map(|k| 1.0 / k as f64).collect::<Vec<_>>()).unwrap();
        let est = residue_estimate_of(&Matrix::identity(50), &g, &TraceWeights::unit(50), &[1.0, 2.0, 3.0, 8.0, 16.0]).unwrap();
        assert!(est.truncation_limited);
        assert_eq!(est.samples.len(), 3);
        let zero = karamata_compare_of(&Matrix::zeros(50, 50), &g, &TraceWeights::unit(50), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((zero.0.value, zero.1.value), (0.0, 0.0));
    }

    #[test]
    fn tre_bound_on_diagonal_g() {
        let mut rng = seeded(21);
        let n = 10;
        let a = random_matrix(n, n, false, &mut rng);
        let g = DenseHermitian::from_diag(&(1..=n).map(|k| 1.0 / k as f64).collect::<Vec<_>>()).unwrap();
        let w = TraceWeights::unit(n);
        let (s, lambda) = (1.5, 2.0);
        let lhs = lambda * heat_bilinear(&a.adjoint(), &a, &g, lambda, &w).unwrap().re;
        let rhs = (s * lambda).powf(s) * (-s).exp() * zeta_bilinear(&a.adjoint(), &a, &g, s, &w).unwrap().re;
        assert!(lhs <= rhs);
    }
}
