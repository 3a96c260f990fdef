//! Operator and norm inequalities instantiated on random and lattice
//! instances.

use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_positive, instance_rng, psd_slack, scalar_slack, CheckReport, InstanceRecord, MarginKind, PSD_TOL};
use crate::curve::geometric_grid;
use crate::error::{Error, Result};
use crate::factory::{fourier_derivative_l1, g_lattice_decomposition, multiplication_operator, GVariant, LatticeSpec};
use crate::linalg::{
    commutator, eigh, fractional_power, op_norm, schatten_from_singular, singular_values, DenseHermitian,
    EigenDecomposition, Matrix, Schatten,
};
use crate::random::{random_hermitian, random_matrix, random_psd, Rng64};
use crate::trace_space::{marcinkiewicz_norm, mpinfty_norm_profile, mu, sigma_many, PowerSums, TraceWeights};
use crate::zeta_heat::{cesaro_function, Pairing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubCheck {
    /// `a* e^{-t/G} a <= (s/t)^s e^{-s} a* G^s a`.
    HeatPowerDomination,
    /// `(a* G a)^s <= M^{2(s-1)} a* G^s a` for `||a|| <= M`, `1 <= s < 2`.
    PowerContraction,
    /// `||[A^al, B^be]||_{p/(al be)} <= ||A||^{al(1-be)} ||B||^{be(1-al)} ||[A,B]||_p^{al be}`.
    FractionalCommutator,
    /// `||[A, phi(B)]||_p <= ||F(phi')||_1 ||[A, B]||_p`.
    SmoothCommutator,
    /// `sigma_t(a* G a) <= ||a* e^{-1/G} a||_1 / e + ||a||^2 + ||Mg||_inf log(1 + t)`.
    PartialTrace,
    /// `||a^de G^eps||_{1/eps, inf} <= ||a||^{de - 2 eps} ||a G a||_{1, inf}^eps`.
    InterpolatedPower,
    /// `mu_s(a* G^eps a) <= (||a||^2 / eps + ||g||_inf / (1 - eps)) s^{-eps} / Gamma(eps)`.
    SingularDecay,
}

impl SubCheck {
    pub const ALL: [SubCheck; 7] = [
        SubCheck::HeatPowerDomination,
        SubCheck::PowerContraction,
        SubCheck::FractionalCommutator,
        SubCheck::SmoothCommutator,
        SubCheck::PartialTrace,
        SubCheck::InterpolatedPower,
        SubCheck::SingularDecay,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            SubCheck::HeatPowerDomination => "heat-power-domination",
            SubCheck::PowerContraction => "power-contraction",
            SubCheck::FractionalCommutator => "fractional-commutator",
            SubCheck::SmoothCommutator => "smooth-commutator",
            SubCheck::PartialTrace => "partial-trace",
            SubCheck::InterpolatedPower => "interpolated-power",
            SubCheck::SingularDecay => "singular-decay",
        }
    }
}

impl FromStr for SubCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SubCheck::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown sub-check {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InequalityConfig {
    pub checks: Vec<SubCheck>,
    pub trials: usize,
    pub dims: Vec<usize>,
    /// Relative PSD / scalar slack accepted as passing (as a negative bound).
    pub tolerance: f64,
    pub lattice_sites: usize,
    pub lattice_length: f64,
    pub seed: u64,
}

impl Default for InequalityConfig {
    fn default() -> Self {
        Self {
            checks: SubCheck::ALL.to_vec(),
            trials: 100,
            dims: vec![4, 8, 12, 16],
            tolerance: PSD_TOL,
            lattice_sites: 256,
            lattice_length: 32.0,
            seed: 7,
        }
    }
}

impl InequalityConfig {
    pub fn validate(&self) -> Result<()> {
        check_positive("tolerance", self.tolerance)?;
        check_positive("lattice_length", self.lattice_length)?;
        if self.dims.is_empty() || self.dims.iter().any(|&n| n < 2 || n > 64) {
            return Err(Error::InvalidInput("dims must lie in 2..=64".into()));
        }
        if self.checks.is_empty() {
            return Err(Error::InvalidInput("no sub-checks selected".into()));
        }
        Ok(())
    }
}

/// Exponent pairs and Schatten indices cycled by the fractional-commutator check.
pub const FRACTIONAL_EXPONENTS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
pub const FRACTIONAL_SCHATTEN: [f64; 3] = [1.0, 2.0, 4.0];

/// `a* f(G) a` from the decomposition of `G`.
fn sandwich(a: &Matrix, g: &EigenDecomposition, f: impl Fn(f64) -> f64) -> Result<Matrix> {
    let y = g.vectors.adjoint().matmul(a)?;
    let d: Vec<f64> = g.values.iter().map(|&x| f(x)).collect();
    y.adjoint().mul_diag_right(&d).matmul(&y)
}

fn normalized_psd(n: usize, real: bool, rng: &mut Rng64) -> Result<DenseHermitian> {
    let g = random_psd(n, real, rng);
    let top = eigh(&g)?.norm();
    Ok(g.scale(1.0 / top))
}

fn pass(margin: f64, tol: f64) -> bool {
    margin >= -tol
}

fn heat_power_domination(n: usize, rng: &mut Rng64, tol: f64) -> Result<InstanceRecord> {
    let real = rng.random::<bool>();
    let a = random_matrix(n, n, real, rng);
    let g = eigh(&random_psd(n, real, rng))?;
    let t = 0.2 + 3.8 * rng.random::<f64>();
    let s = 1.0 + rng.random::<f64>();
    heat_power_instance(&a, &g, s, t, tol, format!("n={n} s={s:.3} t={t:.3}"))
}

fn heat_power_instance(a: &Matrix, g: &EigenDecomposition, s: f64, t: f64, tol: f64, label: String) -> Result<InstanceRecord> {
    let lhs = sandwich(a, g, |x| (-t / x).exp())?;
    let gs = sandwich(a, g, |x| x.powf(s))?;
    let bound = (s / t).powf(s) * (-s).exp();
    let norm = g.values.iter().map(|&x| x.powf(-s) * (-t / x).exp()).fold(0.0, f64::max);
    let (m1, _) = psd_slack(&lhs, &gs.scale(norm))?;
    let m2 = scalar_slack(norm, bound);
    let margin = m1.min(m2);
    Ok(InstanceRecord::new(label, margin, pass(margin, tol)).with("norm", norm).with("bound", bound))
}

fn power_contraction(n: usize, rng: &mut Rng64, tol: f64) -> Result<InstanceRecord> {
    let real = rng.random::<bool>();
    let a = random_matrix(n, n, real, rng).scale(0.3 + 1.7 * rng.random::<f64>());
    let g = eigh(&random_psd(n, real, rng))?;
    let big_m = op_norm(&a)? * if rng.random::<bool>() { 1.0 } else { 1.0 + rng.random::<f64>() };
    let s = 1.0 + 0.999 * rng.random::<f64>();
    let aga = DenseHermitian::hermitian_part(sandwich(&a, &g, |x| x)?)?;
    let lhs = fractional_power(&aga, s)?;
    let rhs = sandwich(&a, &g, |x| x.powf(s))?.scale(big_m.powf(2.0 * (s - 1.0)));
    let (margin, scale) = psd_slack(lhs.matrix(), &rhs)?;
    Ok(InstanceRecord::new(format!("n={n} s={s:.3} M={big_m:.3}"), margin, pass(margin, tol)).with("scale", scale))
}

fn fractional_commutator(n: usize, idx: usize, rng: &mut Rng64, tol: f64) -> Result<InstanceRecord> {
    let combo = idx % (FRACTIONAL_EXPONENTS.len().pow(2) * FRACTIONAL_SCHATTEN.len());
    let al = FRACTIONAL_EXPONENTS[combo % 4];
    let be = FRACTIONAL_EXPONENTS[(combo / 4) % 4];
    let p = FRACTIONAL_SCHATTEN[combo / 16];
    let real = rng.random::<bool>();
    let a = random_psd(n, real, rng).scale(0.2 + 3.0 * rng.random::<f64>());
    let b0 = random_psd(n, real, rng);
    // half the instances nearly commute, where the bound is tightest
    let b = if idx % 2 == 0 {
        let root = fractional_power(&a, 0.5)?;
        DenseHermitian::hermitian_part(root.matrix().try_add(&b0.matrix().scale(0.05))?)?
    } else {
        b0.scale(0.2 + 3.0 * rng.random::<f64>())
    };
    let lhs_c = commutator(fractional_power(&a, al)?.matrix(), fractional_power(&b, be)?.matrix())?;
    let lhs = schatten_from_singular(&singular_values(&lhs_c)?, Schatten::P(p / (al * be)));
    let c = commutator(a.matrix(), b.matrix())?;
    let norm_a = op_norm(a.matrix())?;
    let norm_b = op_norm(b.matrix())?;
    let rhs = norm_a.powf(al * (1.0 - be))
        * norm_b.powf(be * (1.0 - al))
        * schatten_from_singular(&singular_values(&c)?, Schatten::P(p)).powf(al * be);
    let margin = scalar_slack(lhs, rhs);
    Ok(InstanceRecord::new(format!("n={n} alpha={al} beta={be} p={p}"), margin, pass(margin, tol))
        .with("lhs", lhs)
        .with("rhs", rhs))
}

fn smooth_commutator(n: usize, idx: usize, rng: &mut Rng64, tol: f64) -> Result<InstanceRecord> {
    let real = rng.random::<bool>();
    let a = random_matrix(n, n, real, rng);
    let b = random_hermitian(n, real, rng);
    let eig = eigh(&b)?;
    let (lo_s, hi_s) = (eig.values[0], eig.values[n - 1]);
    let span = hi_s - lo_s;
    let lo = lo_s + rng.random::<f64>() * 0.7 * span;
    let hi = lo + (0.05 + 0.5 * rng.random::<f64>()) * span;
    let phi = eig.map(|x| crate::factory::smooth_transition_profile(x, lo, hi).expect("lo < hi"))?;
    let p = [Schatten::P(1.0), Schatten::P(2.0), Schatten::P(4.0), Schatten::Infinity][idx % 4];
    let lhs = schatten_from_singular(&singular_values(&commutator(&a, phi.matrix())?)?, p);
    let k = fourier_derivative_l1(lo, hi)?;
    let rhs = k * schatten_from_singular(&singular_values(&commutator(&a, b.matrix())?)?, p);
    let margin = scalar_slack(lhs, rhs);
    Ok(InstanceRecord::new(format!("n={n} p={p:?} width={:.3}", hi - lo), margin, pass(margin, tol))
        .with("lhs", lhs)
        .with("rhs", rhs))
}

/// `sup (M g)(lambda)` over `lambda in (1, lambda_max]`, reduced by the
/// quadrature error so the bound stays conservative.
fn cesaro_heat_sup<P: PowerSums + ?Sized>(p: &P, lambda_max: f64) -> Result<f64> {
    let targets = geometric_grid(1.02, lambda_max, 400)?;
    let (m, err) = cesaro_function(|t| p.heat_sum(t) / t, &targets, 0.02)?;
    Ok((m.max_value() - err).max(0.0))
}

fn partial_trace_instance(a: &Matrix, g: &EigenDecomposition, tol: f64, label: String) -> Result<InstanceRecord> {
    let n = g.values.len();
    let w = TraceWeights::unit(n);
    let pairing = Pairing::quadratic_from(a, g, &w)?;
    let g_min = g.values.iter().copied().fold(f64::INFINITY, f64::min);
    let heat_term = pairing.heat_sum(1.0) / std::f64::consts::E;
    let a2 = op_norm(a)?.powi(2);
    let mg = cesaro_heat_sup(&pairing, (1e3 / g_min).max(1e4))?;
    let aga = sandwich(a, g, |x| x)?;
    let svf = mu(&aga, &w)?;
    let ts: Vec<f64> = (1..=n).map(|t| t as f64).collect();
    let sig = sigma_many(&svf, &ts)?;
    let margin = ts
        .iter()
        .zip(&sig)
        .map(|(&t, &s)| scalar_slack(s, heat_term + a2 + mg * t.ln_1p()))
        .fold(f64::INFINITY, f64::min);
    Ok(InstanceRecord::new(label, margin, pass(margin, tol)).with("mg_sup", mg).with("heat_term", heat_term))
}

fn partial_trace(n: usize, rng: &mut Rng64, tol: f64) -> Result<InstanceRecord> {
    let real = rng.random::<bool>();
    let a = random_matrix(n, n, real, rng).scale(0.2 + rng.random::<f64>());
    let g = eigh(&random_psd(n, real, rng))?;
    partial_trace_instance(&a, &g, tol, format!("n={n}"))
}

fn interpolated_power(n: usize, rng: &mut Rng64, tol: f64) -> Result<InstanceRecord> {
    let real = rng.random::<bool>();
    let a = random_psd(n, real, rng).scale(0.3 + 2.0 * rng.random::<f64>());
    let g = normalized_psd(n, real, rng)?;
    let de = 0.1 + 0.9 * rng.random::<f64>();
    let eps = de * (0.05 + 0.45 * rng.random::<f64>());
    let w = TraceWeights::unit(n);
    let prod = fractional_power(&a, de)?.matrix() * fractional_power(&g, eps)?.matrix();
    let lhs = mpinfty_norm_profile(&mu(&prod, &w)?, 1.0 / eps)?;
    let aga = &(a.matrix() * g.matrix()) * a.matrix();
    let rhs = op_norm(a.matrix())?.powf(de - 2.0 * eps) * marcinkiewicz_norm(&mu(&aga, &w)?).powf(eps);
    let margin = scalar_slack(lhs, rhs);
    Ok(InstanceRecord::new(format!("n={n} delta={de:.3} eps={eps:.3}"), margin, pass(margin, tol))
        .with("lhs", lhs)
        .with("rhs", rhs))
}

fn singular_decay(n: usize, rng: &mut Rng64, tol: f64) -> Result<InstanceRecord> {
    let real = rng.random::<bool>();
    let a = random_matrix(n, n, real, rng).scale(0.2 + rng.random::<f64>());
    let g = eigh(&normalized_psd(n, real, rng)?)?;
    let eps = 0.05 + 0.9 * rng.random::<f64>();
    let w = TraceWeights::unit(n);
    let pairing = Pairing::quadratic_from(&a, &g, &w)?;
    let g_sup = geometric_grid(1e-3, 1e8, 800)?
        .into_iter()
        .map(|l| pairing.heat_sum(l) / l)
        .fold(0.0, f64::max);
    let c = (op_norm(&a)?.powi(2) / eps + g_sup / (1.0 - eps)) / libm::tgamma(eps);
    let t = sandwich(&a, &g, |x| x.powf(eps))?;
    let svf = mu(&t, &w)?;
    let mut edge = 0.0;
    let mut margin = f64::INFINITY;
    for st in svf.steps() {
        edge += st.width;
        margin = margin.min(scalar_slack(st.value, c * edge.powf(-eps)));
    }
    Ok(InstanceRecord::new(format!("n={n} eps={eps:.3}"), margin, pass(margin, tol)).with("constant", c))
}

fn run_random(check: SubCheck, config: &InequalityConfig, idx: usize) -> Result<InstanceRecord> {
    let mut rng = instance_rng(config.seed, 100 + check as u64, idx as u64);
    let n = config.dims[idx % config.dims.len()];
    let tol = config.tolerance;
    match check {
        SubCheck::HeatPowerDomination => heat_power_domination(n, &mut rng, tol),
        SubCheck::PowerContraction => power_contraction(n, &mut rng, tol),
        SubCheck::FractionalCommutator => fractional_commutator(n, idx, &mut rng, tol),
        SubCheck::SmoothCommutator => smooth_commutator(n, idx, &mut rng, tol),
        SubCheck::PartialTrace => partial_trace(n, &mut rng, tol),
        SubCheck::InterpolatedPower => interpolated_power(n, &mut rng, tol),
        SubCheck::SingularDecay => singular_decay(n, &mut rng, tol),
    }
}

/// Deterministic extra instances: saturation cases and the lattice example.
fn structured(check: SubCheck, config: &InequalityConfig) -> Result<Vec<InstanceRecord>> {
    let tol = config.tolerance;
    match check {
        SubCheck::HeatPowerDomination => {
            let n = config.dims[0];
            let g = eigh(&DenseHermitian::identity(n))?;
            (0..3)
                .map(|k| {
                    let s = 1.0 + 0.5 * k as f64;
                    heat_power_instance(&Matrix::identity(n), &g, s, s, tol, format!("saturated s=t={s}"))
                })
                .collect()
        }
        SubCheck::PartialTrace => {
            let spec = LatticeSpec::line(config.lattice_sites, config.lattice_length)?;
            let a = multiplication_operator(&spec.sample(|x| 1.0 / (1.0 + x * x)))?;
            let g = g_lattice_decomposition(&spec, 1.0, GVariant::Squared)?;
            Ok(vec![partial_trace_instance(a.matrix(), &g, tol, format!("lattice N={}", spec.n))?])
        }
        _ => Ok(Vec::new()),
    }
}

pub fn check_inequality_suite(config: &InequalityConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let mut out = Vec::with_capacity(config.checks.len());
    for &check in &config.checks {
        let mut report = CheckReport::new(check.id(), MarginKind::Slack, config.seed);
        report.extend(structured(check, config)?)?;
        let recs = (0..config.trials)
            .into_par_iter()
            .map(|i| run_random(check, config, i))
            .collect::<Result<Vec<_>>>()?;
        report.extend(recs)?;
        out.push(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_subcheck_passes_small() {
        let cfg = InequalityConfig { trials: 12, dims: vec![3, 6], lattice_sites: 32, ..Default::default() };
        for r in check_inequality_suite(&cfg).unwrap() {
            assert!(r.passed(), "{}: worst {} in {:?}", r.id, r.worst_margin, r.details.iter().find(|d| !d.pass));
        }
    }

    #[test]
    fn saturated_heat_bound_has_zero_slack() {
        let cfg = InequalityConfig { checks: vec![SubCheck::HeatPowerDomination], trials: 0, ..Default::default() };
        let r = &check_inequality_suite(&cfg).unwrap()[0];
        assert_eq!(r.instances, 3);
        assert!(r.worst_margin.abs() < 1e-12, "{}", r.worst_margin);
    }

    #[test]
    fn fractional_commutator_equality_at_unit_exponents() {
        let mut rng = instance_rng(3, 0, 0);
        // combo 15 + 16k has alpha = beta = 1
        let rec = fractional_commutator(6, 15, &mut rng, 1e-9).unwrap();
        assert!(rec.margin.abs() < 1e-10, "{rec:?}");
    }

    #[test]
    fn subcheck_ids_parse() {
        for c in SubCheck::ALL {
            assert_eq!(c.id().parse::<SubCheck>().unwrap(), c);
        }
        assert!("nope".parse::<SubCheck>().is_err());
    }

    #[test]
    fn violated_inequality_is_reported() {
        // doubling the left side of the saturated case must fail
        let g = eigh(&DenseHermitian::identity(2)).unwrap();
        let rec = heat_power_instance(&Matrix::identity(2).scale(2.0f64.sqrt()), &g, 1.5, 1.5, 1e-9, "x".into()).unwrap();
        assert!(rec.pass);
        let (m, _) = psd_slack(&Matrix::identity(2).scale(2.0), &Matrix::identity(2)).unwrap();
        assert!(m < 0.0);
    }
}
