//! Limit statements: norm equivalences, agreement of the residue, Dixmier
//! and heat-Cesàro estimators, decay trends as `s -> 1` and the trace
//! property on lattices.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::dixmier_with_root;
use super::identity::hermitian_trace_norm;
use super::{check_positive, instance_rng, scalar_slack, CheckReport, InstanceRecord, MarginKind};
use crate::curve::{geometric_grid, LimitEstimate};
use crate::error::{Error, Result};
use crate::factory::{g_lattice_decomposition, multiplication_operator, GVariant, LatticeSpec, ModelKind, ModelSequence};
use crate::linalg::{commutator, fractional_power, schatten_from_singular, singular_values, DenseHermitian, Matrix, Schatten};
use crate::trace_space::{dixmier_estimate, marcinkiewicz_norm, mu, PowerSums, TraceWeights};
use crate::zeta_heat::{heat_cesaro_estimate, hk_norm, residue_estimate, zeta_norm, Pairing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitCheck {
    NormEquivalence,
    ThreeNorms,
    LimitAgreement,
    L1Decay,
    MainTrend,
    TraceProperty,
    Converse,
}

impl LimitCheck {
    pub const ALL: [LimitCheck; 7] = [
        LimitCheck::NormEquivalence,
        LimitCheck::ThreeNorms,
        LimitCheck::LimitAgreement,
        LimitCheck::L1Decay,
        LimitCheck::MainTrend,
        LimitCheck::TraceProperty,
        LimitCheck::Converse,
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitConfig {
    pub checks: Vec<LimitCheck>,
    pub harmonic_constants: Vec<f64>,
    pub norm_terms: usize,
    /// Envelope `C` for `hk^2 / zeta^2 in [1/C, C]`.
    pub equivalence_constant: f64,
    /// Envelope for the pairwise ratios of the three `Z_1` norms.
    pub three_norm_constant: f64,
    pub r_grid: Vec<f64>,
    pub dixmier_terms: usize,
    pub dixmier_cutoff_lo: f64,
    pub dixmier_cutoff_count: usize,
    pub residue_tolerance: f64,
    pub dixmier_tolerance: f64,
    pub heat_tolerance: f64,
    /// Relative agreement required between the three estimators.
    pub agreement_tolerance: f64,
    /// Absolute bound on the estimators for trace-class models.
    pub zero_tolerance: f64,
    pub decay_eps: Vec<f64>,
    pub trend_sites: usize,
    pub trend_length: f64,
    pub trend_eps: Vec<f64>,
    pub delta: f64,
    pub trace_instances: usize,
    pub trace_sites: usize,
    pub trace_length: f64,
    pub converse_sites: Vec<usize>,
    pub seed: u64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        Self {
            checks: LimitCheck::ALL.to_vec(),
            harmonic_constants: vec![0.5, 1.0, 2.0],
            norm_terms: 1_000_000,
            equivalence_constant: 10.0,
            three_norm_constant: 4.0,
            r_grid: vec![4.0, 8.0, 16.0, 32.0, 64.0],
            dixmier_terms: 10_000_000,
            dixmier_cutoff_lo: 1e3,
            dixmier_cutoff_count: 9,
            residue_tolerance: 0.01,
            dixmier_tolerance: 0.02,
            heat_tolerance: 0.03,
            agreement_tolerance: 0.03,
            zero_tolerance: 0.02,
            decay_eps: vec![0.4, 0.2, 0.1, 0.05, 0.025],
            trend_sites: 512,
            trend_length: 32.0,
            trend_eps: vec![0.4, 0.2, 0.1],
            delta: 0.5,
            trace_instances: 20,
            trace_sites: 512,
            trace_length: 32.0,
            converse_sites: vec![128, 256, 512],
            seed: 11,
        }
    }
}

impl LimitConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("equivalence_constant", self.equivalence_constant),
            ("three_norm_constant", self.three_norm_constant),
            ("residue_tolerance", self.residue_tolerance),
            ("dixmier_tolerance", self.dixmier_tolerance),
            ("heat_tolerance", self.heat_tolerance),
            ("agreement_tolerance", self.agreement_tolerance),
            ("zero_tolerance", self.zero_tolerance),
            ("trend_length", self.trend_length),
            ("trace_length", self.trace_length),
            ("dixmier_cutoff_lo", self.dixmier_cutoff_lo),
        ] {
            check_positive(name, v)?;
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidInput(format!("delta = {} outside (0, 1)", self.delta)));
        }
        if self.harmonic_constants.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(Error::InvalidInput("harmonic constants must be positive".into()));
        }
        for (name, g) in [("decay_eps", &self.decay_eps), ("trend_eps", &self.trend_eps)] {
            if g.len() < 2 || g.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) || g.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::InvalidInput(format!("{name} must be a decreasing grid in (0, 1]")));
            }
        }
        if (self.dixmier_terms as f64) <= self.dixmier_cutoff_lo || self.dixmier_cutoff_count < 3 {
            return Err(Error::InvalidInput("Dixmier cutoffs need room below the enumerated terms".into()));
        }
        if self.norm_terms < 2 || self.trend_sites < 8 || self.trace_sites < 8 {
            return Err(Error::InvalidInput("sizes too small".into()));
        }
        if self.checks.is_empty() {
            return Err(Error::InvalidInput("no checks selected".into()));
        }
        if self.r_grid.len() < 3 {
            return Err(Error::InsufficientData { needed: 3, got: self.r_grid.len() });
        }
        Ok(())
    }
}

/// `s in (1, 2]`, dense near 1.
fn s_grid() -> Result<Vec<f64>> {
    Ok(geometric_grid(1e-4, 1.0, 80)?.into_iter().map(|e| 1.0 + e).collect())
}

fn lambda_grid() -> Result<Vec<f64>> {
    geometric_grid(1.01, 1e9, 240)
}

fn equivalence_reports(config: &LimitConfig) -> Result<(CheckReport, CheckReport)> {
    let mut eq = CheckReport::new("zeta-heat-norm-equivalence", MarginKind::Slack, config.seed);
    let mut three = CheckReport::new("three-norm-equivalence", MarginKind::Slack, config.seed);
    let (sg, lg) = (s_grid()?, lambda_grid()?);
    let rows = config
        .harmonic_constants
        .par_iter()
        .map(|&c| {
            let m = ModelSequence::new(ModelKind::Harmonic { c }, config.norm_terms)?;
            let z2 = zeta_norm(&m, &sg)?.powi(2);
            let h2 = hk_norm(&m, &lg)?.powi(2);
            let marc = marcinkiewicz_norm(&m);
            Ok((c, z2, h2, marc))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratio_slack = |r: f64, k: f64| scalar_slack(r, k).min(scalar_slack(1.0 / k, r));
    for (c, z2, h2, marc) in rows {
        let r = h2 / z2;
        let m = ratio_slack(r, config.equivalence_constant);
        eq.push(InstanceRecord::new(format!("harmonic c={c}"), m, m >= 0.0).with("ratio", r).with("zeta_sq", z2).with("hk_sq", h2))?;
        let k = config.three_norm_constant;
        let m = ratio_slack(marc / z2, k).min(ratio_slack(marc / h2, k)).min(ratio_slack(z2 / h2, k));
        three.push(
            InstanceRecord::new(format!("harmonic c={c}"), m, m >= 0.0)
                .with("weak_norm", marc)
                .with("zeta_sq", z2)
                .with("heat_mean_sup", h2),
        )?;
    }
    Ok((eq, three))
}

fn estimates(config: &LimitConfig, kind: ModelKind) -> Result<[LimitEstimate; 3]> {
    let m = ModelSequence::new(kind, config.dixmier_terms)?;
    let cut = geometric_grid(config.dixmier_cutoff_lo, config.dixmier_terms as f64, config.dixmier_cutoff_count)?;
    let (res, (dix, heat)) = rayon::join(
        || residue_estimate(&m, &config.r_grid),
        || rayon::join(|| dixmier_estimate(&m, &cut), || heat_cesaro_estimate(&m, &config.r_grid)),
    );
    Ok([res?, dix?, heat?])
}

fn agreement_report(config: &LimitConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("limit-agreement", MarginKind::Deviation, config.seed);
    let names = ["residue", "dixmier", "heat-cesaro"];
    let tols = [config.residue_tolerance, config.dixmier_tolerance, config.heat_tolerance];
    let harmonic = estimates(config, ModelKind::Harmonic { c: 1.0 })?;
    for ((name, tol), est) in names.iter().zip(tols).zip(&harmonic) {
        let dev = (est.value - 1.0).abs();
        report.push(
            InstanceRecord::new(format!("harmonic {name}"), dev, dev <= tol)
                .with("value", est.value)
                .with("uncertainty", est.uncertainty),
        )?;
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (harmonic[i].value, harmonic[j].value);
            let dev = (a - b).abs() / a.abs().max(b.abs());
            report.push(InstanceRecord::new(
                format!("harmonic {} vs {}", names[i], names[j]),
                dev,
                dev <= config.agreement_tolerance,
            ))?;
        }
    }
    let square = estimates(config, ModelKind::Square)?;
    for (name, est) in names.iter().zip(&square) {
        let dev = est.value.abs();
        report.push(
            InstanceRecord::new(format!("trace-class {name}"), dev, dev <= config.zero_tolerance)
                .with("value", est.value)
                .with("uncertainty", est.uncertainty),
        )?;
    }
    Ok(report)
}

/// `eps ||T||_{1+eps}` along `eps_grid`.
fn l1_decay<P: PowerSums + ?Sized>(p: &P, eps_grid: &[f64]) -> Vec<f64> {
    eps_grid.iter().map(|&e| e * p.power_sum(1.0 + e).powf(1.0 / (1.0 + e))).collect()
}

/// Margin of a strictly decreasing sequence: smallest relative drop.
fn decrease_margin(v: &[f64]) -> f64 {
    v.windows(2).map(|w| scalar_slack(w[1], w[0]) - f64::EPSILON).fold(f64::INFINITY, f64::min)
}

fn decay_report(config: &LimitConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("l1-decay", MarginKind::Slack, config.seed);
    for kind in [ModelKind::Square, ModelKind::LogHarmonic] {
        let m = ModelSequence::new(kind, config.norm_terms)?;
        let v = l1_decay(&m, &config.decay_eps);
        let margin = decrease_margin(&v);
        let mut rec = InstanceRecord::new(format!("{kind:?}"), margin, margin > 0.0);
        for (e, x) in config.decay_eps.iter().zip(&v) {
            rec = rec.with(&format!("eps={e}"), *x);
        }
        report.push(rec)?;
    }
    Ok(report)
}

struct Lattice {
    spec: LatticeSpec,
    a: DenseHermitian,
    samples: Vec<f64>,
    g: crate::linalg::EigenDecomposition,
}

fn lorentzian_lattice(n: usize, length: f64) -> Result<Lattice> {
    let spec = LatticeSpec::line(n, length)?;
    let samples = spec.sample(|x| 1.0 / (1.0 + x * x));
    let a = multiplication_operator(&samples)?;
    let g = g_lattice_decomposition(&spec, 1.0, GVariant::Squared)?;
    Ok(Lattice { spec, a, samples, g })
}

/// `(s - 1) ||a G^s a - (a G a)^s||_1` at `s = 1 + eps`.
fn trend_value(lat: &Lattice, eps: f64) -> Result<f64> {
    let s = 1.0 + eps;
    let am = lat.a.matrix();
    let gs = lat.g.power(s)?;
    let lhs = &(am * gs.matrix()) * am;
    let g1 = lat.g.power(1.0)?;
    let aga = DenseHermitian::hermitian_part(&(am * g1.matrix()) * am)?;
    let rhs = fractional_power(&aga, s)?;
    Ok(eps * hermitian_trace_norm(&lhs.try_sub(rhs.matrix())?)?)
}

/// `eps ||[G, a^{1 - delta}]||_{1 + eps}`.
fn commutator_decay(lat: &Lattice, delta: f64, eps: f64) -> Result<f64> {
    let root: Vec<f64> = lat.samples.iter().map(|v| v.powf(1.0 - delta)).collect();
    let g1 = lat.g.power(1.0)?;
    let c = commutator(g1.matrix(), &Matrix::from_diag(&root))?;
    Ok(eps * schatten_from_singular(&singular_values(&c)?, Schatten::P(1.0 + eps)))
}

fn trend_report(config: &LimitConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("main-trend", MarginKind::Slack, config.seed);
    let lat = lorentzian_lattice(config.trend_sites, config.trend_length)?;
    let diag = config.trend_eps.iter().map(|&e| commutator_decay(&lat, config.delta, e)).collect::<Result<Vec<_>>>()?;
    if decrease_margin(&diag) <= 0.0 {
        report.warn(format!("commutator diagnostic not decaying {diag:?}; instance excluded"));
        return Ok(report);
    }
    let vals = config.trend_eps.par_iter().map(|&e| trend_value(&lat, e)).collect::<Result<Vec<_>>>()?;
    let first_log = 1.0 / (config.trend_sites as f64).ln();
    if let Some(e) = config.trend_eps.iter().find(|&&e| e < first_log) {
        report.warn(format!("eps = {e} below 1/log N = {first_log:.4}"));
    }
    let margin = decrease_margin(&vals).min(scalar_slack(vals[vals.len() - 1], 0.5 * vals[0]));
    let mut rec = InstanceRecord::new(format!("lattice N={}", lat.spec.n), margin, margin > 0.0);
    for ((e, v), d) in config.trend_eps.iter().zip(&vals).zip(&diag) {
        rec = rec.with(&format!("eps={e}"), *v).with(&format!("commutator eps={e}"), *d);
    }
    report.push(rec)?;
    Ok(report)
}

fn trace_report(config: &LimitConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("trace-property", MarginKind::Slack, config.seed);
    let spec = LatticeSpec::line(config.trace_sites, config.trace_length)?;
    let g = g_lattice_decomposition(&spec, 1.0, GVariant::Squared)?;
    let n = spec.n;
    let cut = geometric_grid(16.0, n as f64 / 2.0, 7)?;
    let xs = spec.positions();
    let root = g.power(0.5)?;
    let root = root.matrix();
    let recs = (0..config.trace_instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(config.seed, 30, i as u64);
            let (c, w) = (rng.random_range(-3.0..3.0), rng.random_range(2.0..8.0));
            let floor = 0.3 * rng.random::<f64>();
            let shift = rng.random_range(0..n / 4);
            let f: Vec<f64> = xs.iter().map(|x| (-(x - c) * (x - c) / w).exp() + floor).collect();
            // multiplication composed with a lattice translation, plus a
            // second multiplication on odd instances
            let extra = rng.random_range(-0.5..0.5);
            let a = Matrix::from_fn(n, n, |r, col| {
                let mut v = if col == (r + shift) % n { f[r] } else { 0.0 };
                if i % 2 == 1 && r == col {
                    v += extra * (-xs[r] * xs[r] / 16.0).exp();
                }
                crate::linalg::C64::new(v, 0.0)
            });
            let ada = DenseHermitian::hermitian_part(&a.adjoint() * &a)?;
            let aad = DenseHermitian::hermitian_part(&a * &a.adjoint())?;
            let (l, r) = rayon::join(|| dixmier_with_root(&ada, root, &cut), || dixmier_with_root(&aad, root, &cut));
            let (l, r) = (l?, r?);
            let diff = (l.value - r.value).abs();
            let allowed = l.uncertainty + r.uncertainty;
            let margin = scalar_slack(diff, allowed);
            Ok(InstanceRecord::new(format!("instance {i} shift={shift}"), margin, diff <= allowed)
                .with("dixmier_left", l.value)
                .with("dixmier_right", r.value)
                .with("allowed", allowed))
        })
        .collect::<Result<Vec<_>>>()?;
    report.extend(recs)?;
    Ok(report)
}

fn converse_report(config: &LimitConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("bounded-family-converse", MarginKind::Slack, config.seed);
    let sg = s_grid()?;
    for &n in &config.converse_sites {
        let lat = lorentzian_lattice(n, config.trend_length)?;
        let w = TraceWeights::unit(n);
        let am = lat.a.matrix();
        let g1 = lat.g.power(1.0)?;
        let aga = &(am * g1.matrix()) * am;
        // `a` is self-adjoint, so both terms of the family norm coincide
        let family = 2.0 * marcinkiewicz_norm(&mu(&aga, &w)?);
        let z2 = zeta_norm(&Pairing::quadratic_from(am, &lat.g, &w)?, &sg)?.powi(2);
        let ratio = z2 / family;
        let margin = scalar_slack(ratio, config.equivalence_constant);
        report.push(
            InstanceRecord::new(format!("lattice N={n}"), margin, margin >= 0.0)
                .with("zeta_sq", z2)
                .with("family_norm", family)
                .with("ratio", ratio),
        )?;
    }
    Ok(report)
}

pub fn check_limit_suite(config: &LimitConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let wants = |c: LimitCheck| config.checks.contains(&c);
    let mut out = Vec::new();
    if wants(LimitCheck::NormEquivalence) || wants(LimitCheck::ThreeNorms) {
        let (eq, three) = equivalence_reports(config)?;
        if wants(LimitCheck::NormEquivalence) {
            out.push(eq);
        }
        if wants(LimitCheck::ThreeNorms) {
            out.push(three);
        }
    }
    let rest: [(LimitCheck, fn(&LimitConfig) -> Result<CheckReport>); 5] = [
        (LimitCheck::LimitAgreement, agreement_report),
        (LimitCheck::L1Decay, decay_report),
        (LimitCheck::MainTrend, trend_report),
        (LimitCheck::TraceProperty, trace_report),
        (LimitCheck::Converse, converse_report),
    ];
    for (check, run) in rest {
        if wants(check) {
            out.push(run(config)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> LimitConfig {
        LimitConfig {
            norm_terms: 20_000,
            dixmier_terms: 200_000,
            dixmier_cutoff_lo: 100.0,
            trend_sites: 64,
            trace_sites: 64,
            trace_instances: 4,
            converse_sites: vec![32, 64],
            ..Default::default()
        }
    }

    #[test]
    fn harmonic_norms_have_closed_forms() {
        let (eq, three) = equivalence_reports(&LimitConfig { harmonic_constants: vec![1.0], ..small() }).unwrap();
        let r = &three.details[0];
        // sup_t H_t / log(1 + t) is attained at t = 1
        assert!((r.value("weak_norm").unwrap() - 1.0 / std::f64::consts::LN_2).abs() < 1e-12);
        // (s - 1) zeta(s) peaks at s = 2 with pi^2/6
        assert!((r.value("zeta_sq").unwrap() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-6);
        assert!(eq.passed() && three.passed());
    }

    #[test]
    fn decay_is_monotone() {
        let r = decay_report(&small()).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn small_trend_and_trace() {
        let cfg = small();
        let t = trend_report(&cfg).unwrap();
        assert!(t.instances + t.warnings.len() >= 1);
        let tr = trace_report(&cfg).unwrap();
        assert_eq!(tr.instances, 4);
        // pure translations give unitarily equivalent products
        for d in tr.details.iter().step_by(2) {
            assert!((d.value("dixmier_left").unwrap() - d.value("dixmier_right").unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn bad_tolerance_rejected() {
        assert!(LimitConfig { residue_tolerance: 0.0, ..Default::default() }.validate().is_err());
        assert!(LimitConfig { trend_eps: vec![0.1, 0.2], ..Default::default() }.validate().is_err());
    }
}
