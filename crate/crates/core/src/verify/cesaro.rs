//! Iterated Cesàro means and the classification of model sequences by the
//! boundedness of `f_T` and `M f_T`.

use serde::{Deserialize, Serialize};

use super::{check_positive, scalar_slack, CheckReport, InstanceRecord, MarginKind};
use crate::curve::{geometric_grid, FunctionalCurve, Scale};
use crate::error::{Error, Result};
use crate::factory::{ModelKind, ModelSequence};
use crate::quadrature::gl_composite;
use crate::trace_space::{weak_l1_quasinorm, PowerSums};
use crate::zeta_heat::{cesaro_function, cesaro_mean};

/// Nonnegative test functions on `[1, inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestFunction {
    Constant { c: f64 },
    /// Indicator of `lo <= log lambda <= hi`.
    LogIndicator { lo: f64, hi: f64 },
    /// `1 / (1 + log lambda)`.
    InverseLog,
    /// `1 + sin(log(1 + log lambda))`.
    SlowOscillation,
    /// `(log lambda)^p`.
    LogPower { p: f64 },
}

impl TestFunction {
    pub fn eval(&self, lambda: f64) -> f64 {
        self.eval_log(lambda.ln().max(0.0))
    }

    /// The function at `lambda = e^u`. Jumps take the midpoint value.
    pub fn eval_log(&self, u: f64) -> f64 {
        match *self {
            TestFunction::Constant { c } => c,
            TestFunction::LogIndicator { lo, hi } => {
                let edge = |b: f64| (u - b).abs() <= 1e-12 * b.max(1.0);
                if edge(lo) || edge(hi) {
                    0.5
                } else {
                    f64::from(u > lo && u < hi)
                }
            }
            TestFunction::InverseLog => 1.0 / (1.0 + u),
            TestFunction::SlowOscillation => 1.0 + u.ln_1p().sin(),
            TestFunction::LogPower { p } => u.powf(p),
        }
    }

    /// Points of `log lambda` where the function is not smooth.
    fn kinks(&self) -> Vec<f64> {
        match *self {
            TestFunction::LogIndicator { lo, hi } => vec![lo, hi],
            _ => Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TestFunction::Constant { c } if !(c >= 0.0 && c.is_finite()) => {
                Err(Error::InvalidInput(format!("constant {c} must be nonnegative")))
            }
            TestFunction::LogIndicator { lo, hi } if !(0.0 <= lo && lo < hi && hi.is_finite()) => {
                Err(Error::InvalidInput(format!("indicator bounds [{lo}, {hi}]")))
            }
            TestFunction::LogPower { p } if !(p >= 0.0 && p.is_finite()) => {
                Err(Error::InvalidInput(format!("log power {p}")))
            }
            _ => Ok(()),
        }
    }

    fn label(&self) -> String {
        match *self {
            TestFunction::Constant { c } => format!("constant({c})"),
            TestFunction::LogIndicator { lo, hi } => format!("log-indicator[{lo},{hi}]"),
            TestFunction::InverseLog => "inverse-log".into(),
            TestFunction::SlowOscillation => "slow-oscillation".into(),
            TestFunction::LogPower { p } => format!("log-power({p})"),
        }
    }
}

/// `(MMh)(x) = (1/log x) int_1^x log(log x / log lambda) h(lambda) dlambda/lambda`,
/// evaluated as `int_0^inf v e^{-v} h(exp(L e^{-v})) dv` with `L = log x`.
pub fn iterated_mean_closed_form(h: &TestFunction, x: f64) -> Result<f64> {
    if !(x > 1.0 && x.is_finite()) {
        return Err(Error::DomainError(format!("x = {x} must exceed 1")));
    }
    let l = x.ln();
    let mut cuts = vec![0.0, 48.0];
    cuts.extend(h.kinks().into_iter().filter(|&u| u > 0.0 && u < l).map(|u| (l / u).ln()));
    cuts.sort_by(f64::total_cmp);
    let f = |v: f64| v * (-v).exp() * h.eval((l * (-v).exp()).exp());
    Ok(cuts.windows(2).map(|w| gl_composite(f, w[0], w[1], 64)).sum())
}

/// Spectral class read off from the heat profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelClass {
    /// `f_T` bounded.
    WeakL1,
    /// `M f_T` bounded while `f_T` is not.
    ZetaNotWeakL1,
    /// Neither bounded on the grid.
    Outside,
}

impl ModelClass {
    /// The class each model belongs to in theory.
    pub fn expected(kind: &ModelKind) -> ModelClass {
        match kind {
            ModelKind::Harmonic { .. } | ModelKind::Square => ModelClass::WeakL1,
            ModelKind::LogHarmonic => ModelClass::ZetaNotWeakL1,
            ModelKind::Power { q } if *q <= 1.0 => ModelClass::WeakL1,
            ModelKind::Power { .. } => ModelClass::Outside,
        }
    }

    fn code(self) -> f64 {
        match self {
            ModelClass::WeakL1 => 0.0,
            ModelClass::ZetaNotWeakL1 => 1.0,
            ModelClass::Outside => 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CesaroConfig {
    pub functions: Vec<TestFunction>,
    pub x_min: f64,
    pub x_max: f64,
    pub samples: usize,
    /// Trapezoid step in `log lambda`.
    pub log_step: f64,
    pub closed_form_tolerance: f64,
    pub models: Vec<ModelKind>,
    pub model_terms: usize,
    pub lambda_max: f64,
    /// Grid suprema above this count as unbounded.
    pub unbounded_threshold: f64,
    pub seed: u64,
}

impl Default for CesaroConfig {
    fn default() -> Self {
        Self {
            functions: vec![
                TestFunction::Constant { c: 1.0 },
                TestFunction::LogIndicator { lo: 1.0, hi: 2.0 },
                TestFunction::InverseLog,
                TestFunction::SlowOscillation,
                TestFunction::LogPower { p: 1.0 },
            ],
            x_min: 1.5,
            x_max: 1e4,
            samples: 40,
            log_step: 0.005,
            closed_form_tolerance: 1e-3,
            models: vec![ModelKind::Harmonic { c: 1.0 }, ModelKind::LogHarmonic],
            model_terms: 1_000_000,
            lambda_max: 1e8,
            unbounded_threshold: 10.0,
            seed: 3,
        }
    }
}

impl CesaroConfig {
    pub fn validate(&self) -> Result<()> {
        check_positive("log_step", self.log_step)?;
        check_positive("closed_form_tolerance", self.closed_form_tolerance)?;
        check_positive("unbounded_threshold", self.unbounded_threshold)?;
        if !(self.x_min > 1.0 && self.x_max > self.x_min && self.x_max.is_finite()) {
            return Err(Error::InvalidInput(format!("x range [{}, {}]", self.x_min, self.x_max)));
        }
        if !(self.lambda_max > 1.0 && self.lambda_max.is_finite()) {
            return Err(Error::InvalidInput(format!("lambda_max {}", self.lambda_max)));
        }
        if self.samples < 2 || self.functions.is_empty() {
            return Err(Error::InvalidInput("need at least two samples and one test function".into()));
        }
        self.functions.iter().try_for_each(TestFunction::validate)?;
        self.models.iter().try_for_each(|k| ModelSequence::new(*k, self.model_terms.max(1)).map(|_| ()))
    }
}

/// `(Mh, MMh)` on the uniform grid `lambda_k = e^{k step}` up to `log = u_max`.
fn iterated_means(h: &TestFunction, step: f64, u_max: f64) -> Result<(FunctionalCurve, FunctionalCurve)> {
    let count = (u_max / step).ceil() as usize;
    let grid: Vec<f64> = (0..=count).map(|k| (k as f64 * step).exp()).collect();
    let hc = FunctionalCurve::new(grid, (0..=count).map(|k| h.eval_log(k as f64 * step)).collect(), Scale::Logarithmic)?;
    let m = cesaro_mean(&hc)?;
    let mut mg = vec![1.0];
    mg.extend_from_slice(m.grid());
    let mut mv = vec![h.eval_log(0.0)];
    mv.extend_from_slice(m.values());
    let m = FunctionalCurve::new(mg, mv, Scale::Logarithmic)?;
    let mm = cesaro_mean(&m)?;
    Ok((m, mm))
}

fn iterated_mean_report(config: &CesaroConfig) -> Result<(CheckReport, CheckReport)> {
    let mut ineq = CheckReport::new("iterated-mean-doubling", MarginKind::Slack, config.seed);
    let mut closed = CheckReport::new("iterated-mean-closed-form", MarginKind::Deviation, config.seed);
    let step = config.log_step;
    let k_lo = (config.x_min.ln() / step).ceil() as usize;
    let k_hi = (config.x_max.ln() / step).floor() as usize;
    let ks: Vec<usize> = geometric_grid(k_lo as f64, k_hi as f64, config.samples)?
        .into_iter()
        .map(|k| k.round() as usize)
        .collect();
    let c = std::f64::consts::LN_2 / 2.0;
    for h in &config.functions {
        let (m, mm) = iterated_means(h, step, 2.0 * k_hi as f64 * step + step)?;
        for &k in &ks {
            // grid index j holds log lambda = j step, and Mh starts at index 0
            let x = m.grid()[k];
            let mh = m.values()[k];
            let mmh_sq = mm.values()[2 * k - 1];
            let margin = scalar_slack(c * mh, mmh_sq);
            ineq.push(
                InstanceRecord::new(format!("{} x={x:.4}", h.label()), margin, margin >= 0.0)
                    .with("mh", mh)
                    .with("mmh_x2", mmh_sq),
            )?;
            let exact = iterated_mean_closed_form(h, x)?;
            let got = mm.values()[k - 1];
            // relative to the larger of the exact value and Mh(x)
            let scale = exact.abs().max(mh.abs());
            let dev = if scale == 0.0 { got.abs() } else { (got - exact).abs() / scale };
            closed.push(
                InstanceRecord::new(format!("{} x={x:.4}", h.label()), dev, dev <= config.closed_form_tolerance)
                    .with("closed_form", exact)
                    .with("trapezoid", got),
            )?;
        }
    }
    Ok((ineq, closed))
}

/// Grid suprema of `f_T` and `M f_T`, and the weak-L1 quasinorm.
pub fn classify_model(model: &ModelSequence, lambda_max: f64, threshold: f64) -> Result<(ModelClass, f64, f64, f64)> {
    let lambdas = geometric_grid(1e-2, lambda_max, 600)?;
    let f_sup = lambdas.iter().map(|&l| model.heat_sum(l) / l).fold(0.0, f64::max);
    let targets = geometric_grid(1.05, lambda_max, 120)?;
    let (mf, _) = cesaro_function(|l| model.heat_sum(l) / l, &targets, 0.02)?;
    let mf_sup = mf.max_value();
    let weak = weak_l1_quasinorm(model);
    let class = if f_sup <= threshold {
        ModelClass::WeakL1
    } else if mf_sup <= threshold {
        ModelClass::ZetaNotWeakL1
    } else {
        ModelClass::Outside
    };
    Ok((class, f_sup, mf_sup, weak))
}

fn classification_report(config: &CesaroConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("heat-profile-classification", MarginKind::Deviation, config.seed);
    for &kind in &config.models {
        let model = ModelSequence::new(kind, config.model_terms)?;
        let (class, f_sup, mf_sup, weak) = classify_model(&model, config.lambda_max, config.unbounded_threshold)?;
        let expected = ModelClass::expected(&kind);
        let ok = class == expected;
        report.push(
            InstanceRecord::new(format!("{kind:?} -> {class:?} (expected {expected:?})"), f64::from(!ok), ok)
                .with("f_sup", f_sup)
                .with("mf_sup", mf_sup)
                .with("weak_l1", weak)
                .with("class", class.code())
                .with("expected_class", expected.code()),
        )?;
    }
    Ok(report)
}

pub fn check_cesaro_suite(config: &CesaroConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let (ineq, closed) = iterated_mean_report(config)?;
    Ok(vec![ineq, closed, classification_report(config)?])
}
