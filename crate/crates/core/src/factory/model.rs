//! Sequence-mode operators: prescribed `mu_n` enumerated lazily with
//! Euler-Maclaurin tails for spectral sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gl_panel, semi_infinite};
use crate::trace_space::{PowerSums, StepProfile};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelKind {
    /// `c / n`.
    Harmonic { c: f64 },
    /// `1 / (n log(n + 1))`.
    LogHarmonic,
    /// `n^{-1/q}`.
    Power { q: f64 },
    /// `1 / n^2`.
    Square,
}

impl ModelKind {
    /// `log mu(x)` at `x = e^v`, continued to real arguments.
    pub fn ln_mu(&self, v: f64) -> f64 {
        match *self {
            ModelKind::Harmonic { c } => c.ln() - v,
            ModelKind::LogHarmonic => -v - ln_log1p_exp(v).ln(),
            ModelKind::Power { q } => -v / q,
            ModelKind::Square => -2.0 * v,
        }
    }

    /// `d log mu / d log x`.
    fn dln_mu(&self, v: f64) -> f64 {
        match *self {
            ModelKind::Harmonic { .. } => -1.0,
            ModelKind::LogHarmonic => {
                let l = ln_log1p_exp(v);
                let frac = 1.0 / (1.0 + (-v).exp());
                -1.0 - frac / l
            }
            ModelKind::Power { q } => -1.0 / q,
            ModelKind::Square => -2.0,
        }
    }

    /// `(c, a)` when `mu(x) = c x^{-a}` exactly.
    fn pure_power(&self) -> Option<(f64, f64)> {
        match *self {
            ModelKind::Harmonic { c } => Some((c, 1.0)),
            ModelKind::Power { q } => Some((1.0, 1.0 / q)),
            ModelKind::Square => Some((1.0, 2.0)),
            ModelKind::LogHarmonic => None,
        }
    }

    pub fn value(&self, n: usize) -> f64 {
        let x = n as f64;
        match *self {
            ModelKind::Harmonic { c } => c / x,
            ModelKind::LogHarmonic => 1.0 / (x * x.ln_1p()),
            ModelKind::Power { q } => x.powf(-1.0 / q),
            ModelKind::Square => 1.0 / (x * x),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ModelKind::Harmonic { c } if !(c > 0.0 && c.is_finite()) => {
                Err(Error::InvalidInput(format!("harmonic constant {c}")))
            }
            ModelKind::Power { q } if !(q > 0.0 && q.is_finite()) => Err(Error::InvalidInput(format!("power q = {q}"))),
            _ => Ok(()),
        }
    }
}

/// `log(log(1 + e^v))` without overflow.
fn ln_log1p_exp(v: f64) -> f64 {
    if v > 30.0 {
        v + (-v).exp().ln_1p()
    } else {
        v.exp().ln_1p()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailPolicy {
    /// The infinite sequence: explicit head plus an Euler-Maclaurin tail.
    EulerMaclaurin,
    /// Exactly the first `N` terms, as a finite diagonal would give.
    Truncate,
}

/// Terms summed explicitly before the tail formula takes over.
pub const EXPLICIT_TERMS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSequence {
    pub kind: ModelKind,
    /// Steps enumerated for partial sums and suprema.
    pub n: usize,
    pub tail: TailPolicy,
}

/// Builds a sequence-mode model by name: `harmonic` (`params = [c]`, default
/// 1), `log-harmonic`, `power` (`params = [q]`), `square`.
pub fn model_diagonal(kind: &str, n: usize, params: &[f64]) -> Result<ModelSequence> {
    let kind = match kind {
        "harmonic" => ModelKind::Harmonic { c: params.first().copied().unwrap_or(1.0) },
        "log-harmonic" => ModelKind::LogHarmonic,
        "power" => ModelKind::Power {
            q: *params.first().ok_or_else(|| Error::InvalidInput("power model needs q".into()))?,
        },
        "square" => ModelKind::Square,
        other => return Err(Error::InvalidInput(format!("unknown model kind {other:?}"))),
    };
    ModelSequence::new(kind, n)
}

impl ModelSequence {
    pub fn new(kind: ModelKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("model needs N >= 1".into()));
        }
        kind.validate()?;
        Ok(Self { kind, n, tail: TailPolicy::EulerMaclaurin })
    }

    pub fn truncated(mut self) -> Self {
        self.tail = TailPolicy::Truncate;
        self
    }

    pub fn values(&self) -> Vec<f64> {
        (1..=self.n).map(|k| self.kind.value(k)).collect()
    }

    fn head_len(&self) -> usize {
        match self.tail {
            TailPolicy::EulerMaclaurin => EXPLICIT_TERMS,
            TailPolicy::Truncate => self.n,
        }
    }

    /// `sum_{n > m} f(n) ~ int_m^inf f - f(m)/2 - f'(m)/12`, with `f` given
    /// through `ln f(e^v)` and its `v`-derivative.
    fn em_tail(m: usize, integral: f64, ln_f: impl Fn(f64) -> f64, dln_f: impl Fn(f64) -> f64) -> f64 {
        let x = m as f64;
        let v = x.ln();
        let fm = ln_f(v).exp();
        let dfm = fm * dln_f(v) / x;
        integral - fm / 2.0 - dfm / 12.0
    }

    /// `sum_{n > m} mu_n^s`.
    pub fn power_tail(&self, m: usize, s: f64) -> f64 {
        let x = m as f64;
        if let Some((c, a)) = self.kind.pure_power() {
            let b = a * s;
            if b <= 1.0 {
                return f64::INFINITY;
            }
            let poly = x.powf(1.0 - b) / (b - 1.0) - x.powf(-b) / 2.0 + b * x.powf(-b - 1.0) / 12.0
                - b * (b + 1.0) * (b + 2.0) * x.powf(-b - 3.0) / 720.0;
            return c.powf(s) * poly;
        }
        if s <= 1.0 {
            return f64::INFINITY;
        }
        let kind = self.kind;
        let ln_f = move |v: f64| s * kind.ln_mu(v);
        let integral = semi_infinite(|v| (v + ln_f(v)).exp(), x.ln(), 1.0);
        Self::em_tail(m, integral, ln_f, |v| s * kind.dln_mu(v))
    }

    /// `sum_{n > m} exp(-1 / (lambda mu_n))`.
    pub fn heat_tail(&self, m: usize, lambda: f64) -> f64 {
        let x = m as f64;
        let kind = self.kind;
        let ln_f = move |v: f64| -(-kind.ln_mu(v)).exp() / lambda;
        let dln_f = move |v: f64| (-kind.ln_mu(v)).exp() / lambda * kind.dln_mu(v);
        let integral = match kind {
            ModelKind::Harmonic { c } => c * lambda * (-x / (c * lambda)).exp(),
            _ => stepped_integral(|v| (v + ln_f(v)).exp(), x.ln()),
        };
        Self::em_tail(m, integral, ln_f, dln_f)
    }
}

/// `int_a^inf g(v) dv` for integrands that rise at most exponentially and
/// then collapse, using fixed-width panels until the contribution vanishes.
fn stepped_integral(mut g: impl FnMut(f64) -> f64, a: f64) -> f64 {
    let h = 0.25;
    let mut total = 0.0;
    let mut peak: f64 = 0.0;
    let mut lo = a;
    for _ in 0..100_000 {
        let part = gl_panel(&mut g, lo, lo + h);
        total += part;
        peak = peak.max(part.abs());
        lo += h;
        if part.abs() <= 1e-18 * total.abs() && part.abs() < peak {
            break;
        }
        if total == 0.0 && lo > a + 800.0 {
            break;
        }
    }
    total
}

impl PowerSums for ModelSequence {
    fn power_sum(&self, s: f64) -> f64 {
        let m = self.head_len();
        let head: f64 = (1..=m).map(|k| self.kind.value(k).powf(s)).sum();
        match self.tail {
            TailPolicy::Truncate => head,
            TailPolicy::EulerMaclaurin => head + self.power_tail(m, s),
        }
    }

    fn heat_sum(&self, lambda: f64) -> f64 {
        let m = self.head_len();
        let mut head = 0.0;
        for k in 1..=m {
            let arg = 1.0 / (lambda * self.kind.value(k));
            if arg > 745.0 {
                // mu is decreasing, so every later term underflows too
                return head;
            }
            head += (-arg).exp();
        }
        match self.tail {
            TailPolicy::Truncate => head,
            TailPolicy::EulerMaclaurin => head + self.heat_tail(m, lambda).max(0.0),
        }
    }

    fn effective_rank(&self) -> Option<f64> {
        match self.tail {
            TailPolicy::EulerMaclaurin => None,
            TailPolicy::Truncate => Some(self.n as f64),
        }
    }
}

impl StepProfile for ModelSequence {
    fn for_each_step(&self, f: &mut dyn FnMut(f64, f64) -> bool) {
        for k in 1..=self.n {
            if !f(1.0, self.kind.value(k)) {
                break;
            }
        }
    }

    fn total_width(&self) -> f64 {
        self.n as f64
    }

    fn first_value(&self) -> f64 {
        self.kind.value(1)
    }

    fn last_value(&self) -> f64 {
        self.kind.value(self.n)
    }
}
