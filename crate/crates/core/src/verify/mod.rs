//! Verification suites: identities, operator inequalities, Cesàro-mean
//! facts, limit statements and lattice geometry, each producing
//! [`CheckReport`]s with per-instance margins.

mod cesaro;
mod geometry;
mod identity;
mod inequality;
mod limit;

use std::collections::BTreeMap;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

pub use cesaro::{check_cesaro_suite, classify_model, iterated_mean_closed_form, CesaroConfig, ModelClass, TestFunction};
pub use geometry::{check_geometry_suite, dixmier_of_product, spectral_dimension, GeometryCheck, GeometryConfig, MIN_LATTICE_SITES};
pub use identity::{check_exact_identity_suite, IdentityConfig};
pub use inequality::{check_inequality_suite, InequalityConfig, SubCheck};
pub use limit::{check_limit_suite, LimitCheck, LimitConfig};

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, DenseHermitian, Matrix};
use crate::random::Rng64;

/// Relative PSD slack accepted as passing.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarginKind {
    /// Smallest relative slack of an inequality; negative means violated.
    Slack,
    /// Largest deviation of an identity.
    Deviation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub label: String,
    pub margin: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
}

impl InstanceRecord {
    pub fn new(label: impl Into<String>, margin: f64, pass: bool) -> Self {
        Self { label: label.into(), margin, pass, values: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.values.insert(key.to_string(), value);
        self
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub kind: MarginKind,
    pub instances: usize,
    pub passes: usize,
    pub worst_margin: f64,
    pub seed: u64,
    pub details: Vec<InstanceRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CheckReport {
    pub fn new(id: impl Into<String>, kind: MarginKind, seed: u64) -> Self {
        Self {
            id: id.into(),
            kind,
            instances: 0,
            passes: 0,
            worst_margin: 0.0,
            seed,
            details: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, rec: InstanceRecord) -> Result<()> {
        if !rec.margin.is_finite() {
            return Err(Error::InvalidOperator(format!("{} / {}: non-finite margin", self.id, rec.label)));
        }
        self.worst_margin = match (self.instances, self.kind) {
            (0, _) => rec.margin,
            (_, MarginKind::Slack) => self.worst_margin.min(rec.margin),
            (_, MarginKind::Deviation) => self.worst_margin.max(rec.margin),
        };
        self.instances += 1;
        self.passes += usize::from(rec.pass);
        self.details.push(rec);
        Ok(())
    }

    pub fn extend(&mut self, recs: impl IntoIterator<Item = InstanceRecord>) -> Result<()> {
        recs.into_iter().try_for_each(|r| self.push(r))
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn passed(&self) -> bool {
        self.passes == self.instances
    }

    pub fn find(&self, label: &str) -> Option<&InstanceRecord> {
        self.details.iter().find(|r| r.label == label)
    }
}

/// Configuration document for one suite, tagged by `suite`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "kebab-case")]
pub enum SuiteConfig {
    Identity(IdentityConfig),
    Inequality(InequalityConfig),
    Cesaro(CesaroConfig),
    Limit(LimitConfig),
    Geometry(GeometryConfig),
}

impl SuiteConfig {
    pub fn name(&self) -> &'static str {
        match self {
            SuiteConfig::Identity(_) => "identity",
            SuiteConfig::Inequality(_) => "inequality",
            SuiteConfig::Cesaro(_) => "cesaro",
            SuiteConfig::Limit(_) => "limit",
            SuiteConfig::Geometry(_) => "geometry",
        }
    }

    pub fn default_for(name: &str) -> Result<Self> {
        Ok(match name {
            "identity" => SuiteConfig::Identity(IdentityConfig::default()),
            "inequality" => SuiteConfig::Inequality(InequalityConfig::default()),
            "cesaro" => SuiteConfig::Cesaro(CesaroConfig::default()),
            "limit" => SuiteConfig::Limit(LimitConfig::default()),
            "geometry" => SuiteConfig::Geometry(GeometryConfig::default()),
            other => return Err(Error::InvalidInput(format!("unknown suite {other:?}"))),
        })
    }

    pub fn seed(&self) -> u64 {
        match self {
            SuiteConfig::Identity(c) => c.seed,
            SuiteConfig::Inequality(c) => c.seed,
            SuiteConfig::Cesaro(c) => c.seed,
            SuiteConfig::Limit(c) => c.seed,
            SuiteConfig::Geometry(c) => c.seed,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            SuiteConfig::Identity(c) => c.seed = seed,
            SuiteConfig::Inequality(c) => c.seed = seed,
            SuiteConfig::Cesaro(c) => c.seed = seed,
            SuiteConfig::Limit(c) => c.seed = seed,
            SuiteConfig::Geometry(c) => c.seed = seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SuiteConfig::Identity(c) => c.validate(),
            SuiteConfig::Inequality(c) => c.validate(),
            SuiteConfig::Cesaro(c) => c.validate(),
            SuiteConfig::Limit(c) => c.validate(),
            SuiteConfig::Geometry(c) => c.validate(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let checks = match config {
        SuiteConfig::Identity(c) => check_exact_identity_suite(c)?,
        SuiteConfig::Inequality(c) => check_inequality_suite(c)?,
        SuiteConfig::Cesaro(c) => check_cesaro_suite(c)?,
        SuiteConfig::Limit(c) => check_limit_suite(c)?,
        SuiteConfig::Geometry(c) => check_geometry_suite(c)?,
    };
    let pass = checks.iter().all(CheckReport::passed);
    Ok(SuiteReport { suite: config.name().to_string(), seed: config.seed(), checks, pass })
}

pub(crate) fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidInput(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

/// Independent stream per `(seed, stream, index)` so instances can run in
/// any order.
pub(crate) fn instance_rng(seed: u64, stream: u64, index: u64) -> Rng64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    Rng64::seed_from_u64(z ^ (z >> 31))
}

/// `(min eig(rhs - lhs) / scale, scale)` with `scale` the larger spectral
/// radius of the two sides.
pub(crate) fn psd_slack(lhs: &Matrix, rhs: &Matrix) -> Result<(f64, f64)> {
    let radius = |m: &Matrix| -> Result<f64> {
        let v = eigvalsh(&DenseHermitian::hermitian_part(m.clone())?)?;
        Ok(v.iter().fold(0.0_f64, |a, x| a.max(x.abs())))
    };
    let scale = radius(lhs)?.max(radius(rhs)?).max(f64::MIN_POSITIVE);
    let diff = eigvalsh(&DenseHermitian::hermitian_part(rhs.try_sub(lhs)?)?)?;
    Ok((diff[0] / scale, scale))
}

/// Relative slack of the scalar inequality `lhs <= rhs`.
pub(crate) fn scalar_slack(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (rhs - lhs) / scale
    }
}
