//! `(ABA)^s = A B^{1/2} (B^{1/2} A^2 B^{1/2})^{s-1} B^{1/2} A` on random
//! pairs, and the commuting-projection case `a G^s a = (a G a)^s`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_positive, instance_rng, CheckReport, InstanceRecord, MarginKind};
use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, fractional_power, DenseHermitian, Matrix};
use crate::random::{random_psd, random_unitary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentityConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub s_values: Vec<f64>,
    pub tolerance: f64,
    pub projection_tolerance: f64,
    pub seed: u64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        Self {
            dims: vec![16],
            trials: 100,
            s_values: vec![1.1, 1.5, 1.9],
            tolerance: 1e-8,
            projection_tolerance: 1e-10,
            seed: 1,
        }
    }
}

impl IdentityConfig {
    pub fn validate(&self) -> Result<()> {
        check_positive("tolerance", self.tolerance)?;
        check_positive("projection_tolerance", self.projection_tolerance)?;
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::InvalidInput("dims must be nonempty and positive".into()));
        }
        if self.s_values.is_empty() || self.s_values.iter().any(|s| !(1.0..=2.0).contains(s)) {
            return Err(Error::InvalidInput("s values must lie in [1, 2]".into()));
        }
        Ok(())
    }
}

/// `max |(ABA)^s - A B^{1/2} (B^{1/2} A^2 B^{1/2})^{s-1} B^{1/2} A|`.
pub(crate) fn identity_deviation(a: &DenseHermitian, b: &DenseHermitian, s: f64) -> Result<f64> {
    let am = a.matrix();
    let aba = DenseHermitian::hermitian_part(&(am * b.matrix()) * am)?;
    let lhs = fractional_power(&aba, s)?;
    let bh = fractional_power(b, 0.5)?;
    let inner = DenseHermitian::hermitian_part(&(bh.matrix() * &(am * am)) * bh.matrix())?;
    let mid = fractional_power(&inner, s - 1.0)?;
    let left = am * bh.matrix();
    let rhs = &(&left * mid.matrix()) * &(bh.matrix() * am);
    Ok(lhs.matrix().max_abs_diff(&rhs))
}

/// Trace norm of a Hermitian matrix.
pub(crate) fn hermitian_trace_norm(m: &Matrix) -> Result<f64> {
    Ok(eigvalsh(&DenseHermitian::hermitian_part(m.clone())?)?.iter().map(|x| x.abs()).sum())
}

pub fn check_exact_identity_suite(config: &IdentityConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let mut report = CheckReport::new("square-root-factorization", MarginKind::Deviation, config.seed);
    for &s in &config.s_values {
        let n = config.dims[0];
        let i = DenseHermitian::identity(n);
        let dev = identity_deviation(&i, &i, s)?;
        report.push(InstanceRecord::new(format!("identity-pair s={s}"), dev, dev < config.tolerance))?;
    }
    let jobs: Vec<(usize, usize)> = (0..config.trials).flat_map(|t| (0..config.s_values.len()).map(move |k| (t, k))).collect();
    let recs = jobs
        .par_iter()
        .map(|&(t, k)| {
            let mut rng = instance_rng(config.seed, 1, t as u64);
            let n = config.dims[t % config.dims.len()];
            let real = t % 2 == 0;
            let a = random_psd(n, real, &mut rng);
            let b = random_psd(n, real, &mut rng);
            let s = config.s_values[k];
            let dev = identity_deviation(&a, &b, s)?;
            Ok(InstanceRecord::new(format!("random n={n} trial={t} s={s}"), dev, dev < config.tolerance))
        })
        .collect::<Result<Vec<_>>>()?;
    report.extend(recs)?;

    let mut proj = CheckReport::new("commuting-projection", MarginKind::Deviation, config.seed);
    for (t, &s) in config.s_values.iter().enumerate() {
        let mut rng = instance_rng(config.seed, 2, t as u64);
        let n = config.dims[0];
        let q = random_unitary(n, false, &mut rng);
        let g = DenseHermitian::hermitian_part(
            &q.mul_diag_right(&(1..=n).map(|k| 1.0 / k as f64).collect::<Vec<_>>()) * &q.adjoint(),
        )?;
        let eig = eigh(&g)?;
        let half = n / 2;
        let a = eig.map(|l| if l > 1.0 / (half as f64 + 0.5) { 1.0 } else { 0.0 })?;
        let am = a.matrix();
        let gs = eig.power(s)?;
        let lhs = &(am * gs.matrix()) * am;
        let aga = DenseHermitian::hermitian_part(&(am * g.matrix()) * am)?;
        let rhs = fractional_power(&aga, s)?;
        let dev = hermitian_trace_norm(&lhs.try_sub(rhs.matrix())?)?;
        proj.push(InstanceRecord::new(format!("spectral projection n={n} s={s}"), dev, dev < config.projection_tolerance))?;
    }
    Ok(vec![report, proj])
}
