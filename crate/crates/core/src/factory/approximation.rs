//! Spectral truncations `P_n = chi_(1/n, ||a||](a)` and their smooth
//! counterparts `phi_n(a)`.

use super::profile::smooth_transition_profile;
use crate::error::{Error, Result};
use crate::linalg::{eigh, min_eigenvalue, DenseHermitian, EigenDecomposition, Matrix, PSD_CLAMP};

/// Eigenvalues within this distance of `1/n` count as ties and are excluded.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct ApproximationPair {
    pub index: usize,
    pub projection: DenseHermitian,
    pub cutoff: DenseHermitian,
}

fn projection_weight(lambda: f64, n: usize) -> f64 {
    if lambda > 1.0 / n as f64 + TIE_TOL {
        1.0
    } else {
        0.0
    }
}

fn cutoff_weight(lambda: f64, n: usize) -> f64 {
    let hi = 1.0 / n as f64;
    let lo = 1.0 / (n + 1) as f64;
    smooth_transition_profile(lambda, lo, hi).expect("lo < hi")
}

fn check_psd(eig: &EigenDecomposition) -> Result<()> {
    let scale = eig.norm().max(1.0);
    match eig.values.first() {
        Some(&l) if l < -PSD_CLAMP * scale => Err(Error::NotPositive(format!("eigenvalue {l:e}"))),
        _ => Ok(()),
    }
}

/// `(P_n, phi_n(a))` for a PSD `a`.
pub fn approximation_scheme(a: &DenseHermitian, n: usize) -> Result<ApproximationPair> {
    approximation_from_decomposition(&eigh(a)?, n)
}

/// Same as [`approximation_scheme`] with a precomputed decomposition, for
/// sweeping `n`.
pub fn approximation_from_decomposition(eig: &EigenDecomposition, n: usize) -> Result<ApproximationPair> {
    if n == 0 {
        return Err(Error::InvalidInput("index n must be positive".into()));
    }
    check_psd(eig)?;
    Ok(ApproximationPair {
        index: n,
        projection: eig.map(|l| projection_weight(l, n))?,
        cutoff: eig.map(|l| cutoff_weight(l, n))?,
    })
}

impl ApproximationPair {
    /// `a P_n`, which commutes with `a`.
    pub fn truncated(&self, a: &DenseHermitian) -> Result<DenseHermitian> {
        Ok(DenseHermitian::hermitian_part(a.matrix().matmul(self.projection.matrix())?)?)
    }

    /// `a phi_n(a)`.
    pub fn smoothed(&self, a: &DenseHermitian) -> Result<DenseHermitian> {
        Ok(DenseHermitian::hermitian_part(a.matrix().matmul(self.cutoff.matrix())?)?)
    }

    /// `||P_n^2 - P_n||_max`.
    pub fn idempotency_defect(&self) -> f64 {
        let p = self.projection.matrix();
        (p * p).max_abs_diff(p)
    }
}

/// `min eig(b - a)`; nonnegative up to rounding when `a <= b`.
pub fn domination_margin(a: &DenseHermitian, b: &DenseHermitian) -> Result<f64> {
    let diff: Matrix = b.matrix().try_sub(a.matrix())?;
    min_eigenvalue(&DenseHermitian::hermitian_part(diff)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::op_norm;
    use crate::random::{random_psd, seeded};

    #[test]
    fn diagonal_example() {
        let a = DenseHermitian::from_diag(&[1.0, 0.3, 0.05]).unwrap();
        let pair = approximation_scheme(&a, 2).unwrap();
        assert!(pair.projection.matrix().max_abs_diff(&Matrix::from_diag(&[1.0, 0.0, 0.0])) < 1e-14);
        let tie = DenseHermitian::from_diag(&[0.5, 0.2]).unwrap();
        assert!(approximation_scheme(&tie, 2).unwrap().projection.matrix().max_abs() < 1e-14);
        let neg = DenseHermitian::from_diag(&[1.0, -0.1]).unwrap();
        assert!(matches!(approximation_scheme(&neg, 2), Err(Error::NotPositive(_))));
    }

    #[test]
    fn support_and_order() {
        let a = random_psd(24, false, &mut seeded(17));
        let eig = eigh(&a).unwrap();
        for n in 1..12 {
            let pn = approximation_from_decomposition(&eig, n).unwrap();
            let pn1 = approximation_from_decomposition(&eig, n + 1).unwrap();
            assert!(pn.idempotency_defect() < 1e-10);
            let phi = pn.cutoff.matrix();
            assert!((phi * pn1.projection.matrix()).max_abs_diff(phi) < 1e-9);
            assert!((phi * pn.projection.matrix()).max_abs_diff(pn.projection.matrix()) < 1e-9);
            assert!(domination_margin(&pn.projection, &pn.cutoff).unwrap() > -1e-10);
            assert!(domination_margin(&pn.cutoff, &pn1.projection).unwrap() > -1e-10);
            let an = pn.truncated(&a).unwrap();
            let aphi = pn.smoothed(&a).unwrap();
            let an1 = pn1.truncated(&a).unwrap();
            assert!(domination_margin(&an, &aphi).unwrap() > -1e-10);
            assert!(domination_margin(&aphi, &an1).unwrap() > -1e-10);
        }
    }

    #[test]
    fn remainder_bound() {
        let a = random_psd(30, true, &mut seeded(3));
        let eig = eigh(&a).unwrap();
        let half = eig.power(0.5).unwrap();
        for n in 2..=20 {
            let pair = approximation_from_decomposition(&eig, n).unwrap();
            let one_minus = Matrix::identity(30).try_sub(pair.cutoff.matrix()).unwrap();
            let r = op_norm(&(half.matrix() * &one_minus)).unwrap();
            assert!(r <= (n as f64).powf(-0.5) + 1e-12, "n = {n}: {r}");
        }
    }
}
