//! Dense self-adjoint linear algebra.

mod eigen;
mod jacobi;
mod matrix;

use std::ops::Deref;

pub use eigen::{eigh, eigvalsh, tridiagonal_eigenvalues};
pub use jacobi::eigh_jacobi;
pub use matrix::{Matrix, C64};

use crate::error::{Error, Result};
use crate::trace_space::{mu, TraceWeights};

/// Relative asymmetry accepted by [`DenseHermitian::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_CLAMP * ||A||, 0)` are treated as zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Self-adjoint square matrix. Always exactly Hermitian after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseHermitian {
    m: Matrix,
}

impl DenseHermitian {
    /// Checks symmetry to [`HERMITIAN_TOL`] relative to the largest entry,
    /// then stores the Hermitian part `(A + A*) / 2`.
    pub fn new(m: Matrix) -> Result<Self> {
        Self::validate_shape(&m)?;
        let asym = m.max_abs_diff(&m.adjoint());
        let scale = m.max_abs();
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::InvalidOperator(format!(
                "asymmetry {asym:e} exceeds tolerance at scale {scale:e}"
            )));
        }
        Ok(Self::symmetrized(m))
    }

    /// Hermitian part `(A + A*) / 2` without a symmetry check. Meant for
    /// products that are self-adjoint up to rounding.
    pub fn hermitian_part(m: Matrix) -> Result<Self> {
        Self::validate_shape(&m)?;
        Ok(Self::symmetrized(m))
    }

    fn validate_shape(m: &Matrix) -> Result<()> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::ShapeError(format!("{}x{} is not a nonempty square", m.rows(), m.cols())));
        }
        if !m.is_finite() {
            return Err(Error::InvalidOperator("non-finite entries".into()));
        }
        Ok(())
    }

    fn symmetrized(m: Matrix) -> Self {
        let n = m.rows();
        let mut out = m;
        for i in 0..n {
            out[(i, i)] = C64::new(out[(i, i)].re, 0.0);
            for j in i + 1..n {
                let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        Self { m: out }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: Matrix::identity(n) }
    }

    pub fn from_diag(values: &[f64]) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidOperator("non-finite diagonal".into()));
        }
        Self::hermitian_part(Matrix::from_diag(values))
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.m[(i, i)].re).collect()
    }

    /// `B* A B`, Hermitian by construction.
    pub fn congruence(&self, b: &Matrix) -> Result<DenseHermitian> {
        let ab = self.m.matmul(b)?;
        Self::hermitian_part(b.adjoint().matmul(&ab)?)
    }

    pub fn scale(&self, c: f64) -> DenseHermitian {
        Self { m: self.m.scale(c) }
    }
}

impl Deref for DenseHermitian {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.m
    }
}

/// `A = V diag(values) V*` with ascending `values`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenDecomposition {
    /// `V diag(f(values)) V*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<DenseHermitian> {
        let fv = self.mapped_values(f)?;
        self.reconstruct(&fv)
    }

    pub fn mapped_values(&self, f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        self.values
            .iter()
            .map(|&x| {
                let y = f(x);
                if y.is_nan() {
                    Err(Error::DomainError(format!("function undefined at eigenvalue {x}")))
                } else {
                    Ok(y)
                }
            })
            .collect()
    }

    /// `V diag(d) V*` for an arbitrary real `d`.
    pub fn reconstruct(&self, d: &[f64]) -> Result<DenseHermitian> {
        if d.len() != self.values.len() {
            return Err(Error::ShapeError(format!("{} values for dimension {}", d.len(), self.values.len())));
        }
        let w = self.vectors.mul_diag_right(d);
        DenseHermitian::hermitian_part(w.matmul(&self.vectors.adjoint())?)
    }

    pub fn power(&self, s: f64) -> Result<DenseHermitian> {
        let d = power_values(&self.values, s)?;
        self.reconstruct(&d)
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A V - V diag(values)|`.
    pub fn residual(&self, a: &Matrix) -> f64 {
        let av = a * &self.vectors;
        let vl = self.vectors.mul_diag_right(&self.values);
        av.max_abs_diff(&vl)
    }

    /// `max |V* V - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = &self.vectors.adjoint() * &self.vectors;
        g.max_abs_diff(&Matrix::identity(g.rows()))
    }
}

/// Maps eigenvalues through `x -> x^s`, clamping tiny negatives to 0.
pub fn power_values(values: &[f64], s: f64) -> Result<Vec<f64>> {
    if !s.is_finite() {
        return Err(Error::InvalidExponent(s));
    }
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    values
        .iter()
        .map(|&x| {
            let x = if x < 0.0 && x >= -PSD_CLAMP * scale { 0.0 } else { x };
            if x < 0.0 {
                return Err(Error::NotPositive(format!("eigenvalue {x:e}")));
            }
            if x == 0.0 {
                return if s < 0.0 {
                    Err(Error::Singular("zero eigenvalue under a negative power".into()))
                } else if s == 0.0 {
                    Ok(1.0)
                } else {
                    Ok(0.0)
                };
            }
            Ok(x.powf(s))
        })
        .collect()
}

pub fn apply_function(a: &DenseHermitian, f: impl Fn(f64) -> f64) -> Result<DenseHermitian> {
    eigh(a)?.map(f)
}

pub fn fractional_power(a: &DenseHermitian, s: f64) -> Result<DenseHermitian> {
    eigh(a)?.power(s)
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::ShapeError(format!(
            "{}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    a.matmul(b)?.try_sub(&b.matmul(a)?)
}

/// Unweighted singular values, descending, via the smaller Gram matrix.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    let gram = if m.rows() < m.cols() { m * &m.adjoint() } else { &m.adjoint() * m };
    let mut vals = eigvalsh(&DenseHermitian::hermitian_part(gram)?)?;
    vals.reverse();
    Ok(vals.into_iter().map(|v| v.max(0.0).sqrt()).collect())
}

pub fn op_norm(m: &Matrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Schatten exponent: finite `p >= 1` or the operator norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Schatten {
    P(f64),
    Infinity,
}

impl Schatten {
    pub fn from_f64(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Self::P(p))
        } else {
            Err(Error::InvalidExponent(p))
        }
    }
}

/// `(sum_i w_i mu_i(A)^p)^{1/p}` over weighted singular values.
pub fn schatten_norm(a: &Matrix, p: f64, weights: &TraceWeights) -> Result<f64> {
    match Schatten::from_f64(p)? {
        Schatten::Infinity => op_norm(a),
        Schatten::P(p) => {
            let svf = mu(a, weights)?;
            let sum: f64 = svf.steps().iter().map(|s| s.width * s.value.powf(p)).sum();
            Ok(sum.powf(1.0 / p))
        }
    }
}

/// Unit-weight Schatten norm from precomputed singular values.
pub fn schatten_from_singular(sv: &[f64], p: Schatten) -> f64 {
    match p {
        Schatten::Infinity => sv.iter().fold(0.0, |m, &v| m.max(v)),
        Schatten::P(p) => sv.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p),
    }
}

/// Minimum eigenvalue, the PSD slack of a Hermitian difference.
pub fn min_eigenvalue(a: &DenseHermitian) -> Result<f64> {
    Ok(eigvalsh(a)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_psd, seeded};

    fn diag(v: &[f64]) -> DenseHermitian {
        DenseHermitian::from_diag(v).unwrap()
    }

    #[test]
    fn identity_and_diagonal_spectra() {
        let e = eigh(&DenseHermitian::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        assert!(e.orthonormality_error() < 1e-15);
        let e = eigh(&diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn random_64_residual_and_orthonormality() {
        let mut rng = seeded(7);
        for real in [false, true] {
            let a = random_hermitian(64, real, &mut rng);
            let e = eigh(&a).unwrap();
            let scale = e.norm();
            assert!(e.residual(&a) < 1e-10 * scale, "residual {}", e.residual(&a));
            assert!(e.orthonormality_error() < 1e-10);
        }
    }

    #[test]
    fn ql_agrees_with_jacobi_oracle() {
        let mut rng = seeded(11);
        for n in [1, 2, 3, 8, 17, 40] {
            let a = random_hermitian(n, false, &mut rng);
            let ql = eigh(&a).unwrap();
            let jac = eigh_jacobi(&a).unwrap();
            for (x, y) in ql.values.iter().zip(&jac.values) {
                assert!((x - y).abs() < 1e-11, "n={n}: {x} vs {y}");
            }
            assert!(jac.residual(&a) < 1e-10 * jac.norm().max(1.0));
            let vals = eigvalsh(&a).unwrap();
            for (x, y) in vals.iter().zip(&jac.values) {
                assert!((x - y).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn degenerate_spectrum_stays_orthonormal() {
        let mut rng = seeded(3);
        let q = crate::random::random_unitary(12, false, &mut rng);
        let d: Vec<f64> = (0..12).map(|i| (i / 4) as f64).collect();
        let a = DenseHermitian::hermitian_part(&q.mul_diag_right(&d) * &q.adjoint()).unwrap();
        let e = eigh(&a).unwrap();
        assert!(e.orthonormality_error() < 1e-12);
        assert!(e.residual(&a) < 1e-12);
    }

    #[test]
    fn non_finite_is_rejected() {
        let mut m = Matrix::identity(2);
        m[(0, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(DenseHermitian::new(m), Err(Error::InvalidOperator(_))));
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let m = Matrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(DenseHermitian::new(m.clone()).is_err());
        let h = DenseHermitian::hermitian_part(m).unwrap();
        assert_eq!(h[(0, 1)], C64::new(1.0, 0.0));
    }

    #[test]
    fn functional_calculus_examples() {
        let mut rng = seeded(5);
        let a = random_hermitian(10, false, &mut rng);
        let id = apply_function(&a, |x| x).unwrap();
        assert!(id.max_abs_diff(&a) < 1e-12);
        let sq = apply_function(&diag(&[1.0, 2.0]), |x| x * x).unwrap();
        assert!(sq.max_abs_diff(&diag(&[1.0, 4.0])) < 1e-14);
        let p = random_psd(10, false, &mut rng);
        let e = eigh(&p).unwrap();
        let prod = &*e.map(|x| (-x).exp()).unwrap() * &*e.map(f64::exp).unwrap();
        assert!(prod.max_abs_diff(&Matrix::identity(10)) < 1e-12);
        assert!(matches!(
            apply_function(&diag(&[-1.0, 1.0]), f64::sqrt),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn fractional_power_examples() {
        let i = DenseHermitian::identity(4);
        assert!(fractional_power(&i, 0.37).unwrap().max_abs_diff(&i) < 1e-14);
        let r = fractional_power(&diag(&[4.0, 9.0]), 0.5).unwrap();
        assert!(r.max_abs_diff(&diag(&[2.0, 3.0])) < 1e-14);
        let mut rng = seeded(9);
        let a = random_psd(12, false, &mut rng);
        let c = fractional_power(&a, 1.0 / 3.0).unwrap();
        let cube = &(&*c * &*c) * &*c;
        assert!(cube.max_abs_diff(&a) < 1e-9);
        assert!(matches!(fractional_power(&diag(&[-1.0, 1.0]), 0.5), Err(Error::NotPositive(_))));
        assert!(matches!(fractional_power(&diag(&[0.0, 1.0]), -0.5), Err(Error::Singular(_))));
        let tiny = fractional_power(&diag(&[-1e-12, 1.0]), 0.5).unwrap();
        assert_eq!(tiny[(0, 0)].re, 0.0);
    }

    #[test]
    fn commutator_examples() {
        let mut rng = seeded(1);
        let a = random_hermitian(5, false, &mut rng);
        assert!(commutator(&a, &Matrix::identity(5)).unwrap().max_abs() < 1e-15);
        assert_eq!(commutator(&diag(&[1.0, 2.0]), &diag(&[3.0, 4.0])).unwrap().max_abs(), 0.0);
        let x = Matrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let y = Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let c = commutator(&x, &y).unwrap();
        let expect = Matrix::from_real(2, 2, &[0.0, -2.0, 2.0, 0.0]).unwrap();
        assert_eq!(c, expect);
        assert!(matches!(commutator(&x, &Matrix::identity(3)), Err(Error::ShapeError(_))));
    }

    #[test]
    fn schatten_examples() {
        let n = 6;
        let w = TraceWeights::unit(n);
        assert!((schatten_norm(&Matrix::identity(n), 1.0, &w).unwrap() - n as f64).abs() < 1e-12);
        let w2 = TraceWeights::unit(2);
        assert!((schatten_norm(&diag(&[3.0, -4.0]), 2.0, &w2).unwrap() - 5.0).abs() < 1e-12);
        assert!((schatten_norm(&diag(&[3.0, -4.0]), f64::INFINITY, &w2).unwrap() - 4.0).abs() < 1e-12);
        assert!(matches!(schatten_norm(&diag(&[1.0]), 0.5, &TraceWeights::unit(1)), Err(Error::InvalidExponent(_))));
    }
}
