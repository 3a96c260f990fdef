//! Householder reduction to real tridiagonal form followed by implicit QL
//! with Wilkinson shifts. Real symmetric input runs entirely in `f64`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::matrix::{Matrix, C64};
use super::{DenseHermitian, EigenDecomposition};
use crate::error::{Error, Result};

pub(crate) trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn zero() -> Self;
    fn from_re(x: f64) -> Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn abs2(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn inv(self) -> Self;
    fn to_c64(self) -> C64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_re(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn abs2(self) -> f64 {
        self * self
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn inv(self) -> Self {
        1.0 / self
    }
    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }
}

impl Scalar for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn from_re(x: f64) -> Self {
        C64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        C64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn inv(self) -> Self {
        C64::new(1.0, 0.0) / self
    }
    fn to_c64(self) -> C64 {
        self
    }
}

struct Reflector<T> {
    /// Acts on indices `start..n`; `v[0] == 1`.
    start: usize,
    v: Vec<T>,
    tau: T,
}

struct Tridiagonal<T> {
    d: Vec<f64>,
    /// `e[i]` couples `i` and `i + 1`; `e[n - 1] == 0`.
    e: Vec<f64>,
    reflectors: Vec<Reflector<T>>,
}

fn tridiagonalize<T: Scalar>(mut a: Vec<T>, n: usize) -> Tridiagonal<T> {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(1));
    let mut p = vec![T::zero(); n];
    for k in 0..n.saturating_sub(1) {
        d[k] = a[k * n + k].re();
        let start = k + 1;
        let m = n - start;
        let alpha = a[start * n + k];
        let xnorm2: f64 = (start + 1..n).map(|i| a[i * n + k].abs2()).sum();
        let alpha_im2 = alpha.abs2() - alpha.re() * alpha.re();
        if xnorm2 == 0.0 && alpha_im2 <= 0.0 {
            e[k] = alpha.re();
            continue;
        }
        let norm = (alpha.abs2() + xnorm2).sqrt();
        let beta = if alpha.re() >= 0.0 { -norm } else { norm };
        let tau = (T::from_re(beta) - alpha).scale(1.0 / beta);
        let scal = (alpha - T::from_re(beta)).inv();
        let mut v = Vec::with_capacity(m);
        v.push(T::from_re(1.0));
        for i in start + 1..n {
            v.push(a[i * n + k] * scal);
        }
        e[k] = beta;

        // p = tau * A22 v
        for i in 0..m {
            let row = &a[(start + i) * n + start..(start + i) * n + n];
            let mut acc = T::zero();
            for (aij, &vj) in row.iter().zip(&v) {
                acc += *aij * vj;
            }
            p[i] = tau * acc;
        }
        // alpha2 = -1/2 tau (p^H v)
        let mut phv = T::zero();
        for i in 0..m {
            phv += p[i].conj() * v[i];
        }
        let alpha2 = (tau * phv).scale(-0.5);
        for i in 0..m {
            p[i] += alpha2 * v[i];
        }
        for i in 0..m {
            let vi = v[i];
            let wi = p[i];
            let row = &mut a[(start + i) * n + start..(start + i) * n + n];
            for j in 0..m {
                row[j] -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
        reflectors.push(Reflector { start, v, tau });
    }
    if n > 0 {
        d[n - 1] = a[(n - 1) * n + n - 1].re();
    }
    Tridiagonal { d, e, reflectors }
}

const MAX_QL_ITER: usize = 64;

/// Implicit QL on a symmetric tridiagonal matrix. When `z` is given it holds
/// the transformation stored by rows (row `i` is the `i`-th basis vector).
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Vec<Vec<f64>>>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITER {
                    return Err(Error::InvalidOperator("tridiagonal QL failed to converge".into()));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut(i + 1);
                        let zi = &mut lo[i];
                        let zi1 = &mut hi[0];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let h = *b;
                            *b = s * *a + c * h;
                            *a = c * *a - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    idx
}

fn eigvals_generic<T: Scalar>(a: Vec<T>, n: usize) -> Result<Vec<f64>> {
    let mut t = tridiagonalize(a, n);
    tql(&mut t.d, &mut t.e, None)?;
    t.d.sort_by(|a, b| a.total_cmp(b));
    Ok(t.d)
}

fn eigh_generic<T: Scalar>(a: Vec<T>, n: usize) -> Result<(Vec<f64>, Matrix)> {
    let mut t = tridiagonalize(a, n);
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            r
        })
        .collect();
    tql(&mut t.d, &mut t.e, Some(&mut z))?;
    let order = sorted_order(&t.d);
    let values: Vec<f64> = order.iter().map(|&i| t.d[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    let mut w = vec![T::zero(); n];
    for (col, &src) in order.iter().enumerate() {
        for (wi, &zi) in w.iter_mut().zip(&z[src]) {
            *wi = T::from_re(zi);
        }
        for r in t.reflectors.iter().rev() {
            let seg = &mut w[r.start..];
            let mut vhw = T::zero();
            for (vi, wi) in r.v.iter().zip(seg.iter()) {
                vhw += vi.conj() * *wi;
            }
            let coef = r.tau * vhw;
            for (vi, wi) in r.v.iter().zip(seg.iter_mut()) {
                *wi -= coef * *vi;
            }
        }
        for (row, wi) in w.iter().enumerate() {
            vectors[(row, col)] = wi.to_c64();
        }
    }
    Ok((values, vectors))
}

fn check_finite(a: &DenseHermitian) -> Result<()> {
    if a.matrix().is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidOperator("non-finite entries".into()))
    }
}

/// Full eigendecomposition with ascending eigenvalues.
pub fn eigh(a: &DenseHermitian) -> Result<EigenDecomposition> {
    check_finite(a)?;
    let n = a.n();
    let m = a.matrix();
    let (values, vectors) = if m.is_real() {
        eigh_generic(m.real_parts(), n)?
    } else {
        eigh_generic(m.data().to_vec(), n)?
    };
    Ok(EigenDecomposition { values, vectors })
}

/// Ascending eigenvalues only; avoids the cubic eigenvector accumulation.
pub fn eigvalsh(a: &DenseHermitian) -> Result<Vec<f64>> {
    check_finite(a)?;
    let n = a.n();
    let m = a.matrix();
    if m.is_real() {
        eigvals_generic(m.real_parts(), n)
    } else {
        eigvals_generic(m.data().to_vec(), n)
    }
}

/// Ascending eigenvalues of the real symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e` (`e.len() + 1 == d.len()`).
pub fn tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    if d.is_empty() || e.len() + 1 != d.len() {
        return Err(Error::ShapeError(format!("diagonal {} and off-diagonal {}", d.len(), e.len())));
    }
    let mut dd = d.to_vec();
    let mut ee = e.to_vec();
    ee.push(0.0);
    tql(&mut dd, &mut ee, None)?;
    dd.sort_by(|a, b| a.total_cmp(b));
    Ok(dd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_path_matches_closed_form() {
        // Free chain with zero diagonal and unit hopping: 2 cos(k pi / (n + 1)).
        let n = 9;
        let vals = tridiagonal_eigenvalues(&vec![0.0; n], &vec![1.0; n - 1]).unwrap();
        let mut expect: Vec<f64> =
            (1..=n).map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos()).collect();
        expect.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in vals.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn complex_two_by_two() {
        let m = Matrix::from_vec(
            2,
            2,
            vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        )
        .unwrap();
        let a = DenseHermitian::new(m).unwrap();
        let eig = eigh(&a).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);
        assert!(eig.residual(&a) < 1e-14);
    }
}
