//! Cyclic complex Jacobi eigensolver. Quadratic per sweep and slow, kept as
//! an independent oracle for the Householder/QL path.

use super::matrix::{Matrix, C64};
use super::{DenseHermitian, EigenDecomposition};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

pub fn eigh_jacobi(a: &DenseHermitian) -> Result<EigenDecomposition> {
    if !a.matrix().is_finite() {
        return Err(Error::InvalidOperator("non-finite entries".into()));
    }
    let n = a.n();
    let mut m = a.matrix().clone();
    let mut v = Matrix::identity(n);
    let tol = 1e-13 * m.frobenius();
    for _ in 0..MAX_SWEEPS {
        let mut off_max: f64 = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off_max = off_max.max(m[(p, q)].norm());
            }
        }
        if off_max <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let beta = m[(p, q)];
                let b = beta.norm();
                if b <= tol * 1e-3 {
                    continue;
                }
                let phase = beta / b;
                let alpha = m[(p, p)].re;
                let gamma = m[(q, q)].re;
                let zeta = (gamma - alpha) / (2.0 * b);
                let sgn = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = -sgn / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sigma = phase * s;
                // M <- M U with U = [[c, -sigma], [conj(sigma), c]] on (p, q)
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c + mkq * sigma.conj();
                    m[(k, q)] = -mkp * sigma + mkq * c;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * sigma.conj();
                    v[(k, q)] = -vkp * sigma + vkq * c;
                }
                // M <- U^H M
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c + mqk * sigma;
                    m[(q, k)] = -mpk * sigma.conj() + mqk * c;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}
