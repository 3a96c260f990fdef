//! Seeded random instances: Gaussian matrices, Haar-ish unitaries, PSD draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{DenseHermitian, Matrix, C64};

pub type Rng64 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Uniform on `(0, 1]`.
pub fn unit_interval(rng: &mut impl Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

pub fn random_matrix(rows: usize, cols: usize, real: bool, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        let re = gaussian(rng);
        let im = if real { 0.0 } else { gaussian(rng) };
        C64::new(re, im)
    })
}

pub fn random_hermitian(n: usize, real: bool, rng: &mut impl Rng) -> DenseHermitian {
    DenseHermitian::hermitian_part(random_matrix(n, n, real, rng)).expect("square")
}

/// Orthonormalized Gaussian columns (two passes of modified Gram-Schmidt).
pub fn random_unitary(n: usize, real: bool, rng: &mut impl Rng) -> Matrix {
    let g = random_matrix(n, n, real, rng);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let qk = &done[k];
                let cj = &mut rest[0];
                let proj: C64 = qk.iter().zip(cj.iter()).map(|(a, b)| a.conj() * b).sum();
                for (c, q) in cj.iter_mut().zip(qk) {
                    *c -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for c in cols[j].iter_mut() {
            *c /= norm;
        }
    }
    Matrix::from_fn(n, n, |i, j| cols[j][i])
}

/// `Q diag(u) Q*` with eigenvalues `u` drawn by `draw`.
pub fn random_with_spectrum(n: usize, real: bool, rng: &mut impl Rng, mut draw: impl FnMut(&mut dyn rand::RngCore) -> f64) -> DenseHermitian {
    let q = random_unitary(n, real, rng);
    let u: Vec<f64> = (0..n).map(|_| draw(rng)).collect();
    DenseHermitian::hermitian_part(&q.mul_diag_right(&u) * &q.adjoint()).expect("square")
}

/// PSD with eigenvalues uniform in `(0, 1]`.
pub fn random_psd(n: usize, real: bool, rng: &mut impl Rng) -> DenseHermitian {
    random_with_spectrum(n, real, rng, |r| 1.0 - r.random::<f64>())
}
