//! The doubled pair `D~ = [[1, sqrt(D-1)], [sqrt(D-1), -1]]`, `T~ = T (+) 0`
//! with `D~^2 = D (+) D`.

use crate::error::{Error, Result};
use crate::linalg::{DenseHermitian, Matrix, C64};

const PROJECTION_TOL: f64 = 1e-10;

fn check_diag(d: &[f64]) -> Result<()> {
    if d.is_empty() {
        return Err(Error::InvalidInput("empty diagonal".into()));
    }
    if let Some(x) = d.iter().find(|x| !(x.is_finite() && **x >= 1.0)) {
        return Err(Error::DomainError(format!("diagonal entry {x} < 1")));
    }
    Ok(())
}

/// Dense `2n x 2n` pair `(D~, T~)` for a diagonal `D >= 1` and a projection `T`.
pub fn counterexample_pair(d_diag: &[f64], t: &DenseHermitian) -> Result<(DenseHermitian, DenseHermitian)> {
    check_diag(d_diag)?;
    let n = d_diag.len();
    if t.n() != n {
        return Err(Error::ShapeError(format!("projection of size {} for diagonal {n}", t.n())));
    }
    let t2 = t.matrix() * t.matrix();
    if t2.max_abs_diff(t.matrix()) > PROJECTION_TOL {
        return Err(Error::InvalidInput("T is not idempotent".into()));
    }
    let s: Vec<f64> = d_diag.iter().map(|d| (d - 1.0).sqrt()).collect();
    let dt = Matrix::from_fn(2 * n, 2 * n, |i, j| {
        let v = match (i < n, j < n) {
            (true, true) if i == j => 1.0,
            (false, false) if i == j => -1.0,
            (true, false) if j - n == i => s[i],
            (false, true) if i - n == j => s[j],
            _ => 0.0,
        };
        C64::new(v, 0.0)
    });
    let tt = Matrix::from_fn(2 * n, 2 * n, |i, j| if i < n && j < n { t[(i, j)] } else { C64::new(0.0, 0.0) });
    Ok((DenseHermitian::hermitian_part(dt)?, DenseHermitian::hermitian_part(tt)?))
}

/// Block form of the pair for `T = I`: one independent `2 x 2` block per
/// diagonal entry, which scales to `N = 10^4` and beyond.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleBlocks {
    d: Vec<f64>,
}

impl CounterexampleBlocks {
    pub fn new(d_diag: &[f64]) -> Result<Self> {
        check_diag(d_diag)?;
        Ok(Self { d: d_diag.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    fn block(&self, k: usize) -> [[f64; 2]; 2] {
        let s = (self.d[k] - 1.0).sqrt();
        [[1.0, s], [s, -1.0]]
    }

    fn inverse(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
    }

    fn mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
        let mut c = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    }

    /// Closed-form singular values of a real `2 x 2` matrix, descending.
    fn singular_values(m: [[f64; 2]; 2]) -> [f64; 2] {
        let f2 = m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1];
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
        let root = (f2 * f2 - 4.0 * det * det).max(0.0).sqrt();
        let s1 = ((f2 + root) / 2.0).sqrt();
        let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
        [s1, s2]
    }

    const PROJ: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 0.0]];

    /// Singular values of `T~ D~^{-1} T~`, descending.
    pub fn sandwich_singular_values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = (0..self.len())
            .flat_map(|k| {
                let m = Self::mul(Self::mul(Self::PROJ, Self::inverse(self.block(k))), Self::PROJ);
                Self::singular_values(m)
            })
            .collect();
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }

    /// Singular values of `D~^{-1} T~`, descending.
    pub fn product_singular_values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = (0..self.len())
            .flat_map(|k| Self::singular_values(Self::mul(Self::inverse(self.block(k)), Self::PROJ)))
            .collect();
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }

    /// `max |D~_k^2 - d_k I|` over blocks.
    pub fn square_defect(&self) -> f64 {
        (0..self.len())
            .map(|k| {
                let b = self.block(k);
                let sq = Self::mul(b, b);
                let d = self.d[k];
                (sq[0][0] - d).abs().max((sq[1][1] - d).abs()).max(sq[0][1].abs()).max(sq[1][0].abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Sum of the `k` largest entries of a descending list.
pub fn partial_trace(sv: &[f64], k: usize) -> f64 {
    sv.iter().take(k).sum()
}
