//! Periodic lattice models: spectral Dirac operator, finite-difference
//! Laplacian, multiplication operators and circulant functions of `D`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, DenseHermitian, EigenDecomposition, Matrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub dim: usize,
    /// Sites per axis.
    pub n: usize,
    /// Box length.
    pub length: f64,
}

impl LatticeSpec {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::WrongDimension(dim));
        }
        if n < 4 {
            return Err(Error::InvalidInput(format!("lattice needs at least 4 sites, got {n}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidInput(format!("box length {length}")));
        }
        Ok(Self { dim, n, length })
    }

    pub fn line(n: usize, length: f64) -> Result<Self> {
        Self::new(1, n, length)
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Site coordinates along one axis, centred on the origin.
    pub fn positions(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n).map(|j| -self.length / 2.0 + j as f64 * h).collect()
    }

    /// Fourier mode indices `-N/2 + 1 ..= N/2` in ascending order.
    pub fn modes(&self) -> Vec<i64> {
        let half = (self.n / 2) as i64;
        (-(self.n as i64 - half) + 1..=half).collect()
    }

    /// Dirac eigenvalues `2 pi k / L`, ascending.
    pub fn dirac_eigenvalues(&self) -> Vec<f64> {
        self.modes().into_iter().map(|k| 2.0 * PI * k as f64 / self.length).collect()
    }

    /// Samples of `f` at the sites (1D).
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.positions().into_iter().map(f).collect()
    }

    /// Riemann sum `h sum_j f(x_j)`.
    pub fn riemann_integral(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.spacing() * self.positions().into_iter().map(f).sum::<f64>()
    }
}

fn require_line(spec: &LatticeSpec) -> Result<()> {
    if spec.dim != 1 {
        return Err(Error::WrongDimension(spec.dim));
    }
    Ok(())
}

fn roots_of_unity(n: usize) -> Vec<C64> {
    (0..n).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect()
}

/// Hermitian circulant `F* diag(f(lambda_k)) F` for the Dirac modes, built
/// in `O(N^2)` from its first column.
pub fn circulant_function(spec: &LatticeSpec, f: impl Fn(f64) -> f64) -> Result<DenseHermitian> {
    require_line(spec)?;
    let n = spec.n;
    let roots = roots_of_unity(n);
    let modes = spec.modes();
    let fv: Vec<f64> = spec.dirac_eigenvalues().into_iter().map(&f).collect();
    if fv.iter().any(|v| v.is_nan()) {
        return Err(Error::DomainError("function undefined on the Dirac spectrum".into()));
    }
    let col: Vec<C64> = (0..n)
        .map(|m| {
            let mut acc = C64::new(0.0, 0.0);
            for (&k, &v) in modes.iter().zip(&fv) {
                let idx = (k.rem_euclid(n as i64) as usize * m) % n;
                acc += roots[idx] * v;
            }
            acc / n as f64
        })
        .collect();
    let mut mat = Matrix::from_fn(n, n, |j, l| col[(j + n - l) % n]);
    if is_even_on_modes(&modes, &fv) {
        for z in mat.data_mut() {
            z.im = 0.0;
        }
    }
    DenseHermitian::hermitian_part(mat)
}

/// `f(lambda_k) == f(lambda_{-k})` for every mode paired with its negative;
/// the circulant is then real.
fn is_even_on_modes(modes: &[i64], fv: &[f64]) -> bool {
    let lo = modes[0];
    let hi = modes[modes.len() - 1];
    modes.iter().zip(fv).all(|(&k, &v)| k <= 0 || -k < lo || k > hi || fv[(-k - lo) as usize] == v)
}

/// Spectral first derivative `-i d/dx` on the periodic lattice.
pub fn lattice_dirac_1d(spec: &LatticeSpec) -> Result<DenseHermitian> {
    circulant_function(spec, |x| x)
}

/// Exact spectral decomposition of the lattice Dirac operator: Fourier
/// modes with eigenvalues `2 pi k / L`.
pub fn dirac_eigendecomposition(spec: &LatticeSpec) -> Result<EigenDecomposition> {
    require_line(spec)?;
    let n = spec.n;
    let roots = roots_of_unity(n);
    let modes = spec.modes();
    let scale = 1.0 / (n as f64).sqrt();
    let vectors = Matrix::from_fn(n, n, |j, c| {
        let k = modes[c].rem_euclid(n as i64) as usize;
        roots[(k * j) % n] * scale
    });
    Ok(EigenDecomposition { values: spec.dirac_eigenvalues(), vectors })
}

/// Periodic second-difference Laplacian scaled by `(N/L)^2`; 2D uses the
/// Kronecker sum on the `N x N` torus with row-major site order.
pub fn lattice_laplacian(spec: &LatticeSpec) -> Result<DenseHermitian> {
    let n = spec.n;
    let s = (n as f64 / spec.length).powi(2);
    let one_d = |i: usize, j: usize| -> f64 {
        if i == j {
            2.0 * s
        } else if (i + 1) % n == j || (j + 1) % n == i {
            -s
        } else {
            0.0
        }
    };
    let m = match spec.dim {
        1 => Matrix::from_fn(n, n, |i, j| C64::new(one_d(i, j), 0.0)),
        2 => Matrix::from_fn(n * n, n * n, |a, b| {
            let (ai, aj) = (a / n, a % n);
            let (bi, bj) = (b / n, b % n);
            let mut v = 0.0;
            if aj == bj {
                v += one_d(ai, bi);
            }
            if ai == bi {
                v += one_d(aj, bj);
            }
            C64::new(v, 0.0)
        }),
        d => return Err(Error::WrongDimension(d)),
    };
    DenseHermitian::hermitian_part(m)
}

pub fn multiplication_operator(samples: &[f64]) -> Result<DenseHermitian> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no samples".into()));
    }
    if let Some(x) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite sample {x}")));
    }
    DenseHermitian::from_diag(samples)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GVariant {
    /// `(1 + D^2)^{-p/2}`.
    Squared,
    /// `(1 + |D|)^{-p}`.
    Absolute,
}

impl GVariant {
    pub fn eval(&self, lambda: f64, p: f64) -> f64 {
        match self {
            GVariant::Squared => (1.0 + lambda * lambda).powf(-p / 2.0),
            GVariant::Absolute => (1.0 + lambda.abs()).powf(-p),
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `G = (1 + D^2)^{-p/2}` or `(1 + |D|)^{-p}` through an eigendecomposition of `D`.
pub fn g_from_d(d: &DenseHermitian, p: f64, variant: GVariant) -> Result<DenseHermitian> {
    check_p(p)?;
    eigh(d)?.map(|x| variant.eval(x, p))
}

/// Same as [`g_from_d`] on the lattice Dirac operator, built as a circulant.
pub fn g_from_lattice(spec: &LatticeSpec, p: f64, variant: GVariant) -> Result<DenseHermitian> {
    check_p(p)?;
    circulant_function(spec, |x| variant.eval(x, p))
}

/// Exact decomposition of the lattice `G` (eigenvalues in Dirac-mode order).
pub fn g_lattice_decomposition(spec: &LatticeSpec, p: f64, variant: GVariant) -> Result<EigenDecomposition> {
    check_p(p)?;
    let mut e = dirac_eigendecomposition(spec)?;
    e.values = e.values.iter().map(|&x| variant.eval(x, p)).collect();
    Ok(e)
}
