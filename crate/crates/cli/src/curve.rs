use std::path::PathBuf;

use clap::{Args, ValueEnum};
use ncint::linalg::Matrix;
use ncint::trace_space::{mu, sigma_many};
use ncint::zeta_heat::{cesaro_function, cesaro_mean, heat_fn, heat_fn_profile, Pairing};

use crate::error::{CliError, Result};
use crate::files::{read_curve, write_curve, OperatorFile};
use crate::grid::GridSpec;

/// Largest log-step of the quadrature behind `cesaro --t`.
const CESARO_LOG_STEP: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Functional {
    /// `s -> tau(a G^s b)`, real part.
    Zeta,
    /// `lambda -> tau(a exp(-1/(lambda G)) b) / lambda`, real part.
    Heat,
    /// Cesàro mean of a curve file or of the heat function of `--t`.
    Cesaro,
    /// `t -> sigma_t(T) / log(1 + t)`.
    SigmaRatio,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(value_enum)]
    pub functional: Functional,
    /// `G` for zeta and heat.
    #[arg(long)]
    pub g: Option<PathBuf>,
    /// Left factor; identity when omitted.
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Right factor; identity when omitted.
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// Operator `T` for sigma-ratio and cesaro.
    #[arg(long)]
    pub t: Option<PathBuf>,
    /// Curve CSV to average for cesaro.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// `lo:hi:count[:log]`.
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[arg(long)]
    pub out: PathBuf,
}

fn need<'a, T>(v: &'a Option<T>, what: &str, functional: Functional) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| {
        CliError::Usage(format!("{functional:?} curve needs --{what}").to_lowercase())
    })
}

fn factor(path: &Option<PathBuf>, n: usize) -> Result<Matrix> {
    match path {
        Some(p) => OperatorFile::read(p)?.matrix(),
        None => Ok(Matrix::identity(n)),
    }
}

/// Evaluates the curve and writes `x,value` rows.
pub fn run(args: &CurveArgs) -> Result<(Vec<f64>, Vec<f64>)> {
    let f = args.functional;
    let (xs, ys) = match f {
        Functional::Zeta | Functional::Heat => {
            let grid = need(&args.grid, "grid", f)?.points()?;
            let gf = OperatorFile::read(need(&args.g, "g", f)?)?;
            let g = gf.hermitian()?;
            let pairing = Pairing::new(
                &factor(&args.a, g.n())?,
                &factor(&args.b, g.n())?,
                &g,
                &gf.trace_weights()?,
            )?;
            let ys = grid
                .iter()
                .map(|&x| {
                    Ok(if f == Functional::Zeta {
                        pairing.zeta(x)?
                    } else {
                        pairing.heat(x)?
                    }
                    .re)
                })
                .collect::<Result<Vec<f64>>>()?;
            (grid, ys)
        }
        Functional::Cesaro => match (&args.input, &args.t) {
            (Some(path), None) => {
                let m = cesaro_mean(&read_curve(path)?)?;
                (m.grid().to_vec(), m.values().to_vec())
            }
            (None, Some(path)) => {
                let grid = need(&args.grid, "grid", f)?.points()?;
                let tf = OperatorFile::read(path)?;
                let (t, w) = (tf.hermitian()?, tf.trace_weights()?);
                // validates injectivity once, then reuses the singular values
                heat_fn(&t, 1.0, &w)?;
                let profile = mu(t.matrix(), &w)?;
                let (m, _) = cesaro_function(
                    |l| heat_fn_profile(&profile, l).unwrap_or(f64::NAN),
                    &grid,
                    CESARO_LOG_STEP,
                )?;
                (m.grid().to_vec(), m.values().to_vec())
            }
            _ => {
                return Err(CliError::Usage(
                    "cesaro curve needs exactly one of --input or --t".into(),
                ))
            }
        },
        Functional::SigmaRatio => {
            let grid = need(&args.grid, "grid", f)?.points()?;
            let tf = OperatorFile::read(need(&args.t, "t", f)?)?;
            let m = mu(&tf.matrix()?, &tf.trace_weights()?)?;
            let sig = sigma_many(&m, &grid)?;
            let ys = grid
                .iter()
                .zip(&sig)
                .map(|(t, s)| if *t > 0.0 { s / t.ln_1p() } else { 0.0 })
                .collect();
            (grid, ys)
        }
    };
    if let Some(bad) = ys.iter().find(|y| !y.is_finite()) {
        return Err(CliError::Numeric(format!("{f:?} curve produced {bad}")));
    }
    write_curve(&args.out, &xs, &ys)?;
    Ok((xs, ys))
}
