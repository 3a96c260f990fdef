use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use ncint::factory::{
    counterexample_pair, g_from_d, lattice_dirac_1d, lattice_laplacian, model_diagonal,
    multiplication_operator, GVariant, LatticeSpec,
};
use ncint::linalg::{DenseHermitian, Matrix};
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::files::OperatorFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuildKind {
    Dirac1d,
    Laplacian,
    Multiplication,
    ModelDiagonal,
    Counterexample,
    GFromD,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SampleFunction {
    /// `1 / (1 + x^2)`
    Lorentzian,
    /// `exp(-x^2)`
    Gaussian,
    /// `1 + cos(2 pi x / L)`
    OnePlusCos,
    Constant,
}

impl SampleFunction {
    fn eval(self, x: f64, length: f64) -> f64 {
        match self {
            SampleFunction::Lorentzian => 1.0 / (1.0 + x * x),
            SampleFunction::Gaussian => (-x * x).exp(),
            SampleFunction::OnePlusCos => 1.0 + (2.0 * std::f64::consts::PI * x / length).cos(),
            SampleFunction::Constant => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Squared,
    Absolute,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Operator family.
    #[arg(value_enum)]
    pub kind: BuildKind,
    /// Lattice sites or sequence length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Period of the lattice box.
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI)]
    pub length: f64,
    /// Lattice dimension for `laplacian`.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Sampled function for `multiplication`.
    #[arg(long, value_enum, default_value_t = SampleFunction::Lorentzian)]
    pub function: SampleFunction,
    /// Sequence for `model-diagonal`: harmonic, log-harmonic, power, square.
    #[arg(long, default_value = "harmonic")]
    pub model: String,
    /// Model parameters (harmonic constant or power q), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<f64>,
    /// Diagonal of `D` for `counterexample`, comma separated; defaults to `k^2`.
    #[arg(long, value_delimiter = ',')]
    pub diag: Vec<f64>,
    /// Input operator: `D` for `g-from-d`, the projection `T` for `counterexample`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Summability exponent for `g-from-d`.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = Variant::Squared)]
    pub variant: Variant,
    /// Recorded in the file's provenance.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

fn need_n(args: &BuildArgs) -> Result<usize> {
    args.n
        .ok_or_else(|| CliError::Usage(format!("{:?} needs --n", args.kind)))
}

/// Builds the requested operator and writes it.
pub fn run(args: &BuildArgs) -> Result<OperatorFile> {
    let mut params = BTreeMap::new();
    let m: Matrix = match args.kind {
        BuildKind::Dirac1d => {
            let n = need_n(args)?;
            params.insert("n", json!(n));
            params.insert("length", json!(args.length));
            lattice_dirac_1d(&LatticeSpec::line(n, args.length)?)?.into_matrix()
        }
        BuildKind::Laplacian => {
            let n = need_n(args)?;
            params.insert("n", json!(n));
            params.insert("length", json!(args.length));
            params.insert("dim", json!(args.dim));
            lattice_laplacian(&LatticeSpec::new(args.dim, n, args.length)?)?.into_matrix()
        }
        BuildKind::Multiplication => {
            let n = need_n(args)?;
            params.insert("n", json!(n));
            params.insert("length", json!(args.length));
            params.insert(
                "function",
                json!(format!("{:?}", args.function).to_lowercase()),
            );
            let spec = LatticeSpec::line(n, args.length)?;
            multiplication_operator(&spec.sample(|x| args.function.eval(x, args.length)))?
                .into_matrix()
        }
        BuildKind::ModelDiagonal => {
            let n = need_n(args)?;
            let model = model_diagonal(&args.model, n, &args.params)?.truncated();
            params.insert("n", json!(n));
            params.insert(
                "model",
                serde_json::to_value(model.kind).map_err(|e| CliError::Numeric(e.to_string()))?,
            );
            Matrix::from_diag(&model.values())
        }
        BuildKind::Counterexample => {
            let d: Vec<f64> = if args.diag.is_empty() {
                (1..=need_n(args)?).map(|k| (k * k) as f64).collect()
            } else {
                args.diag.clone()
            };
            let t = match &args.input {
                Some(p) => OperatorFile::read(p)?.hermitian()?,
                None => DenseHermitian::identity(d.len()),
            };
            params.insert("diag", json!(d));
            params.insert(
                "projection",
                json!(args
                    .input
                    .as_ref()
                    .map_or("identity".into(), |p| p.display().to_string())),
            );
            let (dt, _) = counterexample_pair(&d, &t)?;
            dt.into_matrix()
        }
        BuildKind::GFromD => {
            let path = args
                .input
                .as_ref()
                .ok_or_else(|| CliError::Usage("g-from-d needs --input".into()))?;
            let d = OperatorFile::read(path)?.hermitian()?;
            let variant = match args.variant {
                Variant::Squared => GVariant::Squared,
                Variant::Absolute => GVariant::Absolute,
            };
            params.insert("input", json!(path.display().to_string()));
            params.insert("p", json!(args.p));
            params.insert(
                "variant",
                json!(format!("{:?}", args.variant).to_lowercase()),
            );
            g_from_d(&d, args.p, variant)?.into_matrix()
        }
    };
    let kind = args
        .kind
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let mut meta: BTreeMap<String, Value> = BTreeMap::new();
    meta.insert("kind".into(), json!(kind));
    meta.insert("params".into(), json!(params));
    meta.insert("seed".into(), json!(args.seed));
    meta.insert(
        "generator".into(),
        json!(concat!("ncint ", env!("CARGO_PKG_VERSION"))),
    );
    let file = OperatorFile::from_matrix(&m, None, meta);
    file.write(&args.out)?;
    Ok(file)
}
