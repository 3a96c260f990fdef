//! Operator files, curve CSVs and atomic writes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use ncint::curve::{FunctionalCurve, Scale};
use ncint::linalg::{DenseHermitian, Matrix, C64};
use ncint::trace_space::TraceWeights;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DENSE_ROWMAJOR: &str = "dense-rowmajor";

/// Accepted asymmetry of a stored operator, relative to its largest entry.
pub const FILE_HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub n: usize,
    pub storage: String,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl OperatorFile {
    pub fn from_matrix(
        m: &Matrix,
        weights: Option<Vec<f64>>,
        meta: BTreeMap<String, serde_json::Value>,
    ) -> Self {
        Self {
            n: m.rows(),
            storage: DENSE_ROWMAJOR.into(),
            re: m.real_parts(),
            im: m.imag_parts(),
            weights,
            meta,
        }
    }

    pub fn matrix(&self) -> Result<Matrix> {
        if self.storage != DENSE_ROWMAJOR {
            return Err(CliError::Usage(format!(
                "unsupported storage {:?}",
                self.storage
            )));
        }
        let nn = self.n * self.n;
        if self.n == 0 || self.re.len() != nn || self.im.len() != nn {
            return Err(CliError::Usage(format!(
                "operator file: n = {} but re/im have {}/{} entries",
                self.n,
                self.re.len(),
                self.im.len()
            )));
        }
        if let Some(w) = &self.weights {
            if w.len() != self.n {
                return Err(CliError::Usage(format!(
                    "operator file: {} weights for n = {}",
                    w.len(),
                    self.n
                )));
            }
        }
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&r, &i)| C64::new(r, i))
            .collect();
        Ok(Matrix::from_vec(self.n, self.n, data)?)
    }

    /// The matrix, required Hermitian to [`FILE_HERMITIAN_TOL`].
    pub fn hermitian(&self) -> Result<DenseHermitian> {
        let m = self.matrix()?;
        let dev = m.max_abs_diff(&m.adjoint());
        if dev > FILE_HERMITIAN_TOL * m.max_abs().max(1.0) {
            return Err(CliError::Usage(format!(
                "operator is not Hermitian (deviation {dev:.3e})"
            )));
        }
        Ok(DenseHermitian::hermitian_part(m)?)
    }

    pub fn trace_weights(&self) -> Result<TraceWeights> {
        match &self.weights {
            Some(w) => Ok(TraceWeights::new(w.clone())?),
            None => Ok(TraceWeights::unit(self.n)),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// `x,value` rows with 17 significant digits.
pub fn write_curve(path: &Path, xs: &[f64], ys: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Numeric(e.to_string());
    w.write_record(["x", "value"]).map_err(csv_err)?;
    for (x, y) in xs.iter().zip(ys) {
        w.write_record([format!("{x:.16e}"), format!("{y:.16e}")])
            .map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    write_atomic(path, &bytes)
}

pub fn read_curve(path: &Path) -> Result<FunctionalCurve> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let headers = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "value"] {
        return Err(bad(format!("expected header x,value, got {:?}", headers)));
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|_| bad(format!("unparsable row {:?}", rec)))
        };
        xs.push(parse(0)?);
        ys.push(parse(1)?);
    }
    Ok(FunctionalCurve::new(xs, ys, Scale::Logarithmic)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncint::random::{random_matrix, seeded};

    #[test]
    fn round_trip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("op.json");
        let mut m = random_matrix(7, 7, false, &mut seeded(3));
        let specials = [
            f64::MIN_POSITIVE,
            5e-324,
            f64::MAX,
            -0.0,
            1.0 / 3.0,
            1e300,
            -2.2250738585072014e-308,
        ];
        for (k, &x) in specials.iter().enumerate() {
            m.data_mut()[k * 8] = C64::new(x, 0.0);
        }
        let meta = BTreeMap::from([("kind".to_string(), serde_json::json!("random"))]);
        let file = OperatorFile::from_matrix(&m, Some(vec![0.5; 7]), meta);
        file.write(&path).unwrap();
        let back = OperatorFile::read(&path).unwrap();
        assert_eq!(back, file);
        let bits = |m: &Matrix| {
            m.data()
                .iter()
                .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&back.matrix().unwrap()), bits(&m));
    }

    #[test]
    fn inconsistent_lengths_are_rejected() {
        let f = OperatorFile {
            n: 2,
            storage: DENSE_ROWMAJOR.into(),
            re: vec![1.0; 3],
            im: vec![0.0; 4],
            weights: None,
            meta: BTreeMap::new(),
        };
        assert!(matches!(f.matrix(), Err(CliError::Usage(_))));
        let f = OperatorFile {
            re: vec![1.0; 4],
            weights: Some(vec![1.0]),
            ..f
        };
        assert!(matches!(f.matrix(), Err(CliError::Usage(_))));
    }
}
