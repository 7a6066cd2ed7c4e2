//! JSON documents for POVMs, kernels and joint observables.
//!
//! Complex entries are `[re, im]` pairs. Emitted JSON is canonical: struct
//! field order is fixed, floats use the shortest round-trip representation
//! and negative zero is written as `0.0`.

use num_complex::Complex;
use povmkit::compat::{JointObservable, MarkovKernel};
use povmkit::{Matrix, Povm, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeDoc {
    pub label: String,
    pub matrix: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmDocument {
    pub schema_version: String,
    pub dim: usize,
    pub outcomes: Vec<OutcomeDoc>,
}

/// Row-stochastic matrix from outcomes `rows` to outcomes `cols`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDocument {
    pub schema_version: String,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub p: Vec<Vec<f64>>,
}

/// Grid `cells[i][j] = N(x_i, y_j)` of a joint observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointDocument {
    pub schema_version: String,
    pub dim: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub cells: Vec<Vec<MatrixDoc>>,
}

/// Adding positive zero maps `-0.0` to `0.0`.
fn clean(x: f64) -> f64 {
    x + 0.0
}

pub fn matrix_doc(m: &Matrix) -> MatrixDoc {
    m.to_rows().iter().map(|row| row.iter().map(|z| [clean(z.re), clean(z.im)]).collect()).collect()
}

pub fn matrix_from_doc(doc: &MatrixDoc, dim: usize, what: &str) -> Result<Matrix, CliError> {
    if doc.len() != dim || doc.iter().any(|r| r.len() != dim) {
        return Err(CliError::Invalid(format!("{what} is not a {dim}x{dim} matrix")));
    }
    if doc.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Invalid(format!("{what} has a non-finite entry")));
    }
    let rows = doc.iter().map(|r| r.iter().map(|&[re, im]| Complex::new(re, im)).collect()).collect();
    Matrix::from_rows(rows).ok_or_else(|| CliError::Invalid(format!("{what} is ragged")))
}

fn check_schema(v: &str) -> Result<(), CliError> {
    if v != SCHEMA_VERSION {
        return Err(CliError::Invalid(format!("unsupported schema_version {v:?} (expected {SCHEMA_VERSION:?})")));
    }
    Ok(())
}

impl PovmDocument {
    pub fn from_povm(m: &Povm) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            dim: m.dim(),
            outcomes: m
                .labels()
                .iter()
                .zip(m.effects())
                .map(|(label, e)| OutcomeDoc { label: label.clone(), matrix: matrix_doc(e) })
                .collect(),
        }
    }

    /// Labels and matrices, checked for shape only.
    pub fn parts(&self) -> Result<(Vec<String>, Vec<Matrix>), CliError> {
        check_schema(&self.schema_version)?;
        if self.dim == 0 {
            return Err(CliError::Invalid("dim must be positive".into()));
        }
        let labels = self.outcomes.iter().map(|o| o.label.clone()).collect();
        let mats = self
            .outcomes
            .iter()
            .map(|o| matrix_from_doc(&o.matrix, self.dim, &format!("outcome {:?}", o.label)))
            .collect::<Result<_, _>>()?;
        Ok((labels, mats))
    }

    pub fn to_povm(&self, tol: &Tolerances) -> Result<Povm, CliError> {
        let (labels, mats) = self.parts()?;
        Ok(Povm::with_labels(labels, mats, tol)?)
    }
}

impl KernelDocument {
    pub fn from_kernel(k: &MarkovKernel<f64>, rows: &[String], cols: &[String]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            p: k.to_rows().into_iter().map(|r| r.into_iter().map(clean).collect()).collect(),
        }
    }

    pub fn to_kernel(&self, tol: &Tolerances) -> Result<MarkovKernel<f64>, CliError> {
        check_schema(&self.schema_version)?;
        if self.p.len() != self.rows.len() || self.p.iter().any(|r| r.len() != self.cols.len()) {
            return Err(CliError::Invalid(format!(
                "kernel entries do not form a {}x{} array",
                self.rows.len(),
                self.cols.len()
            )));
        }
        Ok(MarkovKernel::new(self.p.clone(), tol)?)
    }
}

impl JointDocument {
    pub fn from_joint(j: &JointObservable<f64>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            dim: j.dim(),
            rows: j.first().labels().to_vec(),
            cols: j.second().labels().to_vec(),
            cells: j.grid().iter().map(|row| row.iter().map(matrix_doc).collect()).collect(),
        }
    }

    pub fn grid(&self) -> Result<Vec<Vec<Matrix>>, CliError> {
        check_schema(&self.schema_version)?;
        if self.cells.len() != self.rows.len() || self.cells.iter().any(|r| r.len() != self.cols.len()) {
            return Err(CliError::Invalid(format!(
                "joint cells do not form a {}x{} grid",
                self.rows.len(),
                self.cols.len()
            )));
        }
        self.cells
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, c)| matrix_from_doc(c, self.dim, &format!("cell ({}, {})", self.rows[i], self.cols[j])))
                    .collect()
            })
            .collect()
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents contain only finite numbers");
    s.push('\n');
    s
}

pub fn parse<T: for<'de> Deserialize<'de>>(bytes: &[u8], source: &str) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse(format!("{source}: {e}")))
}
