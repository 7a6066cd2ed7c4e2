use std::fmt;

use thiserror::Error;

/// One violated POVM invariant, as reported by validation.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Empty,
    DimMismatch { index: usize, rows: usize, cols: usize },
    DuplicateLabel(String),
    LabelCount { labels: usize, effects: usize },
    NotHermitian { index: usize, deviation: f64 },
    NotPsd { index: usize, min_eig: f64 },
    ZeroEffect { index: usize },
    NotComplete { residual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "effect list is empty"),
            Violation::DimMismatch { index, rows, cols } => {
                write!(f, "effect {index} has shape {rows}x{cols}")
            }
            Violation::DuplicateLabel(l) => write!(f, "duplicate outcome label {l:?}"),
            Violation::LabelCount { labels, effects } => {
                write!(f, "{labels} labels for {effects} effects")
            }
            Violation::NotHermitian { index, deviation } => {
                write!(f, "effect {index} is not Hermitian (max |A - A^dag| = {deviation:e})")
            }
            Violation::NotPsd { index, min_eig } => {
                write!(f, "effect {index} is not positive (min eigenvalue {min_eig:e})")
            }
            Violation::ZeroEffect { index } => write!(f, "effect {index} is the zero matrix"),
            Violation::NotComplete { residual } => {
                write!(f, "effects do not sum to the identity (residual {residual:e})")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NonHermitian(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("invalid POVM: {}", join(.0))]
    InvalidPovm(Vec<Violation>),
    #[error("basis is not orthonormal (max deviation {0:e})")]
    BasisNotOrthonormal(f64),
    #[error("sub-effect {0} is not below the corresponding effect")]
    NotBelowBound(usize),
    #[error("{n} outcomes exceed the range-enumeration cap of {cap}")]
    TooManyOutcomes { n: usize, cap: usize },
    #[error("POVM is not rank-1")]
    NotRankOne,
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("proportionality is not transitive inside class containing outcomes {0} and {1}")]
    NonTransitiveClass(usize, usize),
    #[error("joint effect ({0}, {1}) is not proportional to the marginal effect")]
    NotProportional(usize, usize),
    #[error("invalid Markov kernel: {0}")]
    InvalidKernel(String),
    #[error("range element {0} of the first observable is not in the range of the witness")]
    RangeNotIncluded(usize),
    #[error("witness subsets for classes {0} and {1} overlap with a nonzero effect")]
    OverlapNotNull(usize, usize),
    #[error("certificate failed re-verification: {0}")]
    CertificateMismatch(String),
    #[error("LP route requires a rank-1 input")]
    LpNeedsRankOne,
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
