//! Finite-dimensional discrete quantum observables (POVMs).
//!
//! Validity checks, minimal Naimark dilation, extremality, smearing by Markov
//! kernels, joint measurability and coexistence. Every numeric routine is
//! generic over [`Scalar`] (`f32` or `f64`); the aliases below fix `f64`, and
//! the `*32` variants fix `f32`.

// `!(x <= tol)` rejects NaN along with large values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compat;
pub mod error;
pub mod fixtures;
pub mod matcore;
pub mod povm;
pub mod random;
pub mod scalar;
pub mod structure;
pub mod tolerance;

pub use compat::{
    coexistent_with, jointly_measurable, range_enumerate, range_included, smear, smearing_feasible, FeasibilityReport,
    Method, MethodChoice, Status,
};
pub use error::{Error, Result, Violation};
pub use povm::{naimark_dilate, povm_validate};
pub use scalar::Scalar;
pub use structure::{equivalence_classes, is_extreme};
pub use tolerance::Tolerances;

pub type Matrix = matcore::ComplexMatrix<f64>;
pub type Povm = povm::DiscretePovm<f64>;
pub type Kernel = compat::MarkovKernel<f64>;
pub type Dilation = povm::NaimarkDilation<f64>;
pub type Joint = compat::JointObservable<f64>;
pub type Partition = structure::OutcomePartition<f64>;

pub type Matrix32 = matcore::ComplexMatrix<f32>;
pub type Povm32 = povm::DiscretePovm<f32>;
pub type Kernel32 = compat::MarkovKernel<f32>;
pub type Dilation32 = povm::NaimarkDilation<f32>;
pub type Joint32 = compat::JointObservable<f32>;
pub type Partition32 = structure::OutcomePartition<f32>;
