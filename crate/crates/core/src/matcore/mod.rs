//! Dense complex linear algebra for small Hermitian problems.

mod eig;
mod hermitian;
mod matrix;
mod svd;

pub use eig::{eig_hermitian, eigvals_hermitian, HermitianEig};
pub use hermitian::{
    complex_rank,    hermitian_basis, hermitian_family_rank, hermitize_check, is_psd, loewner_leq, min_eigenvalue,
    project_psd, pseudoinverse, trace_inner, unvectorize_hermitian, vectorize_hermitian,
};
pub use matrix::{basis_vector, inner, norm, ComplexMatrix};
pub use svd::{svd_columns, Svd};
