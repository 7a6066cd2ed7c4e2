//! Discrete POVMs: construction, validation and rank structure.

mod dilation;
mod regular;
mod subsets;

pub use dilation::{below_bound_decompose, naimark_dilate, DilationResiduals, NaimarkDilation, StructureVectors};
pub use regular::is_regular;
pub use subsets::{for_each_subset_sum, subset_indices};

use std::collections::HashSet;

use crate::error::{Error, Result, Violation};
use crate::matcore::{eig_hermitian, ComplexMatrix};
use crate::scalar::{Scalar, C};
use crate::tolerance::Tolerances;

/// A finite-outcome POVM `M = (M_1, ..., M_N)` on `C^d`.
///
/// Only constructed through validation, so every instance has Hermitian PSD
/// nonzero effects summing to the identity within the validation tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePovm<T: Scalar> {
    dim: usize,
    labels: Vec<String>,
    effects: Vec<ComplexMatrix<T>>,
}

/// Spectral split of one effect into mutually orthogonal rank-1 pieces.
#[derive(Debug, Clone)]
pub struct EffectDecomposition<T: Scalar> {
    pub multiplicity: usize,
    /// Nonzero eigenvalues, ascending.
    pub eigenvalues: Vec<T>,
    /// Unit eigenvectors matching `eigenvalues`.
    pub eigenvectors: Vec<Vec<C<T>>>,
    /// `sqrt(lambda_k) phi_k`, so the effect is `sum_k |d_k><d_k|`.
    pub vectors: Vec<Vec<C<T>>>,
}

impl<T: Scalar> EffectDecomposition<T> {
    pub fn rebuild(&self, dim: usize) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for v in &self.vectors {
            m += &ComplexMatrix::projector(v);
        }
        m
    }
}

/// Default outcome labels `x1, ..., xN`.
pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl<T: Scalar> DiscretePovm<T> {
    /// Validates effects labelled `x1..xN`.
    pub fn new(effects: Vec<ComplexMatrix<T>>, tol: &Tolerances) -> Result<Self> {
        let labels = default_labels(effects.len());
        Self::with_labels(labels, effects, tol)
    }

    /// Validates a labelled effect list, collecting every violated invariant.
    pub fn with_labels(
        labels: Vec<String>,
        effects: Vec<ComplexMatrix<T>>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let violations = Self::diagnose(&labels, &effects, tol);
        if !violations.is_empty() {
            return Err(Error::InvalidPovm(violations));
        }
        let dim = effects[0].rows();
        let effects = effects.iter().map(ComplexMatrix::hermitian_part).collect();
        Ok(Self { dim, labels, effects })
    }

    /// Every violated invariant of a candidate POVM; empty when valid.
    pub fn diagnose(
        labels: &[String],
        effects: &[ComplexMatrix<T>],
        tol: &Tolerances,
    ) -> Vec<Violation> {
        let mut out = Vec::new();
        let Some(first) = effects.first() else {
            out.push(Violation::Empty);
            return out;
        };
        if labels.len() != effects.len() {
            out.push(Violation::LabelCount { labels: labels.len(), effects: effects.len() });
        }
        let mut seen = HashSet::new();
        for l in labels {
            if !seen.insert(l.as_str()) {
                out.push(Violation::DuplicateLabel(l.clone()));
            }
        }
        let dim = first.rows();
        let mut shapes_ok = true;
        for (index, e) in effects.iter().enumerate() {
            if e.rows() != dim || e.cols() != dim || dim == 0 {
                out.push(Violation::DimMismatch { index, rows: e.rows(), cols: e.cols() });
                shapes_ok = false;
            }
        }
        if !shapes_ok {
            return out;
        }
        let validate = T::of(tol.validate);
        for (index, e) in effects.iter().enumerate() {
            let dev = e.hermitian_deviation();
            if !(dev <= validate) {
                out.push(Violation::NotHermitian { index, deviation: dev.to_f64_lossy() });
                continue;
            }
            if e.max_abs() <= validate {
                out.push(Violation::ZeroEffect { index });
                continue;
            }
            // Hermiticity was checked against the validation tolerance above.
            match eig_hermitian(&e.hermitian_part(), T::of(tol.eig)) {
                Ok(eig) if eig.min() < -T::of(tol.psd) => out.push(Violation::NotPsd {
                    index,
                    min_eig: eig.min().to_f64_lossy(),
                }),
                Ok(_) => {}
                Err(_) => out.push(Violation::NotHermitian { index, deviation: dev.to_f64_lossy() }),
            }
        }
        let sum = ComplexMatrix::sum(dim, effects);
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if !(residual <= validate) {
            out.push(Violation::NotComplete { residual: residual.to_f64_lossy() });
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn effects(&self) -> &[ComplexMatrix<T>] {
        &self.effects
    }

    pub fn effect(&self, i: usize) -> &ComplexMatrix<T> {
        &self.effects[i]
    }

    /// `M(X) = sum_{i in X} M_i`.
    pub fn effect_of(&self, subset: &[usize]) -> ComplexMatrix<T> {
        ComplexMatrix::sum(self.dim, subset.iter().map(|&i| &self.effects[i]))
    }

    /// Rank `m_i` of effect `i` with its decomposition `M_i = sum_k |d_ik><d_ik|`.
    ///
    /// Eigenvalues at or below `tol.rank * lambda_max` are discarded.
    pub fn effect_rank(&self, i: usize, tol: &Tolerances) -> Result<EffectDecomposition<T>> {
        let eig = eig_hermitian(&self.effects[i], T::of(tol.eig))?;
        let cut = T::of(tol.rank) * eig.max();
        let mut out = EffectDecomposition {
            multiplicity: 0,
            eigenvalues: Vec::new(),
            eigenvectors: Vec::new(),
            vectors: Vec::new(),
        };
        for (k, &lambda) in eig.values.iter().enumerate() {
            if lambda > cut {
                let phi = eig.vector(k);
                let s = lambda.sqrt();
                out.vectors.push(phi.iter().map(|z| z * s).collect());
                out.eigenvectors.push(phi);
                out.eigenvalues.push(lambda);
            }
        }
        out.multiplicity = out.eigenvalues.len();
        Ok(out)
    }

    pub fn ranks(&self, tol: &Tolerances) -> Result<Vec<usize>> {
        (0..self.len()).map(|i| self.effect_rank(i, tol).map(|d| d.multiplicity)).collect()
    }

    /// Every effect has rank one.
    pub fn is_rank_one(&self, tol: &Tolerances) -> Result<bool> {
        Ok(self.ranks(tol)?.iter().all(|&m| m == 1))
    }

    /// Every effect is idempotent within `tol.validate`.
    pub fn is_pvm(&self, tol: &Tolerances) -> bool {
        let t = T::of(tol.validate);
        self.effects.iter().all(|e| (e * e).max_abs_diff(e) <= t)
    }

    /// Same effects under new labels.
    pub fn relabelled(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InvalidPovm(vec![Violation::LabelCount {
                labels: labels.len(),
                effects: self.len(),
            }]));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidPovm(vec![Violation::DuplicateLabel(l.clone())]));
            }
        }
        Ok(Self { dim: self.dim, labels, effects: self.effects.clone() })
    }

    /// Outcomes reordered so that new outcome `k` is old outcome `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.len());
        Self {
            dim: self.dim,
            labels: perm.iter().map(|&k| self.labels[k].clone()).collect(),
            effects: perm.iter().map(|&k| self.effects[k].clone()).collect(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> DiscretePovm<U> {
        DiscretePovm {
            dim: self.dim,
            labels: self.labels.clone(),
            effects: self.effects.iter().map(ComplexMatrix::cast).collect(),
        }
    }

    /// Index of an outcome label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Validation entry point mirroring [`DiscretePovm::new`].
pub fn povm_validate<T: Scalar>(
    effects: Vec<ComplexMatrix<T>>,
    tol: &Tolerances,
) -> Result<DiscretePovm<T>> {
    DiscretePovm::new(effects, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    type M = ComplexMatrix<f64>;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn trivial_observable() {
        let p = DiscretePovm::new(vec![M::identity(3)], &tol()).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.labels(), ["x1"]);
    }

    #[test]
    fn incomplete_effects_rejected() {
        let err = DiscretePovm::new(vec![M::identity(2).scale(0.5), M::identity(2).scale(1.0 / 3.0)], &tol())
            .unwrap_err();
        match err {
            Error::InvalidPovm(v) => {
                assert_eq!(v.len(), 1);
                match v[0] {
                    Violation::NotComplete { residual } => assert!((residual - 1.0 / 6.0).abs() < 1e-15),
                    ref other => panic!("unexpected {other:?}"),
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn every_violation_listed() {
        let bad = vec![
            M::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]),
            M::diag_real(&[1.0, -0.5]),
            M::zeros(2, 2),
        ];
        let Error::InvalidPovm(v) = DiscretePovm::new(bad, &tol()).unwrap_err() else {
            panic!()
        };
        assert!(v.contains(&Violation::NotHermitian { index: 0, deviation: 1.0 }));
        assert!(v.iter().any(|x| matches!(x, Violation::NotPsd { index: 1, .. })));
        assert!(v.contains(&Violation::ZeroEffect { index: 2 }));
        assert!(v.iter().any(|x| matches!(x, Violation::NotComplete { .. })));
    }

    #[test]
    fn shape_and_label_problems() {
        let v = DiscretePovm::<f64>::diagnose(&[], &[], &tol());
        assert_eq!(v, vec![Violation::Empty]);
        let v = DiscretePovm::diagnose(
            &["a".into(), "a".into()],
            &[M::identity(2), M::identity(3)],
            &tol(),
        );
        assert!(v.contains(&Violation::DuplicateLabel("a".into())));
        assert!(v.contains(&Violation::DimMismatch { index: 1, rows: 3, cols: 3 }));
    }

    #[test]
    fn example4_is_rank_one_but_not_pvm() {
        let m = fixtures::example4_m::<f64>();
        assert!(m.is_rank_one(&tol()).unwrap());
        assert!(!m.is_pvm(&tol()));
        let d = m.effect_rank(0, &tol()).unwrap();
        assert_eq!(d.multiplicity, 1);
        assert!(d.rebuild(2).max_abs_diff(m.effect(0)) < 1e-15);
    }

    #[test]
    fn half_identity_has_rank_two() {
        let m = fixtures::example4_mprime::<f64>();
        assert_eq!(m.ranks(&tol()).unwrap(), vec![2, 2]);
        assert!(!m.is_rank_one(&tol()).unwrap());
    }

    #[test]
    fn projection_rank_and_pvm() {
        let p = M::diag_real(&[1.0, 1.0, 0.0]);
        let q = M::diag_real(&[0.0, 0.0, 1.0]);
        let m = DiscretePovm::new(vec![p, q], &tol()).unwrap();
        assert_eq!(m.ranks(&tol()).unwrap(), vec![2, 1]);
        assert!(m.is_pvm(&tol()));
        assert!(!m.is_rank_one(&tol()).unwrap());
    }

    #[test]
    fn example5_prime_is_rank_two() {
        let m = fixtures::example5_mprime::<f64>();
        assert_eq!(m.ranks(&tol()).unwrap(), vec![2, 2, 2]);
        assert!(!fixtures::example5_m::<f64>().is_pvm(&tol()));
    }

    #[test]
    fn remark4_relabelling_is_pvm() {
        assert!(fixtures::remark4_relabel::<f64>().is_pvm(&tol()));
        assert!(fixtures::qubit_z::<f64>().is_pvm(&tol()));
    }
}
