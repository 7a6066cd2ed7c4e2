//! Minimal Naimark dilation of a discrete POVM.
//!
//! Each effect is split as `M_i = sum_k |d_ik><d_ik|` with mutually orthogonal
//! `d_ik`. The dilation space is the direct sum of fibers `C^{m_i}` (outcome
//! major, eigenvalue ascending inside an outcome) and the isometry is
//! `J = sum_{i,k} |e_ik><d_ik|`, so that `J^dag P_i J = M_i` for the coordinate
//! projection `P_i` onto fiber `i`.

use std::ops::Range;

use super::DiscretePovm;
use crate::error::{Error, Result};
use crate::matcore::{complex_rank, loewner_leq, pseudoinverse, ComplexMatrix};
use crate::scalar::{Scalar, C};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone)]
pub struct NaimarkDilation<T: Scalar> {
    total_dim: usize,
    blocks: Vec<Range<usize>>,
    isometry: ComplexMatrix<T>,
    source: DiscretePovm<T>,
}

/// Residuals of the defining identities of a dilation.
#[derive(Debug, Clone, Copy)]
pub struct DilationResiduals {
    /// `|J^dag J - I|_max`.
    pub isometry: f64,
    /// `max_i |J^dag P_i J - M_i|_max`.
    pub marginals: f64,
    /// Every block `P_i J` has numerical rank `m_i`.
    pub minimal: bool,
}

pub fn naimark_dilate<T: Scalar>(m: &DiscretePovm<T>, tol: &Tolerances) -> Result<NaimarkDilation<T>> {
    let d = m.dim();
    let mut rows: Vec<Vec<C<T>>> = Vec::new();
    let mut blocks = Vec::with_capacity(m.len());
    for i in 0..m.len() {
        let dec = m.effect_rank(i, tol)?;
        let start = rows.len();
        for v in &dec.vectors {
            rows.push(v.iter().map(|z| z.conj()).collect());
        }
        blocks.push(start..rows.len());
    }
    let total_dim = rows.len();
    let isometry = if total_dim == 0 {
        ComplexMatrix::zeros(0, d)
    } else {
        ComplexMatrix::from_rows(rows).expect("rows have length d")
    };
    Ok(NaimarkDilation { total_dim, blocks, isometry, source: m.clone() })
}

impl<T: Scalar> NaimarkDilation<T> {
    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.blocks.iter().map(Range::len).collect()
    }

    /// `J`, a `total_dim x d` matrix.
    pub fn isometry(&self) -> &ComplexMatrix<T> {
        &self.isometry
    }

    pub fn source(&self) -> &DiscretePovm<T> {
        &self.source
    }

    /// `A_i = P_i J` restricted to fiber `i`: an `m_i x d` matrix.
    pub fn block(&self, i: usize) -> ComplexMatrix<T> {
        self.isometry.row_block(self.blocks[i].clone())
    }

    /// `P_i` as a `total_dim x total_dim` coordinate projection.
    pub fn projection(&self, i: usize) -> ComplexMatrix<T> {
        let mut p = ComplexMatrix::zeros(self.total_dim, self.total_dim);
        for k in self.blocks[i].clone() {
            p[(k, k)] = C::new(T::one(), T::zero());
        }
        p
    }

    /// `J^dag P_i J`.
    pub fn compressed_projection(&self, i: usize) -> ComplexMatrix<T> {
        let a = self.block(i);
        &a.adjoint() * &a
    }

    /// Square with `J J^dag = I` within `tol`.
    pub fn is_unitary(&self, tol: T) -> bool {
        if !self.isometry.is_square() {
            return false;
        }
        let jjd = &self.isometry * &self.isometry.adjoint();
        jjd.max_abs_diff(&ComplexMatrix::identity(self.total_dim)) <= tol
    }

    pub fn residuals(&self, tol: &Tolerances) -> DilationResiduals {
        let d = self.source.dim();
        let jdj = &self.isometry.adjoint() * &self.isometry;
        let isometry = jdj.max_abs_diff(&ComplexMatrix::identity(d)).to_f64_lossy();
        let mut marginals = 0.0f64;
        let mut minimal = true;
        for i in 0..self.blocks.len() {
            let diff = self.compressed_projection(i).max_abs_diff(self.source.effect(i));
            marginals = marginals.max(diff.to_f64_lossy());
            let a = self.block(i);
            minimal &= complex_rank(&a, T::of(tol.rank)) == a.rows();
        }
        DilationResiduals { isometry, marginals, minimal }
    }

    /// Structure vectors `psi_n = J h_n` for an orthonormal basis given as the
    /// columns of `basis` (standard basis when `None`).
    pub fn structure_vectors(
        &self,
        basis: Option<&ComplexMatrix<T>>,
        tol: &Tolerances,
    ) -> Result<StructureVectors<T>> {
        let d = self.source.dim();
        let basis = match basis {
            Some(b) => {
                if b.rows() != d || b.cols() != d {
                    return Err(Error::DimMismatch { expected: d, found: b.rows() });
                }
                let dev = (&b.adjoint() * b).max_abs_diff(&ComplexMatrix::identity(d));
                if !(dev <= T::of(tol.validate)) {
                    return Err(Error::BasisNotOrthonormal(dev.to_f64_lossy()));
                }
                b.clone()
            }
            None => ComplexMatrix::identity(d),
        };
        let vectors = (0..d).map(|n| self.isometry.apply(&basis.column(n))).collect();
        Ok(StructureVectors { basis, vectors, blocks: self.blocks.clone() })
    }
}

/// `psi_n = J h_n` together with the fiber layout of the dilation space.
#[derive(Debug, Clone)]
pub struct StructureVectors<T: Scalar> {
    /// Columns are the basis vectors `h_n`.
    pub basis: ComplexMatrix<T>,
    pub vectors: Vec<Vec<C<T>>>,
    pub blocks: Vec<Range<usize>>,
}

impl<T: Scalar> StructureVectors<T> {
    /// `psi_n(x_i) = P_i psi_n`, as coordinates in fiber `i`.
    pub fn component(&self, n: usize, i: usize) -> &[C<T>] {
        &self.vectors[n][self.blocks[i].clone()]
    }

    /// `G[n][m] = <psi_n(x_i) | psi_m(x_i)>`.
    pub fn gram_block(&self, i: usize) -> ComplexMatrix<T> {
        let d = self.vectors.len();
        let mut g = ComplexMatrix::zeros(d, d);
        for n in 0..d {
            for m in 0..d {
                g[(n, m)] = crate::matcore::inner(self.component(n, i), self.component(m, i));
            }
        }
        g
    }

    /// `M(X) = sum_{n,m} sum_{i in X} <psi_n(x_i)|psi_m(x_i)> |h_n><h_m|`, in the standard basis.
    pub fn reconstruct(&self, subset: &[usize]) -> ComplexMatrix<T> {
        let d = self.vectors.len();
        let mut g = ComplexMatrix::zeros(d, d);
        for &i in subset {
            g += &self.gram_block(i);
        }
        &(&self.basis * &g) * &self.basis.adjoint()
    }
}

/// Fiber operators representing a sub-measure `E_i <= M_i` in the dilation.
///
/// Returns `E(x_i) = (A_i^+)^dag E_i A_i^+` on each fiber, the unique operator
/// with `A_i^dag E(x_i) A_i = E_i`.
pub fn below_bound_decompose<T: Scalar>(
    dilation: &NaimarkDilation<T>,
    sub: &[ComplexMatrix<T>],
    tol: &Tolerances,
) -> Result<Vec<ComplexMatrix<T>>> {
    let m = dilation.source();
    if sub.len() != m.len() {
        return Err(Error::DimMismatch { expected: m.len(), found: sub.len() });
    }
    let psd = T::of(tol.psd);
    let eig = T::of(tol.eig);
    let zero = ComplexMatrix::zeros(m.dim(), m.dim());
    let mut out = Vec::with_capacity(sub.len());
    for (i, e) in sub.iter().enumerate() {
        if e.rows() != m.dim() || e.cols() != m.dim() {
            return Err(Error::DimMismatch { expected: m.dim(), found: e.rows() });
        }
        if !loewner_leq(&zero, e, psd, eig)? || !loewner_leq(e, m.effect(i), psd, eig)? {
            return Err(Error::NotBelowBound(i));
        }
        let a = dilation.block(i);
        let pinv = pseudoinverse(&a, T::of(tol.pinv));
        let block = &(&pinv.adjoint() * e) * &pinv;
        out.push(block.hermitian_part());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn pvm_dilation_is_unitary() {
        for m in [fixtures::qubit_x::<f64>(), fixtures::qubit_z(), fixtures::remark4_relabel()] {
            let d = naimark_dilate(&m, &tol()).unwrap();
            assert_eq!(d.total_dim(), 2);
            assert!(d.is_unitary(1e-12));
        }
    }

    #[test]
    fn example_dimensions() {
        let d4 = naimark_dilate(&fixtures::example4_m::<f64>(), &tol()).unwrap();
        assert_eq!(d4.total_dim(), 4);
        assert!(!d4.is_unitary(1e-8));
        let d5 = naimark_dilate(&fixtures::example5_m::<f64>(), &tol()).unwrap();
        assert_eq!(d5.total_dim(), 6);
        let dp = naimark_dilate(&fixtures::example5_mprime::<f64>(), &tol()).unwrap();
        assert_eq!(dp.multiplicities(), vec![2, 2, 2]);
        for d in [d4, d5, dp] {
            let r = d.residuals(&tol());
            assert!(r.isometry < 1e-14 && r.marginals < 1e-14 && r.minimal, "{r:?}");
        }
    }

    #[test]
    fn projection_compresses_to_effect() {
        let m = fixtures::example5_mprime::<f64>();
        let d = naimark_dilate(&m, &tol()).unwrap();
        let j = d.isometry();
        for i in 0..m.len() {
            let c = &(&j.adjoint() * &d.projection(i)) * j;
            assert!(c.max_abs_diff(m.effect(i)) < 1e-14);
        }
    }

    #[test]
    fn structure_vector_gram_blocks() {
        let m = fixtures::example4_m::<f64>();
        let d = naimark_dilate(&m, &tol()).unwrap();
        let sv = d.structure_vectors(None, &tol()).unwrap();
        for i in 0..4 {
            assert!(sv.gram_block(i).max_abs_diff(m.effect(i)) < 1e-15);
        }
        let all: Vec<usize> = (0..4).collect();
        assert!(sv.reconstruct(&all).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn structure_vectors_of_pvm_are_basis_relabelling() {
        let m = fixtures::qubit_z::<f64>();
        let d = naimark_dilate(&m, &tol()).unwrap();
        let sv = d.structure_vectors(None, &tol()).unwrap();
        for v in &sv.vectors {
            let nonzero: Vec<_> = v.iter().filter(|z| z.norm() > 1e-12).collect();
            assert_eq!(nonzero.len(), 1);
            assert!((nonzero[0].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let m = fixtures::qubit_z::<f64>();
        let d = naimark_dilate(&m, &tol()).unwrap();
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(d.structure_vectors(Some(&b), &tol()), Err(Error::BasisNotOrthonormal(_))));
    }

    #[test]
    fn lemma_blocks_for_scalar_sub_measures() {
        let m = fixtures::example5_mprime::<f64>();
        let d = naimark_dilate(&m, &tol()).unwrap();
        let same = below_bound_decompose(&d, m.effects(), &tol()).unwrap();
        for b in &same {
            assert!(b.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        }
        let halves: Vec<_> = m.effects().iter().map(|e| e.scale(0.5)).collect();
        for b in below_bound_decompose(&d, &halves, &tol()).unwrap() {
            assert!(b.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-12);
        }
    }

    #[test]
    fn lemma_rejects_sub_effect_above_bound() {
        let m = fixtures::example4_m::<f64>();
        let d = naimark_dilate(&m, &tol()).unwrap();
        let mut sub: Vec<_> = m.effects().to_vec();
        sub[2] = ComplexMatrix::identity(2).scale(0.5);
        assert!(matches!(below_bound_decompose(&d, &sub, &tol()), Err(Error::NotBelowBound(2))));
    }
}
