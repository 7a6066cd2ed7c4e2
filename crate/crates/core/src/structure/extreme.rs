//! Extremality in the convex set of POVMs with a fixed outcome set.
//!
//! With `A_i = P_i J` taken from the minimal dilation, `M` is extreme exactly
//! when the real-linear map `(F_1, ..., F_N) -> sum_i A_i^dag F_i A_i` on
//! tuples of Hermitian fiber operators is injective. A nonzero kernel element
//! yields the perturbation `M_i +- t A_i^dag F_i A_i` that splits `M`.

use crate::error::{Error, Result};
use crate::matcore::{hermitian_basis, hermitian_family_rank, svd_columns, vectorize_hermitian, ComplexMatrix};
use crate::povm::{naimark_dilate, DiscretePovm};
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone)]
pub struct ExtremalityReport<T: Scalar> {
    pub extreme: bool,
    /// Dimension of the numerical kernel of the perturbation map.
    pub null_dim: usize,
    /// `sigma_min / sigma_max` of the perturbation map (zero when it has more
    /// columns than rows).
    pub singular_ratio: f64,
    /// Nonzero fiber tuple `F_i` in the kernel, unit norm, when not extreme.
    pub witness: Option<Vec<ComplexMatrix<T>>>,
}

impl<T: Scalar> ExtremalityReport<T> {
    /// The witness pushed back to effect space: `A_i^dag F_i A_i`, summing to zero.
    pub fn effect_witness(&self, m: &DiscretePovm<T>, tol: &Tolerances) -> Result<Option<Vec<ComplexMatrix<T>>>> {
        let Some(w) = &self.witness else {
            return Ok(None);
        };
        let dil = naimark_dilate(m, tol)?;
        Ok(Some(
            w.iter()
                .enumerate()
                .map(|(i, f)| {
                    let a = dil.block(i);
                    &(&a.adjoint() * f) * &a
                })
                .collect(),
        ))
    }
}

pub fn is_extreme<T: Scalar>(m: &DiscretePovm<T>, tol: &Tolerances) -> Result<ExtremalityReport<T>> {
    let dil = naimark_dilate(m, tol)?;
    let d = m.dim();
    let mut columns = Vec::new();
    let mut layout = Vec::new();
    for i in 0..m.len() {
        let a = dil.block(i);
        let mi = a.rows();
        let basis = hermitian_basis::<T>(mi);
        for b in &basis {
            let image = &(&a.adjoint() * b) * &a;
            columns.push(vectorize_hermitian(&image));
        }
        layout.push((mi, basis));
    }
    let n = columns.len();
    let svd = svd_columns(&columns);
    let sigma_max = svd.largest();
    let cut = T::of(tol.null_space) * sigma_max;
    let rank = svd.rank(T::of(tol.null_space)).min(d * d);
    let null_dim = n - rank;
    let singular_ratio = if n > d * d || sigma_max == T::zero() {
        0.0
    } else {
        (svd.values[n - 1] / sigma_max).to_f64_lossy()
    };
    let extreme = null_dim == 0;
    let witness = if extreme {
        None
    } else {
        // the smallest singular direction; columns beyond d^2 have zero singular value
        let k = (0..n).rev().find(|&k| svd.values[k] <= cut).unwrap_or(n - 1);
        let mut coeffs = svd.right[k].clone();
        let big = coeffs.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
        let lead = coeffs.iter().copied().find(|x| x.abs() > T::of(1e-6) * big).unwrap_or_else(T::zero);
        if lead < T::zero() {
            coeffs.iter_mut().for_each(|x| *x = -*x);
        }
        let mut blocks = Vec::with_capacity(m.len());
        let mut pos = 0;
        for (mi, basis) in &layout {
            let mi = *mi;
            let mut f = ComplexMatrix::zeros(mi, mi);
            for b in basis {
                f += &b.scale(coeffs[pos]);
                pos += 1;
            }
            blocks.push(f);
        }
        Some(blocks)
    };
    Ok(ExtremalityReport { extreme, null_dim, singular_ratio, witness })
}

/// Extremality of a rank-1 POVM through linear independence of its effects.
pub fn rank1_extreme_via_independence<T: Scalar>(m: &DiscretePovm<T>, tol: &Tolerances) -> Result<bool> {
    if !m.is_rank_one(tol)? {
        return Err(Error::NotRankOne);
    }
    Ok(hermitian_family_rank(m.effects(), T::of(tol.rank))? == m.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn pvms_are_extreme() {
        for m in [fixtures::qubit_x::<f64>(), fixtures::qubit_z(), fixtures::remark4_relabel()] {
            let r = is_extreme(&m, &tol()).unwrap();
            assert!(r.extreme);
            assert!(r.witness.is_none());
            assert!(rank1_extreme_via_independence(&m, &tol()).unwrap());
        }
        let block = DiscretePovm::new(
            vec![ComplexMatrix::diag_real(&[1.0, 1.0, 0.0]), ComplexMatrix::diag_real(&[0.0, 0.0, 1.0])],
            &tol(),
        )
        .unwrap();
        assert!(is_extreme(&block, &tol()).unwrap().extreme);
    }

    #[test]
    fn example4_not_extreme() {
        let m = fixtures::example4_m::<f64>();
        let r = is_extreme(&m, &tol()).unwrap();
        assert!(!r.extreme);
        assert_eq!(r.null_dim, 1);
        // kernel spanned by (1, -1, 1, -1)
        let w: Vec<f64> = r.witness.unwrap().iter().map(|f| f[(0, 0)].re).collect();
        let h = 0.5;
        for (x, e) in w.iter().zip([h, -h, h, -h]) {
            assert!((x - e).abs() < 1e-12, "{w:?}");
        }
        assert!(!rank1_extreme_via_independence(&m, &tol()).unwrap());
    }

    #[test]
    fn example5_relation_detected() {
        let m = fixtures::example5_m::<f64>();
        let r = is_extreme(&m, &tol()).unwrap();
        assert!(!r.extreme);
        assert_eq!(r.null_dim, 1);
        let ew = r.effect_witness(&m, &tol()).unwrap().unwrap();
        let total = ComplexMatrix::sum(3, ew.iter());
        assert!(total.max_abs() < 1e-12);
        let w: Vec<f64> = r.witness.unwrap().iter().map(|f| f[(0, 0)].re).collect();
        let s = 1.0 / 6f64.sqrt();
        for (x, e) in w.iter().zip([s, s, s, -s, -s, -s]) {
            assert!((x - e).abs() < 1e-12, "{w:?}");
        }
    }

    #[test]
    fn trine_is_extreme() {
        let m = fixtures::trine::<f64>();
        assert!(is_extreme(&m, &tol()).unwrap().extreme);
        assert!(rank1_extreme_via_independence(&m, &tol()).unwrap());
    }

    #[test]
    fn independence_route_needs_rank_one() {
        assert!(matches!(
            rank1_extreme_via_independence(&fixtures::example5_mprime::<f64>(), &tol()),
            Err(Error::NotRankOne)
        ));
        assert!(!is_extreme(&fixtures::example5_mprime::<f64>(), &tol()).unwrap().extreme);
    }
}
