//! Smearing kernel from a rank-1 observable to a coexistence witness.
//!
//! Each proportionality class `[x_i]` of `M` is matched with a subset `Z_i`
//! of witness outcomes such that `Mbar(Z_i) = M([x_i])`. The kernel is then
//! `f(x_k, z_l) = tr Mbar(z_l) / tr M([x_k])` for `z_l` in the class subset
//! and zero elsewhere.

use super::kernel::{smear_effects, MarkovKernel};
use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::povm::{subset_indices, DiscretePovm};
use crate::scalar::Scalar;
use crate::structure::equivalence_classes;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone)]
pub struct CoexistenceKernel<T: Scalar> {
    /// Row-stochastic kernel from outcomes of `M` to outcomes of `Mbar`.
    pub kernel: MarkovKernel<T>,
    /// Outcome classes of `M` paired with the chosen subset of `Mbar` outcomes.
    pub class_subsets: Vec<(Vec<usize>, Vec<usize>)>,
    /// Some class admitted a second subset of the same size.
    pub non_unique: bool,
}

fn subset_sum<T: Scalar>(m: &DiscretePovm<T>, mask: u64) -> ComplexMatrix<T> {
    ComplexMatrix::sum(m.dim(), subset_indices(mask).into_iter().map(|k| m.effect(k)))
}

/// Masks of `n` outcomes ordered by cardinality, then numerically.
fn masks_by_size(n: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (1..1u64 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
}

/// Builds the kernel `f` with `Mbar(z_l) = sum_k f(x_k, z_l) M_k`.
pub fn rank1_coexistence_kernel<T: Scalar>(
    m: &DiscretePovm<T>,
    mbar: &DiscretePovm<T>,
    tol: &Tolerances,
) -> Result<CoexistenceKernel<T>> {
    if m.dim() != mbar.dim() {
        return Err(Error::DimMismatch { expected: m.dim(), found: mbar.dim() });
    }
    if mbar.len() > tol.range_cap {
        return Err(Error::TooManyOutcomes { n: mbar.len(), cap: tol.range_cap });
    }
    let partition = equivalence_classes(m, tol)?;
    let range_tol = T::of(tol.range);
    let trace_tol = range_tol * T::of_usize(m.dim());
    let traces: Vec<T> = mbar.effects().iter().map(ComplexMatrix::trace_re).collect();
    let masks = masks_by_size(mbar.len());

    let mut chosen = Vec::with_capacity(partition.len());
    let mut non_unique = false;
    for (c, target) in partition.class_effects.iter().enumerate() {
        let target_tr = target.trace_re();
        let mut found: Option<u64> = None;
        for &mask in &masks {
            if let Some(f) = found {
                if mask.count_ones() > f.count_ones() {
                    break;
                }
            }
            let tr = subset_indices(mask).into_iter().map(|k| traces[k]).sum::<T>();
            if (tr - target_tr).abs() > trace_tol {
                continue;
            }
            if subset_sum(mbar, mask).max_abs_diff(target) <= range_tol {
                if found.is_some() {
                    non_unique = true;
                    break;
                }
                found = Some(mask);
            }
        }
        chosen.push(found.ok_or(Error::RangeNotIncluded(partition.classes[c][0]))?);
    }

    for a in 0..chosen.len() {
        for b in a + 1..chosen.len() {
            let overlap = chosen[a] & chosen[b];
            if overlap != 0 && subset_sum(mbar, overlap).max_abs() > range_tol {
                return Err(Error::OverlapNotNull(a, b));
            }
        }
    }

    let mut p = vec![vec![T::zero(); mbar.len()]; m.len()];
    for (c, class) in partition.classes.iter().enumerate() {
        let class_tr = partition.class_effects[c].trace_re();
        for l in subset_indices(chosen[c]) {
            let f = traces[l] / class_tr;
            for &k in class {
                p[k][l] = f;
            }
        }
    }
    let kernel = MarkovKernel::cleaned(p, tol)?;
    let smeared = smear_effects(m, &kernel)?;
    let t = T::of(tol.validate);
    for (l, e) in smeared.iter().enumerate() {
        if !(e.max_abs_diff(mbar.effect(l)) <= t) {
            return Err(Error::CertificateMismatch(format!("smeared effect {l} differs from witness effect")));
        }
    }
    let class_subsets =
        partition.classes.iter().cloned().zip(chosen.iter().map(|&mask| subset_indices(mask))).collect();
    Ok(CoexistenceKernel { kernel, class_subsets, non_unique })
}
