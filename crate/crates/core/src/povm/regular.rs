use super::{for_each_subset_sum, DiscretePovm};
use crate::error::{Error, Result};
use crate::matcore::{eigvals_hermitian, ComplexMatrix};
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

/// Every range element `M(X)` other than `0` and `I` is neither `<= I/2` nor `>= I/2`.
pub fn is_regular<T: Scalar>(m: &DiscretePovm<T>, tol: &Tolerances) -> Result<bool> {
    if m.len() > tol.range_cap {
        return Err(Error::TooManyOutcomes { n: m.len(), cap: tol.range_cap });
    }
    let d = m.dim();
    let id = ComplexMatrix::identity(d);
    let zero_tol = T::of(tol.validate);
    let psd = T::of(tol.psd);
    let half = T::of(0.5);
    let mut regular = true;
    let mut failure = None;
    for_each_subset_sum(m.effects(), d, |_, e| {
        if !regular || failure.is_some() {
            return;
        }
        if e.max_abs() <= zero_tol || e.max_abs_diff(&id) <= zero_tol {
            return;
        }
        match eigvals_hermitian(e, T::of(tol.eig)) {
            Ok(vals) => {
                let below = vals[d - 1] <= half + psd;
                let above = vals[0] >= half - psd;
                if below || above {
                    regular = false;
                }
            }
            Err(err) => failure = Some(err),
        }
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(regular),
    }
}
