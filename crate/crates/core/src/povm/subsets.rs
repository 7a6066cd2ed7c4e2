use crate::matcore::ComplexMatrix;
use crate::scalar::Scalar;

/// Indices set in `mask`, ascending.
pub fn subset_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Visits `(mask, M(X))` for every subset `X` of the outcomes, starting with
/// the empty set and proceeding in Gray-code order so each step costs one
/// matrix addition.
pub fn for_each_subset_sum<T: Scalar>(
    effects: &[ComplexMatrix<T>],
    dim: usize,
    mut visit: impl FnMut(u64, &ComplexMatrix<T>),
) {
    let n = effects.len();
    assert!(n < 64);
    let mut acc = ComplexMatrix::zeros(dim, dim);
    let mut mask = 0u64;
    visit(mask, &acc);
    for g in 1u64..(1u64 << n) {
        let bit = g.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask >> bit & 1 == 1 {
            acc += &effects[bit];
        } else {
            acc -= &effects[bit];
        }
        visit(mask, &acc);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visits_every_subset_once() {
        let effects: Vec<ComplexMatrix<f64>> =
            (0..4).map(|k| ComplexMatrix::diag_real(&[2f64.powi(k)])).collect();
        let mut seen = [false; 16];
        for_each_subset_sum(&effects, 1, |mask, m| {
            assert!(!seen[mask as usize]);
            seen[mask as usize] = true;
            assert_eq!(m[(0, 0)].re, mask as f64);
        });
        assert!(seen.iter().all(|&b| b));
        assert_eq!(subset_indices(0b1010), vec![1, 3]);
    }
}
