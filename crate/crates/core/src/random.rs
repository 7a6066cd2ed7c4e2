//! Random POVMs, PVMs and Markov kernels for sampling-based checks.
//!
//! POVMs are built by normalizing positive operators `A_k`:
//! `M_k = S^{-1/2} A_k S^{-1/2}` with `S = sum_k A_k`.

use rand::Rng;

use crate::compat::MarkovKernel;
use crate::error::Result;
use crate::matcore::{eig_hermitian, ComplexMatrix};
use crate::povm::DiscretePovm;
use crate::scalar::{Scalar, C};
use crate::tolerance::Tolerances;

/// Vector with entries uniform in the unit square of the complex plane.
pub fn random_vector<T: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C<T>> {
    (0..dim).map(|_| C::new(T::of(rng.gen_range(-1.0..1.0)), T::of(rng.gen_range(-1.0..1.0)))).collect()
}

/// Positive operator `G G^dag` with `G` a random `dim x rank` matrix.
pub fn random_positive<T: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix<T> {
    let cols: Vec<_> = (0..rank).map(|_| random_vector::<T, R>(rng, dim)).collect();
    ComplexMatrix::sum(dim, cols.iter().map(|v| ComplexMatrix::projector(v)).collect::<Vec<_>>().iter())
}

fn normalize<T: Scalar>(parts: Vec<ComplexMatrix<T>>, dim: usize, tol: &Tolerances) -> Result<DiscretePovm<T>> {
    let s = ComplexMatrix::sum(dim, parts.iter());
    let inv_sqrt = eig_hermitian(&s.hermitian_part(), T::of(tol.eig))?.rebuild_with(|x| T::one() / x.sqrt());
    let effects = parts.iter().map(|a| (&(&inv_sqrt * a) * &inv_sqrt).hermitian_part()).collect();
    DiscretePovm::new(effects, tol)
}

/// POVM whose effect `k` has rank `ranks[k]`; needs `sum ranks >= dim`.
pub fn random_povm_with_ranks<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    ranks: &[usize],
    tol: &Tolerances,
) -> Result<DiscretePovm<T>> {
    let parts = ranks.iter().map(|&r| random_positive(rng, dim, r.clamp(1, dim))).collect();
    normalize(parts, dim, tol)
}

/// POVM with `n` outcomes and random effect ranks.
pub fn random_povm<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n: usize,
    tol: &Tolerances,
) -> Result<DiscretePovm<T>> {
    let mut ranks: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=dim)).collect();
    if ranks.iter().sum::<usize>() < dim {
        ranks[0] = dim;
    }
    random_povm_with_ranks(rng, dim, &ranks, tol)
}

/// Rank-1 POVM with `n >= dim` outcomes.
pub fn random_rank1_povm<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n: usize,
    tol: &Tolerances,
) -> Result<DiscretePovm<T>> {
    random_povm_with_ranks(rng, dim, &vec![1; n.max(dim)], tol)
}

/// Orthonormal basis from Gram-Schmidt on random vectors.
pub fn random_basis<T: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Vec<C<T>>> {
    let mut basis: Vec<Vec<C<T>>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v = random_vector::<T, R>(rng, dim);
        for b in &basis {
            let c = crate::matcore::inner(b, &v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * *y;
            }
        }
        let n = crate::matcore::norm(&v);
        if n > T::of(0.1) {
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    basis
}

/// PVM splitting a random basis into `n <= dim` nonempty blocks.
pub fn random_pvm<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n: usize,
    tol: &Tolerances,
) -> Result<DiscretePovm<T>> {
    let n = n.clamp(1, dim);
    let basis = random_basis::<T, R>(rng, dim);
    let mut owner: Vec<usize> = (0..dim).map(|k| if k < n { k } else { rng.gen_range(0..n) }).collect();
    // shuffle so block sizes vary with position
    for k in (1..dim).rev() {
        owner.swap(k, rng.gen_range(0..=k));
    }
    let effects = (0..n)
        .map(|b| {
            let vs: Vec<_> = (0..dim).filter(|&k| owner[k] == b).map(|k| ComplexMatrix::projector(&basis[k])).collect();
            ComplexMatrix::sum(dim, vs.iter())
        })
        .collect();
    DiscretePovm::new(effects, tol)
}

/// Row-stochastic kernel; each entry is zeroed with probability `sparsity`,
/// but every row and column keeps a positive entry.
pub fn random_kernel<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    sparsity: f64,
    tol: &Tolerances,
) -> Result<MarkovKernel<T>> {
    let mut p: Vec<Vec<f64>> = (0..rows)
        .map(|_| {
            (0..cols).map(|_| if rng.gen_bool(sparsity.clamp(0.0, 1.0)) { 0.0 } else { rng.gen_range(0.05..1.0) }).collect()
        })
        .collect();
    for row in p.iter_mut() {
        if row.iter().all(|&x| x == 0.0) {
            row[rng.gen_range(0..cols)] = 1.0;
        }
    }
    for j in 0..cols {
        if p.iter().all(|row| row[j] == 0.0) {
            p[rng.gen_range(0..rows)][j] = 1.0;
        }
    }
    let p = p
        .into_iter()
        .map(|row| {
            let s: f64 = row.iter().sum();
            row.into_iter().map(|x| T::of(x / s)).collect()
        })
        .collect();
    MarkovKernel::new(p, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=4 {
            let m = random_rank1_povm::<f64, _>(&mut rng, d, d + 2, &tol).unwrap();
            assert!(m.is_rank_one(&tol).unwrap());
            let p = random_pvm::<f64, _>(&mut rng, d, 2, &tol).unwrap();
            assert!(p.is_pvm(&tol));
            let g = random_povm::<f64, _>(&mut rng, d, 3, &tol).unwrap();
            assert_eq!(g.len(), 3);
            let k = random_kernel::<f64, _>(&mut rng, 3, 4, 0.5, &tol).unwrap();
            assert_eq!((k.rows(), k.cols()), (3, 4));
        }
    }
}
