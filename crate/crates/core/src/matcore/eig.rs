//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real plane rotation that annihilates
//! the (now real) pivot. Sweeps run over all pairs `p < q` until the
//! off-diagonal Frobenius norm drops below machine precision relative to the
//! full norm.

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{czero, Scalar, C};

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `A = V diag(values) V^dag`.
#[derive(Debug, Clone)]
pub struct HermitianEig<T: Scalar> {
    /// Ascending.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Scalar> HermitianEig<T> {
    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        self.vectors.column(k)
    }

    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    /// `V diag(f(values)) V^dag`.
    pub fn rebuild_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.rebuild_with(|x| x)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian to within `tol` relative to `max(1, |A|_max)`.
/// Eigenvalues come back ascending; each eigenvector has its largest-modulus
/// component made real and positive.
pub fn eig_hermitian<T: Scalar>(a: &ComplexMatrix<T>, tol: T) -> Result<HermitianEig<T>> {
    let dev = a.hermitian_deviation();
    if !(dev <= tol * T::one().max(a.max_abs())) {
        return Err(Error::NonHermitian(dev.to_f64_lossy()));
    }
    let n = a.dim();
    let mut m = a.hermitian_part();
    for i in 0..n {
        m[(i, i)] = C::new(m[(i, i)].re, T::zero());
    }
    let mut v = ComplexMatrix::identity(n);
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let total = m.frobenius();
        let off = off_diagonal_norm(&m);
        if off <= eps * total || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q, eps);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).unwrap_or(std::cmp::Ordering::Equal));

    let values = order.iter().map(|&k| diag[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut vec = v.column(k);
        fix_phase(&mut vec);
        for (i, z) in vec.into_iter().enumerate() {
            vectors[(i, col)] = z;
        }
    }
    Ok(HermitianEig { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian<T: Scalar>(a: &ComplexMatrix<T>, tol: T) -> Result<Vec<T>> {
    eig_hermitian(a, tol).map(|e| e.values)
}

fn off_diagonal_norm<T: Scalar>(m: &ComplexMatrix<T>) -> T {
    let n = m.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate<T: Scalar>(m: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize, eps: T) {
    let g = m[(p, q)];
    let r = g.norm();
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    if r == T::zero() || r <= eps * eps * (app.abs() + aqq.abs()) {
        return;
    }
    let phase = g / r;
    let two = T::of(2.0);
    let theta = (aqq - app) / (two * r);
    let t = if theta >= T::zero() {
        T::one() / (theta + (theta * theta + T::one()).sqrt())
    } else {
        -T::one() / (-theta + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
    let u_pp = C::new(c, T::zero());
    let u_pq = C::new(s, T::zero());
    let u_qp = phase.conj() * (-s);
    let u_qq = phase.conj() * c;

    let n = m.rows();
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * u_pp + akq * u_qp;
        m[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        m[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    m[(p, q)] = czero();
    m[(q, p)] = czero();
    m[(p, p)] = C::new(m[(p, p)].re, T::zero());
    m[(q, q)] = C::new(m[(q, q)].re, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

fn fix_phase<T: Scalar>(vec: &mut [C<T>]) {
    let mut best = 0;
    let mut best_abs = T::zero();
    for (i, z) in vec.iter().enumerate() {
        // first index wins near-ties so the choice is stable under round-off
        if z.norm() > best_abs * (T::one() + T::of(1e-9)) {
            best = i;
            best_abs = z.norm();
        }
    }
    if best_abs == T::zero() {
        return;
    }
    let rot = vec[best].conj() / best_abs;
    for z in vec.iter_mut() {
        *z *= rot;
    }
    vec[best] = C::new(vec[best].re, T::zero());
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn diagonal_input() {
        let e = eig_hermitian(&M::diag_real(&[2.0, 1.0]), 1e-10).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0]);
    }

    #[test]
    fn scaled_rank_one_projection() {
        let a = M::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let e = eig_hermitian(&a, 1e-10).unwrap();
        assert!(e.values[0].abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        let v = e.vector(1);
        assert!(v[0].im == 0.0 && v[0].re > 0.0);
    }

    #[test]
    fn complex_off_diagonal() {
        // (1/4)[[1, -i], [i, 1]]
        let a = M::from_rows(vec![
            vec![C::new(0.25, 0.0), C::new(0.0, -0.25)],
            vec![C::new(0.0, 0.25), C::new(0.25, 0.0)],
        ])
        .unwrap();
        let e = eig_hermitian(&a, 1e-10).unwrap();
        assert!(e.values[0].abs() < 1e-15);
        assert!((e.values[1] - 0.5).abs() < 1e-15);
        assert!(e.reconstruct().max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = M::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&a, 1e-10), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn single_precision() {
        let a = ComplexMatrix::<f32>::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = eig_hermitian(&a, 1e-5).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-6);
        assert!((e.values[1] - 3.0).abs() < 1e-6);
    }
}
