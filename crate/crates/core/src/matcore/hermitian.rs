//! Positivity, Loewner order and the real vector space of Hermitian matrices.

use super::eig::{eig_hermitian, eigvals_hermitian};
use super::matrix::ComplexMatrix;
use super::svd::svd_columns;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

/// True iff `max |A - A^dag| <= tol` entrywise.
pub fn hermitize_check<T: Scalar>(a: &ComplexMatrix<T>, tol: T) -> bool {
    a.is_square() && a.hermitian_deviation() <= tol
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<T: Scalar>(a: &ComplexMatrix<T>, eig_tol: T) -> Result<T> {
    if a.dim() == 0 {
        return Ok(T::zero());
    }
    Ok(eigvals_hermitian(a, eig_tol)?[0])
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn is_psd<T: Scalar>(a: &ComplexMatrix<T>, tol: T, eig_tol: T) -> Result<bool> {
    Ok(min_eigenvalue(a, eig_tol)? >= -tol)
}

/// `A <= B` in the Loewner order, i.e. `B - A` is PSD within `tol`.
pub fn loewner_leq<T: Scalar>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    tol: T,
    eig_tol: T,
) -> Result<bool> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimMismatch { expected: a.rows(), found: b.rows() });
    }
    for m in [a, b] {
        let dev = m.hermitian_deviation();
        if !(dev <= eig_tol * T::one().max(m.max_abs())) {
            return Err(Error::NonHermitian(dev.to_f64_lossy()));
        }
    }
    is_psd(&(b - a), tol, eig_tol)
}

/// Real coordinates of a Hermitian matrix in an orthonormal basis of the
/// `d^2`-dimensional space of Hermitian matrices with inner product `tr[AB]`.
///
/// Layout: the `d` diagonal entries, then for each `k < l` in row-major order
/// `sqrt(2) Re a_kl` followed by `sqrt(2) Im a_kl`.
pub fn vectorize_hermitian<T: Scalar>(a: &ComplexMatrix<T>) -> Vec<T> {
    let d = a.dim();
    let r2 = T::SQRT_2();
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        out.push(a[(k, k)].re);
    }
    for k in 0..d {
        for l in k + 1..d {
            // average the two triangles so mildly non-Hermitian input is projected
            let z = (a[(k, l)] + a[(l, k)].conj()) * T::of(0.5);
            out.push(r2 * z.re);
            out.push(r2 * z.im);
        }
    }
    out
}

/// Inverse of [`vectorize_hermitian`].
pub fn unvectorize_hermitian<T: Scalar>(v: &[T], d: usize) -> ComplexMatrix<T> {
    assert_eq!(v.len(), d * d);
    let inv = T::one() / T::SQRT_2();
    let mut m = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        m[(k, k)] = C::new(v[k], T::zero());
    }
    let mut pos = d;
    for k in 0..d {
        for l in k + 1..d {
            let z = C::new(v[pos] * inv, v[pos + 1] * inv);
            m[(k, l)] = z;
            m[(l, k)] = z.conj();
            pos += 2;
        }
    }
    m
}

/// Orthonormal basis of the real space of `m x m` Hermitian matrices
/// (unit diagonals, then symmetric and antisymmetric off-diagonal pairs).
pub fn hermitian_basis<T: Scalar>(m: usize) -> Vec<ComplexMatrix<T>> {
    let mut basis = Vec::with_capacity(m * m);
    let mut e = vec![T::zero(); m * m];
    for k in 0..m * m {
        e.iter_mut().for_each(|x| *x = T::zero());
        e[k] = T::one();
        basis.push(unvectorize_hermitian(&e, m));
    }
    basis
}

/// Dimension of the real linear span of a family of Hermitian matrices.
///
/// Singular values at or below `tol * sigma_max` count as zero.
pub fn hermitian_family_rank<T: Scalar>(family: &[ComplexMatrix<T>], tol: T) -> Result<usize> {
    let Some(first) = family.first() else {
        return Ok(0);
    };
    let d = first.rows();
    for m in family {
        if m.rows() != d || m.cols() != d {
            return Err(Error::DimMismatch { expected: d, found: m.rows() });
        }
    }
    let cols: Vec<Vec<T>> = family.iter().map(vectorize_hermitian).collect();
    let svd = svd_columns(&cols);
    if svd.largest() == T::zero() {
        return Ok(0);
    }
    Ok(svd.rank(tol))
}

fn realified_columns<T: Scalar>(a: &ComplexMatrix<T>) -> Vec<Vec<T>> {
    let (m, n) = (a.rows(), a.cols());
    let mut cols = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut col = vec![T::zero(); 2 * m];
        for i in 0..m {
            col[i] = a[(i, j)].re;
            col[m + i] = a[(i, j)].im;
        }
        cols.push(col);
    }
    for j in 0..n {
        let mut col = vec![T::zero(); 2 * m];
        for i in 0..m {
            col[i] = -a[(i, j)].im;
            col[m + i] = a[(i, j)].re;
        }
        cols.push(col);
    }
    cols
}

/// Numerical rank of a complex matrix, relative cutoff `rel * sigma_max`.
pub fn complex_rank<T: Scalar>(a: &ComplexMatrix<T>, rel: T) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    let svd = svd_columns(&realified_columns(a));
    if svd.largest() == T::zero() {
        return 0;
    }
    // every singular value of the real embedding appears twice
    svd.rank(rel) / 2
}

/// Moore-Penrose pseudoinverse of a complex matrix.
///
/// Computed from the SVD of the real `2m x 2n` embedding
/// `[[Re A, -Im A], [Im A, Re A]]`; singular values at or below
/// `rel_cut * sigma_max` are dropped.
pub fn pseudoinverse<T: Scalar>(a: &ComplexMatrix<T>, rel_cut: T) -> ComplexMatrix<T> {
    let (m, n) = (a.rows(), a.cols());
    let svd = svd_columns(&realified_columns(a));
    let cut = rel_cut * svd.largest();
    // pinv(R) = sum_k v_k w_k^T / sigma_k^2 with w_k = R v_k
    let mut real = vec![vec![T::zero(); 2 * m]; 2 * n];
    for (k, &s) in svd.values.iter().enumerate() {
        if !(s > cut) {
            continue;
        }
        let inv = T::one() / (s * s);
        let v = &svd.right[k];
        let w = &svd.scaled_left[k];
        for r in 0..2 * n {
            let vr = v[r] * inv;
            if vr == T::zero() {
                continue;
            }
            for c in 0..2 * m {
                real[r][c] += vr * w[c];
            }
        }
    }
    let mut out = ComplexMatrix::zeros(n, m);
    for r in 0..n {
        for c in 0..m {
            out[(r, c)] = C::new(real[r][c], real[n + r][c]);
        }
    }
    out
}

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
pub fn project_psd<T: Scalar>(a: &ComplexMatrix<T>, eig_tol: T) -> Result<ComplexMatrix<T>> {
    let e = eig_hermitian(a, eig_tol)?;
    if e.min() >= T::zero() {
        return Ok(a.hermitian_part());
    }
    Ok(e.rebuild_with(|x| x.max(T::zero())))
}

/// Real inner product `tr[AB]` of Hermitian matrices.
pub fn trace_inner<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> T {
    let d = a.dim();
    let mut s = T::zero();
    for i in 0..d {
        for j in 0..d {
            s += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    s
}
