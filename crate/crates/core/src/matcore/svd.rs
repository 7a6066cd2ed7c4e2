//! One-sided (Hestenes) Jacobi SVD for small dense real matrices.
//!
//! Works directly on the columns, so singular values are accurate to working
//! precision relative to the largest one; no Gram matrix is ever formed.

use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 80;

/// Singular system of a real `m x n` matrix given by columns.
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    /// One per column, descending.
    pub values: Vec<T>,
    /// Right singular vectors (length `n`), aligned with `values`.
    pub right: Vec<Vec<T>>,
    /// `A v_k = sigma_k u_k`, stored unnormalized as `A v_k`.
    pub scaled_left: Vec<Vec<T>>,
}

impl<T: Scalar> Svd<T> {
    pub fn largest(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    /// Number of singular values above `rel * largest`.
    pub fn rank(&self, rel: T) -> usize {
        let cut = rel * self.largest();
        self.values.iter().filter(|&&s| s > cut).count()
    }
}

/// SVD of the matrix whose columns are `columns` (all of length `m`).
pub fn svd_columns<T: Scalar>(columns: &[Vec<T>]) -> Svd<T> {
    let n = columns.len();
    let mut u: Vec<Vec<T>> = columns.to_vec();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|k| {
            let mut e = vec![T::zero(); n];
            e[k] = T::one();
            e
        })
        .collect();
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha: T = u[i].iter().map(|x| *x * *x).sum();
                let beta: T = u[j].iter().map(|x| *x * *x).sum();
                let gamma: T = u[i].iter().zip(&u[j]).map(|(a, b)| *a * *b).sum();
                if alpha == T::zero() || beta == T::zero() {
                    continue;
                }
                if gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::of(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut u, i, j, c, s);
                rotate_pair(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = u.iter().map(|col| col.iter().map(|x| *x * *x).sum::<T>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap_or(std::cmp::Ordering::Equal));
    Svd {
        values: order.iter().map(|&k| norms[k]).collect(),
        right: order.iter().map(|&k| v[k].clone()).collect(),
        scaled_left: order.iter().map(|&k| u[k].clone()).collect(),
    }
}

fn rotate_pair<T: Scalar>(cols: &mut [Vec<T>], i: usize, j: usize, c: T, s: T) {
    let (head, tail) = cols.split_at_mut(j);
    let a = &mut head[i];
    let b = &mut tail[0];
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let xi = *x;
        let yj = *y;
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_values() {
        let svd = svd_columns(&[vec![3.0, 0.0], vec![0.0, -4.0]]);
        assert_eq!(svd.values, vec![4.0, 3.0]);
    }

    #[test]
    fn rank_deficient_wide() {
        // 2 x 3 with third column = first + second
        let svd = svd_columns(&[vec![1.0, 2.0], vec![0.0, 1.0], vec![1.0, 3.0]]);
        assert_eq!(svd.rank(1e-10), 2);
        let null = &svd.right[2];
        let cols = [[1.0, 2.0], [0.0, 1.0], [1.0, 3.0]];
        for row in 0..2 {
            let s: f64 = cols.iter().zip(null).map(|(c, n)| c[row] * n).sum();
            assert!(s.abs() < 1e-14);
        }
    }

    #[test]
    fn matches_known_singular_values() {
        // [[1, 1], [0, 1]] has singular values golden ratio and its inverse
        let svd = svd_columns(&[vec![1.0, 0.0], vec![1.0, 1.0]]);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((svd.values[0] - phi).abs() < 1e-14);
        assert!((svd.values[1] - 1.0 / phi).abs() < 1e-14);
    }
}
