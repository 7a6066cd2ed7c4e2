//! Markov kernels, smearing, and joint observables built from kernels.

use crate::error::{Error, Result};
use crate::matcore::{min_eigenvalue, ComplexMatrix};
use crate::povm::DiscretePovm;
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

/// Row-stochastic matrix `p[k][j]`: probability of reporting outcome `j` of
/// the smeared observable given outcome `k` of the source.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovKernel<T: Scalar> {
    rows: usize,
    cols: usize,
    p: Vec<T>,
}

impl<T: Scalar> MarkovKernel<T> {
    /// Validates entries in `[0, 1]` and unit row sums, both within `tol.validate`.
    pub fn new(p: Vec<Vec<T>>, tol: &Tolerances) -> Result<Self> {
        let rows = p.len();
        let cols = p.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidKernel("kernel must have at least one row and column".into()));
        }
        let t = T::of(tol.validate);
        for (k, row) in p.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidKernel(format!("row {k} has {} entries, expected {cols}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                if !(x >= -t && x <= T::one() + t) {
                    return Err(Error::InvalidKernel(format!("entry ({k}, {j}) = {x} outside [0, 1]")));
                }
            }
            let s: T = row.iter().copied().sum();
            if !((s - T::one()).abs() <= t) {
                return Err(Error::InvalidKernel(format!("row {k} sums to {s}")));
            }
        }
        Ok(Self { rows, cols, p: p.into_iter().flatten().collect() })
    }

    /// Clamps entries into `[0, 1]` and renormalizes rows before validating.
    /// Used to tidy solver output that is stochastic up to round-off.
    pub fn cleaned(p: Vec<Vec<T>>, tol: &Tolerances) -> Result<Self> {
        let p = p
            .into_iter()
            .map(|row| {
                let row: Vec<T> = row.into_iter().map(|x| x.max(T::zero()).min(T::one())).collect();
                let s: T = row.iter().copied().sum();
                if s > T::zero() {
                    row.into_iter().map(|x| x / s).collect()
                } else {
                    row
                }
            })
            .collect();
        Self::new(p, tol)
    }

    pub fn identity(n: usize) -> Self {
        let mut p = vec![T::zero(); n * n];
        for k in 0..n {
            p[k * n + k] = T::one();
        }
        Self { rows: n, cols: n, p }
    }

    pub fn uniform(rows: usize, cols: usize) -> Self {
        Self { rows, cols, p: vec![T::one() / T::of_usize(cols); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, k: usize, j: usize) -> T {
        self.p[k * self.cols + j]
    }

    pub fn row(&self, k: usize) -> &[T] {
        &self.p[k * self.cols..(k + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|k| self.row(k).to_vec()).collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.p.iter().zip(&other.p).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max)
    }
}

/// Smeared effects `M'_j = sum_k p_kj M_k`, without validation.
pub fn smear_effects<T: Scalar>(m: &DiscretePovm<T>, kernel: &MarkovKernel<T>) -> Result<Vec<ComplexMatrix<T>>> {
    if kernel.rows() != m.len() {
        return Err(Error::DimMismatch { expected: m.len(), found: kernel.rows() });
    }
    let d = m.dim();
    Ok((0..kernel.cols())
        .map(|j| {
            let mut acc = ComplexMatrix::zeros(d, d);
            for k in 0..m.len() {
                let w = kernel.get(k, j);
                if w != T::zero() {
                    acc += &m.effect(k).scale(w);
                }
            }
            acc
        })
        .collect())
}

/// Post-processing of `m` by `kernel`, with outcomes labelled `y1..yN'`.
///
/// Fails with a zero-effect diagnostic when a kernel column vanishes.
pub fn smear<T: Scalar>(m: &DiscretePovm<T>, kernel: &MarkovKernel<T>, tol: &Tolerances) -> Result<DiscretePovm<T>> {
    let effects = smear_effects(m, kernel)?;
    let labels = (1..=effects.len()).map(|j| format!("y{j}")).collect();
    DiscretePovm::with_labels(labels, effects, tol)
}

/// Grid of effects `N_ij` whose row sums reproduce one POVM and column sums
/// the other.
#[derive(Debug, Clone)]
pub struct JointObservable<T: Scalar> {
    dim: usize,
    grid: Vec<Vec<ComplexMatrix<T>>>,
    first: DiscretePovm<T>,
    second: DiscretePovm<T>,
}

/// Max-norm marginal residuals and positivity defect of a joint grid.
#[derive(Debug, Clone, Copy)]
pub struct JointResiduals {
    pub first: f64,
    pub second: f64,
    /// `max(0, -min eigenvalue)` over the grid.
    pub negativity: f64,
}

impl JointResiduals {
    pub fn marginal(&self) -> f64 {
        self.first.max(self.second)
    }
}

impl<T: Scalar> JointObservable<T> {
    /// Validates positivity and both marginals within `tol.validate`.
    pub fn new(
        grid: Vec<Vec<ComplexMatrix<T>>>,
        first: &DiscretePovm<T>,
        second: &DiscretePovm<T>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let joint = Self::unchecked(grid, first, second)?;
        let r = joint.residuals(tol)?;
        if r.negativity > tol.psd {
            return Err(Error::CertificateMismatch(format!("joint effect has eigenvalue {:e}", -r.negativity)));
        }
        if r.marginal() > tol.validate {
            return Err(Error::CertificateMismatch(format!(
                "marginal residuals {:e} / {:e} exceed {:e}",
                r.first, r.second, tol.validate
            )));
        }
        Ok(joint)
    }

    fn unchecked(
        grid: Vec<Vec<ComplexMatrix<T>>>,
        first: &DiscretePovm<T>,
        second: &DiscretePovm<T>,
    ) -> Result<Self> {
        let d = first.dim();
        if second.dim() != d {
            return Err(Error::DimMismatch { expected: d, found: second.dim() });
        }
        if grid.len() != first.len() {
            return Err(Error::DimMismatch { expected: first.len(), found: grid.len() });
        }
        for row in &grid {
            if row.len() != second.len() {
                return Err(Error::DimMismatch { expected: second.len(), found: row.len() });
            }
            for e in row {
                if e.rows() != d || e.cols() != d {
                    return Err(Error::DimMismatch { expected: d, found: e.rows() });
                }
            }
        }
        Ok(Self { dim: d, grid, first: first.clone(), second: second.clone() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &[Vec<ComplexMatrix<T>>] {
        &self.grid
    }

    pub fn get(&self, i: usize, j: usize) -> &ComplexMatrix<T> {
        &self.grid[i][j]
    }

    pub fn first(&self) -> &DiscretePovm<T> {
        &self.first
    }

    pub fn second(&self) -> &DiscretePovm<T> {
        &self.second
    }

    /// `sum_j N_ij`.
    pub fn first_marginal(&self, i: usize) -> ComplexMatrix<T> {
        ComplexMatrix::sum(self.dim, self.grid[i].iter())
    }

    /// `sum_i N_ij`.
    pub fn second_marginal(&self, j: usize) -> ComplexMatrix<T> {
        ComplexMatrix::sum(self.dim, self.grid.iter().map(|row| &row[j]))
    }

    pub fn residuals(&self, tol: &Tolerances) -> Result<JointResiduals> {
        let first = (0..self.first.len())
            .map(|i| self.first_marginal(i).max_abs_diff(self.first.effect(i)).to_f64_lossy())
            .fold(0.0, f64::max);
        let second = (0..self.second.len())
            .map(|j| self.second_marginal(j).max_abs_diff(self.second.effect(j)).to_f64_lossy())
            .fold(0.0, f64::max);
        let mut negativity = 0.0f64;
        for row in &self.grid {
            for e in row {
                let lam = min_eigenvalue(&e.hermitian_part(), T::of(tol.eig))?.to_f64_lossy();
                negativity = negativity.max(-lam);
            }
        }
        Ok(JointResiduals { first, second, negativity })
    }

    /// Same observable with the roles of the two marginals exchanged.
    pub fn transposed(&self) -> Self {
        let n1 = self.first.len();
        let n2 = self.second.len();
        let grid = (0..n2).map(|j| (0..n1).map(|i| self.grid[i][j].clone()).collect()).collect();
        Self { dim: self.dim, grid, first: self.second.clone(), second: self.first.clone() }
    }
}

/// `N_ij = p_ij M_i`, the joint observable of `m` and its smearing by `kernel`.
pub fn joint_from_kernel<T: Scalar>(
    m: &DiscretePovm<T>,
    kernel: &MarkovKernel<T>,
    tol: &Tolerances,
) -> Result<JointObservable<T>> {
    if kernel.rows() != m.len() {
        return Err(Error::DimMismatch { expected: m.len(), found: kernel.rows() });
    }
    let second = smear(m, kernel, tol)?;
    let grid = (0..m.len())
        .map(|i| (0..kernel.cols()).map(|j| m.effect(i).scale(kernel.get(i, j))).collect())
        .collect();
    JointObservable::new(grid, m, &second, tol)
}

/// Recovers the kernel of a joint observable whose first marginal is a rank-1 `m`.
///
/// Every `N_ij <= M_i` is forced to be a multiple `f_ij M_i` of the rank-1
/// effect; `f_ij = tr N_ij / tr M_i`.
pub fn extract_kernel_rank1<T: Scalar>(
    m: &DiscretePovm<T>,
    joint: &JointObservable<T>,
    tol: &Tolerances,
) -> Result<MarkovKernel<T>> {
    if !m.is_rank_one(tol)? {
        return Err(Error::NotRankOne);
    }
    if joint.grid().len() != m.len() || joint.dim() != m.dim() {
        return Err(Error::DimMismatch { expected: m.len(), found: joint.grid().len() });
    }
    let cols = joint.second().len();
    let t = T::of(tol.validate);
    let mut p = Vec::with_capacity(m.len());
    for i in 0..m.len() {
        let mi = m.effect(i);
        let tr = mi.trace_re();
        let mut row = Vec::with_capacity(cols);
        for j in 0..cols {
            let nij = joint.get(i, j);
            let f = nij.trace_re() / tr;
            if !(nij.max_abs_diff(&mi.scale(f)) <= t) {
                return Err(Error::NotProportional(i, j));
            }
            row.push(f);
        }
        p.push(row);
    }
    let kernel = MarkovKernel::cleaned(p, tol)?;
    let smeared = smear_effects(m, &kernel)?;
    for (j, e) in smeared.iter().enumerate() {
        if !(e.max_abs_diff(&joint.second_marginal(j)) <= t) {
            return Err(Error::CertificateMismatch(format!("smeared effect {j} differs from second marginal")));
        }
    }
    Ok(kernel)
}

/// `max_{i,j} |[M_i, M'_j]|_max`.
pub fn check_commutation<T: Scalar>(m: &DiscretePovm<T>, mp: &DiscretePovm<T>) -> Result<T> {
    if m.dim() != mp.dim() {
        return Err(Error::DimMismatch { expected: m.dim(), found: mp.dim() });
    }
    let mut worst = T::zero();
    for a in m.effects() {
        for b in mp.effects() {
            worst = worst.max(a.commutator(b).max_abs());
        }
    }
    Ok(worst)
}
