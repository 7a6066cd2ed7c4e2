//! Joint-observable search by Dykstra's alternating projections.
//!
//! The unknown is a grid of Hermitian matrices `N_ij`. The two closed convex
//! sets are
//!
//! * the product of face cones `{ V_ij X V_ij^dag : X >= 0 }`, projected onto
//!   by clipping negative eigenvalues of `V_ij^dag N_ij V_ij` cell by cell, and
//! * the affine set `sum_j N_ij = M_i`, `sum_i N_ij = M'_j`, projected onto in
//!   closed form: with row deficits `R_i`, column deficits `C_j` and total
//!   deficit `S`, add `R_i / N' + C_j / N - S / (N N')` to every cell.
//!
//! `V_ij` is an orthonormal basis of `ran M_i ∩ ran M'_j`. Every joint
//! observable satisfies `N_ij <= M_i` and `N_ij <= M'_j`, so its cells already
//! live there; restricting the cones keeps the feasible set and spares the
//! iteration from creeping towards a boundary of the full PSD cone.
//!
//! When the sets intersect, the cone iterate converges to a certificate. When
//! they do not, the difference of the two iterates converges to the gap
//! vector between the sets, whose length is the reported distance. That
//! infeasibility verdict is a numerical judgement, not a dual certificate.

use super::kernel::JointObservable;
use super::{FeasibilityReport, Method, Status};
use crate::error::{Error, Result};
use crate::matcore::{eig_hermitian, project_psd, ComplexMatrix};
use crate::povm::DiscretePovm;
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

type Grid<T> = Vec<ComplexMatrix<T>>;

struct Problem<'a, T: Scalar> {
    m: &'a DiscretePovm<T>,
    mp: &'a DiscretePovm<T>,
    n: usize,
    np: usize,
    d: usize,
    /// Face basis per cell; `None` when the face is the whole space.
    faces: Vec<Option<ComplexMatrix<T>>>,
}

/// Projector onto the numerical range of `m.effect(i)`.
fn range_projector<T: Scalar>(m: &DiscretePovm<T>, i: usize, tol: &Tolerances) -> Result<ComplexMatrix<T>> {
    let dec = m.effect_rank(i, tol)?;
    Ok(ComplexMatrix::sum(
        m.dim(),
        dec.eigenvectors.iter().map(|v| ComplexMatrix::projector(v)).collect::<Vec<_>>().iter(),
    ))
}

/// Orthonormal basis of `ran P ∩ ran Q`, the kernel of `(I - P) + (I - Q)`.
fn range_intersection<T: Scalar>(
    p: &ComplexMatrix<T>,
    q: &ComplexMatrix<T>,
    tol: &Tolerances,
) -> Result<Option<ComplexMatrix<T>>> {
    let d = p.dim();
    let id = ComplexMatrix::identity(d);
    let gap = &(&id - p) + &(&id - q);
    let e = eig_hermitian(&gap.hermitian_part(), T::of(tol.eig))?;
    let keep: Vec<usize> = (0..d).filter(|&k| e.values[k] <= T::of(tol.rank)).collect();
    if keep.len() == d {
        return Ok(None);
    }
    let cols: Vec<_> = keep.iter().map(|&k| e.vector(k)).collect();
    Ok(Some(ComplexMatrix::from_columns(d, &cols)))
}

impl<'a, T: Scalar> Problem<'a, T> {
    fn new(m: &'a DiscretePovm<T>, mp: &'a DiscretePovm<T>, tol: &Tolerances) -> Result<Self> {
        let ps = (0..m.len()).map(|i| range_projector(m, i, tol)).collect::<Result<Vec<_>>>()?;
        let qs = (0..mp.len()).map(|j| range_projector(mp, j, tol)).collect::<Result<Vec<_>>>()?;
        let mut faces = Vec::with_capacity(ps.len() * qs.len());
        for p in &ps {
            for q in &qs {
                faces.push(range_intersection(p, q, tol)?);
            }
        }
        Ok(Self { m, mp, n: m.len(), np: mp.len(), d: m.dim(), faces })
    }

    fn cell(&self, i: usize, j: usize) -> usize {
        i * self.np + j
    }

    fn row_deficits(&self, g: &Grid<T>) -> Vec<ComplexMatrix<T>> {
        (0..self.n)
            .map(|i| {
                let mut r = self.m.effect(i).clone();
                for j in 0..self.np {
                    r -= &g[self.cell(i, j)];
                }
                r
            })
            .collect()
    }

    fn col_deficits(&self, g: &Grid<T>) -> Vec<ComplexMatrix<T>> {
        (0..self.np)
            .map(|j| {
                let mut c = self.mp.effect(j).clone();
                for i in 0..self.n {
                    c -= &g[self.cell(i, j)];
                }
                c
            })
            .collect()
    }

    fn project_affine(&self, g: &Grid<T>) -> Grid<T> {
        let rows = self.row_deficits(g);
        let cols = self.col_deficits(g);
        let total = ComplexMatrix::sum(self.d, rows.iter());
        let inv_n = T::one() / T::of_usize(self.n);
        let inv_np = T::one() / T::of_usize(self.np);
        let shared = total.scale(inv_n * inv_np);
        let mut out = g.clone();
        for i in 0..self.n {
            let ri = rows[i].scale(inv_np);
            for j in 0..self.np {
                let cell = &mut out[self.cell(i, j)];
                *cell += &ri;
                *cell += &cols[j].scale(inv_n);
                *cell -= &shared;
            }
        }
        out
    }

    fn project_cones(&self, g: &Grid<T>, eig_tol: T) -> Result<Grid<T>> {
        g.iter()
            .zip(&self.faces)
            .map(|(c, face)| match face {
                None => project_psd(&c.hermitian_part(), eig_tol),
                Some(v) if v.cols() == 0 => Ok(ComplexMatrix::zeros(self.d, self.d)),
                Some(v) => {
                    let x = project_psd(&(&(&v.adjoint() * c) * v).hermitian_part(), eig_tol)?;
                    Ok((&(v * &x) * &v.adjoint()).hermitian_part())
                }
            })
            .collect()
    }

    fn marginal_residual(&self, g: &Grid<T>) -> T {
        let r = self.row_deficits(g).iter().map(ComplexMatrix::max_abs).fold(T::zero(), T::max);
        let c = self.col_deficits(g).iter().map(ComplexMatrix::max_abs).fold(T::zero(), T::max);
        r.max(c)
    }
}

fn distance<T: Scalar>(a: &Grid<T>, b: &Grid<T>) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let f = (x - y).frobenius();
            f * f
        })
        .sum::<T>()
        .sqrt()
}

fn add<T: Scalar>(a: &Grid<T>, b: &Grid<T>) -> Grid<T> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub<T: Scalar>(a: &Grid<T>, b: &Grid<T>) -> Grid<T> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Alternating-projection feasibility test for a joint observable of `m` and `mp`.
pub fn dykstra_joint<T: Scalar>(
    m: &DiscretePovm<T>,
    mp: &DiscretePovm<T>,
    tol: &Tolerances,
) -> Result<FeasibilityReport<T>> {
    if m.dim() != mp.dim() {
        return Err(Error::DimMismatch { expected: m.dim(), found: mp.dim() });
    }
    let prob = Problem::new(m, mp, tol)?;
    let cells = prob.n * prob.np;
    let zero_grid: Grid<T> = vec![ComplexMatrix::zeros(prob.d, prob.d); cells];
    let eig_tol = T::of(tol.eig);
    let feasible_tol = T::of(tol.dykstra_feasible);
    let every = tol.dykstra_check_every.max(1);

    let mut x = zero_grid.clone();
    let mut p = zero_grid.clone();
    let mut q = zero_grid;
    let mut y;
    let mut last_distance: Option<T> = None;
    let mut residual = T::infinity();

    let mut iter = 0;
    while iter < tol.dykstra_max_iter {
        iter += 1;
        let xp = add(&x, &p);
        y = prob.project_cones(&xp, eig_tol)?;
        p = sub(&xp, &y);
        let yq = add(&y, &q);
        x = prob.project_affine(&yq);
        q = sub(&yq, &x);

        if iter % every != 0 && iter != tol.dykstra_max_iter {
            continue;
        }
        residual = prob.marginal_residual(&y);
        let dist = distance(&x, &y);
        if residual <= feasible_tol {
            let grid = (0..prob.n)
                .map(|i| (0..prob.np).map(|j| y[prob.cell(i, j)].clone()).collect())
                .collect();
            let joint = JointObservable::new(grid, m, mp, tol)?;
            return Ok(FeasibilityReport {
                status: Status::Feasible,
                method: Method::Dykstra,
                kernel: None,
                joint: Some(joint),
                residual: residual.to_f64_lossy(),
                iterations: iter,
                heuristic: false,
                swapped: false,
            });
        }
        if let Some(prev) = last_distance {
            let settled = (dist - prev).abs() <= T::of(1e-9) * dist.max(T::of(tol.dykstra_infeasible));
            if settled && dist > T::of(tol.dykstra_infeasible) {
                return Ok(FeasibilityReport {
                    status: Status::Infeasible,
                    method: Method::Dykstra,
                    kernel: None,
                    joint: None,
                    residual: dist.to_f64_lossy(),
                    iterations: iter,
                    heuristic: true,
                    swapped: false,
                });
            }
        }
        last_distance = Some(dist);
    }
    Ok(FeasibilityReport {
        status: Status::Undecided,
        method: Method::Dykstra,
        kernel: None,
        joint: None,
        residual: residual.to_f64_lossy(),
        iterations: iter,
        heuristic: true,
        swapped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn faces_of_rank_one_marginals_are_rays() {
        let t = Tolerances::default();
        let m = fixtures::example4_m::<f64>();
        let mp = fixtures::example4_mprime::<f64>();
        let prob = Problem::new(&m, &mp, &t).unwrap();
        assert!(prob.faces.iter().all(|f| f.as_ref().is_some_and(|v| v.cols() == 1)));
        // orthogonal projectors share no range
        let z = fixtures::qubit_z::<f64>();
        let prob = Problem::new(&z, &z, &t).unwrap();
        assert_eq!(prob.faces[1].as_ref().unwrap().cols(), 0);
        assert_eq!(prob.faces[0].as_ref().unwrap().cols(), 1);
    }
}
