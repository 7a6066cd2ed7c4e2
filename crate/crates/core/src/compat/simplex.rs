//! Dense phase-one simplex for `A x = b, x >= 0`.
//!
//! Redundant equality rows are dropped by Gaussian elimination with partial
//! pivoting before the tableau is built; an inconsistent reduced system is
//! reported as infeasible without pivoting. The remaining rows receive one
//! artificial variable each and the sum of artificials is minimized with
//! Bland's smallest-index rule, which cannot cycle.

use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct PhaseOneOutcome<T: Scalar> {
    /// Optimal sum of artificials (zero exactly when feasible).
    pub objective: T,
    /// Structural solution at the final basis.
    pub x: Vec<T>,
    pub pivots: usize,
    /// Rows kept after removing linear dependencies.
    pub independent_rows: usize,
    /// The reduced system itself is inconsistent.
    pub inconsistent: bool,
}

/// Solves the phase-one problem for `rows` (each of length `n`) and `rhs`.
pub fn phase_one<T: Scalar>(rows: &[Vec<T>], rhs: &[T], n: usize) -> PhaseOneOutcome<T> {
    let zero_tol = T::epsilon().sqrt() * T::of(0.01);
    let (a, b, inconsistency) = independent_rows(rows, rhs, n, zero_tol);
    let m = a.len();
    if inconsistency > zero_tol {
        return PhaseOneOutcome {
            objective: inconsistency,
            x: vec![T::zero(); n],
            pivots: 0,
            independent_rows: m,
            inconsistent: true,
        };
    }

    // tableau columns: n structural, m artificial, then rhs
    let width = n + m + 1;
    let mut t = vec![vec![T::zero(); width]; m];
    for i in 0..m {
        let sign = if b[i] < T::zero() { -T::one() } else { T::one() };
        for j in 0..n {
            t[i][j] = a[i][j] * sign;
        }
        t[i][n + i] = T::one();
        t[i][width - 1] = b[i] * sign;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs of the phase-one objective sum(artificials)
    let mut cost = vec![T::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[width - 1] -= row[width - 1];
    }

    let max_pivots = 50 * (n + m).max(1) * (m.max(1));
    let mut pivots = 0;
    while pivots < max_pivots {
        let Some(enter) = (0..n + m).find(|&j| cost[j] < -zero_tol) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = T::infinity();
        for i in 0..m {
            if t[i][enter] > zero_tol {
                let ratio = t[i][width - 1] / t[i][enter];
                let better = ratio < best - zero_tol
                    || ((ratio - best).abs() <= zero_tol && leave.is_some_and(|l| basis[i] < basis[l]));
                if leave.is_none() || better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // unbounded direction cannot occur for a bounded-below objective
            break;
        };
        pivot(&mut t, &mut cost, r, enter);
        basis[r] = enter;
        pivots += 1;
    }

    let mut x = vec![T::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = t[i][width - 1];
        }
    }
    let objective = (-cost[width - 1]).max(T::zero());
    PhaseOneOutcome { objective, x, pivots, independent_rows: m, inconsistent: false }
}

fn pivot<T: Scalar>(t: &mut [Vec<T>], cost: &mut [T], r: usize, c: usize) {
    let p = t[r][c];
    for v in t[r].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let f = row[c];
        if f != T::zero() {
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * *pv;
            }
        }
    }
    let f = cost[c];
    if f != T::zero() {
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            *v -= f * *pv;
        }
    }
}

/// Keeps a maximal independent subset of the original rows. Also returns the
/// largest residual right-hand side left on a dependent row, which is nonzero
/// only for an inconsistent system.
fn independent_rows<T: Scalar>(rows: &[Vec<T>], rhs: &[T], n: usize, zero_tol: T) -> (Vec<Vec<T>>, Vec<T>, T) {
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .chain(rhs.iter())
        .fold(T::one(), |acc, x| acc.max(x.abs()));
    let cut = zero_tol * scale;
    let mut work: Vec<(usize, Vec<T>, T)> =
        rows.iter().zip(rhs).enumerate().map(|(i, (r, &b))| (i, r.clone(), b)).collect();
    let mut rank = 0;
    for col in 0..n {
        if rank == work.len() {
            break;
        }
        let (best, mag) = (rank..work.len())
            .map(|i| (i, work[i].1[col].abs()))
            .fold((rank, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag <= cut {
            continue;
        }
        work.swap(rank, best);
        let (head, tail) = work.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let f = row.1[col] / pivot_row.1[col];
            if f != T::zero() {
                for k in col..n {
                    row.1[k] -= f * pivot_row.1[k];
                }
                row.2 -= f * pivot_row.2;
            }
        }
        rank += 1;
    }
    let inconsistency = work[rank..].iter().fold(T::zero(), |acc, r| acc.max(r.2.abs())) / scale;
    let mut kept: Vec<usize> = work[..rank].iter().map(|r| r.0).collect();
    kept.sort_unstable();
    (kept.iter().map(|&i| rows[i].clone()).collect(), kept.iter().map(|&i| rhs[i]).collect(), inconsistency)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_feasible_system() {
        // x + y = 1, x - y = 0  ->  x = y = 1/2
        let out = phase_one::<f64>(&[vec![1.0, 1.0], vec![1.0, -1.0]], &[1.0, 0.0], 2);
        assert!(out.objective < 1e-12);
        assert!((out.x[0] - 0.5).abs() < 1e-12 && (out.x[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn nonnegativity_makes_infeasible() {
        // x + y = 1, x = 2 forces y = -1
        let out = phase_one(&[vec![1.0, 1.0], vec![1.0, 0.0]], &[1.0, 2.0], 2);
        assert!(out.objective > 0.5);
        assert!(!out.inconsistent);
    }

    #[test]
    fn redundant_rows_removed() {
        let rows = vec![vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0], vec![0.0, 1.0, 1.0]];
        let out = phase_one(&rows, &[1.0, 2.0, 1.0], 3);
        assert_eq!(out.independent_rows, 2);
        assert!(out.objective < 1e-12);
    }

    #[test]
    fn inconsistent_rows_detected() {
        let rows = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
        let out = phase_one(&rows, &[1.0, 3.0], 2);
        assert!(out.inconsistent);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // classic degenerate vertex: many constraints through the origin
        let rows = vec![
            vec![1.0, -1.0, 0.0, 0.0, 1.0],
            vec![0.0, 1.0, -1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, -1.0, 0.0],
            vec![1.0, 1.0, 1.0, 1.0, 0.0],
        ];
        let out = phase_one(&rows, &[0.0, 0.0, 0.0, 1.0], 5);
        assert!(out.objective < 1e-12);
        for (r, b) in rows.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            let s: f64 = r.iter().zip(&out.x).map(|(a, x)| a * x).sum();
            assert!((s - b).abs() < 1e-12);
        }
        assert!(out.x.iter().all(|&x| x >= -1e-15));
    }
}
