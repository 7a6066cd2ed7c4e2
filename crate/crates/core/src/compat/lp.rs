use super::kernel::{smear_effects, MarkovKernel};
use super::simplex::phase_one;
use super::{FeasibilityReport, Method, Status};
use crate::error::{Error, Result};
use crate::matcore::vectorize_hermitian;
use crate::povm::DiscretePovm;
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

/// Decides whether `mp` is a smearing of `m`, i.e. whether a Markov kernel
/// with `M'_j = sum_k p_kj M_k` exists.
///
/// Variables `p_kj` (index `k * N' + j`) are constrained by the real
/// coordinates of each matrix equation plus the unit row sums; bounds
/// `p_kj <= 1` follow from the row sums.
pub fn smearing_feasible<T: Scalar>(
    m: &DiscretePovm<T>,
    mp: &DiscretePovm<T>,
    tol: &Tolerances,
) -> Result<FeasibilityReport<T>> {
    if m.dim() != mp.dim() {
        return Err(Error::DimMismatch { expected: m.dim(), found: mp.dim() });
    }
    let n = m.len();
    let np = mp.len();
    let vars = n * np;
    let source: Vec<Vec<T>> = m.effects().iter().map(vectorize_hermitian).collect();
    let d2 = source[0].len();

    let mut rows = Vec::with_capacity(np * d2 + n);
    let mut rhs = Vec::with_capacity(np * d2 + n);
    for j in 0..np {
        let target = vectorize_hermitian(mp.effect(j));
        for r in 0..d2 {
            let mut row = vec![T::zero(); vars];
            for k in 0..n {
                row[k * np + j] = source[k][r];
            }
            rows.push(row);
            rhs.push(target[r]);
        }
    }
    for k in 0..n {
        let mut row = vec![T::zero(); vars];
        for j in 0..np {
            row[k * np + j] = T::one();
        }
        rows.push(row);
        rhs.push(T::one());
    }

    let out = phase_one(&rows, &rhs, vars);
    let mut report = FeasibilityReport {
        status: Status::Infeasible,
        method: Method::Lp,
        kernel: None,
        joint: None,
        residual: out.objective.to_f64_lossy(),
        iterations: out.pivots,
        heuristic: false,
        swapped: false,
    };
    if out.inconsistent || out.objective > T::of(tol.lp_feasibility) {
        return Ok(report);
    }
    let p: Vec<Vec<T>> = (0..n).map(|k| out.x[k * np..(k + 1) * np].to_vec()).collect();
    let kernel = match MarkovKernel::cleaned(p, tol) {
        Ok(k) => k,
        Err(_) => {
            report.status = Status::Undecided;
            return Ok(report);
        }
    };
    let smeared = smear_effects(m, &kernel)?;
    let residual = smeared
        .iter()
        .zip(mp.effects())
        .map(|(a, b)| a.max_abs_diff(b).to_f64_lossy())
        .fold(0.0, f64::max);
    report.residual = residual;
    if residual <= tol.validate {
        report.status = Status::Feasible;
        report.kernel = Some(kernel);
    } else {
        report.status = Status::Undecided;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn example4_pair_is_smearing() {
        let m = fixtures::example4_m::<f64>();
        let r = smearing_feasible(&m, &fixtures::example4_mprime(), &tol()).unwrap();
        assert_eq!(r.status, Status::Feasible);
        assert!(r.residual < 1e-12);
        let k = r.kernel.unwrap();
        assert_eq!((k.rows(), k.cols()), (4, 2));
    }

    #[test]
    fn example5_pair_is_not_smearing() {
        let r = smearing_feasible(&fixtures::example5_m::<f64>(), &fixtures::example5_mprime(), &tol()).unwrap();
        assert_eq!(r.status, Status::Infeasible);
        assert!(r.kernel.is_none());
    }

    #[test]
    fn self_smearing() {
        let m = fixtures::example5_m::<f64>();
        let r = smearing_feasible(&m, &m, &tol()).unwrap();
        assert_eq!(r.status, Status::Feasible);
        // distinct rank-1 directions admit only the identity kernel
        assert!(r.kernel.unwrap().max_abs_diff(&MarkovKernel::identity(6)) < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(smearing_feasible(&fixtures::example5_m::<f64>(), &fixtures::qubit_z(), &tol()).is_err());
    }
}
