//! Numerical tolerances used across the analyses.
//!
//! All values are stored as `f64` and converted to the working scalar at the
//! point of use. The defaults are tuned for `f64`; [`Tolerances::single_precision`]
//! gives a preset that is attainable in `f32`.

/// Tolerance bundle threaded through every analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Eigensolver convergence and Hermiticity tolerance.
    pub eig: f64,
    /// Smallest eigenvalue accepted as nonnegative.
    pub psd: f64,
    /// Relative singular-value cutoff for numerical rank.
    pub rank: f64,
    /// Max-norm threshold for POVM completeness and certificate re-verification.
    pub validate: f64,
    /// Relative singular-value cutoff for pseudoinverses.
    pub pinv: f64,
    /// Relative Cauchy-Schwarz defect declaring two rank-1 effects proportional.
    pub proportional: f64,
    /// Relative smallest singular value declaring a nontrivial null space.
    pub null_space: f64,
    /// Max-norm distance under which two range elements coincide.
    pub range: f64,
    /// Phase-one objective threshold for LP feasibility.
    pub lp_feasibility: f64,
    /// Marginal residual under which an alternating-projection iterate is feasible.
    pub dykstra_feasible: f64,
    /// Converged inter-set distance above which the problem is declared infeasible.
    pub dykstra_infeasible: f64,
    /// Iteration cap for alternating projections.
    pub dykstra_max_iter: usize,
    /// Residual monitoring period for alternating projections.
    pub dykstra_check_every: usize,
    /// Largest outcome count for which ranges are enumerated.
    pub range_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig: 1e-10,
            psd: 1e-9,
            rank: 1e-8,
            validate: 1e-8,
            pinv: 1e-10,
            proportional: 1e-9,
            null_space: 1e-8,
            range: 1e-9,
            lp_feasibility: 1e-8,
            dykstra_feasible: 1e-9,
            dykstra_infeasible: 1e-6,
            dykstra_max_iter: 100_000,
            dykstra_check_every: 100,
            range_cap: 20,
        }
    }
}

impl Tolerances {
    /// Preset for `f32` arithmetic (about seven significant digits).
    pub fn single_precision() -> Self {
        Self {
            eig: 1e-5,
            psd: 1e-4,
            rank: 1e-4,
            validate: 1e-4,
            pinv: 1e-5,
            proportional: 1e-4,
            null_space: 1e-4,
            range: 1e-4,
            lp_feasibility: 1e-4,
            dykstra_feasible: 1e-4,
            dykstra_infeasible: 1e-2,
            dykstra_max_iter: 20_000,
            dykstra_check_every: 100,
            range_cap: 20,
        }
    }
}

impl Tolerances {
    /// Default preset matched to the precision of `T`.
    pub fn for_scalar<T: crate::scalar::Scalar>() -> Self {
        if T::epsilon() > T::of(1e-10) {
            Self::single_precision()
        } else {
            Self::default()
        }
    }
}
