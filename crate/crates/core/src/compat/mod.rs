//! Compatibility of observables: smearing, joint measurability, coexistence.

mod coexist;
mod dykstra;
mod kernel;
mod lp;
mod range;
mod simplex;

pub use coexist::{rank1_coexistence_kernel, CoexistenceKernel};
pub use dykstra::dykstra_joint;
pub use kernel::{
    check_commutation, extract_kernel_rank1, joint_from_kernel, smear, smear_effects, JointObservable,
    JointResiduals, MarkovKernel,
};
pub use lp::smearing_feasible;
pub use range::{coexistent_with, range_enumerate, range_included, CoexistenceReport, RangeInclusion, RangeSet};
pub use simplex::{phase_one, PhaseOneOutcome};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::povm::DiscretePovm;
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible,
    Undecided,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::Undecided => "undecided",
        })
    }
}

/// Solver that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lp,
    Dykstra,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Lp => "lp",
            Method::Dykstra => "dykstra",
        })
    }
}

/// Solver selection for [`jointly_measurable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    /// LP when either observable is rank-1, alternating projections otherwise.
    #[default]
    Auto,
    Lp,
    Dykstra,
}

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Self::Auto),
            "lp" => Ok(Self::Lp),
            "dykstra" => Ok(Self::Dykstra),
            other => Err(format!("unknown method {other:?} (expected auto, lp or dykstra)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FeasibilityReport<T: Scalar> {
    pub status: Status,
    pub method: Method,
    /// Smearing kernel certificate (LP route).
    pub kernel: Option<MarkovKernel<T>>,
    /// Joint observable certificate, first marginal = first argument.
    pub joint: Option<JointObservable<T>>,
    /// LP: phase-one objective or certificate residual. Dykstra: marginal
    /// residual when feasible or undecided, inter-set distance when infeasible.
    pub residual: f64,
    pub iterations: usize,
    /// Verdict is numerical rather than exact (alternating projections).
    pub heuristic: bool,
    /// The kernel maps the second argument onto the first.
    pub swapped: bool,
}

impl<T: Scalar> FeasibilityReport<T> {
    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }
}

/// Decides whether `m` and `mp` admit a joint observable.
///
/// With a rank-1 argument the question reduces exactly to smearing and is
/// answered by the LP; otherwise alternating projections are used.
pub fn jointly_measurable<T: Scalar>(
    m: &DiscretePovm<T>,
    mp: &DiscretePovm<T>,
    method: MethodChoice,
    tol: &Tolerances,
) -> Result<FeasibilityReport<T>> {
    if m.dim() != mp.dim() {
        return Err(Error::DimMismatch { expected: m.dim(), found: mp.dim() });
    }
    if method == MethodChoice::Dykstra {
        return dykstra_joint(m, mp, tol);
    }
    if m.is_rank_one(tol)? {
        let mut report = smearing_feasible(m, mp, tol)?;
        if let Some(k) = &report.kernel {
            report.joint = Some(joint_from_kernel(m, k, tol)?.with_second(mp, tol)?);
        }
        return Ok(report);
    }
    if mp.is_rank_one(tol)? {
        let mut report = smearing_feasible(mp, m, tol)?;
        report.swapped = true;
        if let Some(k) = &report.kernel {
            report.joint = Some(joint_from_kernel(mp, k, tol)?.with_second(m, tol)?.transposed());
        }
        return Ok(report);
    }
    match method {
        MethodChoice::Lp => Err(Error::LpNeedsRankOne),
        _ => dykstra_joint(m, mp, tol),
    }
}

impl<T: Scalar> JointObservable<T> {
    /// Re-anchors the second marginal on a given POVM (labels included),
    /// re-verifying the marginal identities.
    pub fn with_second(self, second: &DiscretePovm<T>, tol: &Tolerances) -> Result<Self> {
        let grid = self.grid().to_vec();
        let first = self.first().clone();
        JointObservable::new(grid, &first, second, tol)
    }
}
