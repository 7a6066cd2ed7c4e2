use std::path::PathBuf;

use clap::{Parser, Subcommand};
use povmkit::compat::MethodChoice;
use povmkit::Tolerances;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "povmkit", version, about = "Analyze finite-dimensional discrete quantum observables")]
pub struct Cli {
    /// Tolerance for POVM validation and certificate checks.
    #[arg(long, global = true, env = "TOL_VALIDATE", value_name = "TOL")]
    pub tol_validate: Option<f64>,
    /// Feasibility tolerance of the LP and alternating-projection solvers.
    #[arg(long, global = true, env = "TOL_SOLVE", value_name = "TOL")]
    pub tol_solve: Option<f64>,
    /// Max-norm tolerance when matching range elements.
    #[arg(long, global = true, env = "TOL_RANGE", value_name = "TOL")]
    pub tol_range: Option<f64>,
    /// Drop zero effects from input POVM documents instead of rejecting them.
    #[arg(long, global = true)]
    pub prune_zero: bool,
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Run the jobs listed in a JSON manifest.
    #[arg(long, value_name = "MANIFEST")]
    pub batch: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

/// Inputs are file paths or `fixture:NAME`.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the POVM invariants of a document.
    Validate { povm: String },
    /// Ranks, extremality, regularity, outcome classes and dilation summary.
    Analyze { povm: String },
    /// Post-process a POVM with a Markov kernel.
    Smear {
        povm: String,
        kernel: String,
        /// Also write the smeared POVM document here.
        #[arg(long, value_name = "PATH")]
        povm_out: Option<PathBuf>,
    },
    /// Decide joint measurability of two POVMs.
    Joint {
        first: String,
        second: String,
        #[arg(long, default_value = "auto", value_parser = parse_method)]
        method: MethodChoice,
        /// Also write the joint observable document here.
        #[arg(long, value_name = "PATH")]
        joint_out: Option<PathBuf>,
    },
    /// Check that both ranges lie in the range of a witness POVM.
    Coexist { first: String, second: String, witness: String },
    /// Recover the kernel of a joint observable with a rank-1 first marginal.
    KernelExtract {
        povm: String,
        joint: String,
        /// Also write the kernel document here.
        #[arg(long, value_name = "PATH")]
        kernel_out: Option<PathBuf>,
    },
    /// Emit built-in POVM documents.
    Fixtures {
        /// Fixture to print; lists the names when omitted.
        name: Option<String>,
        /// Write every fixture as NAME.json into this directory.
        #[arg(long, value_name = "DIR", conflicts_with = "name")]
        dir: Option<PathBuf>,
    },
}

fn parse_method(s: &str) -> Result<MethodChoice, String> {
    s.parse()
}

fn checked(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Invalid(format!("{name} must be a positive finite number, got {v}")))
    }
}

impl Cli {
    /// Defaults overridden by the tolerance flags.
    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        let mut t = Tolerances::default();
        if let Some(v) = self.tol_validate {
            t.validate = checked("--tol-validate", v)?;
        }
        if let Some(v) = self.tol_solve {
            let v = checked("--tol-solve", v)?;
            t.lp_feasibility = v;
            t.dykstra_feasible = v;
        }
        if let Some(v) = self.tol_range {
            t.range = checked("--tol-range", v)?;
        }
        Ok(t)
    }
}
