//! Reports and input loading.

use std::fs;

use povmkit::{fixtures, Tolerances};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::document::{canonical_json, PovmDocument};
use crate::error::CliError;

/// Prefix selecting a built-in fixture instead of a file.
pub const FIXTURE_PREFIX: &str = "fixture:";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub source: String,
    pub sha256: String,
    /// Labels of zero effects dropped by `--prune-zero`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pruned: Vec<String>,
}

/// Effective tolerances, one field per setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TolerancesUsed {
    pub eig: f64,
    pub psd: f64,
    pub rank: f64,
    pub validate: f64,
    pub pinv: f64,
    pub proportional: f64,
    pub null_space: f64,
    pub range: f64,
    pub lp_feasibility: f64,
    pub dykstra_feasible: f64,
    pub dykstra_infeasible: f64,
    pub dykstra_max_iter: usize,
    pub dykstra_check_every: usize,
    pub range_cap: usize,
}

impl From<&Tolerances> for TolerancesUsed {
    fn from(t: &Tolerances) -> Self {
        Self {
            eig: t.eig,
            psd: t.psd,
            rank: t.rank,
            validate: t.validate,
            pinv: t.pinv,
            proportional: t.proportional,
            null_space: t.null_space,
            range: t.range,
            lp_feasibility: t.lp_feasibility,
            dykstra_feasible: t.dykstra_feasible,
            dykstra_infeasible: t.dykstra_infeasible,
            dykstra_max_iter: t.dykstra_max_iter,
            dykstra_check_every: t.dykstra_check_every,
            range_cap: t.range_cap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub verdict: serde_json::Value,
    pub tolerances_used: TolerancesUsed,
}

/// Raw bytes of an input with their provenance.
#[derive(Debug, Clone)]
pub struct Input {
    pub digest: InputDigest,
    pub bytes: Vec<u8>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Canonical JSON of a built-in fixture.
pub fn fixture_json(name: &str) -> Result<String, CliError> {
    let m = fixtures::by_name::<f64>(name).ok_or_else(|| {
        CliError::Invalid(format!("unknown fixture {name:?} (known: {})", fixtures::NAMES.join(", ")))
    })?;
    Ok(canonical_json(&PovmDocument::from_povm(&m)))
}

/// Reads a file, or a fixture given as `fixture:NAME`.
pub fn load(role: &str, source: &str) -> Result<Input, CliError> {
    let bytes = match source.strip_prefix(FIXTURE_PREFIX) {
        Some(name) => fixture_json(name)?.into_bytes(),
        None => fs::read(source).map_err(|e| CliError::Parse(format!("cannot read {source}: {e}")))?,
    };
    Ok(Input {
        digest: InputDigest { role: role.into(), source: source.into(), sha256: sha256_hex(&bytes), pruned: Vec::new() },
        bytes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn fixture_sources() {
        let a = load("M", "fixture:qubit_Z").unwrap();
        let b = load("M", "fixture:qubit_Z").unwrap();
        assert_eq!(a.digest, b.digest);
        assert!(matches!(load("M", "fixture:nope"), Err(CliError::Invalid(_))));
        assert!(matches!(load("M", "/nonexistent/file.json"), Err(CliError::Parse(_))));
    }
}
