use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::VerifyError;
use crate::catalog::{lookup, BoundSpec};
use crate::kernel::Precision;
use crate::sieve::SieveConfig;

/// Largest `limit` accepted unless `PRIMEMEANS_CAPACITY` overrides it.
pub const DEFAULT_CAPACITY: u64 = 1_000_000_000;

pub const CAPACITY_ENV: &str = "PRIMEMEANS_CAPACITY";

/// The configured capacity, read from the environment when set.
pub fn capacity() -> Result<u64, VerifyError> {
    match std::env::var(CAPACITY_ENV) {
        Ok(v) => v
            .trim()
            .replace('_', "")
            .parse()
            .map_err(|_| VerifyError::BadCapacity(v)),
        Err(_) => Ok(DEFAULT_CAPACITY),
    }
}

/// What to verify. Only these fields enter the job hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationJob {
    pub bounds: Vec<String>,
    /// First n to examine; `None` starts each bound at its claimed start.
    pub start: Option<u64>,
    /// Last n to examine, inclusive.
    pub limit: u64,
    pub precision: Precision,
}

impl VerificationJob {
    pub fn new(bounds: Vec<String>, start: Option<u64>, limit: u64, precision: Precision) -> Self {
        Self {
            bounds,
            start,
            limit,
            precision,
        }
    }

    /// Every catalog entry from its claimed start.
    pub fn all_bounds(limit: u64, precision: Precision) -> Self {
        Self::new(
            crate::catalog::catalog().iter().map(|b| b.id.to_string()).collect(),
            None,
            limit,
            precision,
        )
    }

    pub fn validate(&self) -> Result<Vec<&'static BoundSpec>, VerifyError> {
        if self.start == Some(0) {
            return Err(VerifyError::BadStart);
        }
        let cap = capacity()?;
        if self.limit > cap {
            return Err(VerifyError::CapacityExceeded {
                limit: self.limit,
                capacity: cap,
            });
        }
        self.bounds
            .iter()
            .map(|id| lookup(id).ok_or_else(|| VerifyError::UnknownBound(id.clone())))
            .collect()
    }

    /// SHA-256 of the canonical JSON encoding, as lowercase hex.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("job serializes");
        Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// How to run a job. None of this changes the result.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub sieve: SieveConfig,
    pub checkpoint: Option<PathBuf>,
    /// Write a checkpoint each time this many more n have been consumed.
    pub checkpoint_interval: Option<u64>,
    /// Stop after this n, writing a checkpoint if a path is set.
    pub halt_at: Option<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_depends_on_precision() {
        let a = VerificationJob::new(vec!["D>1".into()], None, 100, Precision::DoubleDouble);
        let mut b = a.clone();
        b.precision = Precision::Double;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash(), a.clone().hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn unknown_bound_is_rejected() {
        let j = VerificationJob::new(vec!["nope".into()], None, 100, Precision::DoubleDouble);
        assert!(matches!(j.validate(), Err(VerifyError::UnknownBound(id)) if id == "nope"));
    }

    #[test]
    fn start_zero_is_rejected() {
        let j = VerificationJob::new(vec!["D>1".into()], Some(0), 100, Precision::DoubleDouble);
        assert!(matches!(j.validate(), Err(VerifyError::BadStart)));
    }
}
