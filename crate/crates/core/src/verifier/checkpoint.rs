//! Versioned JSON checkpoints. Binary floats are stored as hexadecimal
//! literals so a resumed run continues from bit-identical accumulators.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::job::VerificationJob;
use super::report::Accumulator;
use super::VerifyError;
use crate::dd::DoubleDouble;
use crate::hexfloat;
use crate::kernel::PrimeState;
use crate::quantity::Quantity;

pub const FORMAT: &str = "primemeans-checkpoint";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredState {
    pub n: u64,
    pub p: u64,
    /// Decimal, since JSON numbers cannot carry 128-bit integers portably.
    pub sum_primes: String,
    #[serde(with = "hexfloat::serde_f64")]
    pub theta_hi: f64,
    #[serde(with = "hexfloat::serde_f64")]
    pub theta_lo: f64,
    #[serde(with = "hexfloat::serde_f64")]
    pub theta_error: f64,
}

impl StoredState {
    pub fn from_state(s: &PrimeState) -> Self {
        let theta = s.theta_dd();
        Self {
            n: s.n(),
            p: s.p(),
            sum_primes: s.sum_primes().to_string(),
            theta_hi: theta.hi,
            theta_lo: theta.lo,
            theta_error: s.theta_error(),
        }
    }

    pub fn to_state(&self, job: &VerificationJob) -> Result<PrimeState, VerifyError> {
        let sum: u128 = self
            .sum_primes
            .parse()
            .map_err(|_| VerifyError::Corrupt(format!("sum_primes {:?} is not an integer", self.sum_primes)))?;
        Ok(PrimeState::from_parts(
            self.n,
            self.p,
            sum,
            DoubleDouble {
                hi: self.theta_hi,
                lo: self.theta_lo,
            },
            self.theta_error,
            job.precision,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoredQuantity {
    #[serde(with = "hexfloat::serde_f64")]
    pub value: f64,
    #[serde(with = "hexfloat::serde_f64")]
    pub error: f64,
}

impl From<Quantity> for StoredQuantity {
    fn from(q: Quantity) -> Self {
        Self {
            value: q.value,
            error: q.error,
        }
    }
}

impl From<StoredQuantity> for Quantity {
    fn from(q: StoredQuantity) -> Self {
        Quantity::new(q.value, q.error)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub job: VerificationJob,
    pub job_hash: String,
    pub state: StoredState,
    /// `log(A_n/G_n)` at the stored n, if it was computed.
    pub prev_log_ratio: Option<StoredQuantity>,
    /// One per job bound, in job order.
    pub accumulators: Vec<Accumulator>,
}

impl Checkpoint {
    pub fn new(
        job: &VerificationJob,
        state: &PrimeState,
        prev_log_ratio: Option<Quantity>,
        accumulators: Vec<Accumulator>,
    ) -> Self {
        Self {
            format: FORMAT.to_string(),
            version: VERSION,
            job: job.clone(),
            job_hash: job.hash(),
            state: StoredState::from_state(state),
            prev_log_ratio: prev_log_ratio.map(Into::into),
            accumulators,
        }
    }

    /// Writes to a sibling temporary file, then renames over `path`.
    pub fn save(&self, path: &Path) -> Result<(), VerifyError> {
        let json = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, json)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Reads and checks format, version and internal consistency.
    pub fn load(path: &Path) -> Result<Self, VerifyError> {
        let text = fs::read_to_string(path)?;
        let cp: Checkpoint = serde_json::from_str(&text).map_err(|e| VerifyError::Corrupt(e.to_string()))?;
        if cp.format != FORMAT {
            return Err(VerifyError::Corrupt(format!("unexpected format tag {:?}", cp.format)));
        }
        if cp.version != VERSION {
            return Err(VerifyError::Corrupt(format!("unsupported version {}", cp.version)));
        }
        if cp.job.hash() != cp.job_hash {
            return Err(VerifyError::Corrupt("stored job does not match its hash".into()));
        }
        if cp.accumulators.len() != cp.job.bounds.len() {
            return Err(VerifyError::Corrupt(
                "accumulator count differs from bound count".into(),
            ));
        }
        Ok(cp)
    }

    /// Refuses unless `job` is the job this checkpoint was written for.
    pub fn ensure_matches(&self, job: &VerificationJob) -> Result<(), VerifyError> {
        let expected = job.hash();
        if expected != self.job_hash {
            return Err(VerifyError::HashMismatch {
                expected,
                found: self.job_hash.clone(),
            });
        }
        Ok(())
    }
}
