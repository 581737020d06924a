//! Streaming accumulators for the first `n` primes.
//!
//! [`PrimeState`] holds `n`, `p_n`, the exact sum of the first `n` primes and
//! `theta(p_n) = sum log p_k`. The theta sum is a double-double, so the
//! accumulation itself is compensated; its error radius grows by the
//! per-term log bound plus the rounding of each double-double addition.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dd::{self, DoubleDouble};
use crate::quantity::{Quantity, UNIT_ROUNDOFF};

/// Working precision of the per-term logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    /// libm `ln`, charged 2 ulp per term.
    Double,
    /// Double-double `ln`, charged [`dd::LN_REL_ERROR`] per term.
    #[default]
    DoubleDouble,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::DoubleDouble => "double-double",
        }
    }

    /// `log p` and its absolute error bound.
    pub fn ln(self, p: u64) -> (DoubleDouble, f64) {
        match self {
            Precision::Double => {
                let v = (p as f64).ln();
                (DoubleDouble::from_f64(v), 4.0 * UNIT_ROUNDOFF * v.abs())
            }
            Precision::DoubleDouble => {
                let v = DoubleDouble::from_u64(p).ln();
                (v, dd::LN_REL_ERROR * v.hi.abs())
            }
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "double" | "f64" => Ok(Precision::Double),
            "double-double" | "dd" => Ok(Precision::DoubleDouble),
            other => Err(format!(
                "unknown precision {other:?} (expected double or double-double)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("sum of primes overflowed at n = {0}")]
    SumOverflow(u64),
    #[error("1 + 2R/p_n is not certainly positive at n = {n} (accumulator corruption?)")]
    NonPositiveRatioArgument { n: u64 },
    #[error("quantities need n >= 1")]
    Empty,
}

/// Snapshot of the accumulators after consuming the first `n` primes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeState {
    n: u64,
    p: u64,
    sum_primes: u128,
    theta: DoubleDouble,
    theta_error: f64,
    precision: Precision,
}

impl PrimeState {
    /// The state before any prime has been consumed.
    pub fn empty(precision: Precision) -> Self {
        Self {
            n: 0,
            p: 0,
            sum_primes: 0,
            theta: DoubleDouble::ZERO,
            theta_error: 0.0,
            precision,
        }
    }

    /// The state for `n = 1`.
    pub fn first(precision: Precision) -> Self {
        Self::empty(precision).advance(2)
    }

    /// Rebuilds a state from its stored parts (checkpoint restore).
    pub fn from_parts(
        n: u64,
        p: u64,
        sum_primes: u128,
        theta: DoubleDouble,
        theta_error: f64,
        precision: Precision,
    ) -> Self {
        Self {
            n,
            p,
            sum_primes,
            theta,
            theta_error,
            precision,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn sum_primes(&self) -> u128 {
        self.sum_primes
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn theta_dd(&self) -> DoubleDouble {
        self.theta
    }

    pub fn theta_error(&self) -> f64 {
        self.theta_error
    }

    pub fn theta(&self) -> Quantity {
        Quantity::from_dd(self.theta, self.theta_error)
    }

    /// Consumes the next prime `p`, which must follow `p_n` immediately.
    pub fn advance(self, p: u64) -> Self {
        self.try_advance(p).expect("sum of primes overflowed u128")
    }

    pub fn try_advance(self, p: u64) -> Result<Self, KernelError> {
        debug_assert!(p > self.p, "primes must be consumed in increasing order");
        let (log_p, log_err) = self.precision.ln(p);
        let theta = self.theta + log_p;
        let sum_primes = self
            .sum_primes
            .checked_add(u128::from(p))
            .ok_or(KernelError::SumOverflow(self.n + 1))?;
        Ok(Self {
            n: self.n + 1,
            p,
            sum_primes,
            theta,
            theta_error: self.theta_error + log_err + dd::OP_REL_ERROR * theta.hi.abs(),
            precision: self.precision,
        })
    }

    /// Derived per-n quantities.
    pub fn quantities(&self) -> Result<Quantities, KernelError> {
        if self.n == 0 {
            return Err(KernelError::Empty);
        }
        let n = self.n;
        let nf = n as f64;
        let (log_p_dd, log_p_err) = self.precision.ln(self.p);
        let log_p = Quantity::from_dd(log_p_dd, log_p_err);

        // theta / n and log p - theta / n in double-double, rounded once.
        let mean_dd = self.theta.div_f64(nf);
        let div_err = dd::OP_REL_ERROR * mean_dd.hi.abs();
        let log_g = Quantity::from_dd(mean_dd, self.theta_error / nf + div_err);
        let d_dd = log_p_dd - mean_dd;
        let d = Quantity::from_dd(
            d_dd,
            log_p_err + self.theta_error / nf + div_err + dd::OP_REL_ERROR * log_p_dd.hi.abs(),
        );

        let sum = i128::try_from(self.sum_primes).map_err(|_| KernelError::SumOverflow(n))?;
        let a_dd = DoubleDouble::from_i128(sum).div_f64(nf);
        let a = Quantity::from_dd(a_dd, dd::OP_REL_ERROR * a_dd.hi.abs());
        // R = (2 sum - n p) / (2n), numerator exact in i128.
        let r_num = 2 * sum - i128::from(n) * i128::from(self.p);
        let r_dd = DoubleDouble::from_i128(r_num).div_f64(2.0 * nf);
        let r = Quantity::from_dd(r_dd, dd::OP_REL_ERROR * r_dd.hi.abs());

        let g = log_g.exp();
        let log_a = a.ln().expect("A_n > 0");
        let log_ratio = log_a - log_g;
        let ratio = log_ratio.exp();

        let p = Quantity::from_u64(self.p);
        let two = Quantity::exact(2.0);
        let arg = Quantity::exact(1.0)
            + (two * r)
                .checked_div(p)
                .map_err(|_| KernelError::NonPositiveRatioArgument { n })?;
        let ell = arg.ln().map_err(|_| KernelError::NonPositiveRatioArgument { n })?;
        let ln2 = Quantity::from_dd(dd::LN_2, 0.0);
        let log_ratio_via_identity = d + ell - ln2;

        Ok(Quantities {
            n,
            p: self.p,
            log_p,
            d,
            a,
            log_g,
            g,
            r,
            ell,
            log_ratio,
            log_ratio_via_identity,
            ratio,
        })
    }
}

/// Everything derived from one [`PrimeState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantities {
    pub n: u64,
    pub p: u64,
    pub log_p: Quantity,
    /// `log p_n - theta(p_n) / n`
    pub d: Quantity,
    /// arithmetic mean
    pub a: Quantity,
    /// `theta(p_n) / n`
    pub log_g: Quantity,
    /// geometric mean
    pub g: Quantity,
    /// `A_n - p_n / 2`
    pub r: Quantity,
    /// `log(1 + 2R/p_n)`
    pub ell: Quantity,
    /// `log A_n - log G_n`, computed directly
    pub log_ratio: Quantity,
    /// `D + log(1 + 2R/p_n) - log 2`
    pub log_ratio_via_identity: Quantity,
    pub ratio: Quantity,
}

/// The state after the first `n` primes.
pub fn state_at(n: u64, precision: Precision) -> PrimeState {
    let mut state = PrimeState::empty(precision);
    for p in crate::sieve::PrimeStream::new(Default::default()).take(n as usize) {
        state = state.advance(p);
    }
    state
}
