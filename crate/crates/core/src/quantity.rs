//! Real values with a guaranteed absolute-error radius.
//!
//! A [`Quantity`] is a thin midpoint-radius interval: the true value lies in
//! `[value - error, value + error]`. Every operation rounds the new midpoint
//! to nearest and grows the radius by the propagated input error plus the
//! rounding error of the operation itself. Radii are then inflated by a
//! small relative factor so that the roundings made while computing the
//! radius can never make it too small.
//!
//! Error model for library functions: `ln`, `exp` and `exp_m1` from the
//! platform libm are assumed accurate to 2 ulp. glibc documents < 1 ulp for
//! these on x86_64 and aarch64.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::Coef;

use crate::dd::DoubleDouble;

/// Unit roundoff of binary64, 2^-53.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

const LIBM_ULPS: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("division by an interval that contains zero")]
    DivisionByZero,
    #[error("logarithm of an interval that is not strictly positive")]
    LogOfNonPositive,
    #[error("{0} is undefined at n = {1}")]
    Undefined(&'static str, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub error: f64,
}

#[inline]
fn inflate(radius: f64) -> f64 {
    radius * (1.0 + 16.0 * UNIT_ROUNDOFF) + f64::from_bits(1)
}

#[inline]
fn rounding(v: f64) -> f64 {
    UNIT_ROUNDOFF * v.abs()
}

impl Quantity {
    pub const ZERO: Self = Self { value: 0.0, error: 0.0 };

    pub const fn exact(value: f64) -> Self {
        Self { value, error: 0.0 }
    }

    pub fn new(value: f64, error: f64) -> Self {
        debug_assert!(error >= 0.0, "negative radius {error}");
        Self { value, error }
    }

    pub fn from_u64(v: u64) -> Self {
        let value = v as f64;
        let error = if v < (1u64 << 53) { 0.0 } else { rounding(value) };
        Self { value, error }
    }

    /// Rounds a double-double to the nearest double; `extra` is an error
    /// radius already attached to `x`.
    pub fn from_dd(x: DoubleDouble, extra: f64) -> Self {
        let value = x.hi + x.lo;
        let residual = (x - DoubleDouble::from_f64(value)).to_f64().abs();
        Self {
            value,
            error: inflate(extra + residual),
        }
    }

    /// Rounds an exact rational. The conversion is charged one full ulp.
    pub fn from_rational(r: &BigRational) -> Self {
        let value = r.to_f64().unwrap_or(f64::NAN);
        Self {
            value,
            error: inflate(2.0 * rounding(value)),
        }
    }

    /// Euler's number.
    pub fn euler() -> Self {
        let value = std::f64::consts::E;
        Self {
            value,
            error: rounding(value),
        }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error
    }

    /// True if the true value is certainly positive.
    pub fn is_certainly_positive(&self) -> bool {
        self.value - self.error > 0.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    pub fn abs(self) -> Self {
        Self {
            value: self.value.abs(),
            error: self.error,
        }
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, DomainError> {
        let denom_margin = rhs.value.abs() - rhs.error;
        if denom_margin.is_nan() || denom_margin <= 0.0 {
            return Err(DomainError::DivisionByZero);
        }
        let value = self.value / rhs.value;
        let q = value.abs() * (1.0 + 2.0 * UNIT_ROUNDOFF);
        let propagated = (self.error + q * rhs.error) / (denom_margin * (1.0 - 2.0 * UNIT_ROUNDOFF));
        Ok(Self {
            value,
            error: inflate(propagated + rounding(value)),
        })
    }

    pub fn recip(self) -> Result<Self, DomainError> {
        Quantity::exact(1.0).checked_div(self)
    }

    pub fn ln(self) -> Result<Self, DomainError> {
        let lo = self.value - self.error;
        if lo.is_nan() || lo <= 0.0 {
            return Err(DomainError::LogOfNonPositive);
        }
        let value = self.value.ln();
        let propagated = self.error / (lo * (1.0 - 2.0 * UNIT_ROUNDOFF));
        Ok(Self {
            value,
            error: inflate(propagated + 2.0 * LIBM_ULPS * rounding(value)),
        })
    }

    pub fn exp(self) -> Self {
        let value = self.value.exp();
        let spread = self.error.exp_m1() * (1.0 + 2.0 * LIBM_ULPS * UNIT_ROUNDOFF);
        Self {
            value,
            error: inflate(value.abs() * spread + 2.0 * LIBM_ULPS * rounding(value)),
        }
    }

    pub fn powi(self, k: u32) -> Self {
        let mut acc = Quantity::exact(1.0);
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Quantity {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let value = self.value + rhs.value;
        Self {
            value,
            error: inflate(self.error + rhs.error + rounding(value)),
        }
    }
}

impl Sub for Quantity {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Quantity {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            value: -self.value,
            error: self.error,
        }
    }
}

impl Mul for Quantity {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let value = self.value * rhs.value;
        let propagated = self.value.abs() * rhs.error + rhs.value.abs() * self.error + self.error * rhs.error;
        Self {
            value,
            error: inflate(propagated + rounding(value)),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.1e}", format_sig(self.value, 15), self.error)
    }
}

/// Formats `v` with `digits` significant digits in positional notation
/// (scientific outside `1e-5 ..= 1e15`).
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-5..15).contains(&mag) {
        return format!("{:.*e}", digits.saturating_sub(1), v);
    }
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // Rounding can carry into a new leading digit (9.99.. -> 10.0..).
    let carried = s.parse::<f64>().is_ok_and(|r| r.abs() >= 10f64.powi(mag + 1));
    if carried && decimals > 0 {
        format!("{v:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

/// Arithmetic needed to evaluate a bound expression.
///
/// Implemented by [`Quantity`] for verification runs; test oracles implement
/// it for high-precision floats to re-evaluate the same expressions.
pub trait Scalar: Clone {
    fn from_rational(r: &BigRational) -> Self;
    /// A registry literal; the default converts its exact value.
    fn from_coef(c: &Coef) -> Self {
        Self::from_rational(c.exact())
    }
    fn from_u64(v: u64) -> Self;
    fn euler() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self, DomainError>;
    fn ln(&self) -> Result<Self, DomainError>;
    fn exp(&self) -> Self;
}

impl Scalar for Quantity {
    fn from_rational(r: &BigRational) -> Self {
        Quantity::from_rational(r)
    }

    fn from_coef(c: &Coef) -> Self {
        c.rounded()
    }

    fn from_u64(v: u64) -> Self {
        Quantity::from_u64(v)
    }

    fn euler() -> Self {
        Quantity::euler()
    }

    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }

    fn neg(&self) -> Self {
        -*self
    }

    fn div(&self, rhs: &Self) -> Result<Self, DomainError> {
        self.checked_div(*rhs)
    }

    fn ln(&self) -> Result<Self, DomainError> {
        Quantity::ln(*self)
    }

    fn exp(&self) -> Self {
        Quantity::exp(*self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn division_by_interval_straddling_zero_is_rejected() {
        let z = Quantity::new(1e-20, 1e-19);
        assert_eq!(Quantity::exact(1.0).checked_div(z), Err(DomainError::DivisionByZero));
    }

    #[test]
    fn log_of_zero_is_rejected() {
        assert_eq!(Quantity::exact(0.0).ln(), Err(DomainError::LogOfNonPositive));
    }

    #[test]
    fn format_sig_gives_fifteen_digits() {
        assert_eq!(format_sig(12.9, 15), "12.9000000000000");
        assert_eq!(format_sig(1.0, 15), "1.00000000000000");
        assert_eq!(format_sig(0.5, 3), "0.500");
        assert_eq!(format_sig(9.9999, 3), "10.0");
    }

    // Endpoints of the input intervals must map inside the output interval.
    proptest! {
        #[test]
        fn operations_enclose_endpoint_images(
            a in 0.5f64..100.0, ea in 0.0f64..1e-3,
            b in 0.5f64..100.0, eb in 0.0f64..1e-3,
            ta in -1.0f64..1.0, tb in -1.0f64..1.0,
        ) {
            let qa = Quantity::new(a, ea);
            let qb = Quantity::new(b, eb);
            let xa = a + ta * ea;
            let xb = b + tb * eb;
            let slack = 1e-12;
            let sum = qa + qb;
            prop_assert!((sum.value - (xa + xb)).abs() <= sum.error + slack * (xa + xb).abs());
            let prod = qa * qb;
            prop_assert!((prod.value - xa * xb).abs() <= prod.error + slack * (xa * xb).abs());
            let quot = qa.checked_div(qb).unwrap();
            prop_assert!((quot.value - xa / xb).abs() <= quot.error + slack * (xa / xb).abs());
            let l = qa.ln().unwrap();
            prop_assert!((l.value - xa.ln()).abs() <= l.error + slack);
            let e = (qa * Quantity::exact(0.05)).exp();
            prop_assert!((e.value - (0.05 * xa).exp()).abs() <= e.error + slack * e.value);
        }
    }
}
