//! Exact rational machinery for the asymptotic expansions in `1/log p_n`
//! and `1/log n`.

mod cipolla;
mod expansion;
mod sequences;

pub use cipolla::{cipolla, d_expansion_in_n, CipollaKind, IntPoly, NBasisExpansion};
pub use expansion::{d_expansion, format_ratio_expansion, ratio_expansion};
pub use sequences::{k_sequence, r_sequence};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::quantity::{DomainError, Quantity};

pub type Rational = BigRational;

/// Highest truncation order accepted anywhere in this module.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("{kind}_{k} is not tabulated (only k = 1, 2, 3 are available)")]
    NotTabulated { kind: CipollaKind, k: usize },
    #[error("order {0} exceeds the maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("order must be at least {min}, got {got}")]
    OrderTooSmall { min: usize, got: usize },
    #[error("exp needs a zero constant term, got {0}")]
    NonZeroConstant(Rational),
    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

pub(crate) fn check_order(m: usize, min: usize) -> Result<(), SeriesError> {
    if m < min {
        return Err(SeriesError::OrderTooSmall { min, got: m });
    }
    if m > MAX_ORDER {
        return Err(SeriesError::OrderTooLarge(m));
    }
    Ok(())
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Truncated power series `sum c_j b^j`, `j = 0..=order`, with exact
/// rational coefficients. Products drop every degree above the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPoly {
    coeffs: Vec<Rational>,
}

impl SeriesPoly {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `b` itself.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// Coefficients beyond `order` are dropped; missing ones are zero.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    fn same_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        let m = self.order();
        let mut out = Self::zero(m);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(m + 1 - i).enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        Ok(out)
    }

    /// `exp(self)` truncated, as `sum_{t=0..=m} self^t / t!`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonZeroConstant(self.coeffs[0].clone()));
        }
        let m = self.order();
        let mut total = Self::constant(Rational::one(), m);
        let mut power = Self::constant(Rational::one(), m);
        for t in 1..=m {
            power = &power * self;
            power = power.scale(&ratio(1, t as i64));
            total = &total + &power;
        }
        Ok(total)
    }
}

impl Add for &SeriesPoly {
    type Output = SeriesPoly;

    /// Panics on mismatched orders; see [`SeriesPoly::checked_add`].
    fn add(self, rhs: Self) -> SeriesPoly {
        self.checked_add(rhs).expect("series orders differ")
    }
}

impl Sub for &SeriesPoly {
    type Output = SeriesPoly;

    fn sub(self, rhs: Self) -> SeriesPoly {
        self + &(-rhs)
    }
}

impl Neg for &SeriesPoly {
    type Output = SeriesPoly;

    fn neg(self) -> SeriesPoly {
        SeriesPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &SeriesPoly {
    type Output = SeriesPoly;

    /// Panics on mismatched orders; see [`SeriesPoly::checked_mul`].
    fn mul(self, rhs: Self) -> SeriesPoly {
        self.checked_mul(rhs).expect("series orders differ")
    }
}

impl fmt::Display for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{}", fmt_rational(c))?,
                1 => write!(f, "({})·b", fmt_rational(c))?,
                _ => write!(f, "({})·b^{j}", fmt_rational(c))?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `num/den`, always with an explicit denominator.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Horner evaluation at `b = 1/logp`. Each coefficient is rounded to the
/// nearest double and charged for it; the radius of `logp` is propagated.
pub fn eval_series(s: &SeriesPoly, logp: Quantity) -> Result<Quantity, SeriesError> {
    let b = logp.recip()?;
    let mut acc = Quantity::ZERO;
    for c in s.coeffs().iter().rev() {
        acc = acc * b + Quantity::from_rational(c);
    }
    Ok(acc)
}
