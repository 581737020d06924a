//! Double-double arithmetic.
//!
//! A [`DoubleDouble`] is an unevaluated sum `hi + lo` of two `f64` with
//! `|lo| <= ulp(hi) / 2`, giving roughly 106 bits of significand. Only the
//! operations needed by the prime kernel are provided: accurate addition,
//! multiplication, division by a double, `exp` and `ln`.
//!
//! Products are formed with Dekker's splitting rather than `mul_add`, so the
//! results are bit-identical on every target regardless of FMA support.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1

/// ln 2 as a double-double.
pub const LN_2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

/// Relative error bound of [`DoubleDouble::ln`]; see the `ln_accuracy`
/// integration test for the measured worst case (well below this).
pub const LN_REL_ERROR: f64 = 1.0 / (1u128 << 102) as f64;

/// Relative error bound of one [`DoubleDouble`] addition or division by a
/// double.
pub const OP_REL_ERROR: f64 = 1.0 / (1u128 << 104) as f64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact for every `u64` below 2^106, i.e. always.
    pub fn from_u64(x: u64) -> Self {
        let hi = x as f64;
        // x - hi fits exactly in an i128 and then in an f64 (|x - hi| < 2^11).
        let lo = (x as i128 - hi as i128) as f64;
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    /// Exact for `|x| < 2^106`.
    pub fn from_i128(x: i128) -> Self {
        let hi = x as f64;
        let rest = x - hi as i128;
        let (hi, lo) = quick_two_sum(hi, rest as f64);
        Self { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let r = self - DoubleDouble::from_f64(q1).mul_f64(b);
        let q2 = r.hi / b;
        let r = r - DoubleDouble::from_f64(q2).mul_f64(b);
        let q3 = r.hi / b;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + DoubleDouble::from_f64(q3)
    }

    /// Multiplication by an exact power of two.
    pub fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Self {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    /// `e^self`, accurate to a few units of 2^-106 relative for moderate
    /// arguments (|x| < 700).
    pub fn exp(self) -> Self {
        const SQUARINGS: i32 = 10;
        if self.hi == 0.0 {
            return Self::ONE;
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - LN_2.mul_f64(k)).ldexp(-SQUARINGS);

        // expm1(r) by Taylor series; |r| < 3.4e-4 so nine terms reach 1e-37.
        let mut term = r;
        let mut s = r;
        for j in 2..=10u32 {
            term = (term * r).div_f64(f64::from(j));
            s = s + term;
            if term.hi.abs() < 1e-36 * s.hi.abs() {
                break;
            }
        }
        // expm1(2x) = expm1(x) * (expm1(x) + 2)
        for _ in 0..SQUARINGS {
            s = s * s + s.mul_f64(2.0);
        }
        (s + Self::ONE).ldexp(k as i32)
    }

    /// Natural logarithm by one Newton step on `e^y = x` from the libm
    /// estimate. Requires `self > 0`.
    pub fn ln(self) -> Self {
        debug_assert!(self.hi > 0.0);
        let y = Self::from_f64(self.hi.ln());
        // ln(x) = y + ln(1 + t) with t = x e^-y - 1, |t| ~ 1e-15.
        let t = self * (-y).exp() - Self::ONE;
        y + t - Self::from_f64(0.5 * t.hi * t.hi)
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} + {:e}", self.hi, self.lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_prod_is_exact() {
        let a = 0.1f64;
        let b = 3.0f64;
        let (p, e) = two_prod(a, b);
        assert_eq!(p, a * b);
        assert_eq!(e, a.mul_add(b, -p));
    }

    #[test]
    fn from_u64_is_exact() {
        let x = (1u64 << 60) + 12345;
        let d = DoubleDouble::from_u64(x);
        assert_eq!(d.hi as i128 + d.lo as i128, x as i128);
    }

    #[test]
    fn exp_of_ln_round_trips() {
        for &x in &[2.0, 3.0, 29.0, 6_469_693_230.0, 1e10 + 7.0] {
            let d = DoubleDouble::from_f64(x);
            let back = d.ln().exp();
            let rel = ((back - d).to_f64() / x).abs();
            assert!(rel < 1e-30, "x = {x}, rel = {rel:e}");
        }
    }

    #[test]
    fn ln_two_matches_constant() {
        let l = DoubleDouble::from_f64(2.0).ln();
        assert!(((l - LN_2).to_f64()).abs() < 1e-31);
    }

    #[test]
    fn div_f64_inverts_mul() {
        let a = DoubleDouble::from_f64(1.0).div_f64(3.0);
        let back = a.mul_f64(3.0);
        assert!((back - DoubleDouble::ONE).to_f64().abs() < 1e-31);
    }
}
