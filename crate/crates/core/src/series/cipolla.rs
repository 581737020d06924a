//! The tabulated polynomials in `x = log log n` from the expansions of
//! `p_n` (Q_k) and `log p_n` (R_k), their difference `T_k = R_k - Q_k`, and
//! the resulting expansion of D(n) in powers of `1/log n`.
//!
//! Only `k <= 3` is tabulated. Larger `k` is an error, never extrapolated.

use std::fmt;

use num_traits::{Signed, Zero};

use super::{int, ratio, Rational, SeriesError};
use crate::quantity::Quantity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CipollaKind {
    Q,
    R,
    T,
}

impl fmt::Display for CipollaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CipollaKind::Q => "Q",
            CipollaKind::R => "R",
            CipollaKind::T => "T",
        })
    }
}

/// Integer polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<i64>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Self(coeffs)
    }

    /// Builds from coefficients listed highest degree first.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().rev().copied().collect())
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.0.last().expect("non-empty")
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        Self::new(
            (0..len)
                .map(|i| self.0.get(i).copied().unwrap_or(0) - other.0.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }
}

fn superscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string().bytes().map(|b| DIGITS[(b - b'0') as usize]).collect()
}

pub(crate) fn power_suffix(k: usize) -> String {
    if k == 1 {
        String::new()
    } else {
        superscript(k)
    }
}

/// Renders `sum c_i var^i` highest degree first, with ` - ` for negative
/// terms. `fmt_abs` formats the absolute value of a coefficient.
fn poly_string<C>(
    coeffs: &[C],
    var: &str,
    is_zero: impl Fn(&C) -> bool,
    is_neg: impl Fn(&C) -> bool,
    fmt_abs: impl Fn(&C) -> String,
) -> String {
    let mut out = String::new();
    for (deg, c) in coeffs.iter().enumerate().rev() {
        if is_zero(c) {
            continue;
        }
        out.push_str(match (out.is_empty(), is_neg(c)) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        });
        let abs = fmt_abs(c);
        if deg == 0 || abs != "1" {
            out.push_str(&abs);
        }
        if deg > 0 {
            out.push_str(var);
            out.push_str(&power_suffix(deg));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&poly_string(
            &self.0,
            "x",
            |c| *c == 0,
            |c| *c < 0,
            |c| c.abs().to_string(),
        ))
    }
}

/// The printed polynomial `kind_k` for `k` in 1..=3.
pub fn cipolla(kind: CipollaKind, k: usize) -> Result<IntPoly, SeriesError> {
    let q = match k {
        1 => IntPoly::from_descending(&[1, -2]),
        2 => IntPoly::from_descending(&[1, -6, 11]),
        3 => IntPoly::from_descending(&[2, -21, 84, -131]),
        _ => return Err(SeriesError::NotTabulated { kind, k }),
    };
    let r = match k {
        1 => IntPoly::from_descending(&[1, -1]),
        2 => IntPoly::from_descending(&[1, -4, 5]),
        _ => IntPoly::from_descending(&[2, -15, 42, -47]),
    };
    Ok(match kind {
        CipollaKind::Q => q,
        CipollaKind::R => r,
        CipollaKind::T => r.sub(&q),
    })
}

/// `D(n) = 1 + sum_{k=1..r} P_k(log log n) / log^k n + O(...)` with
/// `P_k = (-1)^{k+1} T_k / k!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NBasisExpansion {
    terms: Vec<Vec<Rational>>,
}

impl NBasisExpansion {
    /// `terms()[k-1]` holds the ascending coefficients of `P_k`.
    pub fn terms(&self) -> &[Vec<Rational>] {
        &self.terms
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    pub fn eval(&self, log_n: Quantity, log_log_n: Quantity) -> Result<Quantity, SeriesError> {
        let inv = log_n.recip()?;
        let mut total = Quantity::exact(1.0);
        let mut inv_pow = Quantity::exact(1.0);
        for poly in &self.terms {
            inv_pow = inv_pow * inv;
            let mut p = Quantity::ZERO;
            for c in poly.iter().rev() {
                p = p * log_log_n + Quantity::from_rational(c);
            }
            total = total + p * inv_pow;
        }
        Ok(total)
    }
}

impl fmt::Display for NBasisExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("1")?;
        for (i, poly) in self.terms.iter().enumerate() {
            let k = i + 1;
            let lead_neg = poly
                .iter()
                .rev()
                .find(|c| !c.is_zero())
                .is_some_and(|c| c.is_negative());
            let shown: Vec<Rational> = if lead_neg {
                poly.iter().map(|c| -c).collect()
            } else {
                poly.clone()
            };
            f.write_str(if lead_neg { " - " } else { " + " })?;
            let nonzero = shown.iter().filter(|c| !c.is_zero()).count();
            let mut body = poly_string(&shown, "log log n", Zero::is_zero, Signed::is_negative, |c| {
                c.abs().to_string()
            });
            if nonzero > 1 {
                body = format!("({body})");
            }
            write!(f, "{body}/log{} n", power_suffix(k))?;
        }
        Ok(())
    }
}

/// D(n) in powers of `1/log n` up to order `r` (at most 3).
pub fn d_expansion_in_n(r: usize) -> Result<NBasisExpansion, SeriesError> {
    if r > 3 {
        return Err(SeriesError::NotTabulated {
            kind: CipollaKind::T,
            k: r,
        });
    }
    let mut terms = Vec::with_capacity(r);
    let mut fact = 1i64;
    for k in 1..=r {
        fact *= k as i64;
        let t = cipolla(CipollaKind::T, k)?;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        terms.push(t.coeffs().iter().map(|&c| int(sign * c) * ratio(1, fact)).collect());
    }
    Ok(NBasisExpansion { terms })
}
