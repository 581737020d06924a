//! Bound right-hand sides as small expression trees.
//!
//! Numeric literals keep the exact text they were written with, so the
//! registry can be audited digit by digit against the printed inequalities.
//! Evaluation is generic over [`Scalar`], which lets test oracles re-evaluate
//! the same declarations at high precision.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::quantity::{DomainError, Quantity, Scalar};

/// Variables a bound may depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Var {
    LogP,
    LogN,
    LogLogN,
    P,
    N,
    /// `log(A_{n-1}/G_{n-1})`; only the monotonicity probe uses it.
    PrevLogRatio,
}

impl Var {
    pub fn symbol(self) -> &'static str {
        match self {
            Var::LogP => "log p_n",
            Var::LogN => "log n",
            Var::LogLogN => "log log n",
            Var::P => "p_n",
            Var::N => "n",
            Var::PrevLogRatio => "log(A_{n-1}/G_{n-1})",
        }
    }

    /// Smallest n at which the variable is defined and usable in a quotient.
    pub fn min_n(self) -> u64 {
        match self {
            Var::LogN | Var::LogLogN | Var::PrevLogRatio => 2,
            Var::LogP | Var::P | Var::N => 1,
        }
    }
}

/// A literal as printed, with its exact value.
#[derive(Debug, Clone, PartialEq)]
pub struct Coef {
    printed: &'static str,
    exact: BigRational,
    rounded: Quantity,
}

impl Coef {
    /// Parses `"2.7"`, `"1160159"` or `"22.51/3"`.
    pub fn parse(printed: &'static str) -> Self {
        let exact = parse_decimal_ratio(printed).unwrap_or_else(|| panic!("malformed coefficient literal {printed:?}"));
        let rounded = Quantity::from_rational(&exact);
        Self {
            printed,
            exact,
            rounded,
        }
    }

    pub fn printed(&self) -> &'static str {
        self.printed
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    pub fn rounded(&self) -> Quantity {
        self.rounded
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() || !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(digits, scale))
}

pub(crate) fn parse_decimal_ratio(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((num, den)) => {
            let den = parse_decimal(den)?;
            if den == BigRational::from_integer(0.into()) {
                return None;
            }
            Some(parse_decimal(num)? / den)
        }
        None => parse_decimal(s),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Coef),
    Euler,
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
}

/// Values for [`Var`]s at one n.
pub trait Bindings<S> {
    fn var(&self, v: Var) -> Result<S, DomainError>;
}

impl Expr {
    pub fn num(printed: &'static str) -> Self {
        Expr::Num(Coef::parse(printed))
    }

    pub fn var(v: Var) -> Self {
        Expr::Var(v)
    }

    pub fn pow(self, k: u32) -> Self {
        Expr::Pow(Box::new(self), k)
    }

    pub fn exp(self) -> Self {
        Expr::Exp(Box::new(self))
    }

    pub fn eval<S: Scalar, B: Bindings<S>>(&self, env: &B) -> Result<S, DomainError> {
        Ok(match self {
            Expr::Num(c) => S::from_coef(c),
            Expr::Euler => S::euler(),
            Expr::Var(v) => env.var(*v)?,
            Expr::Add(a, b) => a.eval(env)?.add(&b.eval(env)?),
            Expr::Sub(a, b) => a.eval(env)?.sub(&b.eval(env)?),
            Expr::Mul(a, b) => a.eval(env)?.mul(&b.eval(env)?),
            Expr::Div(a, b) => a.eval(env)?.div(&b.eval(env)?)?,
            Expr::Neg(a) => a.eval(env)?.neg(),
            Expr::Pow(a, k) => {
                let base = a.eval(env)?;
                let mut acc = base.clone();
                for _ in 1..*k {
                    acc = acc.mul(&base);
                }
                acc
            }
            Expr::Exp(a) => a.eval(env)?.exp(),
        })
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) => a.visit(f),
            Expr::Num(_) | Expr::Euler | Expr::Var(_) => {}
        }
    }

    /// Literals in left-to-right order of appearance.
    pub fn coefficients(&self) -> Vec<&Coef> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Num(c) = e {
                out.push(c);
            }
        });
        out
    }

    /// Distinct variables, sorted.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Var(v) = e {
                out.push(*v);
            }
        });
        out.sort();
        out.dedup();
        out
    }

    pub fn min_n(&self) -> u64 {
        self.vars().into_iter().map(Var::min_n).max().unwrap_or(1)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Euler | Expr::Var(_) | Expr::Exp(_) => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(c) => f.write_str(c.printed)?,
            Expr::Euler => f.write_str("e")?,
            Expr::Var(v) => f.write_str(v.symbol())?,
            Expr::Add(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str(" + ")?;
                b.fmt_at(f, 1)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str(" - ")?;
                b.fmt_at(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_at(f, 2)?;
                f.write_str("·")?;
                b.fmt_at(f, 3)?;
            }
            Expr::Div(a, b) => {
                a.fmt_at(f, 2)?;
                f.write_str("/")?;
                b.fmt_at(f, 4)?;
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_at(f, 2)?;
            }
            Expr::Pow(a, k) => match a.as_ref() {
                Expr::Var(Var::LogP) => write!(f, "log^{k} p_n")?,
                Expr::Var(Var::LogN) => write!(f, "log^{k} n")?,
                Expr::Var(Var::LogLogN) => write!(f, "(log log n)^{k}")?,
                other => {
                    other.fmt_at(f, 5)?;
                    write!(f, "^{k}")?;
                }
            },
            Expr::Exp(a) => {
                f.write_str("exp(")?;
                a.fmt_at(f, 0)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait for Expr {
            type Output = Expr;

            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio;

    struct Fixed(f64);

    impl Bindings<Quantity> for Fixed {
        fn var(&self, _: Var) -> Result<Quantity, DomainError> {
            Ok(Quantity::exact(self.0))
        }
    }

    #[test]
    fn literals_parse_exactly() {
        assert_eq!(Coef::parse("2.7").exact(), &ratio(27, 10));
        assert_eq!(Coef::parse("4.74").exact(), &ratio(237, 50));
        assert_eq!(Coef::parse("22.51/3").exact(), &ratio(2251, 300));
        assert_eq!(Coef::parse("1160159").exact(), &ratio(1_160_159, 1));
        assert!(parse_decimal_ratio("2.").is_some());
        assert!(parse_decimal_ratio(".5").is_none());
        assert!(parse_decimal_ratio("1/0").is_none());
        assert!(parse_decimal_ratio("e").is_none());
    }

    #[test]
    fn rendering_uses_log_power_notation() {
        let l = || Expr::var(Var::LogP);
        let e = Expr::num("1") + Expr::num("1") / l() + Expr::num("2.7") / l().pow(2);
        assert_eq!(e.to_string(), "1 + 1/log p_n + 2.7/log^2 p_n");
        let g = Expr::var(Var::P) / (Expr::num("1") + Expr::num("1") / l()).exp();
        assert_eq!(g.to_string(), "p_n/exp(1 + 1/log p_n)");
        let s = Expr::num("1") - (Expr::var(Var::LogLogN) - Expr::num("2.5")) / Expr::var(Var::LogN).pow(2);
        assert_eq!(s.to_string(), "1 - (log log n - 2.5)/log^2 n");
    }

    #[test]
    fn evaluates_with_bindings() {
        let l = || Expr::var(Var::LogP);
        let e = Expr::num("1") + Expr::num("1") / l() + Expr::num("2.7") / l().pow(2);
        let v: Quantity = e.eval(&Fixed(10.0)).unwrap();
        assert!((v.value - 1.127).abs() < 1e-15);
        assert!(v.contains(1.127));
    }

    #[test]
    fn vars_and_domain() {
        let e = Expr::var(Var::LogLogN) / Expr::var(Var::LogP);
        assert_eq!(e.vars(), vec![Var::LogP, Var::LogLogN]);
        assert_eq!(e.min_n(), 2);
        assert_eq!(Expr::var(Var::P).min_n(), 1);
    }
}
