//! Independent reference implementation for integration tests.
//!
//! Primes come from trial division, sums are exact integers, and every real
//! quantity is computed with 256-bit binary floats. None of the library's
//! sieve, double-double or interval code is used here.

#![allow(dead_code)]

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_rational::BigRational;
use primemeans::catalog::Sample;
use primemeans::{DomainError, Scalar};

pub const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Debug, Clone)]
pub struct Big(pub BigFloat);

impl Big {
    pub fn from_f64(x: f64) -> Self {
        Big(BigFloat::from_f64(x, PREC))
    }

    pub fn from_u128(x: u128) -> Self {
        Big(BigFloat::from_u128(x, PREC))
    }

    pub fn from_decimal(s: &str) -> Self {
        Big(with_cc(|cc| BigFloat::parse(s, Radix::Dec, PREC, RM, cc)))
    }

    pub fn ln_big(&self) -> Self {
        Big(with_cc(|cc| self.0.ln(PREC, RM, cc)))
    }

    pub fn exp_big(&self) -> Self {
        Big(with_cc(|cc| self.0.exp(PREC, RM, cc)))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_string().parse().expect("decimal rendering parses as f64")
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive() && !self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Big(self.0.abs())
    }
}

impl Scalar for Big {
    fn from_rational(r: &BigRational) -> Self {
        let num = Big::from_decimal(&r.numer().to_string());
        let den = Big::from_decimal(&r.denom().to_string());
        Big(num.0.div(&den.0, PREC, RM))
    }

    fn from_u64(v: u64) -> Self {
        Big(BigFloat::from_u64(v, PREC))
    }

    fn euler() -> Self {
        Big(with_cc(|cc| cc.e(PREC, RM)))
    }

    fn add(&self, rhs: &Self) -> Self {
        Big(self.0.add(&rhs.0, PREC, RM))
    }

    fn sub(&self, rhs: &Self) -> Self {
        Big(self.0.sub(&rhs.0, PREC, RM))
    }

    fn mul(&self, rhs: &Self) -> Self {
        Big(self.0.mul(&rhs.0, PREC, RM))
    }

    fn neg(&self) -> Self {
        Big(self.0.neg())
    }

    fn div(&self, rhs: &Self) -> Result<Self, DomainError> {
        if rhs.0.is_zero() {
            return Err(DomainError::DivisionByZero);
        }
        Ok(Big(self.0.div(&rhs.0, PREC, RM)))
    }

    fn ln(&self) -> Result<Self, DomainError> {
        if !self.is_positive() {
            return Err(DomainError::LogOfNonPositive);
        }
        Ok(self.ln_big())
    }

    fn exp(&self) -> Self {
        self.exp_big()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `count` primes by trial division.
pub fn naive_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&k| is_prime(k)).take(count).collect()
}

/// Primes below `limit` from a plain, unsegmented sieve of Eratosthenes.
pub fn plain_sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j < limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Reference values at one n.
#[derive(Debug, Clone)]
pub struct Reference {
    pub n: u64,
    pub p: u64,
    pub sum_primes: u128,
    pub theta: Big,
    pub a: Big,
    pub log_g: Big,
    pub g: Big,
    pub d: Big,
    pub r: Big,
    pub ell: Big,
    pub ratio: Big,
    pub log_ratio: Big,
    pub log_p: Big,
}

/// Reference values for n = 1..=count, in order.
pub fn references(count: usize) -> Vec<Reference> {
    let mut out = Vec::with_capacity(count);
    let mut sum: u128 = 0;
    let mut theta = Big::from_u64(0);
    for (i, p) in naive_primes(count).into_iter().enumerate() {
        let n = i as u64 + 1;
        sum += p as u128;
        let log_p = Big::from_u64(p).ln_big();
        theta = theta.add(&log_p);
        let nb = Big::from_u64(n);
        let a = Big::from_u128(sum).div(&nb).unwrap();
        let log_g = theta.div(&nb).unwrap();
        let g = log_g.exp_big();
        let d = log_p.sub(&log_g);
        let r = a.sub(&Big::from_u64(p).div(&Big::from_u64(2)).unwrap());
        let ell = Big::from_u64(1)
            .add(&Big::from_u64(2).mul(&r).div(&Big::from_u64(p)).unwrap())
            .ln_big();
        let ratio = a.div(&g).unwrap();
        let log_ratio = a.ln_big().sub(&log_g);
        out.push(Reference {
            n,
            p,
            sum_primes: sum,
            theta: theta.clone(),
            a,
            log_g,
            g,
            d,
            r,
            ell,
            ratio,
            log_ratio,
            log_p,
        });
    }
    out
}

pub fn sample(r: &Reference, prev: Option<&Reference>) -> Sample<Big> {
    let log_n = Big::from_u64(r.n).ln_big();
    let log_log_n = (r.n >= 2).then(|| log_n.ln_big());
    Sample {
        n: r.n,
        p: r.p,
        log_p: r.log_p.clone(),
        log_n,
        log_log_n,
        d: r.d.clone(),
        g: r.g.clone(),
        log_g: r.log_g.clone(),
        ell: r.ell.clone(),
        ratio: r.ratio.clone(),
        log_ratio: r.log_ratio.clone(),
        r: r.r.clone(),
        prev_log_ratio: prev.map(|q| q.log_ratio.clone()),
    }
}
