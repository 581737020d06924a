//! Registry of published inequalities about D(n), G_n, R(n) and A_n/G_n.
//!
//! Each entry is data: a target quantity, a side, a right-hand side
//! expression and the range of n on which the inequality is claimed.
//! Checking an entry at one n yields a [`Verdict`] and a signed margin that
//! is positive when the inequality holds.

mod entries;
mod expr;

pub use expr::{Bindings, Coef, Expr, Var};

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::kernel::Quantities;
use crate::quantity::{DomainError, Quantity, Scalar};

/// The quantity on the left of an inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    D,
    G,
    /// `log G_n = theta(p_n)/n`
    LogG,
    /// `log(1 + 2R(n)/p_n)`
    LogRTerm,
    Ratio,
    LogRatio,
    Prime,
    R,
}

impl Target {
    pub fn symbol(self) -> &'static str {
        match self {
            Target::D => "D(n)",
            Target::G => "G_n",
            Target::LogG => "log G_n",
            Target::LogRTerm => "log(1 + 2R(n)/p_n)",
            Target::Ratio => "A_n/G_n",
            Target::LogRatio => "log(A_n/G_n)",
            Target::Prime => "p_n",
            Target::R => "R(n)",
        }
    }
}

/// `Lower`: the expression bounds the target from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClaimedRange {
    pub start: u64,
    /// Inclusive; `None` means every n from `start` on.
    pub end: Option<u64>,
}

impl ClaimedRange {
    pub fn contains(&self, n: u64) -> bool {
        n >= self.start && self.end.is_none_or(|e| n <= e)
    }
}

impl fmt::Display for ClaimedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end {
            Some(e) => write!(f, "{} <= n <= {}", self.start, e),
            None => write!(f, "n >= {}", self.start),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSpec {
    pub id: &'static str,
    pub target: Target,
    pub side: Side,
    pub strict: bool,
    pub rhs: Expr,
    pub claimed: ClaimedRange,
    /// Conjectures and probes that are not claimed as theorems.
    pub exploratory: bool,
    pub note: Option<&'static str>,
}

/// All inputs a bound may read at one n.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<S> {
    pub n: u64,
    pub p: u64,
    pub log_p: S,
    pub log_n: S,
    /// `None` for n = 1.
    pub log_log_n: Option<S>,
    pub d: S,
    pub g: S,
    pub log_g: S,
    pub ell: S,
    pub ratio: S,
    pub log_ratio: S,
    pub r: S,
    /// `None` for n = 1 or when the previous value is not available.
    pub prev_log_ratio: Option<S>,
}

impl Sample<Quantity> {
    pub fn from_quantities(q: &Quantities, prev_log_ratio: Option<Quantity>) -> Self {
        let log_n = if q.n == 1 {
            Quantity::ZERO
        } else {
            Quantity::from_u64(q.n).ln().expect("n >= 2")
        };
        let log_log_n = if q.n >= 2 { log_n.ln().ok() } else { None };
        Self {
            n: q.n,
            p: q.p,
            log_p: q.log_p,
            log_n,
            log_log_n,
            d: q.d,
            g: q.g,
            log_g: q.log_g,
            ell: q.ell,
            ratio: q.ratio,
            log_ratio: q.log_ratio,
            r: q.r,
            prev_log_ratio: if q.n >= 2 { prev_log_ratio } else { None },
        }
    }
}

impl<S: Scalar> Sample<S> {
    pub fn target(&self, t: Target) -> S {
        match t {
            Target::D => self.d.clone(),
            Target::G => self.g.clone(),
            Target::LogG => self.log_g.clone(),
            Target::LogRTerm => self.ell.clone(),
            Target::Ratio => self.ratio.clone(),
            Target::LogRatio => self.log_ratio.clone(),
            Target::Prime => S::from_u64(self.p),
            Target::R => self.r.clone(),
        }
    }
}

impl<S: Scalar> Bindings<S> for Sample<S> {
    fn var(&self, v: Var) -> Result<S, DomainError> {
        match v {
            Var::LogP => Ok(self.log_p.clone()),
            Var::LogN => Ok(self.log_n.clone()),
            Var::LogLogN => self
                .log_log_n
                .clone()
                .ok_or(DomainError::Undefined("log log n", self.n)),
            Var::P => Ok(S::from_u64(self.p)),
            Var::N => Ok(S::from_u64(self.n)),
            Var::PrevLogRatio => self
                .prev_log_ratio
                .clone()
                .ok_or(DomainError::Undefined("log(A_{n-1}/G_{n-1})", self.n)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The enclosure of the margin straddles the decision point.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub verdict: Verdict,
    /// Positive when the inequality holds.
    pub margin: Quantity,
}

impl BoundSpec {
    /// Smallest n at which every variable of the bound is defined.
    pub fn min_n(&self) -> u64 {
        self.rhs.min_n()
    }

    pub fn vars(&self) -> Vec<Var> {
        self.rhs.vars()
    }

    pub fn coefficients(&self) -> Vec<&'static str> {
        self.rhs.coefficients().iter().map(|c| c.printed()).collect()
    }

    pub fn relation(&self) -> &'static str {
        match (self.side, self.strict) {
            (Side::Lower, true) => ">",
            (Side::Lower, false) => ">=",
            (Side::Upper, true) => "<",
            (Side::Upper, false) => "<=",
        }
    }

    /// Text form, e.g. `D(n) > 1 + 1/log p_n + 2.7/log^2 p_n`.
    pub fn statement(&self) -> String {
        format!("{} {} {}", self.target.symbol(), self.relation(), self.rhs)
    }

    /// The right-hand side at one n.
    pub fn eval_bound<S: Scalar>(&self, sample: &Sample<S>) -> Result<S, DomainError> {
        if sample.n < self.min_n() {
            return Err(DomainError::Undefined(self.id, sample.n));
        }
        self.rhs.eval(sample)
    }

    /// `target - rhs` for lower bounds, `rhs - target` for upper bounds.
    pub fn margin<S: Scalar>(&self, sample: &Sample<S>) -> Result<S, DomainError> {
        let rhs = self.eval_bound(sample)?;
        let t = sample.target(self.target);
        Ok(match self.side {
            Side::Lower => t.sub(&rhs),
            Side::Upper => rhs.sub(&t),
        })
    }

    pub fn check(&self, sample: &Sample<Quantity>) -> Result<Check, DomainError> {
        let margin = self.margin(sample)?;
        Ok(Check {
            verdict: classify(margin, self.strict),
            margin,
        })
    }
}

/// Comparisons are made directly on value and radius, so no rounding is
/// involved in the decision.
pub fn classify(margin: Quantity, strict: bool) -> Verdict {
    let (v, e) = (margin.value, margin.error);
    if v.is_nan() || e.is_nan() {
        return Verdict::Indeterminate;
    }
    let holds = if strict { v > e } else { v >= e };
    let fails = if strict { -v >= e } else { -v > e };
    if holds {
        Verdict::Holds
    } else if fails {
        Verdict::Fails
    } else {
        Verdict::Indeterminate
    }
}

impl fmt::Display for BoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} for {}", self.id, self.statement(), self.claimed)
    }
}

pub fn catalog() -> &'static [BoundSpec] {
    static CATALOG: OnceLock<Vec<BoundSpec>> = OnceLock::new();
    CATALOG.get_or_init(entries::all)
}

pub fn lookup(id: &str) -> Option<&'static BoundSpec> {
    catalog().iter().find(|b| b.id == id)
}

/// One row per bound, for documentation and audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogRow {
    pub id: &'static str,
    pub statement: String,
    pub target: Target,
    pub side: Side,
    pub strict: bool,
    pub basis: Vec<Var>,
    pub coefficients: Vec<&'static str>,
    pub claimed: ClaimedRange,
    pub exploratory: bool,
    pub note: Option<&'static str>,
}

impl From<&BoundSpec> for CatalogRow {
    fn from(b: &BoundSpec) -> Self {
        Self {
            id: b.id,
            statement: b.statement(),
            target: b.target,
            side: b.side,
            strict: b.strict,
            basis: b.vars(),
            coefficients: b.coefficients(),
            claimed: b.claimed,
            exploratory: b.exploratory,
            note: b.note,
        }
    }
}

pub fn catalog_table() -> Vec<CatalogRow> {
    catalog().iter().map(CatalogRow::from).collect()
}
