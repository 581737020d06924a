use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::job::VerificationJob;
use super::VerifyError;
use crate::catalog::{BoundSpec, Check, ClaimedRange, Verdict};
use crate::quantity::Quantity;

/// At most this many n values are listed per bound and kind; counts stay exact.
pub const LIST_CAP: usize = 10_000;

/// One verdict at one n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub bound_id: &'static str,
    pub n: u64,
    pub verdict: Verdict,
    pub margin: Quantity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginAt {
    pub n: u64,
    pub margin: Quantity,
}

/// Running totals for one bound over a contiguous, ordered run of n.
///
/// [`merge`](Self::merge) is associative, so the totals do not depend on how
/// the range was split into blocks or across a checkpoint.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Accumulator {
    pub evaluated: u64,
    pub holds: u64,
    pub violation_count: u64,
    pub violations: Vec<u64>,
    pub claimed_violation_count: u64,
    pub indeterminate_count: u64,
    pub indeterminate: Vec<u64>,
    pub min_margin: Option<MarginAt>,
    pub last_not_holds: Option<u64>,
}

fn push_capped(list: &mut Vec<u64>, n: u64) {
    if list.len() < LIST_CAP {
        list.push(n);
    }
}

impl Accumulator {
    pub fn record(&mut self, n: u64, check: Check, claimed: &ClaimedRange) {
        self.evaluated += 1;
        match check.verdict {
            Verdict::Holds => self.holds += 1,
            Verdict::Fails => {
                self.violation_count += 1;
                push_capped(&mut self.violations, n);
                if claimed.contains(n) {
                    self.claimed_violation_count += 1;
                }
            }
            Verdict::Indeterminate => {
                self.indeterminate_count += 1;
                push_capped(&mut self.indeterminate, n);
            }
        }
        if check.verdict != Verdict::Holds {
            self.last_not_holds = Some(n);
        }
        if self.min_margin.is_none_or(|m| check.margin.value < m.margin.value) {
            self.min_margin = Some(MarginAt {
                n,
                margin: check.margin,
            });
        }
    }

    /// Appends the totals of a later run of n.
    pub fn merge(&mut self, later: Accumulator) {
        self.evaluated += later.evaluated;
        self.holds += later.holds;
        self.violation_count += later.violation_count;
        self.claimed_violation_count += later.claimed_violation_count;
        self.indeterminate_count += later.indeterminate_count;
        for n in later.violations {
            push_capped(&mut self.violations, n);
        }
        for n in later.indeterminate {
            push_capped(&mut self.indeterminate, n);
        }
        if later.last_not_holds.is_some() {
            self.last_not_holds = later.last_not_holds;
        }
        if let Some(m) = later.min_margin {
            if self.min_margin.is_none_or(|cur| m.margin.value < cur.margin.value) {
                self.min_margin = Some(m);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Evaluated,
    /// The examined range is empty, e.g. the claimed start exceeds the limit.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub bound_id: String,
    pub statement: String,
    pub claimed: ClaimedRange,
    pub exploratory: bool,
    pub status: BoundStatus,
    pub n_start: u64,
    pub n_end: u64,
    pub evaluated: u64,
    pub holds: u64,
    pub violation_count: u64,
    /// First [`LIST_CAP`] violations.
    pub violations: Vec<u64>,
    /// Violations inside the claimed range.
    pub claimed_violation_count: u64,
    pub indeterminate_count: u64,
    pub indeterminate: Vec<u64>,
    pub min_margin: Option<Quantity>,
    pub min_margin_n: Option<u64>,
    /// Smallest n* with a certain `Holds` at every n in `[n*, n_end]`;
    /// `None` when the bound does not hold at `n_end` or nothing was examined.
    pub crossover: Option<u64>,
}

impl BoundSummary {
    pub fn new(spec: &BoundSpec, n_start: u64, n_end: u64, acc: Accumulator) -> Self {
        let status = if n_start > n_end {
            BoundStatus::Skipped
        } else {
            BoundStatus::Evaluated
        };
        let crossover = match (status, acc.last_not_holds) {
            (BoundStatus::Skipped, _) => None,
            (_, None) => Some(n_start),
            (_, Some(last)) if last >= n_end => None,
            (_, Some(last)) => Some(last + 1),
        };
        Self {
            bound_id: spec.id.to_string(),
            statement: spec.statement(),
            claimed: spec.claimed,
            exploratory: spec.exploratory,
            status,
            n_start,
            n_end,
            evaluated: acc.evaluated,
            holds: acc.holds,
            violation_count: acc.violation_count,
            violations: acc.violations,
            claimed_violation_count: acc.claimed_violation_count,
            indeterminate_count: acc.indeterminate_count,
            indeterminate: acc.indeterminate,
            min_margin: acc.min_margin.map(|m| m.margin),
            min_margin_n: acc.min_margin.map(|m| m.n),
            crossover,
        }
    }
}

/// A non-exploratory bound that fails somewhere inside its claimed range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub bound_id: String,
    pub claimed: ClaimedRange,
    pub violation_count: u64,
    pub first_violation: Option<u64>,
    pub last_listed_violation: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub job: VerificationJob,
    pub bounds: Vec<BoundSummary>,
    pub findings: Vec<Finding>,
}

/// Timing of one run. Kept out of [`Report`] so reports stay reproducible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunStats {
    pub elapsed: Duration,
    /// Primes consumed by this run (after a resume, only the new ones).
    pub primes: u64,
    pub evaluations: u64,
}

impl RunStats {
    pub fn primes_per_second(&self) -> f64 {
        self.primes as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }
}

impl Report {
    pub fn summary(&self, id: &str) -> Option<&BoundSummary> {
        self.bounds.iter().find(|b| b.bound_id == id)
    }

    pub fn has_violations(&self) -> bool {
        self.bounds.iter().any(|b| b.violation_count > 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> Result<String, VerifyError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "bound_id",
            "n_start",
            "n_end",
            "violations",
            "indeterminate",
            "min_margin",
            "min_margin_n",
            "crossover",
        ])?;
        for b in &self.bounds {
            let opt = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
            w.write_record([
                b.bound_id.clone(),
                b.n_start.to_string(),
                b.n_end.to_string(),
                b.violation_count.to_string(),
                b.indeterminate_count.to_string(),
                b.min_margin.map_or(String::new(), |m| format!("{:e}", m.value)),
                opt(b.min_margin_n),
                opt(b.crossover),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| VerifyError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.bounds {
            out.push_str(&format!("{}: {}\n", b.bound_id, b.statement));
            if b.status == BoundStatus::Skipped {
                out.push_str(&format!(
                    "  skipped: claimed from n = {}, limit {}\n",
                    b.claimed.start, self.job.limit
                ));
                continue;
            }
            out.push_str(&format!(
                "  n in [{}, {}]: {} holds, {} violations, {} indeterminate\n",
                b.n_start, b.n_end, b.holds, b.violation_count, b.indeterminate_count
            ));
            if !b.violations.is_empty() {
                let shown: Vec<String> = b.violations.iter().take(20).map(u64::to_string).collect();
                let more = if b.violation_count > 20 { ", ..." } else { "" };
                out.push_str(&format!("  violations at n = {}{}\n", shown.join(", "), more));
            }
            if let (Some(m), Some(n)) = (b.min_margin, b.min_margin_n) {
                out.push_str(&format!("  min margin {} at n = {}\n", m, n));
            }
            match b.crossover {
                Some(c) => out.push_str(&format!("  holds for all n in [{}, {}]\n", c, b.n_end)),
                None => out.push_str(&format!("  does not hold at n = {}\n", b.n_end)),
            }
        }
        for f in &self.findings {
            out.push_str(&format!(
                "FINDING {}: {} violations inside the claimed range {} (first at n = {})\n",
                f.bound_id,
                f.violation_count,
                f.claimed,
                f.first_violation.map_or("?".into(), |n| n.to_string())
            ));
        }
        out
    }
}
