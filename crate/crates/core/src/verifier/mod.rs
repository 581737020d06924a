//! Streaming verification of catalog bounds over ranges of n.
//!
//! Primes are consumed in order by one sequential accumulator. Each block of
//! states is turned into samples and checked against the selected bounds in
//! parallel; per-block totals are merged strictly in order, so the report
//! does not depend on the thread count, the block size or on checkpoints.

mod checkpoint;
mod job;
mod report;

pub use checkpoint::{Checkpoint, StoredQuantity, StoredState};
pub use job::{capacity, RunOptions, VerificationJob, CAPACITY_ENV, DEFAULT_CAPACITY};
pub use report::{
    Accumulator, BoundStatus, BoundSummary, Finding, MarginAt, Report, RunStats, VerdictRecord, LIST_CAP,
};

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::{BoundSpec, Sample, Var};
use crate::kernel::{state_at, KernelError, Precision, PrimeState, Quantities};
use crate::quantity::{DomainError, Quantity};
use crate::sieve::{PrimeStream, SieveError};

/// Number of consecutive n handled per parallel step.
const BLOCK: u64 = 1 << 15;
/// Samples per parallel task.
const CHUNK: usize = 1 << 10;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown bound id {0:?}")]
    UnknownBound(String),
    #[error("start must be at least 1")]
    BadStart,
    #[error("limit {limit} exceeds the configured capacity {capacity} (set PRIMEMEANS_CAPACITY to raise it)")]
    CapacityExceeded { limit: u64, capacity: u64 },
    #[error("PRIMEMEANS_CAPACITY={0:?} is not a non-negative integer")]
    BadCapacity(String),
    #[error("checkpoint was written for job {found}, not {expected}")]
    HashMismatch { expected: String, found: String },
    #[error("corrupt checkpoint: {0}")]
    Corrupt(String),
    #[error("{bound} at n = {n}: {source}")]
    Domain {
        bound: &'static str,
        n: u64,
        source: DomainError,
    },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Sieve(#[from] SieveError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Report plus timing of one run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub stats: RunStats,
    /// True when the run stopped at `halt_at` before reaching the limit.
    pub halted: bool,
}

/// Examined range for one bound: `[lo, hi]`, empty when `lo > hi`.
#[derive(Debug, Clone, Copy)]
struct Range {
    lo: u64,
    hi: u64,
}

impl Range {
    fn contains(&self, n: u64) -> bool {
        self.lo <= n && n <= self.hi
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

struct Plan {
    specs: Vec<&'static BoundSpec>,
    ranges: Vec<Range>,
    /// First n whose quantities are computed.
    compute_from: u64,
    /// Last n that any bound examines.
    last: u64,
}

impl Plan {
    fn new(job: &VerificationJob) -> Result<Self, VerifyError> {
        let specs = job.validate()?;
        let ranges: Vec<Range> = specs
            .iter()
            .map(|s| Range {
                lo: job.start.unwrap_or(s.claimed.start).max(s.min_n()).max(1),
                hi: s.claimed.end.map_or(job.limit, |e| e.min(job.limit)),
            })
            .collect();
        let active = || ranges.iter().filter(|r| !r.is_empty());
        let first = active().map(|r| r.lo).min().unwrap_or(u64::MAX);
        let last = active().map(|r| r.hi).max().unwrap_or(0);
        let needs_prev = specs.iter().any(|s| s.vars().contains(&Var::PrevLogRatio));
        let compute_from = if needs_prev {
            first.saturating_sub(1).max(1)
        } else {
            first
        };
        Ok(Self {
            specs,
            ranges,
            compute_from,
            last,
        })
    }

    fn report(&self, job: &VerificationJob, accs: Vec<Accumulator>) -> Report {
        let bounds: Vec<BoundSummary> = self
            .specs
            .iter()
            .zip(&self.ranges)
            .zip(accs)
            .map(|((spec, r), acc)| BoundSummary::new(spec, r.lo, r.hi, acc))
            .collect();
        let findings = bounds
            .iter()
            .filter(|b| !b.exploratory && b.claimed_violation_count > 0)
            .map(|b| {
                let inside: Vec<u64> = b
                    .violations
                    .iter()
                    .copied()
                    .filter(|&n| b.claimed.contains(n))
                    .collect();
                Finding {
                    bound_id: b.bound_id.clone(),
                    claimed: b.claimed,
                    violation_count: b.claimed_violation_count,
                    first_violation: inside.first().copied(),
                    last_listed_violation: inside.last().copied(),
                }
            })
            .collect();
        Report {
            job: job.clone(),
            bounds,
            findings,
        }
    }
}

struct Engine<'a> {
    job: &'a VerificationJob,
    opts: &'a RunOptions,
    plan: Plan,
    state: PrimeState,
    prev_log_ratio: Option<Quantity>,
    accs: Vec<Accumulator>,
    last_checkpoint_n: u64,
}

impl Engine<'_> {
    fn evaluate(&self, samples: &[Sample<Quantity>]) -> Result<Vec<Accumulator>, VerifyError> {
        let plan = &self.plan;
        let partials: Vec<Vec<Accumulator>> = samples
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut local = vec![Accumulator::default(); plan.specs.len()];
                for s in chunk {
                    for ((spec, range), acc) in plan.specs.iter().zip(&plan.ranges).zip(local.iter_mut()) {
                        if !range.contains(s.n) {
                            continue;
                        }
                        let check = spec.check(s).map_err(|source| VerifyError::Domain {
                            bound: spec.id,
                            n: s.n,
                            source,
                        })?;
                        acc.record(s.n, check, &spec.claimed);
                    }
                }
                Ok(local)
            })
            .collect::<Result<_, VerifyError>>()?;
        let mut total = vec![Accumulator::default(); plan.specs.len()];
        for part in partials {
            for (t, p) in total.iter_mut().zip(part) {
                t.merge(p);
            }
        }
        Ok(total)
    }

    fn save(&mut self, path: &Path) -> Result<(), VerifyError> {
        Checkpoint::new(self.job, &self.state, self.prev_log_ratio, self.accs.clone()).save(path)?;
        self.last_checkpoint_n = self.state.n();
        Ok(())
    }

    /// Returns the number of primes consumed and of bound evaluations made.
    fn drive(&mut self) -> Result<(u64, u64, bool), VerifyError> {
        let stop = match self.opts.halt_at {
            Some(h) => h.min(self.plan.last),
            None => self.plan.last,
        };
        let mut stream = PrimeStream::starting_after(self.state.p(), self.opts.sieve);
        let start_n = self.state.n();
        let mut evaluations = 0;
        while self.state.n() < stop {
            let ff_to = self.plan.compute_from.saturating_sub(1).min(stop);
            while self.state.n() < ff_to {
                let p = stream.next().expect("primes are unbounded");
                self.state = self.state.try_advance(p)?;
            }
            if self.state.n() >= stop {
                break;
            }
            let end = (self.state.n() + BLOCK).min(stop);
            let mut states = Vec::with_capacity((end - self.state.n()) as usize);
            while self.state.n() < end {
                let p = stream.next().expect("primes are unbounded");
                self.state = self.state.try_advance(p)?;
                states.push(self.state);
            }
            let quantities: Vec<Quantities> = states
                .par_iter()
                .map(|s| s.quantities())
                .collect::<Result<_, KernelError>>()?;
            let samples: Vec<Sample<Quantity>> = quantities
                .iter()
                .map(|q| {
                    let s = Sample::from_quantities(q, self.prev_log_ratio);
                    self.prev_log_ratio = Some(q.log_ratio);
                    s
                })
                .collect();
            let block = self.evaluate(&samples)?;
            for (acc, b) in self.accs.iter_mut().zip(block) {
                evaluations += b.evaluated;
                acc.merge(b);
            }
            if let (Some(path), Some(interval)) = (&self.opts.checkpoint, self.opts.checkpoint_interval) {
                if self.state.n() - self.last_checkpoint_n >= interval && self.state.n() < self.plan.last {
                    self.save(path)?;
                }
            }
        }
        let halted = self.state.n() < self.plan.last;
        if halted {
            if let Some(path) = &self.opts.checkpoint {
                self.save(path)?;
            }
        }
        Ok((self.state.n() - start_n, evaluations, halted))
    }
}

fn finish(mut engine: Engine<'_>) -> Result<Outcome, VerifyError> {
    let started = Instant::now();
    let (primes, evaluations, halted) = engine.drive()?;
    let stats = RunStats {
        elapsed: started.elapsed(),
        primes,
        evaluations,
    };
    let report = engine.plan.report(engine.job, engine.accs);
    Ok(Outcome { report, stats, halted })
}

/// Runs `job` from n = 1.
pub fn run(job: &VerificationJob, opts: &RunOptions) -> Result<Outcome, VerifyError> {
    let plan = Plan::new(job)?;
    let accs = vec![Accumulator::default(); plan.specs.len()];
    finish(Engine {
        job,
        opts,
        plan,
        state: PrimeState::empty(job.precision),
        prev_log_ratio: None,
        accs,
        last_checkpoint_n: 0,
    })
}

/// Continues the job stored in the checkpoint at `path`. With `expected`,
/// refuses unless the checkpoint belongs to that job.
pub fn resume(path: &Path, expected: Option<&VerificationJob>, opts: &RunOptions) -> Result<Outcome, VerifyError> {
    let cp = Checkpoint::load(path)?;
    if let Some(job) = expected {
        cp.ensure_matches(job)?;
    }
    let job = cp.job.clone();
    let plan = Plan::new(&job)?;
    let state = cp.state.to_state(&job)?;
    let engine = Engine {
        job: &job,
        opts,
        plan,
        state,
        prev_log_ratio: cp.prev_log_ratio.map(Into::into),
        accs: cp.accumulators,
        last_checkpoint_n: state.n(),
    };
    finish(engine)
}

/// Smallest n* such that the bound certainly holds on every n in
/// `[n*, limit]`, scanning from the first n where the bound is defined.
/// `None` if it does not hold at `limit`.
pub fn crossover(id: &str, limit: u64, precision: Precision, opts: &RunOptions) -> Result<Option<u64>, VerifyError> {
    let job = VerificationJob::new(vec![id.to_string()], Some(1), limit, precision);
    let out = run(&job, opts)?;
    Ok(out.report.bounds[0].crossover)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MonotoneResult {
    /// n with `A_{n+1}/G_{n+1} >= A_n/G_n` certainly.
    pub non_decreasing: Vec<u64>,
    /// n where the comparison could not be decided.
    pub indeterminate: Vec<u64>,
}

/// Adjacent pairs `(n, n+1)` with `lo <= n < hi` on which the ratio does not
/// decrease.
pub fn monotone_check(
    lo: u64,
    hi: u64,
    precision: Precision,
    opts: &RunOptions,
) -> Result<MonotoneResult, VerifyError> {
    if hi <= lo {
        return Ok(MonotoneResult::default());
    }
    let job = VerificationJob::new(vec!["conj-monotone".into()], Some(lo.max(1) + 1), hi, precision);
    let out = run(&job, opts)?;
    let b = &out.report.bounds[0];
    Ok(MonotoneResult {
        non_decreasing: b.violations.iter().map(|m| m - 1).collect(),
        indeterminate: b.indeterminate.iter().map(|m| m - 1).collect(),
    })
}

/// Verdicts of the given bounds at a single n.
pub fn verdicts_at(ids: &[&str], n: u64, precision: Precision) -> Result<Vec<VerdictRecord>, VerifyError> {
    let specs: Vec<&'static BoundSpec> = ids
        .iter()
        .map(|id| crate::catalog::lookup(id).ok_or_else(|| VerifyError::UnknownBound(id.to_string())))
        .collect::<Result<_, _>>()?;
    if n == 0 {
        return Err(VerifyError::BadStart);
    }
    let prev = if n >= 2 {
        Some(state_at(n - 1, precision).quantities()?.log_ratio)
    } else {
        None
    };
    let sample = Sample::from_quantities(&state_at(n, precision).quantities()?, prev);
    specs
        .into_iter()
        .map(|spec| {
            let check = spec.check(&sample).map_err(|source| VerifyError::Domain {
                bound: spec.id,
                n,
                source,
            })?;
            Ok(VerdictRecord {
                bound_id: spec.id,
                n,
                verdict: check.verdict,
                margin: check.margin,
            })
        })
        .collect()
}
