//! Segmented sieve of Eratosthenes over odd numbers.
//!
//! Each segment is a bitmask with one bit per odd candidate. Base primes up
//! to the square root of the current segment end are kept in a table that
//! grows on demand. [`PrimeStream`] sieves batches of consecutive segments in
//! parallel and hands their primes out strictly in ascending order.

use rayon::prelude::*;
use thiserror::Error;

/// Default number of odd candidates per segment (a 128 KiB bitmask).
pub const DEFAULT_SEGMENT_BITS: usize = 1 << 20;

/// Largest segment accepted by [`SieveConfig`]: 2^28 bits, 32 MiB.
pub const MAX_SEGMENT_BITS: usize = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error("invalid range [{lo}, {hi}): need 2 <= lo < hi")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("range [{lo}, {hi}) spans {span} integers, more than the segment budget of {budget}")]
    SegmentTooLarge { lo: u64, hi: u64, span: u64, budget: u64 },
    #[error("segment size {0} must be a positive multiple of 64 no larger than {MAX_SEGMENT_BITS}")]
    BadSegmentSize(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    segment_bits: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_bits: DEFAULT_SEGMENT_BITS,
        }
    }
}

impl SieveConfig {
    pub fn new(segment_bits: usize) -> Result<Self, SieveError> {
        if segment_bits == 0 || !segment_bits.is_multiple_of(64) || segment_bits > MAX_SEGMENT_BITS {
            return Err(SieveError::BadSegmentSize(segment_bits));
        }
        Ok(Self { segment_bits })
    }

    pub fn segment_bits(&self) -> usize {
        self.segment_bits
    }

    /// Number of consecutive integers one segment covers.
    pub fn span(&self) -> u64 {
        2 * self.segment_bits as u64
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Primes up to and including `limit` by a plain odd-only sieve.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // index i <-> 2i + 1
    let half = (limit as usize - 1) / 2 + 1;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = vec![2];
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, c)| !**c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    out
}

/// Odd base primes, extended on demand so that every composite below
/// `covers^2` has a factor in the table.
#[derive(Debug, Clone, Default)]
struct BasePrimes {
    odd: Vec<u64>,
    covers: u64,
}

impl BasePrimes {
    fn ensure(&mut self, hi: u64) {
        let need = isqrt(hi.saturating_sub(1)) + 1;
        if need <= self.covers {
            return;
        }
        // Over-allocate to avoid re-sieving on every segment.
        let target = need.max(self.covers.saturating_mul(2)).max(1 << 16);
        self.odd = small_primes(target).into_iter().skip(1).collect();
        self.covers = target;
    }
}

/// Sieves the odd candidates of `[lo, hi)` into `out`. The caller guarantees
/// that `base` covers `hi`.
fn sieve_odd_into(lo: u64, hi: u64, base: &[u64], words: &mut Vec<u64>, out: &mut Vec<u64>) {
    if lo <= 2 && 2 < hi {
        out.push(2);
    }
    let first = if lo.is_multiple_of(2) { lo + 1 } else { lo };
    if first >= hi {
        return;
    }
    let count = (hi - first).div_ceil(2) as usize;
    words.clear();
    words.resize(count.div_ceil(64), !0u64);
    if !count.is_multiple_of(64) {
        let last = words.len() - 1;
        words[last] = (1u64 << (count % 64)) - 1;
    }
    if first == 1 {
        words[0] &= !1;
    }
    for &q in base {
        let sq = q * q;
        if sq >= hi {
            break;
        }
        let mut start = if sq >= first { sq } else { first.div_ceil(q) * q };
        if start % 2 == 0 {
            start += q;
        }
        let mut idx = ((start - first) / 2) as usize;
        let step = q as usize;
        while idx < count {
            words[idx >> 6] &= !(1u64 << (idx & 63));
            idx += step;
        }
    }
    for (w, &word) in words.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let tz = bits.trailing_zeros() as usize;
            out.push(first + 2 * ((w << 6) + tz) as u64);
            bits &= bits - 1;
        }
    }
}

/// Returns the primes in `[lo, hi)` in ascending order.
pub fn sieve_segment(lo: u64, hi: u64, config: &SieveConfig) -> Result<Vec<u64>, SieveError> {
    if lo < 2 || hi <= lo {
        return Err(SieveError::InvalidRange { lo, hi });
    }
    let span = hi - lo;
    if span > config.span() {
        return Err(SieveError::SegmentTooLarge {
            lo,
            hi,
            span,
            budget: config.span(),
        });
    }
    let mut base = BasePrimes::default();
    base.ensure(hi);
    let mut out = Vec::new();
    sieve_odd_into(lo, hi, &base.odd, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Unbounded ascending stream of primes.
#[derive(Debug)]
pub struct PrimeStream {
    config: SieveConfig,
    base: BasePrimes,
    next_lo: u64,
    buffer: Vec<u64>,
    pos: usize,
    batch: usize,
}

impl PrimeStream {
    pub fn new(config: SieveConfig) -> Self {
        Self::starting_after(0, config)
    }

    /// A stream whose first item is the smallest prime greater than `p`.
    pub fn starting_after(p: u64, config: SieveConfig) -> Self {
        Self {
            config,
            base: BasePrimes::default(),
            next_lo: (p + 1).max(2),
            buffer: Vec::new(),
            pos: 0,
            batch: rayon::current_num_threads().max(1),
        }
    }

    fn refill(&mut self) {
        let span = self.config.span();
        let lo = self.next_lo;
        // Small ranges are cheaper to sieve in one piece.
        let batch = if lo < span { 1 } else { self.batch as u64 };
        let hi = lo + batch * span;
        self.base.ensure(hi);
        let base = &self.base.odd;
        let segments: Vec<Vec<u64>> = (0..batch)
            .into_par_iter()
            .map_init(Vec::new, |words, i| {
                let s_lo = lo + i * span;
                let mut out = Vec::new();
                sieve_odd_into(s_lo, s_lo + span, base, words, &mut out);
                out
            })
            .collect();
        self.buffer.clear();
        self.pos = 0;
        for s in segments {
            self.buffer.extend_from_slice(&s);
        }
        self.next_lo = hi;
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos == self.buffer.len() {
            self.refill();
        }
        let p = self.buffer[self.pos];
        self.pos += 1;
        Some(p)
    }
}
