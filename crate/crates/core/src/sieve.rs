//! Segmented, bit-packed sieve of Eratosthenes with rank/select queries.
//!
//! Only odd numbers are stored: bit `i` of the table stands for `2i + 1` and
//! is set when that number is prime; 2 is handled separately. The bit array is
//! sieved in segments of 2^20 odd numbers (128 KiB), which are independent
//! and sieved in parallel.
//!
//! Prime counting uses two levels of checkpoints: a cumulative count at the
//! start of every segment, and a segment-relative count every 512 bits. A
//! `pi` query is then at most eight popcounts. `nth_prime` is the inverse
//! (select) and walks the same checkpoints with binary searches.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default upper bound on the sieve limit (about 125 MB of flags).
pub const DEFAULT_TABLE_CAP: u64 = 2_000_000_000;

const SEGMENT_BITS_LOG2: u32 = 20;
const SEGMENT_BITS: usize = 1 << SEGMENT_BITS_LOG2;
const SEGMENT_WORDS: usize = SEGMENT_BITS / 64;
const BLOCK_WORDS: usize = 8;
const BLOCKS_PER_SEGMENT: usize = SEGMENT_WORDS / BLOCK_WORDS;

/// An immutable table of the primes up to `limit`.
#[derive(Clone)]
pub struct PrimeTable {
    limit: u64,
    /// Number of odd positions stored, `(limit + 1) / 2`.
    bits: usize,
    /// Bit `i` set iff `2i + 1` is prime.
    flags: Vec<u64>,
    /// Odd primes strictly before each segment.
    segment_counts: Vec<u64>,
    /// Odd primes between the start of the enclosing segment and each block.
    block_counts: Vec<u32>,
    odd_primes: u64,
    prime_index: Option<Vec<u64>>,
}

impl std::fmt::Debug for PrimeTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimeTable")
            .field("limit", &self.limit)
            .field("prime_count", &self.prime_count())
            .field("materialized", &self.prime_index.is_some())
            .finish()
    }
}

impl PrimeTable {
    /// Sieves every integer up to and including `limit`, refusing limits
    /// above [`DEFAULT_TABLE_CAP`].
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_cap(limit, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(limit: u64, cap: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "table limit must be at least 2, got {limit}"
            )));
        }
        if limit > cap {
            return Err(Error::ResourceLimit(format!(
                "table limit {limit} exceeds the configured cap of {cap}"
            )));
        }
        let bits = usize::try_from(limit.div_ceil(2)).map_err(|_| {
            Error::ResourceLimit(format!("table limit {limit} does not fit in memory"))
        })?;
        let words = bits.div_ceil(64);
        let segments = bits.div_ceil(SEGMENT_BITS);
        let base = small_odd_primes(isqrt(limit));

        let mut flags = vec![u64::MAX; words];
        flags
            .par_chunks_mut(SEGMENT_WORDS)
            .enumerate()
            .for_each(|(segment, chunk)| sieve_segment(segment, chunk, bits, &base));

        let mut block_counts = vec![0u32; words.div_ceil(BLOCK_WORDS)];
        let per_segment: Vec<u64> = flags
            .par_chunks(SEGMENT_WORDS)
            .zip(block_counts.par_chunks_mut(BLOCKS_PER_SEGMENT))
            .map(|(chunk, blocks)| {
                let mut running = 0u32;
                for (block, words) in blocks.iter_mut().zip(chunk.chunks(BLOCK_WORDS)) {
                    *block = running;
                    running += words.iter().map(|w| w.count_ones()).sum::<u32>();
                }
                u64::from(running)
            })
            .collect();

        let mut segment_counts = Vec::with_capacity(segments);
        let mut running = 0u64;
        for count in per_segment {
            segment_counts.push(running);
            running += count;
        }

        Ok(Self {
            limit,
            bits,
            flags,
            segment_counts,
            block_counts,
            odd_primes: running,
            prime_index: None,
        })
    }

    /// Also keep a dense array of all primes, making `nth_prime` O(1).
    pub fn materialize(mut self) -> Self {
        if self.prime_index.is_none() {
            self.prime_index = Some(self.primes().collect());
        }
        self
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_materialized(&self) -> bool {
        self.prime_index.is_some()
    }

    /// π(limit).
    pub fn prime_count(&self) -> u64 {
        self.odd_primes + 1
    }

    /// Primality of `n`.
    ///
    /// # Panics
    ///
    /// If `n` is above the table limit.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(
            n <= self.limit,
            "is_prime({n}) beyond table limit {}",
            self.limit
        );
        if n % 2 == 0 {
            return n == 2;
        }
        self.bit((n / 2) as usize)
    }

    /// Number of primes `<= x`.
    pub fn pi(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::OutOfRange {
                what: "pi argument",
                value: x,
                max: self.limit,
            });
        }
        Ok(self.pi_unchecked(x))
    }

    pub(crate) fn pi_unchecked(&self, x: u64) -> u64 {
        if x < 2 {
            return 0;
        }
        1 + self.odd_rank(((x - 1) / 2) as usize + 1)
    }

    /// The `n`-th prime, 1-based.
    pub fn nth_prime(&self, n: u64) -> Result<u64> {
        let count = self.prime_count();
        if n == 0 || n > count {
            return Err(Error::OutOfRange {
                what: "prime index",
                value: n,
                max: count,
            });
        }
        if let Some(index) = &self.prime_index {
            return Ok(index[(n - 1) as usize]);
        }
        if n == 1 {
            return Ok(2);
        }
        Ok(2 * self.odd_select(n - 2) as u64 + 1)
    }

    /// Smallest prime `q` with `lo < q < hi`.
    pub fn next_prime_in(&self, lo: u64, hi: u64) -> Result<Option<u64>> {
        if hi > self.limit {
            return Err(Error::OutOfRange {
                what: "interval end",
                value: hi,
                max: self.limit,
            });
        }
        Ok(self.next_prime_above(lo).filter(|&q| q < hi))
    }

    /// Smallest prime strictly greater than `x`, if it lies in the table.
    pub fn next_prime_above(&self, x: u64) -> Option<u64> {
        if x < 2 {
            return Some(2);
        }
        if x >= self.limit {
            return None;
        }
        // first odd number > x
        let from = (x / 2 + if x % 2 == 0 { 0 } else { 1 }) as usize;
        self.next_set_bit(from).map(|i| 2 * i as u64 + 1)
    }

    /// Largest prime strictly less than `x`.
    ///
    /// # Panics
    ///
    /// If `x - 1` is above the table limit.
    pub fn prev_prime_below(&self, x: u64) -> Option<u64> {
        if x <= 2 {
            return None;
        }
        let top = x - 1;
        assert!(
            top <= self.limit,
            "prev_prime_below({x}) beyond table limit {}",
            self.limit
        );
        // last odd number <= top
        let upto = ((if top % 2 == 0 { top - 1 } else { top }) / 2) as usize;
        match self.prev_set_bit(upto) {
            Some(i) => Some(2 * i as u64 + 1),
            None => Some(2),
        }
    }

    /// All primes in the table, ascending.
    pub fn primes(&self) -> Primes<'_> {
        self.primes_from(0)
    }

    /// Primes `>= from`, ascending.
    pub fn primes_from(&self, from: u64) -> Primes<'_> {
        let emit_two = from <= 2;
        let start = if from <= 1 {
            0
        } else {
            (from / 2).min(self.bits as u64) as usize
        };
        Primes {
            table: self,
            emit_two,
            next_bit: start,
        }
    }

    /// The dense array of primes if [`materialize`](Self::materialize) was called.
    pub fn prime_index(&self) -> Option<&[u64]> {
        self.prime_index.as_deref()
    }

    #[inline]
    fn bit(&self, i: usize) -> bool {
        self.flags[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of set bits at positions `< i`.
    fn odd_rank(&self, i: usize) -> u64 {
        if i >= self.bits {
            return self.odd_primes;
        }
        let word = i / 64;
        let block = word / BLOCK_WORDS;
        let mut count =
            self.segment_counts[i >> SEGMENT_BITS_LOG2] + u64::from(self.block_counts[block]);
        for w in &self.flags[block * BLOCK_WORDS..word] {
            count += u64::from(w.count_ones());
        }
        let mask = (1u64 << (i % 64)) - 1;
        count + u64::from((self.flags[word] & mask).count_ones())
    }

    /// Position of the set bit of 0-based rank `r`. Requires `r < odd_primes`.
    fn odd_select(&self, r: u64) -> usize {
        let segment = self.segment_counts.partition_point(|&c| c <= r) - 1;
        let mut rest = r - self.segment_counts[segment];
        let first_block = segment * BLOCKS_PER_SEGMENT;
        let last_block = (first_block + BLOCKS_PER_SEGMENT).min(self.block_counts.len());
        let blocks = &self.block_counts[first_block..last_block];
        let block = first_block + blocks.partition_point(|&c| u64::from(c) <= rest) - 1;
        rest -= u64::from(self.block_counts[block]);
        let mut word = block * BLOCK_WORDS;
        loop {
            let ones = u64::from(self.flags[word].count_ones());
            if rest < ones {
                break;
            }
            rest -= ones;
            word += 1;
        }
        let mut w = self.flags[word];
        for _ in 0..rest {
            w &= w - 1;
        }
        word * 64 + w.trailing_zeros() as usize
    }

    fn next_set_bit(&self, from: usize) -> Option<usize> {
        if from >= self.bits {
            return None;
        }
        let mut word = from / 64;
        let mut w = self.flags[word] & (u64::MAX << (from % 64));
        loop {
            if w != 0 {
                return Some(word * 64 + w.trailing_zeros() as usize);
            }
            word += 1;
            if word == self.flags.len() {
                return None;
            }
            w = self.flags[word];
        }
    }

    fn prev_set_bit(&self, upto: usize) -> Option<usize> {
        let upto = upto.min(self.bits - 1);
        let mut word = upto / 64;
        let shift = 63 - (upto % 64);
        let mut w = (self.flags[word] << shift) >> shift;
        loop {
            if w != 0 {
                return Some(word * 64 + 63 - w.leading_zeros() as usize);
            }
            if word == 0 {
                return None;
            }
            word -= 1;
            w = self.flags[word];
        }
    }
}

/// Ascending iterator over the primes of a [`PrimeTable`].
pub struct Primes<'a> {
    table: &'a PrimeTable,
    emit_two: bool,
    next_bit: usize,
}

impl Iterator for Primes<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emit_two {
            self.emit_two = false;
            return Some(2);
        }
        let i = self.table.next_set_bit(self.next_bit)?;
        self.next_bit = i + 1;
        Some(2 * i as u64 + 1)
    }
}

fn sieve_segment(segment: usize, chunk: &mut [u64], bits: usize, base: &[u64]) {
    let lo = segment * SEGMENT_BITS;
    let hi = (lo + chunk.len() * 64).min(bits);
    for &p in base {
        let p_us = p as usize;
        let square = ((p * p) / 2) as usize;
        if square >= hi {
            break;
        }
        // odd multiples of p sit at positions congruent to p / 2 modulo p
        let mut j = if square >= lo {
            square
        } else {
            let residue = p_us / 2;
            let offset = (lo - residue).div_ceil(p_us) * p_us;
            residue + offset
        };
        while j < hi {
            let local = j - lo;
            chunk[local / 64] &= !(1u64 << (local % 64));
            j += p_us;
        }
    }
    if segment == 0 {
        // the number 1
        chunk[0] &= !1;
    }
    let used = hi - lo;
    let full = used / 64;
    if used % 64 != 0 {
        chunk[full] &= (1u64 << (used % 64)) - 1;
        chunk[full + 1..].fill(0);
    } else {
        chunk[full..].fill(0);
    }
}

/// Odd primes up to `n` by a plain sieve; used for the sieving primes.
fn small_odd_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in (3..=n).step_by(2) {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += 2 * i;
        }
    }
    primes
}

/// Upper bound on the `n`-th prime, `n (ln n + ln ln n)` for `n >= 6`.
pub fn nth_prime_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn rejects_tiny_and_oversized_limits() {
        assert!(matches!(PrimeTable::new(1), Err(Error::InvalidArgument(_))));
        assert!(matches!(PrimeTable::new(0), Err(Error::InvalidArgument(_))));
        let err = PrimeTable::with_cap(1001, 1000).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
        assert!(err.to_string().contains("1000"));
    }

    #[test]
    fn enumerates_small_primes() {
        let t = PrimeTable::new(10).unwrap();
        assert_eq!(t.primes().collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        let t = PrimeTable::new(2).unwrap();
        assert_eq!(t.primes().collect::<Vec<_>>(), vec![2]);
        assert_eq!(t.prime_count(), 1);
    }

    #[test]
    fn pi_small_values() {
        let t = PrimeTable::new(100).unwrap();
        assert_eq!(t.pi(0).unwrap(), 0);
        assert_eq!(t.pi(1).unwrap(), 0);
        assert_eq!(t.pi(2).unwrap(), 1);
        assert_eq!(t.pi(30).unwrap(), 10);
        assert_eq!(t.pi(100).unwrap(), 25);
        assert!(matches!(t.pi(101), Err(Error::OutOfRange { max: 100, .. })));
    }

    #[test]
    fn nth_prime_small_values() {
        let t = PrimeTable::new(100).unwrap();
        assert_eq!(t.nth_prime(1).unwrap(), 2);
        assert_eq!(t.nth_prime(5).unwrap(), 11);
        assert_eq!(t.nth_prime(25).unwrap(), 97);
        let err = t.nth_prime(26).unwrap_err();
        assert!(err.to_string().contains("25"));
        assert!(t.nth_prime(0).is_err());
    }

    #[test]
    fn next_prime_in_open_interval() {
        let t = PrimeTable::new(200).unwrap();
        assert_eq!(t.next_prime_in(7, 11).unwrap(), None);
        assert_eq!(t.next_prime_in(13, 34).unwrap(), Some(17));
        assert_eq!(t.next_prime_in(109, 118).unwrap(), Some(113));
        assert_eq!(t.next_prime_in(0, 3).unwrap(), Some(2));
        assert_eq!(t.next_prime_in(2, 3).unwrap(), None);
        assert!(t.next_prime_in(100, 201).is_err());
    }

    #[test]
    fn prev_and_next_prime() {
        let t = PrimeTable::new(200).unwrap();
        assert_eq!(t.prev_prime_below(3), Some(2));
        assert_eq!(t.prev_prime_below(2), None);
        assert_eq!(t.prev_prime_below(4), Some(3));
        assert_eq!(t.prev_prime_below(26), Some(23));
        assert_eq!(t.prev_prime_below(201), Some(199));
        assert_eq!(t.next_prime_above(0), Some(2));
        assert_eq!(t.next_prime_above(2), Some(3));
        assert_eq!(t.next_prime_above(22), Some(23));
        assert_eq!(t.next_prime_above(23), Some(29));
        assert_eq!(t.next_prime_above(199), None);
    }

    #[test]
    fn agrees_with_trial_division_across_segment_boundaries() {
        // spans three segments
        let limit = 3 * 2 * SEGMENT_BITS as u64 + 77;
        let t = PrimeTable::new(limit).unwrap();
        let mut count = 0;
        for n in 0..=limit {
            let p = trial_division(n);
            assert_eq!(t.is_prime(n), p, "n = {n}");
            count += p as u64;
            if n % 997 == 0 || n == limit {
                assert_eq!(t.pi(n).unwrap(), count, "pi({n})");
            }
        }
        for (i, p) in t.primes().enumerate().step_by(101) {
            assert_eq!(t.nth_prime(i as u64 + 1).unwrap(), p);
        }
    }

    #[test]
    fn materialized_matches_select() {
        let t = PrimeTable::new(50_000).unwrap();
        let m = t.clone().materialize();
        for n in 1..=t.prime_count() {
            assert_eq!(t.nth_prime(n).unwrap(), m.nth_prime(n).unwrap());
        }
    }

    #[test]
    fn primes_from_starts_at_bound() {
        let t = PrimeTable::new(100).unwrap();
        assert_eq!(t.primes_from(90).collect::<Vec<_>>(), vec![97]);
        assert_eq!(t.primes_from(2).take(2).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(t.primes_from(3).next(), Some(3));
        assert_eq!(t.primes_from(4).next(), Some(5));
        assert_eq!(t.primes_from(98).next(), None);
    }

    #[test]
    fn upper_bound_holds() {
        let t = PrimeTable::new(200_000).unwrap();
        for n in 1..=t.prime_count() {
            assert!(
                t.nth_prime(n).unwrap() <= nth_prime_upper_bound(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn isqrt_exact() {
        for n in [
            0u64,
            1,
            3,
            4,
            15,
            16,
            17,
            99,
            100,
            2_000_000_000,
            u32::MAX as u64,
        ] {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }
}
