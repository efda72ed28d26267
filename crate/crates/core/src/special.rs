//! Ramanujan and Labos primes.
//!
//! Both families are read off the step function `f(x) = π(x) − π(⌊x/2⌋)`,
//! which rises by one at every prime `x` and falls by one at every `x = 2q`
//! with `q` prime. A single pass over those events gives
//!
//! * `Lₙ` as the first `x` with `f(x) = n`, and
//! * `Rₙ` as one more than the last `x` with `f(x) = n − 1`.
//!
//! The second rule needs `f(x) ≥ n` for every `x` beyond the scanned range,
//! which holds once the scan reaches `p₃ₙ` (`Rₙ < p₃ₙ`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sieve::{nth_prime_upper_bound, PrimeTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RamanujanPrime {
    pub index: u64,
    pub value: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabosPrime {
    pub index: u64,
    pub value: u64,
}

/// First and last positions of every value taken by `f` on `[1, upto]`.
#[derive(Debug, Clone)]
pub(crate) struct HalfCountScan {
    /// `first[v]` = smallest `x` with `f(x) = v`.
    pub first: Vec<u64>,
    /// `last[v]` = largest `x <= upto` with `f(x) = v`.
    pub last: Vec<u64>,
}

impl HalfCountScan {
    pub fn run(table: &PrimeTable, upto: u64) -> Self {
        debug_assert!(upto >= 1 && upto <= table.limit());
        let mut first = vec![1u64];
        let mut last = vec![0u64];
        let mut value = 0usize;
        let mut held_since = 1u64;

        let mut rises = table.primes().take_while(|&p| p <= upto).peekable();
        let mut falls = table
            .primes()
            .map(|q| 2 * q)
            .take_while(|&d| d <= upto)
            .peekable();
        loop {
            // a prime p and a double 2q never share a position
            let (x, up) = match (rises.peek(), falls.peek()) {
                (Some(&p), Some(&d)) if p < d => (rises.next().unwrap(), true),
                (_, Some(_)) => (falls.next().unwrap(), false),
                (Some(_), None) => (rises.next().unwrap(), true),
                (None, None) => break,
            };
            if x > held_since {
                last[value] = x - 1;
            }
            if up {
                value += 1;
                if value == first.len() {
                    first.push(x);
                    last.push(x);
                }
            } else {
                value -= 1;
            }
            held_since = x;
        }
        last[value] = upto;
        Self { first, last }
    }

    pub fn ramanujan(&self, n: u64) -> u64 {
        self.last[(n - 1) as usize] + 1
    }

    pub fn labos(&self, n: u64) -> Option<u64> {
        self.first.get(n as usize).copied()
    }
}

/// `p_{3n}`, or a resource-limit error naming an estimate of it.
fn triple_index_bound(table: &PrimeTable, count: u64) -> Result<u64> {
    let needed = 3 * count;
    table.nth_prime(needed).map_err(|_| {
        Error::ResourceLimit(format!(
            "{count} terms need a table reaching p_{needed} (about {}), table limit is {}",
            nth_prime_upper_bound(needed),
            table.limit()
        ))
    })
}

/// `R₁ … R_count`.
pub fn ramanujan_primes(table: &PrimeTable, count: u64) -> Result<Vec<RamanujanPrime>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let bound = triple_index_bound(table, count)?;
    let scan = HalfCountScan::run(table, bound);
    Ok((1..=count)
        .map(|index| RamanujanPrime {
            index,
            value: scan.ramanujan(index),
        })
        .collect())
}

/// `L₁ … L_count`. Errors if some `Lₙ` turns out not to be prime.
pub fn labos_primes(table: &PrimeTable, count: u64) -> Result<Vec<LabosPrime>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let bound = triple_index_bound(table, count)?;
    let scan = HalfCountScan::run(table, bound);
    (1..=count)
        .map(|index| {
            let value = scan.labos(index).ok_or_else(|| {
                Error::Invariant(format!("no x <= {bound} has pi(x) - pi(x/2) = {index}"))
            })?;
            if !table.is_prime(value) {
                return Err(Error::Invariant(format!(
                    "L_{index} = {value} is not prime"
                )));
            }
            Ok(LabosPrime { index, value })
        })
        .collect()
}

/// Checks that `r` is `Rₙ` through the maximality of `Rₙ − 1`:
/// `f(r − 1) = n − 1` and `f(y) != n − 1` for `y` in `[r, 2r]`.
pub fn verify_ramanujan_extremal(table: &PrimeTable, n: u64, r: u64) -> Result<bool> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidArgument("n and r must be positive".into()));
    }
    let window_end = 2 * r;
    if window_end > table.limit() {
        return Err(Error::ResourceLimit(format!(
            "checking r = {r} scans up to {window_end}, table limit is {}",
            table.limit()
        )));
    }
    let f = |x: u64| table.pi_unchecked(x) - table.pi_unchecked(x / 2);
    if f(r - 1) != n - 1 {
        return Ok(false);
    }
    Ok((r..=window_end).all(|y| f(y) != n - 1))
}
