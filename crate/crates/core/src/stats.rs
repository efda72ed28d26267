//! Density statistics over prefixes of the primes.
//!
//! All counting is done in integers; ratios are formed once at the end, so
//! reports do not depend on how the work was split across threads.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify_one, LeftClass, RightClass, SpecialSets};
use crate::error::{Error, Result};
use crate::sieve::{nth_prime_upper_bound, PrimeTable};

/// Constants the win fraction is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceConstants {
    /// Lower bound on the lower density of RPR-primes.
    pub half: f64,
    /// Win/lose heuristic: two odd candidates per 2 (mod 4) candidate.
    pub p0: f64,
    /// `(1 + e⁻²) / 2`, from a heuristic known to be incorrect.
    pub p1: f64,
}

pub fn reference_constants() -> ReferenceConstants {
    ReferenceConstants {
        half: 0.5,
        p0: 2.0 / 3.0,
        p1: (1.0 + (-2.0f64).exp()) / 2.0,
    }
}

/// Counts over the odd primes `p_2 … p_K` for a prefix of `K` primes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    /// `K`, the prefix length including 2.
    pub prefix_size: u64,
    /// `p_K`.
    pub largest_prime: u64,
    /// Odd primes examined, `K - 1`.
    pub prime_count: u64,
    pub rpr_count: u64,
    pub non_rpr_count: u64,
    pub ramanujan_count: u64,
    pub pseudo_ramanujan_count: u64,
    pub labos_count: u64,
    pub lpl_count: u64,
    pub pseudo_labos_count: u64,
    /// `rpr_count / prime_count`.
    pub win_fraction: f64,
    /// `π_R(p_K) / π(p_K)`.
    pub ramanujan_fraction: f64,
    /// Intervals `(2p_j, 2p_{j+1})`, `2 <= j <= h + 1`, holding a prime.
    pub nonempty_intervals: u64,
    /// `⌊(π(p_K) − 1) / 2⌋`.
    pub h: u64,
    pub reference: ReferenceConstants,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    rpr: u64,
    ramanujan: u64,
    pseudo_ramanujan: u64,
    labos: u64,
    lpl: u64,
    pseudo_labos: u64,
}

impl Tally {
    fn merge(self, o: Self) -> Self {
        Self {
            rpr: self.rpr + o.rpr,
            ramanujan: self.ramanujan + o.ramanujan,
            pseudo_ramanujan: self.pseudo_ramanujan + o.pseudo_ramanujan,
            labos: self.labos + o.labos,
            lpl: self.lpl + o.lpl,
            pseudo_labos: self.pseudo_labos + o.pseudo_labos,
        }
    }
}

/// Table limit sufficient for [`win_fraction`]: `2 p_{K+1}` for the
/// interval checks and `p_{3⌊K/2⌋}` for the Ramanujan primes (upper bounds).
pub fn win_fraction_requirement(first_k_primes: u64) -> u64 {
    let intervals = 2 * nth_prime_upper_bound(first_k_primes + 1);
    let ramanujan = nth_prime_upper_bound(3 * (first_k_primes / 2).max(1));
    intervals.max(ramanujan)
}

/// Win fraction and related counts over the first `first_k_primes` primes.
pub fn win_fraction(table: &PrimeTable, first_k_primes: u64) -> Result<StatsReport> {
    if first_k_primes < 2 {
        return Err(Error::InvalidArgument(
            "the prefix must contain at least one odd prime".into(),
        ));
    }
    let next = table
        .nth_prime(first_k_primes + 1)
        .ok()
        .filter(|&q| 2 * q <= table.limit());
    let Some(_) = next else {
        return Err(Error::ResourceLimit(format!(
            "the first {first_k_primes} primes need a table limit of 2 p_{} (about {}), got {}",
            first_k_primes + 1,
            win_fraction_requirement(first_k_primes),
            table.limit()
        )));
    };
    let largest = table.nth_prime(first_k_primes)?;
    let sets = SpecialSets::up_to(table, largest)?;
    let odd: Vec<u64> = table
        .primes()
        .skip(1)
        .take_while(|&p| p <= largest)
        .collect();

    let tally = odd
        .par_iter()
        .enumerate()
        .map(|(i, &p)| -> Result<Tally> {
            let c = classify_one(table, &sets, p, i as u64 + 2)?;
            Ok(Tally {
                rpr: c.right_class.is_rpr() as u64,
                ramanujan: (c.right_class == RightClass::Ramanujan) as u64,
                pseudo_ramanujan: (c.right_class == RightClass::PseudoRamanujan) as u64,
                labos: (c.left_class == LeftClass::Labos) as u64,
                lpl: c.left_class.is_lpl() as u64,
                pseudo_labos: (c.left_class == LeftClass::PseudoLabos) as u64,
            })
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;

    let prime_count = odd.len() as u64;
    // 2 is a Ramanujan prime but not part of the examined odd primes
    let ramanujan_fraction = (tally.ramanujan + 1) as f64 / first_k_primes as f64;
    let h = (first_k_primes - 1) / 2;
    Ok(StatsReport {
        prefix_size: first_k_primes,
        largest_prime: largest,
        prime_count,
        rpr_count: tally.rpr,
        non_rpr_count: prime_count - tally.rpr,
        ramanujan_count: tally.ramanujan,
        pseudo_ramanujan_count: tally.pseudo_ramanujan,
        labos_count: tally.labos,
        lpl_count: tally.lpl,
        pseudo_labos_count: tally.pseudo_labos,
        win_fraction: tally.rpr as f64 / prime_count as f64,
        ramanujan_fraction,
        nonempty_intervals: nonempty_intervals(table, 2, h + 1)?,
        h,
        reference: reference_constants(),
    })
}

/// `π_R(x) / π(x)` in lowest terms.
pub fn ramanujan_fraction(table: &PrimeTable, x: u64) -> Result<Ratio<u64>> {
    let pi = table.pi(x)?;
    if pi == 0 {
        return Err(Error::InvalidArgument(format!("pi({x}) = 0")));
    }
    let sets = SpecialSets::up_to(table, x)?;
    Ok(Ratio::new(sets.ramanujan.len() as u64, pi))
}

/// Number of `j` in `[from, to]` with a prime in `(2p_j, 2p_{j+1})`.
fn nonempty_intervals(table: &PrimeTable, from: u64, to: u64) -> Result<u64> {
    let mut count = 0;
    let mut lower = table.nth_prime(from)?;
    for j in from..=to {
        let upper = table.nth_prime(j + 1)?;
        if table.next_prime_in(2 * lower, 2 * upper)?.is_some() {
            count += 1;
        }
        lower = upper;
    }
    Ok(count)
}

/// Interval bookkeeping for an aligned `n = 2 p_{h+2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntervalCount {
    pub n: u64,
    /// Intervals `(2p_j, 2p_{j+1})`, `j = 2 … h+1`, containing a prime.
    pub k: u64,
    /// Non-RPR primes in `[7, n]`.
    pub nonrpr: u64,
    /// `⌊(π(n) − 1) / 2⌋`.
    pub h: u64,
}

/// Whether `n` is of the form `2 p_{h+2}` with `h = ⌊(π(n) − 1)/2⌋`.
fn is_aligned(table: &PrimeTable, n: u64) -> bool {
    if n < 14 || n % 2 == 1 || n > table.limit() || !table.is_prime(n / 2) {
        return false;
    }
    let h = (table.pi_unchecked(n) - 1) / 2;
    table.pi_unchecked(n / 2) == h + 2
}

/// Every aligned `n <= upto`, ascending.
pub fn aligned_bounds(table: &PrimeTable, upto: u64) -> Vec<u64> {
    let upto = upto.min(table.limit());
    table
        .primes()
        .map(|p| 2 * p)
        .take_while(|&n| n <= upto)
        .filter(|&n| is_aligned(table, n))
        .collect()
}

/// Counts `k`, the non-RPR primes in `[7, n]`, and `h` for an aligned `n`.
pub fn interval_count_identity(table: &PrimeTable, n: u64) -> Result<IntervalCount> {
    if n > table.limit() {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            max: table.limit(),
        });
    }
    if !is_aligned(table, n) {
        let aligned = aligned_bounds(table, table.limit());
        let hint = aligned
            .iter()
            .min_by_key(|&&a| a.abs_diff(n))
            .map(|a| format!("nearest aligned n is {a}"))
            .unwrap_or_else(|| "no aligned n fits in the table".into());
        return Err(Error::InvalidArgument(format!(
            "n = {n} is not of the form 2 p_(h+2) with h = floor((pi(n) - 1) / 2); {hint}"
        )));
    }
    let h = (table.pi_unchecked(n) - 1) / 2;
    let (k, nonrpr) = partial_identity(table, h + 2)?;
    Ok(IntervalCount { n, k, nonrpr, h })
}

/// For `n = 2 p_top`: nonempty intervals `(2p_j, 2p_{j+1})` with
/// `2 <= j < top`, and non-RPR primes in `[7, n]`.
pub(crate) fn partial_identity(table: &PrimeTable, top: u64) -> Result<(u64, u64)> {
    let n = 2 * table.nth_prime(top)?;
    let k = nonempty_intervals(table, 2, top - 1)?;
    let mut nonrpr = 0;
    for p in table.primes_from(7).take_while(|&p| p <= n) {
        if crate::classify::right_witness(table, p)?.is_none() {
            nonrpr += 1;
        }
    }
    Ok((k, nonrpr))
}
