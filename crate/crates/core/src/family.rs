//! Doubling chains and the family sieve.
//!
//! A descending chain steps from `t` to the largest prime below `2t`; an
//! ascending chain steps to the smallest prime above `2t`. The family sieve
//! starts a chain at 2, then repeatedly seeds a new chain at the smallest
//! prime not covered by any earlier chain. With descending chains the seeds
//! come out as the RPR-primes, in order.

use serde::Serialize;

use crate::classify::classify_range;
use crate::error::{Error, Result};
use crate::sieve::PrimeTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Next term is the largest prime below twice the current one.
    #[serde(rename = "descending_below_double")]
    Descending,
    /// Next term is the smallest prime above twice the current one.
    #[serde(rename = "ascending_above_double")]
    Ascending,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Descending => "descending_below_double",
            Direction::Ascending => "ascending_above_double",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoublingChain {
    pub seed: u64,
    pub direction: Direction,
    pub terms: Vec<u64>,
}

/// Next chain term if it is `<= max_value`; `max_value <= table.limit()`.
fn step(table: &PrimeTable, t: u64, direction: Direction, max_value: u64) -> Result<Option<u64>> {
    let double = 2 * t;
    match direction {
        Direction::Ascending => {
            if double >= max_value {
                return Ok(None);
            }
            Ok(table.next_prime_above(double).filter(|&q| q <= max_value))
        }
        Direction::Descending => {
            if double - 1 <= table.limit() {
                return Ok(table.prev_prime_below(double).filter(|&q| q <= max_value));
            }
            // the true next term is at least the largest prime in the table
            let top = table.prev_prime_below(table.limit() + 1).unwrap_or(2);
            if top > max_value {
                Ok(None)
            } else {
                Err(Error::ResourceLimit(format!(
                    "the term after {t} needs the table to reach {}, limit is {}",
                    double - 1,
                    table.limit()
                )))
            }
        }
    }
}

/// The chain from `seed`, extended while terms stay `<= max_value`.
pub fn doubling_chain(
    table: &PrimeTable,
    seed: u64,
    direction: Direction,
    max_value: u64,
) -> Result<DoublingChain> {
    if max_value > table.limit() {
        return Err(Error::OutOfRange {
            what: "chain bound",
            value: max_value,
            max: table.limit(),
        });
    }
    if seed > table.limit() || !table.is_prime(seed) {
        return Err(Error::InvalidArgument(format!(
            "chain seed {seed} is not prime"
        )));
    }
    let mut terms = vec![seed];
    if seed <= max_value {
        while let Some(next) = step(table, *terms.last().unwrap(), direction, max_value)? {
            terms.push(next);
        }
    }
    Ok(DoublingChain {
        seed,
        direction,
        terms,
    })
}

/// A prime reached by two different chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub prime: u64,
    pub first_family: usize,
    pub second_family: usize,
}

/// Result of running the family sieve up to `horizon`.
#[derive(Debug, Clone, Serialize)]
pub struct FamilySieveState {
    pub direction: Direction,
    pub horizon: u64,
    /// Chains are extended up to `2 * horizon`; terms above `horizon` are
    /// kept but take no part in the extraction.
    pub families: Vec<DoublingChain>,
    pub seeds: Vec<u64>,
    /// Primes met by more than one chain; empty when the families partition
    /// the primes up to `horizon`.
    pub overlaps: Vec<Overlap>,
    #[serde(skip)]
    owner: Vec<Option<usize>>,
}

impl FamilySieveState {
    /// Index of the family containing prime `p <= horizon`.
    pub fn family_of(&self, table: &PrimeTable, p: u64) -> Option<usize> {
        if p > self.horizon || !table.is_prime(p) {
            return None;
        }
        self.owner[(table.pi_unchecked(p) - 1) as usize]
    }

    pub fn in_horizon(&self, term: u64) -> bool {
        term <= self.horizon
    }

    /// All primes up to the horizon belong to some family.
    pub fn is_covering(&self) -> bool {
        self.owner.iter().all(Option::is_some)
    }
}

/// Descending family sieve up to `horizon`.
pub fn family_sieve(table: &PrimeTable, horizon: u64) -> Result<FamilySieveState> {
    family_sieve_with(table, Direction::Descending, horizon)
}

/// Family sieve in either direction. The ascending variant is the
/// left-interval analogue; its seeds are compared with LPL-primes by
/// [`compare_ascending_with_lpl`].
pub fn family_sieve_with(
    table: &PrimeTable,
    direction: Direction,
    horizon: u64,
) -> Result<FamilySieveState> {
    let needed = horizon.saturating_mul(4);
    if needed > table.limit() {
        return Err(Error::ResourceLimit(format!(
            "family sieve to horizon {horizon} needs a table limit of at least {needed}, got {}",
            table.limit()
        )));
    }
    let primes: Vec<u64> = table.primes().take_while(|&p| p <= horizon).collect();
    let mut owner: Vec<Option<usize>> = vec![None; primes.len()];
    let mut families = Vec::new();
    let mut seeds = Vec::new();
    let mut overlaps = Vec::new();

    for (rank, &p) in primes.iter().enumerate() {
        if owner[rank].is_some() {
            continue;
        }
        let family = families.len();
        let chain = doubling_chain(table, p, direction, 2 * horizon)?;
        for &term in chain.terms.iter().take_while(|&&t| t <= horizon) {
            let slot = &mut owner[(table.pi_unchecked(term) - 1) as usize];
            match *slot {
                Some(first_family) => overlaps.push(Overlap {
                    prime: term,
                    first_family,
                    second_family: family,
                }),
                None => *slot = Some(family),
            }
        }
        seeds.push(p);
        families.push(chain);
    }

    Ok(FamilySieveState {
        direction,
        horizon,
        families,
        seeds,
        overlaps,
        owner,
    })
}

/// One row of the seed / RPR-prime comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeedComparison {
    pub n: u64,
    pub seed: Option<u64>,
    pub reference: Option<u64>,
    pub equal: bool,
}

/// Smallest horizon (doubling from 64) whose sieve yields `count` seeds and
/// whose classification yields `count` matching-class primes.
fn compare_seeds(
    table: &PrimeTable,
    direction: Direction,
    count: u64,
    is_member: impl Fn(&crate::classify::PrimeClass) -> bool,
) -> Result<Vec<SeedComparison>> {
    let mut horizon = 64u64;
    loop {
        if horizon.saturating_mul(4) > table.limit() {
            return Err(Error::ResourceLimit(format!(
                "{count} seeds need a horizon beyond {}, table limit is {}",
                horizon / 2,
                table.limit()
            )));
        }
        let state = family_sieve_with(table, direction, horizon)?;
        let reference: Vec<u64> = classify_range(table, horizon)?
            .iter()
            .filter(|c| is_member(c))
            .map(|c| c.p)
            .collect();
        if state.seeds.len() as u64 >= count && reference.len() as u64 >= count {
            return Ok((0..count as usize)
                .map(|i| SeedComparison {
                    n: i as u64 + 1,
                    seed: Some(state.seeds[i]),
                    reference: Some(reference[i]),
                    equal: state.seeds[i] == reference[i],
                })
                .collect());
        }
        horizon *= 2;
    }
}

/// Pairs the n-th family-sieve seed with the n-th RPR-prime for `n <= count`.
pub fn verify_theorem1(table: &PrimeTable, count: u64) -> Result<Vec<SeedComparison>> {
    compare_seeds(table, Direction::Descending, count, |c| {
        c.right_class.is_rpr()
    })
}

/// Pairs the n-th ascending-sieve seed with the n-th LPL-prime. Agreement is
/// an empirical question; mismatches are data, not errors.
pub fn compare_ascending_with_lpl(table: &PrimeTable, count: u64) -> Result<Vec<SeedComparison>> {
    compare_seeds(table, Direction::Ascending, count, |c| {
        c.left_class.is_lpl()
    })
}
