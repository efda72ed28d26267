//! Prime families defined by where primes sit relative to doubled primes.
//!
//! Everything is computed from an exact [`PrimeTable`] (segmented sieve):
//!
//! * [`special`]: Ramanujan primes `Rₙ` and Labos primes `Lₙ`.
//! * [`classify`]: the right/left interval conditions and the
//!   Ramanujan / pseudo-Ramanujan / non-RPR and Labos / pseudo-Labos /
//!   non-LPL taxonomies.
//! * [`family`]: doubling chains (largest prime below `2x`, smallest prime
//!   above `2x`) and the family sieve whose seeds are the RPR-primes.
//! * [`stats`]: win fraction, Ramanujan density and the interval-count
//!   identity behind the lower bound of one half.
//! * [`oeis`]: b-file fetching, caching, parsing and diffing.

pub mod classify;
pub mod error;
pub mod family;
pub mod oeis;
pub mod sieve;
pub mod special;
pub mod stats;

pub use classify::{
    classify_range, condition1, condition2, condition3, condition4, LeftClass, PrimeClass,
    RightClass, Side,
};
pub use error::{Error, Result};
pub use family::{
    compare_ascending_with_lpl, doubling_chain, family_sieve, family_sieve_with, verify_theorem1,
    Direction, DoublingChain, FamilySieveState, SeedComparison,
};
pub use oeis::{diff_sequence, fetch_bfile, BFile, Mismatch, Source};
pub use sieve::{nth_prime_upper_bound, PrimeTable, DEFAULT_TABLE_CAP};
pub use special::{
    labos_primes, ramanujan_primes, verify_ramanujan_extremal, LabosPrime, RamanujanPrime,
};
pub use stats::{
    aligned_bounds, interval_count_identity, ramanujan_fraction, reference_constants, win_fraction,
    win_fraction_requirement, IntervalCount, ReferenceConstants, StatsReport,
};
