//! Right- and left-interval conditions and the prime taxonomies built on them.
//!
//! For an odd prime `p` let `p_m < p/2 < p_{m+1}`. On the right, `p` is an
//! RPR-prime when `(p, 2p_{m+1})` holds a prime, equivalently when every
//! integer in `[(p+1)/2, (p_{n+1}-1)/2]` is composite. On the left, `p` is an
//! LPL-prime when `(2p_m, p)` holds a prime, equivalently when every integer
//! in `[(p_{n-1}+1)/2, (p-1)/2]` is composite. RPR-primes that are not
//! Ramanujan primes are pseudo-Ramanujan; LPL-primes that are not Labos
//! primes are pseudo-Labos.
//!
//! 2 has no `m` and is classified by convention as both a Ramanujan and a
//! Labos prime; 3 has no left conditions and is a Labos prime.

use std::collections::HashSet;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::sieve::PrimeTable;
use crate::special::HalfCountScan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RightClass {
    Ramanujan,
    PseudoRamanujan,
    NonRpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeftClass {
    Labos,
    PseudoLabos,
    NonLpl,
}

impl RightClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ramanujan => "ramanujan",
            Self::PseudoRamanujan => "pseudo_ramanujan",
            Self::NonRpr => "non_rpr",
        }
    }

    pub fn is_rpr(self) -> bool {
        self != Self::NonRpr
    }
}

impl LeftClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Labos => "labos",
            Self::PseudoLabos => "pseudo_labos",
            Self::NonLpl => "non_lpl",
        }
    }

    pub fn is_lpl(self) -> bool {
        self != Self::NonLpl
    }
}

/// Classification record for one prime. Condition flags are `None` where
/// the condition does not apply (2 for all four, 3 for the left pair).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeClass {
    pub p: u64,
    pub n: u64,
    pub right_class: RightClass,
    pub left_class: LeftClass,
    pub cond1: Option<bool>,
    pub cond2: Option<bool>,
    pub cond3: Option<bool>,
    pub cond4: Option<bool>,
    /// `m` with `p_m < p/2 < p_{m+1}`; 0 for p = 3.
    #[serde(skip)]
    pub m_right: Option<u64>,
    pub witness_right: Option<u64>,
    pub witness_left: Option<u64>,
}

fn require_prime(table: &PrimeTable, p: u64) -> Result<()> {
    if p > table.limit() {
        return Err(Error::OutOfRange {
            what: "prime",
            value: p,
            max: table.limit(),
        });
    }
    if !table.is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

fn require_odd_prime(table: &PrimeTable, p: u64) -> Result<()> {
    require_prime(table, p)?;
    if p == 2 {
        return Err(Error::InvalidArgument(
            "the interval conditions need an odd prime".into(),
        ));
    }
    Ok(())
}

fn all_non_prime(table: &PrimeTable, lo: u64, hi: u64) -> bool {
    (lo..=hi).all(|x| !table.is_prime(x))
}

/// `p_{m+1}`, the smallest prime above `p/2`.
fn upper_half_neighbor(table: &PrimeTable, p: u64) -> u64 {
    // Bertrand: some prime lies in (p/2, p]
    table.next_prime_above((p - 1) / 2).expect("prime below p")
}

/// `p_m`, the largest prime below `p/2`.
fn lower_half_neighbor(table: &PrimeTable, p: u64) -> Option<u64> {
    table.prev_prime_below((p - 1) / 2 + 1)
}

fn next_prime_or_limit(table: &PrimeTable, p: u64) -> Result<u64> {
    table.next_prime_above(p).ok_or_else(|| {
        Error::ResourceLimit(format!(
            "the prime after {p} lies beyond table limit {}",
            table.limit()
        ))
    })
}

/// Every integer in `[(p+1)/2, (p_{n+1}-1)/2]` is composite (or 1).
pub fn condition1(table: &PrimeTable, p: u64) -> Result<bool> {
    require_odd_prime(table, p)?;
    let next = next_prime_or_limit(table, p)?;
    Ok(all_non_prime(table, p.div_ceil(2), (next - 1) / 2))
}

/// The prime in `(p, 2p_{m+1})` closest to `p`, if any.
pub fn right_witness(table: &PrimeTable, p: u64) -> Result<Option<u64>> {
    require_odd_prime(table, p)?;
    let end = 2 * upper_half_neighbor(table, p);
    if end > table.limit() {
        return Err(Error::ResourceLimit(format!(
            "condition 2 for {p} needs the table to reach {end}, limit is {}",
            table.limit()
        )));
    }
    table.next_prime_in(p, end)
}

/// `(p, 2p_{m+1})` contains a prime.
pub fn condition2(table: &PrimeTable, p: u64) -> Result<bool> {
    right_witness(table, p).map(|w| w.is_some())
}

/// Every integer in `[(p_{n-1}+1)/2, (p-1)/2]` is composite (or 1).
pub fn condition3(table: &PrimeTable, p: u64) -> Result<bool> {
    require_prime(table, p)?;
    if p < 5 {
        return Err(Error::InvalidArgument(format!(
            "condition 3 needs p = p_n with n >= 3, got {p}"
        )));
    }
    let prev = table.prev_prime_below(p).expect("p >= 5");
    Ok(all_non_prime(table, prev.div_ceil(2), (p - 1) / 2))
}

/// The prime in `(2p_m, p)` closest to `2p_m`, if any.
pub fn left_witness(table: &PrimeTable, p: u64) -> Result<Option<u64>> {
    require_odd_prime(table, p)?;
    let lower = lower_half_neighbor(table, p)
        .ok_or_else(|| Error::InvalidArgument(format!("no prime lies below {p}/2")))?;
    table.next_prime_in(2 * lower, p)
}

/// `(2p_m, p)` contains a prime.
pub fn condition4(table: &PrimeTable, p: u64) -> Result<bool> {
    left_witness(table, p).map(|w| w.is_some())
}

/// Table size needed by [`classify_range`] for primes up to `limit`.
pub fn classify_table_requirement(table: &PrimeTable, limit: u64) -> Result<u64> {
    let count = table.pi(limit)?;
    let next = table.nth_prime(count + 1).map_err(|_| {
        Error::ResourceLimit(format!(
            "classifying up to {limit} needs the prime after it inside the table (limit {})",
            table.limit()
        ))
    })?;
    Ok(2 * next)
}

/// Ramanujan and Labos primes up to `limit`, as sets.
pub(crate) struct SpecialSets {
    pub ramanujan: HashSet<u64>,
    pub labos: HashSet<u64>,
}

impl SpecialSets {
    pub fn up_to(table: &PrimeTable, limit: u64) -> Result<Self> {
        // R_{c+1} > p_{2c+2} > limit once 2c + 2 > pi(limit)
        let count = (table.pi(limit)? / 2).max(1);
        let bound = table.nth_prime(3 * count).map_err(|_| {
            Error::ResourceLimit(format!(
                "Ramanujan primes up to {limit} need the table to reach p_{}",
                3 * count
            ))
        })?;
        let scan = HalfCountScan::run(table, bound.max(limit));
        let ramanujan = (1..=count)
            .map(|n| scan.ramanujan(n))
            .filter(|&r| r <= limit)
            .collect();
        let labos = scan.first[1..]
            .iter()
            .copied()
            .filter(|&l| l <= limit)
            .collect();
        Ok(Self { ramanujan, labos })
    }
}

pub(crate) fn classify_one(
    table: &PrimeTable,
    sets: &SpecialSets,
    p: u64,
    n: u64,
) -> Result<PrimeClass> {
    if p == 2 {
        return Ok(PrimeClass {
            p,
            n,
            right_class: RightClass::Ramanujan,
            left_class: LeftClass::Labos,
            cond1: None,
            cond2: None,
            cond3: None,
            cond4: None,
            m_right: None,
            witness_right: None,
            witness_left: None,
        });
    }
    let cond1 = condition1(table, p)?;
    let witness_right = right_witness(table, p)?;
    let cond2 = witness_right.is_some();
    let (cond3, cond4, witness_left) = if p >= 5 {
        let w = left_witness(table, p)?;
        (Some(condition3(table, p)?), Some(w.is_some()), w)
    } else {
        (None, None, None)
    };
    let right_class = if sets.ramanujan.contains(&p) {
        RightClass::Ramanujan
    } else if cond2 {
        RightClass::PseudoRamanujan
    } else {
        RightClass::NonRpr
    };
    let left_class = if sets.labos.contains(&p) {
        LeftClass::Labos
    } else if cond3 == Some(true) {
        LeftClass::PseudoLabos
    } else {
        LeftClass::NonLpl
    };
    Ok(PrimeClass {
        p,
        n,
        right_class,
        left_class,
        cond1: Some(cond1),
        cond2: Some(cond2),
        cond3,
        cond4,
        m_right: Some(table.pi_unchecked((p - 1) / 2)),
        witness_right,
        witness_left,
    })
}

/// Classifies every prime `<= limit`, in increasing order.
pub fn classify_range(table: &PrimeTable, limit: u64) -> Result<Vec<PrimeClass>> {
    let needed = classify_table_requirement(table, limit)?;
    if needed > table.limit() {
        return Err(Error::ResourceLimit(format!(
            "classifying up to {limit} needs a table limit of at least {needed}, got {}",
            table.limit()
        )));
    }
    let sets = SpecialSets::up_to(table, limit)?;
    let primes: Vec<u64> = table.primes().take_while(|&p| p <= limit).collect();
    primes
        .par_iter()
        .enumerate()
        .map(|(i, &p)| classify_one(table, &sets, p, i as u64 + 1))
        .collect()
}

/// Which half of the taxonomy an export carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    Right,
    Left,
    #[default]
    Both,
}

impl Side {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Side::Right => &["p", "n", "right_class", "cond1", "cond2", "witness_right"],
            Side::Left => &["p", "n", "left_class", "cond3", "cond4", "witness_left"],
            Side::Both => &[
                "p",
                "n",
                "right_class",
                "left_class",
                "cond1",
                "cond2",
                "cond3",
                "cond4",
                "witness_right",
                "witness_left",
            ],
        }
    }
}

impl PrimeClass {
    fn field(&self, name: &str) -> String {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|v| v.to_string()).unwrap_or_default()
        }
        match name {
            "p" => self.p.to_string(),
            "n" => self.n.to_string(),
            "right_class" => self.right_class.as_str().to_string(),
            "left_class" => self.left_class.as_str().to_string(),
            "cond1" => opt(self.cond1),
            "cond2" => opt(self.cond2),
            "cond3" => opt(self.cond3),
            "cond4" => opt(self.cond4),
            "witness_right" => opt(self.witness_right),
            "witness_left" => opt(self.witness_left),
            _ => unreachable!("unknown column {name}"),
        }
    }

    fn json_field(&self, name: &str) -> Value {
        match name {
            "p" => self.p.into(),
            "n" => self.n.into(),
            "right_class" => self.right_class.as_str().into(),
            "left_class" => self.left_class.as_str().into(),
            "cond1" => self.cond1.into(),
            "cond2" => self.cond2.into(),
            "cond3" => self.cond3.into(),
            "cond4" => self.cond4.into(),
            "witness_right" => self.witness_right.into(),
            "witness_left" => self.witness_left.into(),
            _ => unreachable!("unknown column {name}"),
        }
    }
}

/// CSV with a header row; absent values are empty cells.
pub fn write_csv<W: Write>(out: &mut W, rows: &[PrimeClass], side: Side) -> io::Result<()> {
    let columns = side.columns();
    writeln!(out, "{}", columns.join(","))?;
    for row in rows {
        let cells: Vec<String> = columns.iter().map(|c| row.field(c)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// One JSON object per line with the same field names as the CSV header.
pub fn write_jsonl<W: Write>(out: &mut W, rows: &[PrimeClass], side: Side) -> io::Result<()> {
    let columns = side.columns();
    for row in rows {
        let object: Map<String, Value> = columns
            .iter()
            .map(|c| (c.to_string(), row.json_field(c)))
            .collect();
        serde_json::to_writer(&mut *out, &object)?;
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        PrimeTable::new(5_000).unwrap()
    }

    #[test]
    fn condition1_examples() {
        let t = table();
        assert!(condition1(&t, 11).unwrap());
        assert!(!condition1(&t, 13).unwrap());
        assert!(condition1(&t, 109).unwrap());
        assert!(!condition1(&t, 3).unwrap());
    }

    #[test]
    fn condition2_examples() {
        let t = table();
        assert!(condition2(&t, 11).unwrap());
        assert!(!condition2(&t, 13).unwrap());
        assert!(condition2(&t, 109).unwrap());
        assert_eq!(right_witness(&t, 11).unwrap(), Some(13));
        assert_eq!(right_witness(&t, 109).unwrap(), Some(113));
    }

    #[test]
    fn condition3_examples() {
        let t = table();
        assert!(condition3(&t, 13).unwrap());
        assert!(!condition3(&t, 11).unwrap());
        assert!(condition3(&t, 131).unwrap());
    }

    #[test]
    fn condition4_examples() {
        let t = table();
        assert!(condition4(&t, 13).unwrap());
        assert!(!condition4(&t, 11).unwrap());
        assert!(condition4(&t, 131).unwrap());
        assert_eq!(left_witness(&t, 13).unwrap(), Some(11));
    }

    #[test]
    fn conditions_reject_bad_input() {
        let t = table();
        assert!(matches!(condition1(&t, 2), Err(Error::InvalidArgument(_))));
        assert!(matches!(condition1(&t, 15), Err(Error::InvalidArgument(_))));
        assert!(matches!(condition2(&t, 2), Err(Error::InvalidArgument(_))));
        assert!(matches!(condition3(&t, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(condition3(&t, 9), Err(Error::InvalidArgument(_))));
        assert!(matches!(condition4(&t, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            condition1(&t, 6000),
            Err(Error::OutOfRange { .. })
        ));
        // 4999 is prime, 2 * 2503 > 5000
        assert!(matches!(condition2(&t, 4999), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn pseudo_sequences() {
        let t = PrimeTable::new(10_000).unwrap();
        let rows = classify_range(&t, 1000).unwrap();
        let pseudo_r: Vec<u64> = rows
            .iter()
            .filter(|c| c.right_class == RightClass::PseudoRamanujan)
            .map(|c| c.p)
            .take(6)
            .collect();
        assert_eq!(pseudo_r, [109, 137, 191, 197, 283, 521]);
        let pseudo_l: Vec<u64> = rows
            .iter()
            .filter(|c| c.left_class == LeftClass::PseudoLabos)
            .map(|c| c.p)
            .take(6)
            .collect();
        assert_eq!(pseudo_l, [131, 151, 229, 233, 311, 571]);
        let rpr: Vec<u64> = rows
            .iter()
            .filter(|c| c.p <= 130 && c.right_class.is_rpr())
            .map(|c| c.p)
            .collect();
        assert_eq!(
            rpr,
            [2, 11, 17, 29, 41, 47, 59, 67, 71, 97, 101, 107, 109, 127]
        );
    }

    #[test]
    fn small_prime_conventions() {
        let t = table();
        let rows = classify_range(&t, 10).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].right_class, RightClass::Ramanujan);
        assert_eq!(rows[0].left_class, LeftClass::Labos);
        assert_eq!(rows[0].cond1, None);
        assert_eq!(rows[1].p, 3);
        assert_eq!(rows[1].right_class, RightClass::NonRpr);
        assert_eq!(rows[1].left_class, LeftClass::Labos);
        assert_eq!(rows[1].cond1, Some(false));
        assert_eq!(rows[1].cond3, None);
        assert_eq!(rows[1].m_right, Some(0));
        assert_eq!(rows[3].m_right, Some(2));
    }

    #[test]
    fn classify_needs_headroom() {
        let t = PrimeTable::new(200).unwrap();
        // p after 100 is 101, needs 202
        let err = classify_range(&t, 100).unwrap_err();
        assert!(err.to_string().contains("202"), "{err}");
        assert!(classify_range(&t, 96).is_ok());
    }

    #[test]
    fn stable_under_larger_table() {
        let small = PrimeTable::new(1_000).unwrap();
        let large = PrimeTable::new(50_000).unwrap();
        assert_eq!(
            classify_range(&small, 300).unwrap(),
            classify_range(&large, 300).unwrap()
        );
    }

    #[test]
    fn csv_and_jsonl_exports() {
        let t = table();
        let rows = classify_range(&t, 13).unwrap();
        let mut csv = Vec::new();
        write_csv(&mut csv, &rows, Side::Both).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "p,n,right_class,left_class,cond1,cond2,cond3,cond4,witness_right,witness_left"
        );
        assert_eq!(lines[1], "2,1,ramanujan,labos,,,,,,");
        assert_eq!(lines[5], "11,5,ramanujan,non_lpl,true,true,false,false,13,");
        assert_eq!(lines[6], "13,6,non_rpr,labos,false,false,true,true,,11");

        let mut json = Vec::new();
        write_jsonl(&mut json, &rows[4..5], Side::Right).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "p": 11, "n": 5, "right_class": "ramanujan",
                "cond1": true, "cond2": true, "witness_right": 13
            })
        );
    }
}
