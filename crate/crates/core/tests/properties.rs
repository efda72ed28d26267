use std::sync::OnceLock;

use proptest::prelude::*;
use rpr_core::{
    classify_range, doubling_chain, ramanujan_primes, verify_ramanujan_extremal, Direction,
    PrimeTable, RightClass,
};

const LIMIT: u64 = 2_000_000;

fn table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable::new(LIMIT).unwrap())
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

proptest! {
    #[test]
    fn nth_prime_inverts_pi(n in 1u64..140_000) {
        let t = table();
        let p = t.nth_prime(n).unwrap();
        prop_assert_eq!(t.pi(p).unwrap(), n);
        prop_assert_eq!(t.pi(p - 1).unwrap(), n - 1);
    }

    #[test]
    fn pi_steps_by_primality(x in 1u64..LIMIT) {
        let t = table();
        let step = t.pi(x).unwrap() - t.pi(x - 1).unwrap();
        prop_assert_eq!(step, is_prime(x) as u64);
    }

    #[test]
    fn bertrand_interval_has_a_prime(x in 2u64..LIMIT / 2) {
        let t = table();
        prop_assert!(t.next_prime_in(x, 2 * x).unwrap().is_some());
    }

    #[test]
    fn neighbours_agree_with_trial_division(x in 3u64..LIMIT - 200) {
        let t = table();
        let next = t.next_prime_above(x).unwrap();
        prop_assert!(is_prime(next));
        prop_assert!((x + 1..next).all(|y| !is_prime(y)));
        let prev = t.prev_prime_below(x).unwrap();
        prop_assert!(is_prime(prev));
        prop_assert!((prev + 1..x).all(|y| !is_prime(y)));
    }

    #[test]
    fn descending_chains_follow_bertrand(seed_index in 1u64..2000) {
        let t = table();
        let seed = t.nth_prime(seed_index).unwrap();
        let chain = doubling_chain(t, seed, Direction::Descending, LIMIT / 2).unwrap();
        prop_assert_eq!(chain.terms[0], seed);
        for w in chain.terms.windows(2) {
            prop_assert!(w[0] < w[1] && w[1] < 2 * w[0]);
            prop_assert_eq!(t.prev_prime_below(2 * w[0]), Some(w[1]));
        }
    }

    #[test]
    fn ascending_chains_stay_below_quadruple(seed_index in 1u64..2000) {
        let t = table();
        let seed = t.nth_prime(seed_index).unwrap();
        let chain = doubling_chain(t, seed, Direction::Ascending, LIMIT).unwrap();
        for w in chain.terms.windows(2) {
            prop_assert!(2 * w[0] < w[1] && w[1] < 4 * w[0]);
            prop_assert_eq!(t.next_prime_above(2 * w[0]), Some(w[1]));
        }
    }
}

#[test]
fn ramanujan_primes_are_increasing_and_extremal() {
    let t = table();
    let r = ramanujan_primes(t, 3000).unwrap();
    for w in r.windows(2) {
        assert!(w[0].value < w[1].value);
    }
    for rp in r.iter().step_by(37) {
        assert!(verify_ramanujan_extremal(t, rp.index, rp.value).unwrap());
        assert!(!verify_ramanujan_extremal(t, rp.index, rp.value + 2).unwrap());
    }
}

#[test]
fn rpr_classes_partition_condition_two() {
    let t = table();
    let rows = classify_range(t, 200_000).unwrap();
    for row in rows.iter().filter(|c| c.p >= 3) {
        assert_eq!(
            row.right_class.is_rpr(),
            row.cond2 == Some(true),
            "p = {}",
            row.p
        );
        assert_eq!(
            row.left_class.is_lpl(),
            row.cond4 == Some(true) || row.p == 3,
            "p = {}",
            row.p
        );
    }
    let counts = |c: RightClass| rows.iter().filter(|r| r.right_class == c).count();
    assert_eq!(
        counts(RightClass::Ramanujan)
            + counts(RightClass::PseudoRamanujan)
            + counts(RightClass::NonRpr),
        rows.len()
    );
}

#[test]
fn classification_ignores_table_size() {
    let small = PrimeTable::new(100_000).unwrap();
    let a = classify_range(&small, 20_000).unwrap();
    let b = classify_range(table(), 20_000).unwrap();
    assert_eq!(a, b);
}
