//! The bit-packed table against a plain enumeration of nonnegative combinations.

use gapcount::semigroup::{sylvester_count, GeneratorSet, DEFAULT_BUDGET};
use gapcount::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

/// Every sum of generators up to `limit`, by breadth-first closure.
fn naive_semigroup(gens: &[u64], limit: u64) -> Vec<bool> {
    let mut reach = vec![false; limit as usize + 1];
    reach[0] = true;
    let mut frontier = vec![0u64];
    while let Some(n) = frontier.pop() {
        for &g in gens {
            let m = n + g;
            if m <= limit && !reach[m as usize] {
                reach[m as usize] = true;
                frontier.push(m);
            }
        }
    }
    reach
}

fn coprime_set() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::btree_set(2u64..70, 2..6)
        .prop_map(|s| s.into_iter().collect::<Vec<_>>())
        .prop_filter("coprime", |v| v.iter().fold(0, |g, &x| g.gcd(&x)) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gaps_match_naive_enumeration(gens in coprime_set()) {
        let set = GeneratorSet::from_u64s(&gens).unwrap();
        let report = set.count_all_gaps(DEFAULT_BUDGET).unwrap();
        let max = *gens.iter().max().unwrap();
        let limit = max * max;
        let reach = naive_semigroup(&gens, limit);
        let naive: Vec<u64> = (1..=limit).filter(|&n| !reach[n as usize]).collect();
        prop_assert_eq!(report.gaps, naive);
    }

    #[test]
    fn frobenius_is_below_max_squared(gens in coprime_set()) {
        let set = GeneratorSet::from_u64s(&gens).unwrap();
        let g = set.frobenius_number(DEFAULT_BUDGET).unwrap();
        let max = *gens.iter().max().unwrap();
        prop_assert!(g < max * max);
    }

    #[test]
    fn more_generators_never_add_gaps(gens in coprime_set(), extra in 2u64..90) {
        let small = GeneratorSet::from_u64s(&gens).unwrap();
        let mut bigger = gens.clone();
        if !bigger.contains(&extra) {
            bigger.push(extra);
        }
        let big = GeneratorSet::from_u64s(&bigger).unwrap();
        let a = small.count_all_gaps(DEFAULT_BUDGET).unwrap().gaps;
        let b = big.count_all_gaps(DEFAULT_BUDGET).unwrap().gaps;
        prop_assert!(b.iter().all(|g| a.binary_search(g).is_ok()));
    }

    #[test]
    fn interval_gaps_are_a_window_of_all_gaps(gens in coprime_set(), lo in 1u64..200, len in 0u64..200) {
        let set = GeneratorSet::from_u64s(&gens).unwrap();
        let all = set.count_all_gaps(DEFAULT_BUDGET).unwrap().gaps;
        let hi = lo + len;
        let window = set.gaps_in_interval(&BigUint::from(lo), &BigUint::from(hi), DEFAULT_BUDGET).unwrap();
        let expected: Vec<u64> = all.into_iter().filter(|&g| g >= lo && g <= hi).collect();
        prop_assert_eq!(window.gaps, expected);
    }
}

#[test]
fn two_generator_counts_follow_sylvester() {
    for a1 in 2u64..=30 {
        for a2 in a1 + 1..=30 {
            if a1.gcd(&a2) != 1 {
                continue;
            }
            let set = GeneratorSet::from_u64s(&[a1, a2]).unwrap();
            let count = set.count_all_gaps(DEFAULT_BUDGET).unwrap().count;
            let closed = sylvester_count(&a1.into(), &a2.into()).unwrap();
            assert_eq!(BigUint::from(count), closed, "({a1}, {a2})");
            assert_eq!(
                set.frobenius_number(DEFAULT_BUDGET).unwrap(),
                a1 * a2 - a1 - a2
            );
        }
    }
}

#[test]
fn non_coprime_sets_have_finite_windows_only() {
    let set = GeneratorSet::from_u64s(&[4, 6]).unwrap();
    assert!(set.frobenius_number(DEFAULT_BUDGET).is_err());
    let w = set
        .gaps_in_interval(&1u32.into(), &12u32.into(), DEFAULT_BUDGET)
        .unwrap();
    assert_eq!(w.gaps, vec![1, 2, 3, 5, 7, 9, 11]);
}
