//! Cross-checks among the counting oracles on seeded random formulas.

use gapcount::sat::{
    count_models, count_one_in_three, count_pi1_one_in_three, exactly_one_everywhere, phi13_member,
    random_formula, witness_matrix, Assignment, PartitionedFormula,
};
use proptest::prelude::*;

fn formula() -> impl Strategy<Value = PartitionedFormula> {
    (any::<u64>(), 2u32..5, 0u32..4, 2u32..5).prop_filter_map("shape", |(seed, k1, k2, k3)| {
        random_formula(seed, k1, k2, k3).ok()
    })
}

fn all_assignments(phi: &PartitionedFormula) -> impl Iterator<Item = Assignment> + '_ {
    (0..1u64 << phi.k1()).flat_map(move |x| {
        (0..1u64 << phi.k2()).map(move |y| Assignment::new(x, phi.k1(), y, phi.k2()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn pi1_count_complements_the_good_x_assignments(phi in formula()) {
        let good = (0..1u64 << phi.k1())
            .filter(|&x| {
                (0..1u64 << phi.k2()).any(|y| {
                    exactly_one_everywhere(&phi, &Assignment::new(x, phi.k1(), y, phi.k2()).unwrap())
                })
            })
            .count() as u64;
        prop_assert_eq!(count_pi1_one_in_three(&phi).unwrap() + good, 1u64 << phi.k1());
    }

    #[test]
    fn exactly_one_implies_satisfied(phi in formula()) {
        prop_assert!(count_one_in_three(&phi).unwrap() <= count_models(&phi).unwrap());
    }

    #[test]
    fn parity_contract_and_full_cells(phi in formula()) {
        let m = witness_matrix(&phi).unwrap();
        for s in all_assignments(&phi) {
            let one = exactly_one_everywhere(&phi, &s);
            prop_assert_eq!(phi13_member(2, &phi, &s), one);
            prop_assert_eq!(phi13_member(1, &phi, &s), !one);
            prop_assert_eq!(m.is_full(&s), one);
        }
    }

    #[test]
    fn formulas_cover_every_variable_and_round_trip(phi in formula()) {
        let again = PartitionedFormula::parse(&phi.to_string()).unwrap();
        prop_assert_eq!(again, phi);
    }
}
