use std::collections::BTreeSet;

use num_bigint::BigUint;
use origami_core::closure::{export_points, generate, import_points};
use origami_core::cyclotomic::integrality_profile;
use origami_core::primes::prime_factors_usize;

const BUDGET: usize = 20_000;

fn depth_for(n: usize) -> usize {
    if n == 3 {
        4
    } else {
        2
    }
}

#[test]
fn prime_orders_stay_integral() {
    for n in [3, 5] {
        let set = generate(n, depth_for(n), BUDGET).unwrap();
        for x in set.points() {
            let coords = x.subfield_coords(n).expect("point in Q(ζ_n)");
            assert!(integrality_profile(&coords).is_empty(), "n = {n}: {x}");
        }
    }
}

#[test]
fn composite_orders_have_denominators_dividing_n() {
    for n in [4, 6, 8, 9] {
        let allowed: BTreeSet<BigUint> = prime_factors_usize(n)
            .into_iter()
            .map(BigUint::from)
            .collect();
        let set = generate(n, 2, BUDGET).unwrap();
        for x in set.points() {
            let coords = x.subfield_coords(n).expect("point in Q(ζ_n)");
            assert!(
                integrality_profile(&coords).is_subset(&allowed),
                "n = {n}: {x}"
            );
        }
    }
}

#[test]
fn order_four_closure_has_fractions() {
    let set = generate(4, 3, 200_000).unwrap();
    assert!(set
        .points()
        .iter()
        .any(|x| !integrality_profile(&x.subfield_coords(4).unwrap()).is_empty()));
}

#[test]
fn generation_is_monotone_and_deterministic() {
    for n in [3, 4, 5] {
        let d = depth_for(n);
        let small = generate(n, d - 1, BUDGET).unwrap();
        let large = generate(n, d, BUDGET).unwrap();
        assert!(small
            .points()
            .iter()
            .all(|x| large.contains_point(x).is_some()));
        let again = generate(n, d, BUDGET).unwrap();
        assert_eq!(export_points(&large), export_points(&again));
    }
}

#[test]
fn witnesses_and_floats_check_out() {
    for n in [3, 4, 6] {
        let set = generate(n, depth_for(n), BUDGET).unwrap();
        assert_eq!(set.check_witnesses(), Ok(()));
        assert!(set.max_float_discrepancy() < 1e-9);
    }
}

#[test]
fn budget_marks_partial_sets() {
    let set = generate(5, 3, 500).unwrap();
    assert!(!set.is_complete());
    let text = export_points(&set);
    assert!(text.lines().next().unwrap().contains("complete=false"));
    let back = import_points(&text, set.field()).unwrap();
    assert_eq!(back.len(), set.len());
}
