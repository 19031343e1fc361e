mod common;

use bprod_core::cyclo::Cyclo;
use bprod_core::genus::GenusSymbol;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn table_symbols_round_trip() {
    for s in common::TABLE {
        let g: GenusSymbol = s.parse().unwrap();
        assert_eq!(g.to_string(), s);
        assert!(g.exists(), "{s}");
    }
}

#[test]
fn milgram_pin_on_realized_forms() {
    let mut forms = common::table();
    forms.extend(common::random_symbols(80, 1000, &[2, 3, 5, 7], 11));
    for g in forms {
        let d = g.form();
        let want = Cyclo::e(g.signature_mod8(), 8);
        assert_eq!(d.normalized_gauss(1), want, "{g}");
        let root = Cyclo::sqrt_int(d.order() as u64);
        assert_eq!(d.gauss_sum_brute(1), &want * &root, "{g}");
    }
}

#[test]
fn gauss_sum_bound() {
    for g in common::random_symbols(40, 1000, &[2, 3, 5, 7], 12) {
        let d = g.form();
        for n in 1..=14i64 {
            let gs = d.gauss_sum(n);
            assert_eq!(gs, d.gauss_sum_brute(n), "{g} n = {n}");
            let abs2 = (&gs * &gs.conj()).to_rational().unwrap();
            let bound = num_rational::BigRational::from_integer(
                (d.order() * d.torsion_subgroup(n as u64).order()).into(),
            );
            assert!(abs2 <= bound, "{g} n = {n}");
        }
    }
}

#[test]
fn norm_counts_match_brute_force() {
    for g in common::random_symbols(60, 10_000, &[2, 3, 5, 7, 11], 13) {
        let d = g.form();
        assert_eq!(d.norm_counts(), d.norm_counts_brute(), "{g}");
    }
}

#[test]
fn malformed_symbols_are_rejected() {
    for s in ["", "II_(2,4)", "II_(2,5)(3^+1)", "II_(2,4)(4^+1)", "II_(2,4)(3^+1 3^+1)", "II_(2,4)(2_II^+1)", "II_(2,4)(3^*1)"] {
        assert!(s.parse::<GenusSymbol>().is_err(), "{s:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn form_arithmetic_is_consistent(seed in any::<u64>()) {
        let g = common::random_symbols(1, 400, &[2, 3, 5, 7], seed).remove(0);
        let d = g.form();
        let elems: Vec<_> = d.elements().collect();
        let step = (elems.len() / 12).max(1);
        for x in elems.iter().step_by(step) {
            prop_assert!(d.q_value(&d.add(x, &d.neg(x))).is_zero());
            prop_assert_eq!(d.q_value(&d.neg(x)), d.q_value(x));
            for y in elems.iter().step_by(step) {
                // Q(x + y) = Q(x) + Q(y) + (x, y) mod 1
                let lhs = d.q_value(&d.add(x, y));
                let rhs = d.q_value(x) + d.q_value(y) + d.bilinear(x, y);
                prop_assert!((lhs - rhs).is_integer());
            }
        }
    }

    #[test]
    fn printed_symbols_parse_back(seed in any::<u64>()) {
        let g = common::random_symbols(1, 100_000, &[2, 3, 5, 7, 11, 13], seed).remove(0);
        let back: GenusSymbol = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }
}
