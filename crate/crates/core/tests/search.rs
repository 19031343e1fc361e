use bprod_core::arith::rat;
use bprod_core::eisenstein::EisensteinProvider;
use bprod_core::genus::GenusSymbol;
use bprod_core::search::*;
use num_rational::Rational64;

fn sym(s: &str) -> GenusSymbol {
    s.parse().unwrap()
}

#[test]
fn level3_unique_candidate() {
    let g = sym("II_(2,4)(3^+5)");
    let rep = search_singular(&g, Rational64::from_integer(-4)).unwrap();
    eprintln!("{}", serde_json::to_string_pretty(&rep.to_json()).unwrap());
    assert!(rep.tail_certified);
    assert_eq!(rep.candidates.len(), 1);
    let c = &rep.candidates[0];
    assert!(c.singular);
    assert_eq!(c.terms.len(), 1);
    let (t, mult) = &c.terms[0];
    assert_eq!(*mult, 1);
    assert_eq!(t.m, Rational64::new(-1, 3));
    assert_eq!(t.orbit_size, 2);
    let p = EisensteinProvider::for_symbol(&g).unwrap();
    assert_eq!(p.form.q_value(&t.representative), Rational64::new(2, 3));
    let pp = c.principal_part(&p.form).unwrap();
    assert_eq!(product_weight(&p, &pp).unwrap(), rat(1, 1));
}

#[test]
fn level3_independent_of_floor() {
    let g = sym("II_(2,4)(3^+5)");
    let base = search_singular(&g, Rational64::from_integer(-2)).unwrap();
    for floor in [-3, -5, -8] {
        let rep = search_singular(&g, Rational64::from_integer(floor)).unwrap();
        assert!(rep.tail_certified);
        assert_eq!(rep.candidates.len(), base.candidates.len());
        for (a, b) in rep.candidates.iter().zip(&base.candidates) {
            assert_eq!(a.to_json(), b.to_json());
        }
    }
}

#[test]
fn unimodular_cases() {
    let rep = search_singular(&sym("II_(2,26)()"), Rational64::from_integer(-4)).unwrap();
    assert_eq!(rep.singular_weight, rat(12, 1));
    assert_eq!(rep.candidates.len(), 1);
    assert_eq!(rep.candidates[0].terms[0].0.m, Rational64::from_integer(-1));
    assert_eq!(rep.candidates[0].terms[0].1, 1);
    for s in ["II_(2,10)()", "II_(2,18)()"] {
        let rep = search_singular(&sym(s), Rational64::from_integer(-4)).unwrap();
        assert!(rep.tail_certified);
        assert!(rep.candidates.is_empty(), "{s}");
    }
}

#[test]
fn level6_zero_branch_has_no_candidate() {
    let rep = search_singular(&sym("II_(2,4)(2_II^+4 3^+1)"), Rational64::from_integer(-4)).unwrap();
    assert!(rep.tail_certified);
    assert!(rep.candidates.is_empty());
    assert!(rep.coverage.contains("γ = 0"));
}

#[test]
fn unsupported_cases_report_status() {
    for s in ["II_(2,6)(2_II^-6)", "II_(2,6)(5^+1)", "II_(2,8)(7^+1)", "II_(2,10)(2_II^+2)"] {
        assert!(search_singular(&sym(s), Rational64::from_integer(-4)).is_err(), "{s}");
    }
}

#[test]
fn principal_part_construction() {
    let g = sym("II_(2,4)(3^+5)");
    let p = EisensteinProvider::for_symbol(&g).unwrap();
    let form = &p.form;
    let gamma = form.elements().find(|x| form.q_value(x) == Rational64::new(2, 3)).unwrap();
    let m = Rational64::new(-1, 3);
    let pp = PrincipalPart::from_entries(form, &[(gamma.clone(), m, 1)]).unwrap();
    assert_eq!(pp.terms().count(), 2);
    assert!(PrincipalPart::from_entries(form, &[(gamma.clone(), m, 1), (form.neg(&gamma), m, 2)]).is_err());
    assert!(PrincipalPart::from_entries(form, &[(gamma.clone(), Rational64::new(-2, 3), 1)]).is_err());
    assert!(PrincipalPart::from_entries(form, &[(gamma.clone(), Rational64::new(2, 3), 1)]).is_err());
    assert_eq!(product_weight(&p, &PrincipalPart::empty()).unwrap(), rat(0, 1));
    assert!(obstruction_check(&g, &pp).unwrap());

    let g26 = sym("II_(2,26)()");
    let p26 = EisensteinProvider::for_symbol(&g26).unwrap();
    let pp = PrincipalPart::from_entries(&p26.form, &[(p26.form.zero(), Rational64::from_integer(-1), 1)]).unwrap();
    assert_eq!(product_weight(&p26, &pp).unwrap(), rat(12, 1));
}

#[test]
fn obstruction_on_all_simple_lattices() {
    for s in bprod_core::classify::REFERENCE_SIMPLE {
        let g = sym(s);
        let form = g.form();
        let gamma = form.zero();
        let pp = PrincipalPart::from_entries(&form, &[(gamma, Rational64::from_integer(-1), 3)]).unwrap();
        assert!(obstruction_check(&g, &pp).unwrap(), "{s}");
    }
    let frontier = bprod_core::classify::Frontier::default();
    let g = bprod_core::classify::out_of_frontier_sample(&frontier, 5)[0].clone();
    let form = g.form();
    let pp = PrincipalPart::from_entries(&form, &[(form.zero(), Rational64::from_integer(-1), 1)]).unwrap();
    assert!(obstruction_check(&g, &pp).is_err());
}
