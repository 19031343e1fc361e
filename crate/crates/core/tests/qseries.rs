use bprod_core::cyclo::Cyclo;
use bprod_core::qseries::*;
use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn coeffs(s: &QSeries, upto: Rational64) -> Vec<(Rational64, i64)> {
    s.terms()
        .filter(|(e, _)| *e < upto)
        .map(|(e, c)| (e, i64::try_from(c.clone()).unwrap()))
        .collect()
}

#[test]
fn level3_eta_quotient() {
    let spec = EtaQuotientSpec::new(3, [(1, 1), (3, -3)]).unwrap();
    let f = eta_quotient(&spec, r(6, 1)).unwrap();
    let want = [(-1, 1), (2, -1), (5, -1), (8, 3), (11, -3), (14, -2), (17, 9)];
    let want: Vec<_> = want.iter().map(|&(e, c)| (r(e, 3), c)).collect();
    assert_eq!(coeffs(&f, r(6, 1)), want);

    let (scalar, g) = eta_quotient_at_zero(&spec, r(3, 1)).unwrap();
    assert_eq!(scalar, &(&Cyclo::from_int(3) * &Cyclo::sqrt_int(3)) * &Cyclo::i());
    let want = [1, 3, 9, 21, 48, 99, 198];
    let got: Vec<i64> = (0..7).map(|j| i64::try_from(g.coeff(r(j, 3)).unwrap()).unwrap()).collect();
    assert_eq!(got, want);
}

#[test]
fn level2_eta_quotient() {
    let spec = EtaQuotientSpec::new(2, [(1, 4), (2, -8)]).unwrap();
    let f = eta_quotient(&spec, r(5, 1)).unwrap();
    let want = [(-1, 1), (1, -4), (3, 10), (5, -24), (7, 55), (9, -116)];
    let want: Vec<_> = want.iter().map(|&(e, c)| (r(e, 2), c)).collect();
    assert_eq!(coeffs(&f, r(5, 1)), want);

    let (scalar, g) = eta_quotient_at_zero(&spec, r(3, 1)).unwrap();
    assert_eq!(scalar, Cyclo::from_int(-16));
    let want = [1, 8, 40, 160, 552];
    let got: Vec<i64> = (0..5).map(|j| i64::try_from(g.coeff(r(j, 2)).unwrap()).unwrap()).collect();
    assert_eq!(got, want);
}

#[test]
fn level2_weight_four_product() {
    let spec = EtaQuotientSpec::new(4, [(1, 8), (2, -4)]).unwrap();
    let f = eta_quotient(&spec, r(7, 1)).unwrap();
    let got: Vec<i64> = (0..7).map(|j| i64::try_from(f.coeff(r(j, 1)).unwrap()).unwrap()).collect();
    assert_eq!(got, [1, -8, 24, -32, 24, -48, 96]);
}

#[test]
fn invalid_eta_quotients() {
    assert!(EtaQuotientSpec::new(3, [(1, 1)]).is_err());
    assert!(EtaQuotientSpec::new(3, [(2, 24)]).is_err());
}

#[test]
fn precision_is_tracked() {
    let a: QSeries = "1*q^(0/1) + 1*q^(1/1) + O(q^(3/1))".parse().unwrap();
    let b: QSeries = "1*q^(1/1) + O(q^(2/1))".parse().unwrap();
    let p = a.mul(&b);
    assert_eq!(p.precision(), Some(r(2, 1)));
    assert!("1*q^(1/2) + garbage".parse::<QSeries>().is_err());
}

fn series_strategy() -> impl Strategy<Value = QSeries> {
    (prop::collection::vec(-5i64..=5, 1..8), -2i64..=2, 6i64..=12).prop_map(|(cs, v, prec)| {
        QSeries::from_terms(2, cs.into_iter().enumerate().map(|(i, c)| (v + i as i64, BigInt::from(c))), prec)
    })
}

proptest! {
    #[test]
    fn mul_commutes(a in series_strategy(), b in series_strategy()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn mul_associates(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn unit_inverse(cs in prop::collection::vec(-4i64..=4, 1..6), v in -3i64..=3, lead in prop::bool::ANY) {
        let lead = if lead { 1 } else { -1 };
        let terms = std::iter::once((v, BigInt::from(lead)))
            .chain(cs.into_iter().enumerate().map(|(i, c)| (v + 1 + i as i64, BigInt::from(c))));
        let a = QSeries::from_terms(1, terms, v + 10);
        let inv = a.inverse().unwrap();
        let one = a.mul(&inv);
        prop_assert_eq!(one.coeff(r(0, 1)), Some(BigInt::from(1)));
        for (e, c) in one.terms() {
            prop_assert!(e == r(0, 1) || c == &BigInt::from(0));
        }
    }

    #[test]
    fn print_parse(a in series_strategy()) {
        let back: QSeries = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a.normalized());
    }
}
