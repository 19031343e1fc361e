use bprod_core::orthoprod::*;
use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;

fn r(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn lattices() -> [HyperbolicLattice; 2] {
    [HyperbolicLattice::level3(), HyperbolicLattice::level2()]
}

#[test]
fn lattices_are_even_and_hyperbolic() {
    let [k3, k2] = lattices();
    assert_eq!(k3.signature(), (1, 3));
    assert_eq!(k2.signature(), (1, 5));
    assert!(k3.is_even() && k2.is_even());
    for k in lattices() {
        for b in &k.dual_basis {
            assert!(k.in_dual(b));
        }
    }
}

fn small_dual_vectors(k: &HyperbolicLattice) -> Vec<Vector> {
    let r = k.rank();
    let mut out = Vec::new();
    for idx in 0..3usize.pow(r as u32) {
        let y: Vec<i64> = (0..r).map(|i| (idx / 3usize.pow(i as u32) % 3) as i64 - 1).collect();
        out.push(k.from_dual(&y));
    }
    out
}

#[test]
fn class_map_is_an_isometry_onto_the_discriminant_group() {
    for k in lattices() {
        let d = k.discriminant_form();
        let vs = small_dual_vectors(&k);
        let mut image = std::collections::BTreeSet::new();
        for a in &vs {
            let c = k.class(a);
            let diff = k.q(a) - d.q_value(&c);
            assert!(diff.is_integer(), "{a:?}");
            image.insert(c);
        }
        for a in vs.iter().take(40) {
            for b in vs.iter().take(40) {
                let diff = k.pair(a, b) - d.bilinear(&k.class(a), &k.class(b));
                assert!(diff.is_integer());
            }
        }
        assert_eq!(image.len() as u128, d.order());
        // K itself maps to 0
        for i in 0..k.rank() {
            assert!(k.class(&k.basis(i)).iter().all(|&x| x == 0));
        }
    }
}

#[test]
fn explicit_forms_match_the_genus_symbols() {
    for case in [ProductCase::Level3Cone, ProductCase::Level2Cone] {
        let cusp = case.cusp();
        let model = cusp.symbol.form();
        assert_eq!(cusp.form.order(), model.order());
        for n in 1..=cusp.level() {
            assert_eq!(cusp.form.gauss_sum(n), model.gauss_sum(n), "{case:?} n = {n}");
        }
        assert_eq!(cusp.form.q_value(&cusp.gamma_cone()), case.lift_case().gamma_norm());
        assert_eq!(cusp.form.q_value(&cusp.gamma_weyl()), case.lift_case().gamma_norm());
    }
}

#[test]
fn slab_basics() {
    let k = HyperbolicLattice::level3();
    let w0 = k.cone_point(1, 1);
    assert!(enumerate_slab(&k, &w0, Rational64::new(1, 2), r(0)).unwrap().is_empty());
    let slab = enumerate_slab(&k, &w0, r(1), r(0)).unwrap();
    assert!(slab.contains(&k.x_over_n()));
    assert!(slab.iter().all(|a| k.q(a) >= r(0) && k.pair(a, &w0) <= r(1)));
    assert!(enumerate_slab(&k, &[0, 0, 3, 0], r(2), r(0)).is_err());
    let neg = [0i64, 3, 0, 0];
    assert!(enumerate_slab(&k, &neg, r(2), r(0)).is_err());
}

#[test]
fn slab_matches_box_enumeration() {
    for k in lattices() {
        let h = if k.rank() == 4 { 4 } else { 2 };
        for (w0, q_min) in [
            (k.cone_point(1, 1), r(0)),
            (k.cone_point(2, 1), Rational64::new(-1, k.level)),
        ] {
            let a = enumerate_slab(&k, &w0, r(h), q_min).unwrap();
            let b = enumerate_slab_box(&k, &w0, r(h), q_min).unwrap();
            assert!(!a.is_empty());
            assert_eq!(a, b, "{}", k.name);
        }
    }
}

#[test]
fn slab_growth() {
    let k = HyperbolicLattice::level3();
    let w0 = k.cone_point(1, 1);
    let c3 = enumerate_slab(&k, &w0, r(3), r(0)).unwrap().len();
    let c6 = enumerate_slab(&k, &w0, r(6), r(0)).unwrap().len();
    assert!(c6 >= 2 * c3, "{c3} {c6}");
}

#[test]
fn factor_series_rules() {
    let z = BigInt::from(0);
    let one = BigInt::from(1);
    // (1-X)^2 (1-ωX)^-1 (1-ω²X)^-1 = (1-X)^3 / (1-X^3)
    let s = factor_series(3, &ints(&[2, -1, -1]), 6).unwrap();
    assert_eq!(s, ints(&[1, -3, 3, 0, -3, 3, 0]));
    // equal exponents collapse to (1 - X^N)^c
    assert_eq!(factor_series(2, &ints(&[4, 4]), 4).unwrap(), ints(&[1, 0, -4, 0, 6]));
    assert_eq!(factor_series(3, &[z.clone(), z.clone(), z], 3).unwrap(), ints(&[1, 0, 0, 0]));
    assert!(factor_series(3, &[BigInt::from(0), one, BigInt::from(0)], 2).is_err());
}

#[test]
fn level3_cone_case() {
    let rep = product_expansion_cone_case(ProductCase::Level3Cone, None, r(6)).unwrap();
    assert!(rep.singular_support, "{:?}", rep.off_ray_nonzero);
    assert!(rep.rays_ok);
    assert!(rep.max_multiples >= 5);
    assert!(rep.verdict());
    let k = HyperbolicLattice::level3();
    let mu = k.x_over_n();
    let ray = rep.rays.iter().find(|x| x.mu == mu).unwrap();
    assert_eq!(ray.coefficients, ints(&[-3, 0, 6, -3, 0, 0]));
    assert_eq!(rep.expansion.coeff(&[0; 4]), BigInt::from(1));
}

#[test]
fn level2_cone_case() {
    let rep = product_expansion_cone_case(ProductCase::Level2Cone, None, r(5)).unwrap();
    assert!(rep.verdict(), "{:?}", rep.off_ray_nonzero);
    let k = HyperbolicLattice::level2();
    let ray = rep.rays.iter().find(|x| x.mu == k.x_over_n()).unwrap();
    assert_eq!(ray.coefficients, ints(&[-8, 24, -32, 24, -48]));
}

#[test]
fn cone_case_with_another_grading() {
    let k = HyperbolicLattice::level3();
    let w0 = k.cone_point(1, 2);
    let rep = product_expansion_cone_case(ProductCase::Level3Cone, Some(w0), r(10)).unwrap();
    assert!(rep.singular_support && rep.rays_ok && rep.max_multiples >= 5);
}

#[test]
fn level3_weyl_case() {
    let rep = weyl_group_expansion(ProductCase::Level3Weyl, None, r(10)).unwrap();
    assert!(rep.orbit.certified);
    assert!(rep.reflections_ok);
    assert!(rep.mismatches.is_empty(), "{:?}", rep.mismatches);
    assert!(rep.antisymmetric);
    assert!(rep.ray_pattern_ok);
    assert!(rep.ray_series_ok);
    assert!(rep.verdict());
    assert!(rep.orbit.points.len() > 1);
    // exponents 2 if 3 | m and -1 otherwise, equal for every coset representative
    for (m, row) in rep.ray_exponents.iter().enumerate() {
        let want = if (m + 1) % 3 == 0 { 2 } else { -1 };
        assert!(row.iter().all(|x| *x == BigInt::from(want)));
    }
    // η(9t)³/η(3t) = q + q⁴ + 2q⁷ + ...
    assert_eq!(rep.ray_series[..8], ints(&[0, 1, 0, 0, 1, 0, 0, 2])[..]);
}

#[test]
fn level2_weyl_case() {
    let rep = weyl_group_expansion(ProductCase::Level2Weyl, None, r(7)).unwrap();
    assert!(rep.verdict());
    assert!(rep.orbit.certified && rep.mismatches.is_empty() && rep.antisymmetric);
    assert_eq!(rep.ray_series, ints(&[0, 1, 0, 4, 0, 6, 0, 8]));
}

#[test]
fn wrong_case_kind_is_rejected() {
    assert!(product_expansion_cone_case(ProductCase::Level3Weyl, None, r(3)).is_err());
    assert!(weyl_group_expansion(ProductCase::Level2Cone, None, r(3)).is_err());
    assert!(ProductCase::parse("level5-cone").is_err());
    for c in ProductCase::ALL {
        assert_eq!(ProductCase::parse(c.name()).unwrap(), c);
    }
}

#[test]
fn reflections_have_determinant_minus_one() {
    for k in lattices() {
        let w0 = k.cone_point(2, 1);
        let roots = positive_roots(&k, &w0, r(6)).unwrap();
        assert!(!roots.is_empty());
        for a in &roots {
            assert!(k.reflection_ok(a), "{a:?}");
            assert!(k.pair(a, &w0) > r(0));
        }
    }
}

#[test]
fn weyl_vector_checks() {
    for k in lattices() {
        let w0 = k.cone_point(2, 1);
        let rho = k.x_over_n();
        assert!(weyl_vector_consistency(&k, &rho, &w0), "{}", k.name);
        let x: Vector = rho.iter().map(|v| v * k.level).collect();
        assert!(!weyl_vector_consistency(&k, &x, &w0));
        let xi_over_n: Vector = {
            let mut v = vec![0; k.rank()];
            v[k.xi_index] = 1;
            v
        };
        // isotropic and primitive, but on the negative side of the cone
        assert!(!weyl_vector_consistency(&k, &scaled_neg(&xi_over_n), &w0));
    }
}

fn scaled_neg(v: &[i64]) -> Vector {
    v.iter().map(|x| -x).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reflections_are_isometric_involutions(y in proptest::collection::vec(-4i64..=4, 4), idx in 0usize..7) {
        let k = HyperbolicLattice::level3();
        let roots = positive_roots(&k, &k.cone_point(2, 1), r(4)).unwrap();
        let alpha = &roots[idx % roots.len()];
        let v = k.from_dual(&y);
        let w = k.reflect(alpha, &v).unwrap();
        prop_assert_eq!(k.q(&w), k.q(&v));
        prop_assert!(k.in_dual(&w));
        prop_assert_eq!(k.reflect(alpha, &w).unwrap(), v);
    }

    #[test]
    fn dual_vectors_have_integral_pairings_with_k(y in proptest::collection::vec(-5i64..=5, 6), i in 0usize..6) {
        let k = HyperbolicLattice::level2();
        let v = k.from_dual(&y);
        prop_assert!(k.pair(&v, &k.basis(i)).is_integer());
        prop_assert_eq!(k.dual_content(&v).unwrap(), y.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)));
    }
}
