//! One line per acceptance criterion. Run with `--nocapture` to see them.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use bprod_core::arith::rat;
use bprod_core::classify::{classify_simple, Frontier};
use bprod_core::dimensions::{closed_form, dim_oracle, dim_oracle_factored};
use bprod_core::eisenstein::{divisor_sum, divisor_sum_bounds, q_level3_2_4, EisensteinProvider};
use bprod_core::genus::GenusSymbol;
use bprod_core::lifts::{
    coefficient_formula_check, verify_modularity, LiftCase, ModularityStatus, DEFAULT_SAMPLE_POINTS,
};
use bprod_core::orthoprod::{product_expansion_cone_case, weyl_group_expansion, ProductCase};
use bprod_core::search::search_singular;
use bprod_core::weilrep::{ScaledMatrix, WeilRep};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn classification() -> Outcome {
    let c = classify_simple(&Frontier::default()).map_err(err)?;
    let mut got = c.symbols();
    got.sort();
    let mut want: Vec<String> = common::TABLE.iter().map(|s| s.to_string()).collect();
    want.sort();
    ensure(got == want, format!("got {got:?}"))?;
    ensure(c.tail_certified, "tail not certified")?;
    Ok(format!("{} symbols from {} candidates", got.len(), c.examined))
}

fn dimension_oracles() -> Outcome {
    let mut compared = 0;
    for g in common::table() {
        let f = g.form();
        for k in [1 + g.n as i64 / 2, g.n as i64 / 2 - 1] {
            let c = closed_form(&f, g.n, k).map_err(err)?;
            ensure(c == dim_oracle(&f, g.n, k).map_err(err)?, format!("{g} k = {k} (dense)"))?;
            ensure(c == dim_oracle_factored(&f, g.n, k).map_err(err)?, format!("{g} k = {k}"))?;
            compared += 1;
        }
    }
    let random = common::random_symbols(60, 1000, &[2, 3, 5, 7], 1);
    for g in &random {
        let f = g.form();
        let k = 1 + g.n as i64 / 2;
        let c = closed_form(&f, g.n, k).map_err(err)?;
        ensure(c == dim_oracle_factored(&f, g.n, k).map_err(err)?, format!("{g}"))?;
        if f.order() <= 100 {
            ensure(c == dim_oracle(&f, g.n, k).map_err(err)?, format!("{g} (dense)"))?;
        }
    }
    Ok(format!("{compared} table cases, {} random forms", random.len()))
}

fn eisenstein_table() -> Outcome {
    let row = [-2, -6, -18, -26, -48, -54, -100, -102, -162, -144, -240, -234];
    for (i, want) in row.iter().enumerate() {
        let m = Rational64::new(i as i64 + 1, 3);
        ensure(q_level3_2_4(false, m).map_err(err)? == rat(*want, 1), format!("q(γ, {m})"))?;
    }
    for (m, want) in [(1, -36), (2, 0), (3, -180), (4, -468)] {
        ensure(q_level3_2_4(true, Rational64::from_integer(m)).map_err(err)? == rat(want, 1), format!("q(0, {m})"))?;
    }
    // the provider agrees on actual elements
    let g: GenusSymbol = "II_(2,4)(3^+5)".parse().unwrap();
    let p = EisensteinProvider::for_symbol(&g).map_err(err)?;
    let gamma = p.form.elements().find(|x| p.form.q_value(x) == Rational64::new(2, 3)).unwrap();
    ensure(p.q(&gamma, Rational64::new(1, 3)).map_err(err)? == rat(-2, 1), "provider")?;
    Ok("12 + 4 values".into())
}

fn singular_search() -> Outcome {
    let g: GenusSymbol = "II_(2,4)(3^+5)".parse().unwrap();
    let rep = search_singular(&g, Rational64::from_integer(-3)).map_err(err)?;
    ensure(rep.tail_certified && rep.candidates.len() == 1, "level 3 candidate count")?;
    let c = &rep.candidates[0];
    ensure(c.weight == rat(1, 1) && c.singular, "level 3 weight")?;
    ensure(c.terms.len() == 1, "level 3 principal part")?;
    let (t, mult) = &c.terms[0];
    let p = EisensteinProvider::for_symbol(&g).map_err(err)?;
    ensure(
        *mult == 1 && t.m == Rational64::new(-1, 3) && t.orbit_size == 2 && p.form.q_value(&t.representative) == Rational64::new(2, 3),
        "level 3 principal part is not e(-τ/3)(e_γ + e_-γ)",
    )?;
    let u: GenusSymbol = "II_(2,26)()".parse().unwrap();
    let rep = search_singular(&u, Rational64::from_integer(-3)).map_err(err)?;
    ensure(rep.tail_certified && rep.candidates.len() == 1, "unimodular candidate count")?;
    let c = &rep.candidates[0];
    ensure(c.weight == rat(12, 1), "unimodular weight")?;
    ensure(
        c.terms.len() == 1 && c.terms[0].1 == 1 && c.terms[0].0.m == Rational64::from_integer(-1),
        "unimodular principal part",
    )?;
    Ok("3^+5: weight 1; (2,26): weight 12".into())
}

fn lifts() -> Outcome {
    let trunc = Rational64::from_integer(10);
    let mut checked = 0;
    for (case, c00, m) in [(LiftCase::Level3, 2, Rational64::new(-1, 3)), (LiftCase::Level2, 4, Rational64::new(-1, 2))] {
        let f = case.build(trunc).map_err(err)?;
        let gamma = case.gamma(&f.form);
        ensure(f.constant_term() == BigInt::from(c00), format!("{case:?} c(0,0)"))?;
        let mut pp = f.principal_part();
        pp.sort();
        let mut want = vec![(gamma.clone(), m, BigInt::from(1))];
        if case == LiftCase::Level3 {
            want.push((f.form.neg(&gamma), m, BigInt::from(1)));
        }
        want.sort();
        ensure(pp == want, format!("{case:?} principal part"))?;
        ensure(f.support_ok(), format!("{case:?} support"))?;
        let rep = coefficient_formula_check(&f, case, &gamma, trunc).map_err(err)?;
        ensure(rep.mismatches.is_empty(), format!("{case:?} formula: {:?}", rep.mismatches))?;
        checked += rep.checked;
    }
    Ok(format!("{checked} coefficients match the closed description"))
}

fn modularity() -> Outcome {
    let pts: Vec<Complex64> = DEFAULT_SAMPLE_POINTS.iter().map(|&(x, y)| Complex64::new(x, y)).collect();
    let mut notes = Vec::new();
    let mut inconclusive = false;
    for case in [LiftCase::Level3, LiftCase::Level2] {
        let f = case.build(Rational64::from_integer(20)).map_err(err)?;
        let rep = verify_modularity(&f, &pts, 1e-8);
        let worst = rep.points.iter().map(|p| p.error).fold(0.0, f64::max);
        ensure(rep.status != ModularityStatus::Fail, format!("{case:?} fails, error {worst:e}"))?;
        inconclusive |= rep.status == ModularityStatus::Inconclusive;
        notes.push(format!("{case:?} {:?} max error {worst:.1e}", rep.status));
    }
    let summary = notes.join(", ");
    Ok(if inconclusive { format!("advisory: {summary}") } else { summary })
}

fn cone_products() -> Outcome {
    let mut notes = Vec::new();
    for (case, h) in [(ProductCase::Level3Cone, 6), (ProductCase::Level2Cone, 5)] {
        let rep = product_expansion_cone_case(case, None, Rational64::from_integer(h)).map_err(err)?;
        ensure(rep.singular_support, format!("{}: off-ray terms {:?}", case.name(), rep.off_ray_nonzero))?;
        ensure(rep.rays_ok, format!("{}: ray series", case.name()))?;
        ensure(rep.max_multiples >= 5, format!("{}: only {} multiples", case.name(), rep.max_multiples))?;
        ensure(rep.verdict(), case.name())?;
        notes.push(format!("{} H={h}: {} rays, {} slab vectors", case.name(), rep.rays.len(), rep.slab_size));
    }
    Ok(notes.join("; "))
}

fn weyl_chamber() -> Outcome {
    let h = 10;
    let rep = weyl_group_expansion(ProductCase::Level3Weyl, None, Rational64::from_integer(h)).map_err(err)?;
    ensure(rep.reflections_ok, "reflections")?;
    ensure(rep.ray_pattern_ok && rep.ray_series_ok, "single-chamber ray identity")?;
    if rep.orbit.certified {
        ensure(rep.mismatches.is_empty(), format!("mismatches {:?}", rep.mismatches))?;
        ensure(rep.verdict(), "verdict")?;
        Ok(format!("H={h}: orbit of {} points certified, full identity exact", rep.orbit.points.len()))
    } else {
        ensure(rep.verdict(), "verdict")?;
        Ok(format!("H={h}: orbit not certified, ray identity only"))
    }
}

fn property_suites() -> Outcome {
    let mut forms = common::table();
    forms.extend(common::random_symbols(40, 500, &[2, 3, 5, 7], 2));
    for g in &forms {
        let d = g.form();
        ensure(d.normalized_gauss(1) == bprod_core::cyclo::Cyclo::e(g.signature_mod8(), 8), format!("Milgram {g}"))?;
    }
    for g in common::table().iter().chain(&common::random_symbols(10, 60, &[2, 3, 5, 7], 3)) {
        let w = WeilRep::new(g.form(), g.r()).map_err(err)?;
        let id = ScaledMatrix::identity(w.dim(), w.d.level().max(1) as u32);
        let s = w.rho_s();
        let s2 = s.mul(&s);
        ensure(s2.mul(&s2).equals(&id), format!("S^4 on {g}"))?;
        let st = s.mul(&w.rho_t());
        ensure(st.mul(&st).mul(&st).equals(&s2), format!("(ST)^3 on {g}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let k = rng.gen_range(2..=12u32);
        let m = rng.gen_range(1..=3000u64);
        let salt: u64 = rng.gen();
        let a = move |d: u64| -> i8 {
            if d == m {
                1
            } else {
                ((salt ^ d.wrapping_mul(0x9e37_79b9_7f4a_7c15)) >> 61) as i8 % 3 - 1
            }
        };
        let (lo, hi) = divisor_sum_bounds(k, m, a).map_err(err)?;
        let s = BigRational::from_integer(divisor_sum(k, m, a));
        ensure(lo <= s && s <= hi, format!("bracket k = {k} m = {m}"))?;
    }
    for g in &forms {
        let f = g.form();
        for k0 in [2i64, 3] {
            let a = closed_form(&f, g.n, k0).map_err(err)?;
            let b = dim_oracle_factored(&f, g.n, k0 + 2).map_err(err)?;
            ensure(a.alpha3 == b.alpha3 && a.alpha4 == b.alpha4, format!("α parity on {g}"))?;
        }
    }
    Ok(format!("{} forms, 1000 divisor sums", forms.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("classification", classification),
        ("dimension oracle equivalence", dimension_oracles),
        ("Eisenstein table", eisenstein_table),
        ("singular-weight search", singular_search),
        ("lifts", lifts),
        ("numeric modularity", modularity),
        ("cone-case products", cone_products),
        ("Weyl-chamber product", weyl_chamber),
        ("property suites", property_suites),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("PASS  {} {name}: {note} [{secs:.1}s]", i + 1),
            Err(e) => {
                println!("FAIL  {} {name}: {e} [{secs:.1}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
