mod common;

use bprod_core::genus::GenusSymbol;
use bprod_core::weilrep::{ScaledMatrix, WeilRep};
use proptest::prelude::*;

fn weil(g: &GenusSymbol) -> WeilRep {
    WeilRep::new(g.form(), g.r()).unwrap()
}

fn check_relations(w: &WeilRep) -> Result<(), String> {
    let id = ScaledMatrix::identity(w.dim(), w.d.level().max(1) as u32);
    let s = w.rho_s();
    let s2 = s.mul(&s);
    if !s2.mul(&s2).equals(&id) {
        return Err("S^4 != 1".into());
    }
    let st = s.mul(&w.rho_t());
    if !st.mul(&st).mul(&st).equals(&s2) {
        return Err("(ST)^3 != S^2".into());
    }
    if !s.mul(&s.conj_transpose()).equals(&id) {
        return Err("S is not unitary".into());
    }
    if !w.rho_t().mul(&w.rho_t_inv()).equals(&id) {
        return Err("T t != 1".into());
    }
    Ok(())
}

#[test]
fn relations_on_table_forms() {
    for g in common::table() {
        check_relations(&weil(&g)).unwrap_or_else(|e| panic!("{g}: {e}"));
    }
}

#[test]
fn s_squared_is_negation_times_a_sign() {
    for g in common::table() {
        let w = weil(&g);
        let s2 = w.rho_word("SS").unwrap();
        let neg = w.negation_map();
        let sign = bprod_core::cyclo::Cyclo::e(-w.r, 4);
        for (i, &j) in neg.iter().enumerate() {
            for c in 0..w.dim() {
                let want = if c == j { sign.clone() } else { bprod_core::cyclo::Cyclo::zero() };
                assert_eq!(s2.entry(i, c), want, "{g}");
            }
        }
    }
}

#[test]
fn gamma1_words() {
    for g in common::table() {
        let w = weil(&g);
        let n = w.d.level().max(1) as i64;
        let tn = "t".repeat(n as usize);
        let lower = w.rho_word(&format!("S{tn}s")).unwrap();
        assert!(lower.equals(&w.rho_gamma1([[1, 0], [n, 1]]).unwrap()), "{g}");
        let other = w.rho_word(&format!("TS{tn}s")).unwrap();
        assert!(other.equals(&w.rho_gamma1([[1 + n, 1], [n, 1]]).unwrap()), "{g}");
        assert!(w.rho_gamma1([[2, 1], [1, 1]]).is_err() || n == 1);
    }
}

#[test]
fn unknown_letters_are_rejected() {
    let w = weil(&common::table()[7]);
    assert!(w.rho_word("STx").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn relations_on_random_forms(seed in any::<u64>()) {
        let g = common::random_symbols(1, 60, &[2, 3, 5, 7], seed).remove(0);
        prop_assert!(check_relations(&weil(&g)).is_ok(), "{}", g);
    }
}
