//! Lifts of eta quotients on Γ₁(N), N ∈ {2, 3}, to vector valued modular forms
//! for ρ_L:  F = Σ_M (f|_k M) ρ_L(M⁻¹) e_γ  over Γ₁(N)\SL₂(Z).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::rat;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::genus::{DElement, DiscriminantForm, GenusSymbol};
use crate::qseries::{eta_quotient, eta_quotient_at_zero, EtaQuotientSpec, QSeries};
use crate::weilrep::WeilRep;

/// ± S^s T^t.
#[derive(Clone, Copy, Debug)]
struct Coset {
    neg: bool,
    s: bool,
    t: i64,
}

fn cosets(n: u32) -> Result<Vec<Coset>> {
    let base: &[(bool, i64)] = match n {
        2 => &[(false, 0), (true, 0), (true, 1)],
        3 => &[(false, 0), (true, 0), (true, 1), (true, -1)],
        _ => return Err(Error::Unsupported(format!("Gamma1({n}) lift"))),
    };
    let mut out: Vec<Coset> = base.iter().map(|&(s, t)| Coset { neg: false, s, t }).collect();
    if n == 3 {
        // -I ∉ Γ₁(3)
        out.extend(base.iter().map(|&(s, t)| Coset { neg: true, s, t }));
    }
    Ok(out)
}

/// Vector valued form Σ f_γ e_γ with integer coefficients.
#[derive(Clone, Debug)]
pub struct VVForm {
    pub form: DiscriminantForm,
    pub weight: i64,
    pub r: i64,
    /// Indexed like `form.elements()`.
    pub components: Vec<QSeries<BigInt>>,
}

impl VVForm {
    pub fn zero(form: DiscriminantForm, weight: i64, r: i64, prec: Rational64) -> Self {
        let n = form.order() as usize;
        let den = *prec.denom() as u32;
        let components = vec![QSeries::zero(den, *prec.numer()); n];
        VVForm {
            form,
            weight,
            r,
            components,
        }
    }

    pub fn component(&self, gamma: &[u32]) -> &QSeries<BigInt> {
        &self.components[self.form.index(gamma)]
    }

    pub fn coeff(&self, gamma: &[u32], m: Rational64) -> Option<BigInt> {
        self.component(gamma).coeff(m)
    }

    /// c(γ, m) for m < 0.
    pub fn principal_part(&self) -> Vec<(DElement, Rational64, BigInt)> {
        let mut out = Vec::new();
        for (g, f) in self.form.elements().zip(&self.components) {
            for (e, c) in f.terms() {
                if e.is_negative() {
                    out.push((g.clone(), e, c.clone()));
                }
            }
        }
        out
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&self.form.zero(), Rational64::zero())
            .unwrap_or_default()
    }

    /// Exponents of f_γ lie in Q(γ) + Z.
    pub fn support_ok(&self) -> bool {
        self.form
            .elements()
            .zip(&self.components)
            .all(|(g, f)| {
                let q = self.form.q_value(&g);
                f.terms().all(|(e, _)| (e - q).is_integer())
            })
    }

    pub fn to_json(&self) -> Value {
        let mut comps = serde_json::Map::new();
        for (g, f) in self.form.elements().zip(&self.components) {
            if !f.is_zero() {
                comps.insert(format!("{g:?}"), json!(f.to_string()));
            }
        }
        json!({
            "weight": self.weight,
            "signature": self.r,
            "c00": self.constant_term().to_string(),
            "principal_part": self.principal_part().iter().map(|(g, m, c)| json!({
                "gamma": g, "m": m.to_string(), "c": c.to_string()
            })).collect::<Vec<_>>(),
            "components": comps,
        })
    }
}

/// ρ_L(M⁻¹) e_γ for M = ±S^s T^t, i.e. ρ(T^-t) ρ(S^-s) ρ(±I) e_γ.
fn coset_vector(w: &WeilRep, c: Coset, gamma: &[u32]) -> Vec<Cyclo> {
    let d = &w.d;
    let n = d.level().max(1) as i64;
    let (mut scalar, delta) = if c.neg {
        (Cyclo::e(-w.r, 4), d.neg(gamma))
    } else {
        (Cyclo::one(), gamma.to_vec())
    };
    let mut v: Vec<Cyclo> = vec![Cyclo::zero(); w.dim()];
    if c.s {
        scalar = &scalar * &w.s_scalar().conj();
        for (i, b) in d.elements().enumerate() {
            let phase = d.bilinear_num(&b, &delta) as i64 - c.t * d.norm_num(&b) as i64;
            v[i] = &scalar * &Cyclo::e(phase, n);
        }
    } else {
        v[d.index(&delta)] = scalar;
    }
    v
}

fn check_character(spec: &EtaQuotientSpec, form: &DiscriminantForm, gamma: &[u32]) -> Result<()> {
    let q = form.q_value(gamma);
    let want = q - q.floor();
    if spec.character_exponent() != want {
        return Err(Error::Invalid(format!(
            "character e({}b) of the eta quotient does not match e(b·Q(γ)) = e({}b)",
            spec.character_exponent(),
            want
        )));
    }
    Ok(())
}

/// Γ₁(N)-lift of the eta quotient `spec` on e_γ, known below q^trunc.
pub fn gamma1_lift(
    spec: &EtaQuotientSpec,
    n: u32,
    gamma: &[u32],
    w: &WeilRep,
    trunc: Rational64,
) -> Result<VVForm> {
    let cos = cosets(n)?;
    if spec.level != n {
        return Err(Error::Invalid(format!("eta quotient has level {}, not {n}", spec.level)));
    }
    check_character(spec, &w.d, gamma)?;
    let k = spec.weight();
    let f = eta_quotient(spec, trunc)?;
    let (g_scalar, g) = eta_quotient_at_zero(spec, trunc)?;
    let sign = |neg: bool| if neg && k % 2 != 0 { -1 } else { 1 };

    // For each base series and residue class of the exponent numerator, the
    // coefficient vector Σ_M ±(twist phase)·ρ(M⁻¹)e_γ.
    let mut fvec = vec![Cyclo::zero(); w.dim()];
    let hg = g.den() as i64;
    let mut gvec = vec![vec![Cyclo::zero(); w.dim()]; hg as usize];
    for c in &cos {
        let v = coset_vector(w, *c, gamma);
        let sg = Cyclo::from_int(sign(c.neg));
        if c.s {
            for (res, slot) in gvec.iter_mut().enumerate() {
                let ph = &(&sg * &g_scalar) * &Cyclo::e(c.t * res as i64, hg);
                for (acc, x) in slot.iter_mut().zip(&v) {
                    if !x.is_zero() {
                        *acc = &*acc + &(&ph * x);
                    }
                }
            }
        } else {
            for (acc, x) in fvec.iter_mut().zip(&v) {
                if !x.is_zero() {
                    *acc = &*acc + &(&sg * x);
                }
            }
        }
    }

    let rational = |c: &Cyclo| -> Result<BigRational> {
        c.to_rational()
            .ok_or_else(|| Error::Consistency(format!("lift coefficient factor {c} is not rational")))
    };
    let den = *trunc.denom() as u32;
    let mut out = VVForm::zero(w.d.clone(), k, w.r, trunc);
    for (i, comp) in out.components.iter_mut().enumerate() {
        let mut acc: BTreeMap<Rational64, BigRational> = BTreeMap::new();
        if !fvec[i].is_zero() {
            let lam = rational(&fvec[i])?;
            for (e, c) in f.terms() {
                *acc.entry(e).or_insert_with(BigRational::zero) += &lam * BigRational::from_integer(c.clone());
            }
        }
        for (res, slot) in gvec.iter().enumerate() {
            if slot[i].is_zero() {
                continue;
            }
            let lam = rational(&slot[i])?;
            for (&e, c) in g.raw_terms() {
                if e.rem_euclid(hg) as usize == res {
                    let x = Rational64::new(e, hg);
                    *acc.entry(x).or_insert_with(BigRational::zero) += &lam * BigRational::from_integer(c.clone());
                }
            }
        }
        let mut terms = Vec::new();
        for (e, c) in acc {
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() {
                return Err(Error::Consistency(format!("non-integral coefficient {c} at q^{e}")));
            }
            terms.push((e, c.to_integer()));
        }
        let lcm = terms
            .iter()
            .map(|(e, _)| *e.denom() as u32)
            .fold(den, num_integer::lcm);
        *comp = QSeries::from_terms(
            lcm,
            terms.into_iter().map(|(e, c)| ((e * lcm as i64).to_integer(), c)),
            (trunc * lcm as i64).to_integer(),
        )
        .normalized();
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftCase {
    /// II_(2,4)(3^+5), f = η(τ)/η(3τ)³.
    Level3,
    /// II_(2,6)(2_II^-6), f = η(τ)⁴/η(2τ)⁸.
    Level2,
}

impl LiftCase {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "level3" => Ok(LiftCase::Level3),
            "level2" => Ok(LiftCase::Level2),
            _ => Err(Error::Parse(format!("unknown lift case {s:?}"))),
        }
    }

    pub fn symbol(self) -> GenusSymbol {
        let s = match self {
            LiftCase::Level3 => "II_(2,4)(3^+5)",
            LiftCase::Level2 => "II_(2,6)(2_II^-6)",
        };
        s.parse().expect("valid symbol")
    }

    pub fn level(self) -> u32 {
        match self {
            LiftCase::Level3 => 3,
            LiftCase::Level2 => 2,
        }
    }

    pub fn spec(self) -> EtaQuotientSpec {
        match self {
            LiftCase::Level3 => EtaQuotientSpec::new(3, [(1, 1), (3, -3)]),
            LiftCase::Level2 => EtaQuotientSpec::new(2, [(1, 4), (2, -8)]),
        }
        .expect("valid eta quotient")
    }

    /// Norm of γ mod 1.
    pub fn gamma_norm(self) -> Rational64 {
        match self {
            LiftCase::Level3 => Rational64::new(2, 3),
            LiftCase::Level2 => Rational64::new(1, 2),
        }
    }

    pub fn weil(self) -> WeilRep {
        let g = self.symbol();
        WeilRep::new(g.form(), g.r()).expect("even signature")
    }

    /// First element of the required norm.
    pub fn gamma(self, form: &DiscriminantForm) -> DElement {
        form.elements()
            .find(|x| form.q_value(x) == self.gamma_norm())
            .expect("element of the required norm exists")
    }

    pub fn build(self, trunc: Rational64) -> Result<VVForm> {
        let w = self.weil();
        let gamma = self.gamma(&w.d);
        gamma1_lift(&self.spec(), self.level(), &gamma, &w, trunc)
    }
}

#[derive(Clone, Debug)]
pub struct PointCheck {
    pub tau: Complex64,
    /// max_β |F_β(-1/τ) - τ^k (ρ(S)F(τ))_β|
    pub error: f64,
    /// Estimated size of the neglected tails at τ and -1/τ.
    pub tail: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModularityStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ModularityReport {
    pub points: Vec<PointCheck>,
    pub support_ok: bool,
    pub status: ModularityStatus,
}

pub const DEFAULT_SAMPLE_POINTS: [(f64, f64); 5] = [(0.0, 1.5), (0.0, 2.0), (0.3, 1.5), (-0.4, 1.6), (0.5, 1.5)];

/// Largest of the last few terms times a safety factor; heuristic for the
/// size of the omitted tail when coefficients grow subexponentially.
fn tail_estimate(f: &QSeries<BigInt>, tau: Complex64) -> f64 {
    let y = tau.im;
    let den = f.den() as f64;
    let last: Vec<f64> = f
        .raw_terms()
        .iter()
        .rev()
        .take(3)
        .map(|(&e, c)| {
            c.to_f64().unwrap_or(f64::INFINITY).abs() * (-std::f64::consts::TAU * y * e as f64 / den).exp()
        })
        .collect();
    10.0 * last.into_iter().fold(0.0, f64::max)
}

/// Compares F(-1/τ) with τ^k ρ(S) F(τ) at the given points.
pub fn verify_modularity(f: &VVForm, points: &[Complex64], tolerance: f64) -> ModularityReport {
    let d = &f.form;
    let n = d.level().max(1);
    let elems: Vec<DElement> = d.elements().collect();
    let roots: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, -std::f64::consts::TAU * j as f64 / n as f64))
        .collect();
    let s = Complex64::from_polar(
        1.0 / (d.order() as f64).sqrt(),
        -std::f64::consts::TAU * f.r as f64 / 8.0,
    );
    let mut checks = Vec::new();
    let mut status = ModularityStatus::Pass;
    for &tau in points {
        let inv = -1.0 / tau;
        let at_tau: Vec<Complex64> = f.components.iter().map(|c| c.eval(tau)).collect();
        let at_inv: Vec<Complex64> = f.components.iter().map(|c| c.eval(inv)).collect();
        let tail = f
            .components
            .iter()
            .map(|c| tail_estimate(c, tau).max(tail_estimate(c, inv)))
            .fold(0.0, f64::max);
        let factor = tau.powi(f.weight as i32) * s;
        let mut err: f64 = 0.0;
        for (i, b) in elems.iter().enumerate() {
            let mut acc = Complex64::zero();
            for (j, g) in elems.iter().enumerate() {
                acc += roots[d.bilinear_num(b, g) as usize] * at_tau[j];
            }
            err = err.max((at_inv[i] - factor * acc).norm());
        }
        // a large error is only decisive when the truncation tail is small
        let tail_small = tail * d.order() as f64 <= tolerance;
        if err > tolerance && tail_small {
            status = ModularityStatus::Fail;
        } else if (err > tolerance || !tail_small) && status == ModularityStatus::Pass {
            status = ModularityStatus::Inconclusive;
        }
        checks.push(PointCheck { tau, error: err, tail });
    }
    let support_ok = f.support_ok();
    if !support_ok {
        status = ModularityStatus::Fail;
    }
    ModularityReport {
        points: checks,
        support_ok,
        status,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaReport {
    pub checked: usize,
    pub mismatches: Vec<(DElement, Rational64)>,
}

/// Compares F with the closed description
/// F_β = [β ∈ {±γ}] f + c_N e-phase((β, γ)) h_{Q(β)},
/// where h is the eta quotient at the cusp 0 without its scalar, c_3 = 1 with
/// phase e(x) + e(-x), and c_2 = 4 with phase e(x).
pub fn coefficient_formula_check(f: &VVForm, case: LiftCase, gamma: &[u32], trunc: Rational64) -> Result<FormulaReport> {
    let spec = case.spec();
    let base = eta_quotient(&spec, trunc)?;
    let (_, h) = eta_quotient_at_zero(&spec, trunc)?;
    let d = &f.form;
    let neg = d.neg(gamma);
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for b in d.elements() {
        let x = d.bilinear(&b, gamma);
        let q = d.q_value(&b);
        let factor: BigInt = match case {
            LiftCase::Level3 => {
                if x.is_integer() {
                    2.into()
                } else {
                    (-1).into()
                }
            }
            LiftCase::Level2 => {
                if x.is_integer() {
                    4.into()
                } else {
                    (-4).into()
                }
            }
        };
        let on_gamma = match case {
            LiftCase::Level3 => b.as_slice() == gamma || b == neg,
            LiftCase::Level2 => b.as_slice() == gamma,
        };
        let mut expected: BTreeMap<Rational64, BigInt> = BTreeMap::new();
        for (e, c) in h.terms() {
            if (e - q).is_integer() {
                *expected.entry(e).or_default() += &factor * c;
            }
        }
        if on_gamma {
            for (e, c) in base.terms() {
                *expected.entry(e).or_default() += c;
            }
        }
        let actual = f.component(&b);
        let mut exps: Vec<Rational64> = expected.keys().copied().collect();
        exps.extend(actual.terms().map(|(e, _)| e));
        exps.sort();
        exps.dedup();
        for e in exps {
            if e >= trunc {
                continue;
            }
            checked += 1;
            let want = expected.get(&e).cloned().unwrap_or_default();
            let got = actual.coeff(e).unwrap_or_default();
            if want != got {
                mismatches.push((b.clone(), e));
            }
        }
    }
    Ok(FormulaReport { checked, mismatches })
}

/// Weight of the Borcherds product, c(0, 0)/2.
pub fn product_weight_from_constant(f: &VVForm) -> BigRational {
    BigRational::from_integer(f.constant_term()) / rat(2, 1)
}
