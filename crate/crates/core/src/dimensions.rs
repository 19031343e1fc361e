//! Dimensions of M_{k,ρ*} and S_{k,ρ*} for square-free level.
//!
//! The closed form evaluates
//!   d  = |D|/2 + c|D²|/2,
//!   α₁ = d/4 − e((2k+r)/8)·(ĝ(2) + c ĝ(−2))/8,
//!   α₂ = d/3 + Re(e((4k+3r−10)/24)·(ĝ(1) + c ĝ(−3)))/(3√3),
//!   α₃ = ½ Σ_{γ∈D} {−Q(γ)} + (c/2) Σ_{γ∈D²} {−Q(γ)},
//!   α₄ = ½ #{γ∈D : Q(γ)=0} + (c/2) #{γ∈D² : Q(γ)=0},
//! where ĝ(m) = G(m)/√|D|, r = 2 − n and c = (−1)^((2k+r)/2). The eigenvalue
//! oracles recompute the same numbers from explicit matrices of ρ*.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::arith::{rat, rat_int};
use crate::cyclo::{Cyclo, ZZeta};
use crate::error::{Error, Result};
use crate::genus::{DiscriminantForm, GenusSymbol};
use crate::weilrep::{
    alpha_from_multiplicities, block_matrices, multiplicities_from_traces, power_traces,
    ScaledMatrix, WeilRep,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub n: u32,
    pub k: i64,
    pub c: i64,
    pub d: BigRational,
    pub alpha1: BigRational,
    pub alpha2: BigRational,
    pub alpha3: BigRational,
    pub alpha4: BigRational,
    pub dim_m: BigRational,
    /// Only defined for k > 2.
    pub dim_s: Option<BigRational>,
}

impl DimensionReport {
    fn assemble(n: u32, k: i64, c: i64, d: BigRational, a: [BigRational; 4]) -> Self {
        let [alpha1, alpha2, alpha3, alpha4] = a;
        let dim_m = &d + &d * rat(k, 12) - &alpha1 - &alpha2 - &alpha3;
        let dim_s = (k > 2).then(|| &dim_m - &alpha4);
        DimensionReport {
            n,
            k,
            c,
            d,
            alpha1,
            alpha2,
            alpha3,
            alpha4,
            dim_m,
            dim_s,
        }
    }

    /// The weight-independent part (d, α's); what the oracle certifies.
    pub fn invariants(&self) -> [&BigRational; 5] {
        [&self.d, &self.alpha1, &self.alpha2, &self.alpha3, &self.alpha4]
    }

    pub fn dim_m_int(&self) -> Result<u64> {
        to_natural(&self.dim_m, "dim M")
    }

    pub fn dim_s_int(&self) -> Result<u64> {
        match &self.dim_s {
            Some(x) => to_natural(x, "dim S"),
            None => Err(Error::Unsupported(format!(
                "cusp form dimension needs k > 2 (got k = {})",
                self.k
            ))),
        }
    }

    pub fn to_json(&self, genus: &str) -> Value {
        json!({
            "genus": genus,
            "k": self.k,
            "d": self.d.to_string(),
            "alpha1": self.alpha1.to_string(),
            "alpha2": self.alpha2.to_string(),
            "alpha3": self.alpha3.to_string(),
            "alpha4": self.alpha4.to_string(),
            "dimM": self.dim_m.to_string(),
            "dimS": self.dim_s.as_ref().map(|x| x.to_string()),
        })
    }
}

fn to_natural(x: &BigRational, what: &str) -> Result<u64> {
    if !x.is_integer() || x.is_negative() {
        return Err(Error::Consistency(format!("{what} = {x} is not a natural number")));
    }
    x.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Consistency(format!("{what} overflows")))
}

fn sign_c(k: i64, r: i64) -> i64 {
    if ((2 * k + r) / 2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn two_part_order(form: &DiscriminantForm) -> u128 {
    form.torsion_subgroup(2).order()
}

fn real_rational(x: &Cyclo, what: &str) -> Result<BigRational> {
    x.to_rational()
        .ok_or_else(|| Error::Consistency(format!("{what} is not rational: {x}")))
}

/// Closed-form invariants for any integer weight k (dimensions need k ≥ 2).
pub fn closed_form(form: &DiscriminantForm, n: u32, k: i64) -> Result<DimensionReport> {
    let r = 2 - n as i64;
    let c = sign_c(k, r);
    let cr = rat_int(c);
    let order = BigRational::from_integer(BigInt::from(form.order()));
    let order2 = BigRational::from_integer(BigInt::from(two_part_order(form)));
    let half = rat(1, 2);
    let d = &half * (&order + &cr * &order2);

    let cc = Cyclo::from_int(c);
    let g2 = &form.normalized_gauss(2) + &(&cc * &form.normalized_gauss(-2));
    let a1 = &Cyclo::e(2 * k + r, 8) * &g2;
    let alpha1 = &d * rat(1, 4) - real_rational(&a1, "alpha1 Gauss term")? * rat(1, 8);

    let g1 = &form.normalized_gauss(1) + &(&cc * &form.normalized_gauss(-3));
    let inner = (&Cyclo::e(4 * k + 3 * r - 10, 24) * &g1).real_part();
    // 1/(3√3) = √3/9
    let t2 = &inner * &Cyclo::sqrt_int(3);
    let alpha2 = &d * rat(1, 3) + real_rational(&t2, "alpha2 Gauss term")? * rat(1, 9);

    let (fs, z) = form.frac_sum_and_zeros();
    let (fs2, z2) = form.torsion_subgroup(2).frac_sum_and_zeros();
    let alpha3 = &half * fs + &half * &cr * fs2;
    let zero = |v: u128| BigRational::from_integer(BigInt::from(v));
    let alpha4 = &half * zero(z) + &half * &cr * zero(z2);

    Ok(DimensionReport::assemble(n, k, c, d, [alpha1, alpha2, alpha3, alpha4]))
}

/// Closed-form report; errors for k < 2 and for non-integral dimensions.
pub fn dim_report(form: &DiscriminantForm, n: u32, k: i64) -> Result<DimensionReport> {
    if k < 2 {
        return Err(Error::Unsupported(format!("weight {k} < 2")));
    }
    let rep = closed_form(form, n, k)?;
    rep.dim_m_int()?;
    if k > 2 {
        rep.dim_s_int()?;
    }
    Ok(rep)
}

pub fn dim_report_symbol(g: &GenusSymbol, k: i64) -> Result<DimensionReport> {
    dim_report(&g.form(), g.n, k)
}

/// No cusp forms of weight 1 + n/2 for ρ*.
pub fn is_simple(g: &GenusSymbol) -> Result<bool> {
    let k = 1 + g.n as i64 / 2;
    Ok(dim_report_symbol(g, k)?.dim_s_int()? == 0)
}

/// Traces of X^t P₀ (t = 0..=m) for X = σ·B, with P₀ = (1 + cZ)/2.
fn projected_traces(pairs: &[(ZZeta, ZZeta)], sigma: &Cyclo, c: i64) -> Vec<Cyclo> {
    let half = Cyclo::from_rational(&rat(1, 2));
    let mut s_pow = Cyclo::one();
    let mut out = Vec::with_capacity(pairs.len());
    for (tr, trz) in pairs {
        let mut v = tr.clone();
        let zc = trz.scale(c as i128);
        v.add_assign(&zc);
        out.push(&(&s_pow * &v.to_cyclo()) * &half);
        s_pow = &s_pow * sigma;
    }
    out
}

fn mult_report(
    n: u32,
    k: i64,
    c: i64,
    t1: Vec<Cyclo>,
    t2: Vec<Cyclo>,
    t3: Vec<Cyclo>,
) -> Result<DimensionReport> {
    let d = real_rational(&t1[0], "dim V0")?;
    let m1 = multiplicities_from_traces(&t1, 4)?;
    let m2 = multiplicities_from_traces(&t2, 6)?;
    let m3 = multiplicities_from_traces(&t3, (t3.len() - 1) as u32)?;
    let a4 = BigRational::from_integer(BigInt::from(m3[0]));
    Ok(DimensionReport::assemble(
        n,
        k,
        c,
        d,
        [
            alpha_from_multiplicities(&m1),
            alpha_from_multiplicities(&m2),
            alpha_from_multiplicities(&m3),
            a4,
        ],
    ))
}

/// Largest |D| accepted by the dense oracle.
pub const DENSE_ORACLE_LIMIT: u128 = 1000;

/// Eigenvalue oracle on dense matrices of ρ*.
pub fn dim_oracle(form: &DiscriminantForm, n: u32, k: i64) -> Result<DimensionReport> {
    if form.order() > DENSE_ORACLE_LIMIT {
        return Err(Error::Unsupported(format!(
            "dense oracle limited to |D| <= {DENSE_ORACLE_LIMIT}"
        )));
    }
    let r = 2 - n as i64;
    let c = sign_c(k, r);
    let w = WeilRep::new(form.clone(), r)?;
    let neg = w.negation_map();
    let s = w.rho_s();
    let t = w.rho_t();

    // X₁ = e(k/4)ρ*(S)
    let b1 = ScaledMatrix {
        scalar: Cyclo::one(),
        ..s.conj()
    };
    let sigma1 = &Cyclo::e(k, 4) * &s.scalar.conj();
    let t1 = projected_traces(&power_traces(&b1, &neg, 4), &sigma1, c);

    // X₂ = (e(k/6)ρ*(S)ρ*(T))⁻¹ = e(−k/6)ρ(T)ρ(S)
    let mut b2 = t.mul(&s);
    b2.scalar = Cyclo::one();
    let sigma2 = &Cyclo::e(-k, 6) * &s.scalar;
    let t2 = projected_traces(&power_traces(&b2, &neg, 6), &sigma2, c);

    // X₃ = ρ*(T), diagonal.
    let level = form.level().max(1) as i64;
    let norms: Vec<i64> = form.elements().map(|x| form.norm_num(&x) as i64).collect();
    let pairs: Vec<(ZZeta, ZZeta)> = (0..=level)
        .map(|tt| {
            let mut tr = ZZeta::zero(level as u32);
            let mut trz = ZZeta::zero(level as u32);
            for (i, &q) in norms.iter().enumerate() {
                let z = ZZeta::root(level as u32, -tt * q);
                if neg[i] == i {
                    trz.add_assign(&z);
                }
                tr.add_assign(&z);
            }
            (tr, trz)
        })
        .collect();
    let t3 = projected_traces(&pairs, &Cyclo::one(), c);
    mult_report(n, k, c, t1, t2, t3)
}

fn kron_traces(
    form: &DiscriminantForm,
    tmax: usize,
    block_matrix: impl Fn(&ScaledMatrix, &ScaledMatrix) -> ScaledMatrix,
) -> Vec<(ZZeta, ZZeta)> {
    let ord = form.level().max(1) as u32;
    let mut acc: Vec<(ZZeta, ZZeta)> = (0..=tmax)
        .map(|_| (ZZeta::from_int(ord, 1), ZZeta::from_int(ord, 1)))
        .collect();
    for b in &form.blocks {
        let (a, t, neg) = block_matrices(b);
        let m = block_matrix(&a, &t);
        let pt = power_traces(&m, &neg, tmax);
        for (slot, (tr, trz)) in acc.iter_mut().zip(pt) {
            slot.0 = slot.0.mul(&tr.embed(ord));
            slot.1 = slot.1.mul(&trz.embed(ord));
        }
    }
    acc
}

/// Eigenvalue oracle with traces factored over the orthogonal blocks of D.
pub fn dim_oracle_factored(form: &DiscriminantForm, n: u32, k: i64) -> Result<DimensionReport> {
    let r = 2 - n as i64;
    let c = sign_c(k, r);
    let w = WeilRep::new(form.clone(), r)?;
    let s = w.s_scalar();
    let level = form.level().max(1) as usize;

    let p1 = kron_traces(form, 4, |a, _| a.conj());
    let t1 = projected_traces(&p1, &(&Cyclo::e(k, 4) * &s.conj()), c);
    let p2 = kron_traces(form, 6, |a, t| t.mul(a));
    let t2 = projected_traces(&p2, &(&Cyclo::e(-k, 6) * &s), c);
    let p3 = kron_traces(form, level, |_, t| t.conj());
    let t3 = projected_traces(&p3, &Cyclo::one(), c);
    mult_report(n, k, c, t1, t2, t3)
}

/// Bounds |α₁ − d/4| ≤ √|D²|/4 and |α₂ − d/3| ≤ (1 + √|D³|)/(3√3).
pub fn alpha_bounds_hold(form: &DiscriminantForm, rep: &DimensionReport) -> bool {
    let d2 = form.torsion_subgroup(2).order() as f64;
    let d3 = form.torsion_subgroup(3).order() as f64;
    let x1 = (&rep.alpha1 - &rep.d * rat(1, 4)).abs();
    let x2 = (&rep.alpha2 - &rep.d * rat(1, 3)).abs();
    // compare exactly where possible: x1² ≤ |D²|/16
    let ok1 = &x1 * &x1 <= BigRational::from_integer(BigInt::from(d2 as u64)) * rat(1, 16);
    let bound2 = (1.0 + d3.sqrt()) / (3.0 * 3f64.sqrt());
    let ok2 = x2.to_f64().unwrap_or(f64::INFINITY) <= bound2 + 1e-12;
    ok1 && ok2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> GenusSymbol {
        s.parse().unwrap()
    }

    #[test]
    fn level_one_weight_six() {
        let g = sym("II_(2,10)()");
        let rep = dim_report_symbol(&g, 6).unwrap();
        assert_eq!(rep.dim_m_int().unwrap(), 1);
        assert_eq!(rep.dim_s_int().unwrap(), 0);
    }

    #[test]
    fn oracles_agree_on_small_forms() {
        for (s, k) in [("II_(2,4)(3^+1)", 3), ("II_(2,6)(2_II^-2)", 4), ("II_(2,10)()", 6)] {
            let g = sym(s);
            let f = g.form();
            let closed = closed_form(&f, g.n, k).unwrap();
            assert_eq!(closed, dim_oracle(&f, g.n, k).unwrap(), "{s}");
            assert_eq!(closed, dim_oracle_factored(&f, g.n, k).unwrap(), "{s}");
        }
    }
}
