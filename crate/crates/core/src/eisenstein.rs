//! Coefficients q(γ, m) of the vector valued Eisenstein series of weight
//! 1 + n/2 for ρ*, normalized to constant term 2 at e_0.
//!
//! Only three cases have closed formulas here: unimodular lattices
//! (weights 6, 10, 14), II_(2,4)(3^+5), and the γ = 0 component of
//! II_(2,4)(2_II^+4 3^+1). Everything else is reported as unsupported.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{divisors, legendre, rat, sigma};
use crate::error::{Error, Result};
use crate::genus::{DiscriminantForm, GenusSymbol};

/// Bernoulli numbers with B_1 = -1/2.
pub fn bernoulli(k: u32) -> BigRational {
    let k = k as u64;
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for n in 1..=k {
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial(BigInt::from(n + 1), BigInt::from(j))) * bj;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b.pop().unwrap()
}

/// q(0, m) for a unimodular lattice and k ∈ {6, 10, 14}.
pub fn q_level1(k: u32, m: u64) -> Result<BigRational> {
    if ![6, 10, 14].contains(&k) {
        return Err(Error::Unsupported(format!("level 1 provider for weight {k}")));
    }
    if m == 0 {
        return Ok(rat(2, 1));
    }
    let c = BigRational::from_integer(BigInt::from(-4 * k as i64)) / bernoulli(k);
    Ok(c * BigRational::from_integer(sigma(k - 1, m)))
}

fn chi3(x: i64) -> i64 {
    legendre(x, 3) as i64
}

/// χ mod 12, that is (x/2)²·(x/3).
fn chi12(x: i64) -> i64 {
    if x % 2 == 0 {
        0
    } else {
        chi3(x)
    }
}

fn check_m(m: Rational64) -> Result<()> {
    if m.is_negative() {
        return Err(Error::Invalid(format!("negative exponent {m}")));
    }
    Ok(())
}

/// q(γ, m) for II_(2,4)(3^+5). Only γ = 0 versus γ ≠ 0 matters.
pub fn q_level3_2_4(gamma_zero: bool, m: Rational64) -> Result<BigRational> {
    check_m(m)?;
    let three_m = m * 3;
    if !three_m.is_integer() || (gamma_zero && !m.is_integer()) {
        return Err(Error::Invalid(format!("exponent {m} violates the norm congruence")));
    }
    if m.is_zero() {
        return Ok(rat(if gamma_zero { 2 } else { 0 }, 1));
    }
    let s = if gamma_zero {
        let m = m.to_integer();
        let mut s = 0i64;
        for d in divisors(m as u64) {
            let d = d as i64;
            s += -18 * chi3(m / d) * d * d - 18 * chi3(d) * d * d;
        }
        s
    } else {
        let n = three_m.to_integer();
        let mut s = 0i64;
        for d in divisors(n as u64) {
            let d = d as i64;
            s += -2 * chi3(n / d) * d * d;
        }
        s
    };
    Ok(rat(s, 1))
}

/// q(0, m) for II_(2,4)(2_II^+4 3^+1).
pub fn q_level6_zero(m: u64) -> BigRational {
    if m == 0 {
        return rat(2, 1);
    }
    let m = m as i64;
    let mut s = 0i64;
    for d in divisors(m as u64) {
        let d = d as i64;
        let e = m / d;
        let sign_d = if d % 2 == 0 { 1 } else { -1 };
        let sq2 = if e % 2 == 0 { 0 } else { 1 };
        s += (36 * chi12(e) - 18 * chi3(e) * sign_d + 4 * sq2 * chi3(d) - 2 * chi3(d) * sign_d) * d * d;
    }
    rat(-s, 1)
}

/// Σ_{d|m} a_d d^k.
pub fn divisor_sum(k: u32, m: u64, a: impl Fn(u64) -> i8) -> BigInt {
    divisors(m)
        .into_iter()
        .map(|d| BigInt::from(a(d)) * BigInt::from(d).pow(k))
        .sum()
}

/// Certified rational bracket lo ≤ ζ(k) ≤ hi.
pub fn zeta_bracket(k: u32) -> Result<(BigRational, BigRational)> {
    Ok(match k {
        0 | 1 => return Err(Error::Invalid(format!("ζ({k}) diverges"))),
        2 => (rat(16449, 10000), rat(16450, 10000)),
        3 => (rat(12020, 10000), rat(12021, 10000)),
        4 => (rat(10823, 10000), rat(10824, 10000)),
        _ => {
            // 1 + 2^-k < ζ(k) < 1 + 2^-k + 2^(1-k)/(k-1)
            let two_k = BigRational::from_integer(BigInt::from(2).pow(k));
            let lo = BigRational::one() + two_k.recip();
            let hi = &lo + rat(2, (k - 1) as i64) / two_k;
            (lo, hi)
        }
    })
}

/// Bounds m^k(2 - ζ(k)) and m^k ζ(k) for Σ_{d|m} a_d d^k with a_m = 1 and
/// a_d ∈ {-1, 0, 1}. The zeta value is replaced by its upper bracket.
pub fn divisor_sum_bounds(
    k: u32,
    m: u64,
    a: impl Fn(u64) -> i8,
) -> Result<(BigRational, BigRational)> {
    if k < 2 {
        return Err(Error::Invalid(format!("k = {k} < 2")));
    }
    if a(m) != 1 {
        return Err(Error::Invalid("a_m must be 1".into()));
    }
    if divisors(m).into_iter().any(|d| !(-1..=1).contains(&a(d))) {
        return Err(Error::Invalid("a_d must lie in {-1, 0, 1}".into()));
    }
    let (_, hi) = zeta_bracket(k)?;
    let mk = BigRational::from_integer(BigInt::from(m).pow(k));
    Ok((&mk * (rat(2, 1) - &hi), mk * hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProviderKind {
    Level1 { k: u32 },
    Level3Rank5,
    Level6Zero,
}

/// Eisenstein coefficients attached to one genus symbol.
#[derive(Clone, Debug)]
pub struct EisensteinProvider {
    pub symbol: GenusSymbol,
    pub form: DiscriminantForm,
    pub kind: ProviderKind,
}

impl EisensteinProvider {
    pub fn for_symbol(g: &GenusSymbol) -> Result<Self> {
        let text = g.to_string();
        let kind = match text.as_str() {
            "II_(2,10)()" | "II_(2,18)()" | "II_(2,26)()" => ProviderKind::Level1 { k: 1 + g.n / 2 },
            "II_(2,4)(3^+5)" => ProviderKind::Level3Rank5,
            "II_(2,4)(2_II^+4 3^+1)" => ProviderKind::Level6Zero,
            _ => {
                return Err(Error::Unsupported(format!(
                    "no Eisenstein coefficients available for {text}"
                )))
            }
        };
        Ok(EisensteinProvider {
            symbol: g.clone(),
            form: g.form(),
            kind,
        })
    }

    pub fn weight(&self) -> i64 {
        1 + self.symbol.n as i64 / 2
    }

    /// Whether q(γ, ·) is available.
    pub fn covers(&self, gamma: &[u32]) -> bool {
        match self.kind {
            ProviderKind::Level6Zero => gamma.iter().all(|&x| x == 0),
            _ => true,
        }
    }

    /// q(γ, m) for m ≥ 0 with m + Q(γ) ∈ Z.
    pub fn q(&self, gamma: &[u32], m: Rational64) -> Result<BigRational> {
        check_m(m)?;
        if !(m + self.form.q_value(gamma)).is_integer() {
            return Err(Error::Invalid(format!(
                "exponent {m} is not congruent to -Q(γ) mod 1"
            )));
        }
        let zero = gamma.iter().all(|&x| x == 0);
        if !self.covers(gamma) {
            return Err(Error::Unsupported(format!(
                "q(γ, m) for γ ≠ 0 on {}",
                self.symbol
            )));
        }
        match self.kind {
            ProviderKind::Level1 { k } => q_level1(k, m.to_integer() as u64),
            ProviderKind::Level3Rank5 => q_level3_2_4(zero, m),
            ProviderKind::Level6Zero => Ok(q_level6_zero(m.to_integer() as u64)),
        }
    }
}

/// Exact rational to f64, for display only.
pub fn to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}
