//! Truncated formal series in fractional powers of q, and eta quotients.
//!
//! A [`QSeries`] stores exponents as integer numerators over a common
//! denominator `den`, so q^(e/den). The series is known exactly for all
//! exponents strictly below `prec/den`; every operation tracks the order up to
//! which its result is guaranteed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};

/// Ring operations needed by series coefficients.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Inverse when it exists in the coefficient ring.
    fn inv_unit(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv_unit(&self) -> Option<Self> {
        if self.abs().is_one() {
            Some(self.clone())
        } else {
            None
        }
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv_unit(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Coeff for Cyclo {
    fn zero() -> Self {
        Cyclo::zero()
    }
    fn one() -> Self {
        Cyclo::one()
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv_unit(&self) -> Option<Self> {
        self.inv()
    }
    fn to_complex(&self) -> Complex64 {
        Cyclo::to_complex(self)
    }
}

/// Marker for an exactly known series (no truncation).
pub const EXACT: i64 = i64::MAX / 4;

#[derive(Clone)]
pub struct QSeries<C: Coeff = BigInt> {
    den: u32,
    terms: BTreeMap<i64, C>,
    prec: i64,
}

fn rat64(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

impl<C: Coeff> QSeries<C> {
    /// The zero series known up to q^(prec/den).
    pub fn zero(den: u32, prec: i64) -> Self {
        QSeries {
            den,
            terms: BTreeMap::new(),
            prec,
        }
    }

    pub fn one(den: u32, prec: i64) -> Self {
        QSeries::monomial(C::one(), 0, den, prec)
    }

    /// c·q^(e/den).
    pub fn monomial(c: C, e: i64, den: u32, prec: i64) -> Self {
        let mut s = QSeries::zero(den, prec);
        if e < prec && !c.is_zero() {
            s.terms.insert(e, c);
        }
        s
    }

    pub fn from_terms(den: u32, terms: impl IntoIterator<Item = (i64, C)>, prec: i64) -> Self {
        let mut s = QSeries::zero(den, prec);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    fn add_term(&mut self, e: i64, c: C) {
        if e >= self.prec || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let nv = v.add(&c);
                if nv.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = nv;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    /// Exclusive precision bound as a numerator over `den`.
    pub fn prec_num(&self) -> i64 {
        self.prec
    }

    pub fn precision(&self) -> Option<Rational64> {
        (self.prec < EXACT).then(|| rat64(self.prec, self.den as i64))
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rational64, &C)> + '_ {
        self.terms
            .iter()
            .map(move |(&e, c)| (rat64(e, self.den as i64), c))
    }

    pub fn raw_terms(&self) -> &BTreeMap<i64, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of q^x; `None` if x lies beyond the known precision.
    pub fn coeff(&self, x: Rational64) -> Option<C> {
        let scaled = x * Rational64::from_integer(self.den as i64);
        if !scaled.is_integer() {
            return if x < self.precision_or_max() {
                Some(C::zero())
            } else {
                None
            };
        }
        let e = scaled.to_integer();
        if e >= self.prec {
            return None;
        }
        Some(self.terms.get(&e).cloned().unwrap_or_else(C::zero))
    }

    fn precision_or_max(&self) -> Rational64 {
        self.precision()
            .unwrap_or_else(|| Rational64::from_integer(EXACT))
    }

    pub fn valuation_num(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn valuation(&self) -> Option<Rational64> {
        self.valuation_num().map(|e| rat64(e, self.den as i64))
    }

    /// Same series over the denominator `den`, which must be a multiple of the current one.
    pub fn with_den(&self, den: u32) -> Self {
        assert!(den.is_multiple_of(self.den), "denominator {den} is not a multiple of {}", self.den);
        let f = (den / self.den) as i64;
        QSeries {
            den,
            terms: self.terms.iter().map(|(&e, c)| (e * f, c.clone())).collect(),
            prec: if self.is_exact() { EXACT } else { self.prec * f },
        }
    }

    /// Reduce the denominator as far as the support and precision allow.
    pub fn normalized(&self) -> Self {
        let mut g = self.den as i64;
        for &e in self.terms.keys() {
            g = g.gcd(&e);
        }
        if !self.is_exact() {
            g = g.gcd(&self.prec);
        }
        let g = g.max(1);
        QSeries {
            den: (self.den as i64 / g) as u32,
            terms: self.terms.iter().map(|(&e, c)| (e / g, c.clone())).collect(),
            prec: if self.is_exact() { EXACT } else { self.prec / g },
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let den = a.den.lcm(&b.den);
        (a.with_den(den), b.with_den(den))
    }

    /// Drop every term at or beyond q^(prec/den) and lower the precision accordingly.
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        QSeries {
            den: self.den,
            terms: self
                .terms
                .range(..prec)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
            prec,
        }
    }

    pub fn truncate_at(&self, x: Rational64) -> Self {
        let scaled = x * Rational64::from_integer(self.den as i64);
        self.truncate(scaled.ceil().to_integer())
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = QSeries::aligned(self, o);
        let prec = a.prec.min(b.prec);
        let mut out = a.truncate(prec);
        for (&e, c) in b.terms.range(..prec) {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        QSeries {
            den: self.den,
            terms: self.terms.iter().map(|(&e, c)| (e, c.neg())).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return QSeries::zero(self.den, self.prec);
        }
        QSeries {
            den: self.den,
            terms: self
                .terms
                .iter()
                .filter_map(|(&e, c)| {
                    let v = c.mul(k);
                    (!v.is_zero()).then_some((e, v))
                })
                .collect(),
            prec: self.prec,
        }
    }

    /// Multiply by q^(e/den).
    pub fn shift(&self, e: i64) -> Self {
        QSeries {
            den: self.den,
            terms: self.terms.iter().map(|(&x, c)| (x + e, c.clone())).collect(),
            prec: if self.is_exact() { EXACT } else { self.prec + e },
        }
    }

    /// Multiply by q^x for a rational x.
    pub fn shift_by(&self, x: Rational64) -> Self {
        let den = self.den.lcm(&(*x.denom() as u32));
        let s = self.with_den(den);
        let e = (x * Rational64::from_integer(den as i64)).to_integer();
        s.shift(e)
    }

    /// Substitute q ↦ q^(a/b) (a, b > 0).
    pub fn dilate(&self, a: u32, b: u32) -> Self {
        QSeries {
            den: self.den * b,
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e * a as i64, c.clone()))
                .collect(),
            prec: if self.is_exact() { EXACT } else { self.prec * a as i64 },
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = QSeries::aligned(self, o);
        let va = a.valuation_num().unwrap_or(a.prec);
        let vb = b.valuation_num().unwrap_or(b.prec);
        let prec = match (a.is_exact(), b.is_exact()) {
            (true, true) => EXACT,
            (true, false) => b.prec + va,
            (false, true) => a.prec + vb,
            (false, false) => (a.prec + vb).min(b.prec + va),
        };
        let mut out = QSeries::zero(a.den, prec);
        for (&ea, ca) in &a.terms {
            if ea + vb >= prec {
                break;
            }
            for (&eb, cb) in &b.terms {
                if ea + eb >= prec {
                    break;
                }
                out.add_term(ea + eb, ca.mul(cb));
            }
        }
        out
    }

    /// Multiplicative inverse; the leading coefficient must be invertible.
    pub fn inverse(&self) -> Result<Self> {
        let v = self
            .valuation_num()
            .ok_or_else(|| Error::Invalid("inverse of the zero series".into()))?;
        let lead = &self.terms[&v];
        let lead_inv = lead
            .inv_unit()
            .ok_or_else(|| Error::Invalid(format!("leading coefficient {lead} is not a unit")))?;
        if self.is_exact() && self.terms.len() == 1 {
            return Ok(QSeries::monomial(lead_inv, -v, self.den, EXACT));
        }
        if self.is_exact() {
            return Err(Error::Invalid(
                "inverse of an exact non-monomial needs a truncation".into(),
            ));
        }
        // u = self / (lead q^v) = 1 + (higher terms), known below rel.
        let rel = self.prec - v;
        let u: Vec<(i64, C)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(&e, c)| (e - v, c.mul(&lead_inv)))
            .collect();
        // w = 1/u by the recurrence w_n = -Σ_{k>0} u_k w_{n-k}.
        let mut w: BTreeMap<i64, C> = BTreeMap::new();
        w.insert(0, C::one());
        for n in 1..rel {
            let mut acc = C::zero();
            for (k, uk) in &u {
                if *k > n {
                    break;
                }
                if let Some(wv) = w.get(&(n - k)) {
                    acc = acc.sub(&uk.mul(wv));
                }
            }
            if !acc.is_zero() {
                w.insert(n, acc);
            }
        }
        let out = QSeries {
            den: self.den,
            terms: w.into_iter().map(|(e, c)| (e, c.mul(&lead_inv))).collect(),
            prec: rel,
        };
        Ok(out.shift(-v))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut out = QSeries::one(self.den, EXACT);
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&sq);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(out)
    }

    /// Split into pieces supported on exponents ≡ j/n mod 1 for j = 0..n.
    pub fn split_by_exponent_class(&self, n: u32) -> Result<Vec<Self>> {
        if !n.is_multiple_of(self.den) {
            return Err(Error::Invalid(format!(
                "series denominator {} does not divide {n}",
                self.den
            )));
        }
        let s = self.with_den(n);
        let mut parts: Vec<Self> = (0..n).map(|_| QSeries::zero(n, s.prec)).collect();
        for (&e, c) in &s.terms {
            parts[e.rem_euclid(n as i64) as usize]
                .terms
                .insert(e, c.clone());
        }
        Ok(parts)
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(Rational64, &C) -> D) -> QSeries<D> {
        let mut out = QSeries::zero(self.den, self.prec);
        for (&e, c) in &self.terms {
            out.add_term(e, f(rat64(e, self.den as i64), c));
        }
        out
    }

    /// Numerical value of the truncated sum at τ.
    pub fn eval(&self, tau: Complex64) -> Complex64 {
        let two_pi_i = Complex64::new(0.0, std::f64::consts::TAU);
        self.terms
            .iter()
            .map(|(&e, c)| c.to_complex() * (two_pi_i * tau * (e as f64 / self.den as f64)).exp())
            .sum()
    }
}

/// Equality of the represented truncated series, independent of the denominator.
impl<C: Coeff> PartialEq for QSeries<C> {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = (self.normalized(), o.normalized());
        a.den == b.den && a.prec == b.prec && a.terms == b.terms
    }
}

impl<C: Coeff> fmt::Debug for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<C: Coeff> fmt::Display for QSeries<C> {
    /// `c0*q^(a0/b) + c1*q^(a1/b) + ... + O(q^(p/b))`, every exponent over the same `b`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{}*q^({}/{})", c, e, self.den))
            .collect();
        if !self.is_exact() {
            parts.push(format!("O(q^({}/{}))", self.prec, self.den));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for QSeries<BigInt> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("q-series: {m}"));
        let mut den: Option<u32> = None;
        let mut terms = Vec::new();
        let mut prec = EXACT;
        let parse_exp = |t: &str| -> Result<(i64, u32)> {
            let inner = t
                .strip_prefix("q^(")
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| bad(t))?;
            let (a, b) = inner.split_once('/').ok_or_else(|| bad(t))?;
            let a = a.trim().parse::<i64>().map_err(|_| bad(t))?;
            let b = b.trim().parse::<u32>().map_err(|_| bad(t))?;
            if b == 0 {
                return Err(bad("zero denominator"));
            }
            Ok((a, b))
        };
        let mut check_den = |b: u32| -> Result<()> {
            match den {
                None => {
                    den = Some(b);
                    Ok(())
                }
                Some(d) if d == b => Ok(()),
                Some(_) => Err(bad("mixed denominators")),
            }
        };
        if s.trim() == "0" {
            return Ok(QSeries::zero(1, EXACT));
        }
        for tok in s.split(" + ") {
            let tok = tok.trim();
            if let Some(inner) = tok.strip_prefix("O(").and_then(|x| x.strip_suffix(')')) {
                let (a, b) = parse_exp(inner)?;
                check_den(b)?;
                prec = a;
                continue;
            }
            let (c, e) = tok.split_once('*').ok_or_else(|| bad(tok))?;
            let c = c.trim().parse::<BigInt>().map_err(|_| bad(tok))?;
            let (a, b) = parse_exp(e.trim())?;
            check_den(b)?;
            terms.push((a, c));
        }
        Ok(QSeries::from_terms(den.unwrap_or(1), terms, prec))
    }
}

/// Π_{n≥1} (1 - q^n) through the pentagonal number theorem, known below q^m.
pub fn euler_product(m: i64) -> QSeries<BigInt> {
    let mut terms = Vec::new();
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = kk * (3 * kk - 1) / 2;
            if e < m {
                any = true;
                let sign = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                terms.push((e, BigInt::from(sign)));
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    QSeries::from_terms(1, terms, m)
}

/// η(τ) = q^(1/24) Π(1 - q^n), known below q^trunc.
pub fn eta_expansion(trunc: Rational64) -> Result<QSeries<BigInt>> {
    if trunc <= rat64(1, 24) {
        return Err(Error::Invalid("eta truncation must exceed 1/24".into()));
    }
    let m = (trunc - rat64(1, 24)).ceil().to_integer();
    Ok(euler_product(m).with_den(24).shift(1).truncate_at(trunc))
}

/// Exponents r_δ of an eta quotient Π η(δτ)^(r_δ) of level N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    pub level: u32,
    pub r: BTreeMap<u32, i64>,
}

impl EtaQuotientSpec {
    pub fn new(level: u32, r: impl IntoIterator<Item = (u32, i64)>) -> Result<Self> {
        let spec = EtaQuotientSpec {
            level,
            r: r.into_iter().filter(|&(_, e)| e != 0).collect(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.level as i64;
        if n < 1 {
            return Err(Error::Invalid("level must be positive".into()));
        }
        for &d in self.r.keys() {
            if d == 0 || !self.level.is_multiple_of(d) {
                return Err(Error::Invalid(format!("{d} does not divide the level {n}")));
            }
        }
        let s1: i64 = self.r.iter().map(|(&d, &e)| d as i64 * e).sum();
        let s2 = self
            .r
            .iter()
            .map(|(&d, &e)| rat64(e, d as i64))
            .fold(Rational64::zero(), |a, b| a + b);
        let s0: i64 = self.r.values().sum();
        if (n * s1) % 24 != 0 || !(s2 * rat64(n, 24)).is_integer() || s0 % 2 != 0 {
            return Err(Error::Invalid(format!(
                "eta quotient {self:?} fails the integrality hypotheses for Gamma1({n})"
            )));
        }
        Ok(())
    }

    pub fn weight(&self) -> i64 {
        self.r.values().sum::<i64>() / 2
    }

    /// c with χ(M) = e(b·c); reduced into [0, 1).
    pub fn character_exponent(&self) -> Rational64 {
        let s: i64 = self.r.iter().map(|(&d, &e)| d as i64 * e).sum();
        let x = rat64(s, 24);
        x - x.floor()
    }

    /// Order of vanishing at ∞ in q.
    pub fn leading_exponent(&self) -> Rational64 {
        let s: i64 = self.r.iter().map(|(&d, &e)| d as i64 * e).sum();
        rat64(s, 24)
    }
}

/// Π_δ E(q^(a_δ/b_δ))^(r_δ) times q^lead, known below q^trunc.
fn eta_like_product(
    factors: &[(u32, u32, i64)],
    lead: Rational64,
    trunc: Rational64,
) -> Result<QSeries<BigInt>> {
    let rel = trunc - lead;
    let mut out = QSeries::<BigInt>::one(1, EXACT);
    for &(a, b, r) in factors {
        // E(q^(a/b)) to relative order rel needs E to order rel·b/a.
        let m = (rel * rat64(b as i64, a as i64)).ceil().to_integer().max(1);
        let e = euler_product(m).dilate(a, b);
        out = out.mul(&e.pow(r)?);
    }
    Ok(out.shift_by(lead).truncate_at(trunc).normalized())
}

/// Expansion of Π η(δτ)^(r_δ) at ∞.
pub fn eta_quotient(spec: &EtaQuotientSpec, trunc: Rational64) -> Result<QSeries<BigInt>> {
    spec.validate()?;
    let factors: Vec<_> = spec.r.iter().map(|(&d, &e)| (d, 1, e)).collect();
    eta_like_product(&factors, spec.leading_exponent(), trunc)
}

/// f|_k S for f = Π η(δτ)^(r_δ): returns the scalar Π δ^(-r_δ/2)·(-i)^k and the series Π η(τ/δ)^(r_δ).
pub fn eta_quotient_at_zero(
    spec: &EtaQuotientSpec,
    trunc: Rational64,
) -> Result<(Cyclo, QSeries<BigInt>)> {
    spec.validate()?;
    let mut scalar = Cyclo::e(-spec.weight(), 4);
    for (&d, &r) in &spec.r {
        let root = Cyclo::sqrt_int(d as u64).pow(r.unsigned_abs() as u32);
        scalar = if r > 0 {
            &scalar * &root.inv().expect("nonzero root")
        } else {
            &scalar * &root
        };
    }
    let lead = spec
        .r
        .iter()
        .map(|(&d, &e)| rat64(e, 24 * d as i64))
        .fold(Rational64::zero(), |a, b| a + b);
    let factors: Vec<_> = spec.r.iter().map(|(&d, &e)| (1, d, e)).collect();
    Ok((scalar, eta_like_product(&factors, lead, trunc)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries) -> Vec<(Rational64, i64)> {
        s.terms().map(|(e, c)| (e, c.to_i64().unwrap())).collect()
    }

    #[test]
    fn eta_first_terms() {
        let e = eta_expansion(rat64(3, 1)).unwrap();
        let t = ints(&e);
        assert_eq!(
            t,
            vec![(rat64(1, 24), 1), (rat64(25, 24), -1), (rat64(49, 24), -1)]
        );
    }

    #[test]
    fn print_parse_round_trip() {
        let spec = EtaQuotientSpec::new(3, [(1, 1), (3, -3)]).unwrap();
        let f = eta_quotient(&spec, rat64(6, 1)).unwrap();
        let text = f.to_string();
        let back: QSeries = text.parse().unwrap();
        assert_eq!(back, f);
        assert!(text.starts_with("1*q^(-1/3) + -1*q^(2/3)"));
    }

    #[test]
    fn split_then_sum() {
        let spec = EtaQuotientSpec::new(3, [(1, 1), (3, -3)]).unwrap();
        let (_, g) = eta_quotient_at_zero(&spec, rat64(3, 1)).unwrap();
        let parts = g.split_by_exponent_class(3).unwrap();
        let sum = parts.iter().skip(1).fold(parts[0].clone(), |a, b| a.add(b));
        assert_eq!(sum, g.with_den(3));
    }

    #[test]
    fn character_and_weight() {
        let s = EtaQuotientSpec::new(3, [(1, 1), (3, -3)]).unwrap();
        assert_eq!(s.weight(), -1);
        assert_eq!(s.character_exponent(), rat64(2, 3));
        let s = EtaQuotientSpec::new(2, [(1, 4), (2, -8)]).unwrap();
        assert_eq!(s.weight(), -2);
        assert_eq!(s.character_exponent(), rat64(1, 2));
        assert!(EtaQuotientSpec::new(3, [(1, 1)]).is_err());
    }
}
