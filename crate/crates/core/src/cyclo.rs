//! Exact arithmetic in cyclotomic fields.
//!
//! [`Cyclo`] is an element of Q(ζ_m) stored canonically in the power basis
//! modulo Φ_m with a common denominator. [`ZZeta`] is the redundant group-ring
//! representation Z[x]/(x^n - 1), used for dense matrices where entries are
//! sums of n-th roots of unity and speed matters more than canonical form.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{divisors, factorize, lcm_u32};

fn poly_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the m-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    if let Some(p) = poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m as u64) {
        let d = d as u32;
        if d == m {
            continue;
        }
        let div = cyclotomic_poly(d);
        num = exact_div_monic(&num, &div);
    }
    let arc = Arc::new(num);
    poly_cache().lock().unwrap().insert(m, arc.clone());
    arc
}

fn exact_div_monic(num: &[i64], div: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = div.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in div.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn reduce_mod(coeffs: &mut Vec<BigInt>, phi: &[i64]) {
    let deg = phi.len() - 1;
    for i in (deg..coeffs.len()).rev() {
        if coeffs[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut coeffs[i]);
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                coeffs[i - deg + j] -= &c * pj;
            }
        }
    }
    coeffs.truncate(deg);
    coeffs.resize(deg, BigInt::zero());
}

/// Element of the cyclotomic field Q(ζ_order).
#[derive(Clone)]
pub struct Cyclo {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclo {
    fn from_raw(order: u32, mut coeffs: Vec<BigInt>, den: BigInt) -> Self {
        let phi = cyclotomic_poly(order);
        reduce_mod(&mut coeffs, &phi);
        let mut c = Cyclo {
            order,
            num: coeffs,
            den,
        };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for x in self.num.iter_mut() {
                *x = -x.clone();
            }
        }
        let mut g = self.den.clone();
        for x in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if self.num.iter().all(|x| x.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() && !g.is_zero() {
            self.den = &self.den / &g;
            for x in self.num.iter_mut() {
                *x = &*x / &g;
            }
        }
    }

    pub fn zero() -> Self {
        Cyclo::from_rational(&BigRational::zero())
    }

    pub fn one() -> Self {
        Cyclo::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Cyclo {
            order: 1,
            num: vec![BigInt::from(n)],
            den: BigInt::one(),
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Cyclo {
            order: 1,
            num: vec![n],
            den: BigInt::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Cyclo {
            order: 1,
            num: vec![r.numer().clone()],
            den: r.denom().clone(),
        }
    }

    /// e(num/den) = exp(2πi·num/den).
    pub fn e(num: i64, den: i64) -> Self {
        assert!(den != 0);
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let order = d as u32;
        let k = n.rem_euclid(d) as usize;
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Cyclo::from_raw(order, coeffs, BigInt::one())
    }

    /// e(x) for a rational x.
    pub fn e_rat(x: &BigRational) -> Self {
        let n = x.numer().to_i64().expect("numerator fits i64");
        let d = x.denom().to_i64().expect("denominator fits i64");
        Cyclo::e(n, d)
    }

    /// i = e(1/4).
    pub fn i() -> Self {
        Cyclo::e(1, 4)
    }

    /// Exact positive square root of a positive integer, via quadratic Gauss sums.
    pub fn sqrt_int(n: u64) -> Self {
        assert!(n > 0);
        let mut out = Cyclo::one();
        let mut rational = BigInt::one();
        for (p, e) in factorize(n) {
            rational *= BigInt::from(p).pow(e / 2);
            if e % 2 == 1 {
                out = &out * &Cyclo::sqrt_prime(p);
            }
        }
        &out * &Cyclo::from_bigint(rational)
    }

    fn sqrt_prime(p: u64) -> Self {
        if p == 2 {
            return &Cyclo::e(1, 8) + &Cyclo::e(-1, 8);
        }
        let mut g = Cyclo::zero();
        for x in 0..p as i64 {
            g = &g + &Cyclo::e(x * x, p as i64);
        }
        if p % 4 == 1 {
            g
        } else {
            // g = i·√p
            &g * &Cyclo::e(-1, 4)
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The same element viewed in Q(ζ_m); `self.order` must divide m.
    pub fn embed(&self, m: u32) -> Self {
        if m == self.order {
            return self.clone();
        }
        assert!(m.is_multiple_of(self.order), "cannot embed order {} into {}", self.order, m);
        let step = (m / self.order) as usize;
        let mut coeffs = vec![BigInt::zero(); (self.num.len().max(1) - 1) * step + 1];
        for (i, c) in self.num.iter().enumerate() {
            coeffs[i * step] = c.clone();
        }
        Cyclo::from_raw(m, coeffs, self.den.clone())
    }

    fn common(a: &Cyclo, b: &Cyclo) -> (Cyclo, Cyclo) {
        let m = lcm_u32(a.order, b.order);
        (a.embed(m), b.embed(m))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }

    /// Galois automorphism ζ ↦ ζ^k (k coprime to the order).
    pub fn galois(&self, k: i64) -> Self {
        let m = self.order as i64;
        let mut coeffs = vec![BigInt::zero(); m as usize];
        for (i, c) in self.num.iter().enumerate() {
            let j = ((i as i64) * k).rem_euclid(m) as usize;
            coeffs[j] += c;
        }
        Cyclo::from_raw(self.order, coeffs, self.den.clone())
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn real_part(&self) -> Self {
        let s = self + &self.conj();
        &s * &Cyclo::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    /// Returns the value if it lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).any(|x| !x.is_zero()) {
            return None;
        }
        let c0 = self.num.first().cloned().unwrap_or_else(BigInt::zero);
        Some(BigRational::new(c0, self.den.clone()))
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|r| r.denom().is_one())
            .map(|r| r.numer().clone())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let m = self.order as i64;
        let mut rest = Cyclo::one();
        for k in 2..m.max(2) {
            if k.gcd(&m) == 1 {
                rest = &rest * &self.galois(k);
            }
        }
        let norm = (self * &rest).to_rational()?;
        Some(&rest * &Cyclo::from_rational(&(BigRational::one() / norm)))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        self * &Cyclo::from_rational(r)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Cyclo::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn to_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut z = Complex64::new(0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            let t = std::f64::consts::TAU * i as f64 / self.order as f64;
            z += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN) / den, t);
        }
        z
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Cyclo::common(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for Cyclo {}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", r);
        }
        let mut first = true;
        write!(f, "(")?;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*z{}^{}", c, self.order, i)?;
        }
        write!(f, ")")?;
        if !self.den.is_one() {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        let (a, b) = Cyclo::common(self, rhs);
        let coeffs = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        Cyclo::from_raw(a.order, coeffs, &a.den * &b.den)
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        self + &(-rhs)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            order: self.order,
            num: self.num.iter().map(|x| -x).collect(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        if self.order == 1 || rhs.order == 1 {
            let (s, v) = if self.order == 1 { (self, rhs) } else { (rhs, self) };
            let k = &s.num[0];
            return Cyclo::from_raw(
                v.order,
                v.num.iter().map(|x| x * k).collect(),
                &s.den * &v.den,
            );
        }
        let (a, b) = Cyclo::common(self, rhs);
        let n = a.num.len();
        let mut coeffs = vec![BigInt::zero(); 2 * n];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    coeffs[i + j] += x * y;
                }
            }
        }
        Cyclo::from_raw(a.order, coeffs, &a.den * &b.den)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

/// Element of Z[x]/(x^n - 1): an integer combination of n-th roots of unity.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct ZZeta {
    c: Vec<i128>,
}

impl ZZeta {
    pub fn zero(n: u32) -> Self {
        ZZeta {
            c: vec![0; n as usize],
        }
    }

    /// ζ_n^k.
    pub fn root(n: u32, k: i64) -> Self {
        let mut z = ZZeta::zero(n);
        z.c[k.rem_euclid(n as i64) as usize] = 1;
        z
    }

    pub fn from_int(n: u32, v: i128) -> Self {
        let mut z = ZZeta::zero(n);
        z.c[0] = v;
        z
    }

    pub fn order(&self) -> u32 {
        self.c.len() as u32
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.c
    }

    pub fn is_zero_repr(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn add_assign(&mut self, other: &ZZeta) {
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += b;
        }
    }

    pub fn scale(&self, k: i128) -> ZZeta {
        ZZeta {
            c: self.c.iter().map(|x| x * k).collect(),
        }
    }

    /// Multiply by ζ_n^k.
    pub fn rotate(&self, k: i64) -> ZZeta {
        let n = self.c.len() as i64;
        let mut out = vec![0; n as usize];
        for (i, &x) in self.c.iter().enumerate() {
            out[(i as i64 + k).rem_euclid(n) as usize] = x;
        }
        ZZeta { c: out }
    }

    pub fn mul(&self, other: &ZZeta) -> ZZeta {
        let n = self.c.len();
        let mut out = vec![0i128; n];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.c.iter().enumerate() {
                if y != 0 {
                    let k = if i + j >= n { i + j - n } else { i + j };
                    out[k] += x * y;
                }
            }
        }
        ZZeta { c: out }
    }

    /// Multiply-accumulate `self += a * b`.
    pub fn fma(&mut self, a: &ZZeta, b: &ZZeta) {
        let n = self.c.len();
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if y != 0 {
                    let k = if i + j >= n { i + j - n } else { i + j };
                    self.c[k] += x * y;
                }
            }
        }
    }

    pub fn conj(&self) -> ZZeta {
        let n = self.c.len();
        let mut out = vec![0; n];
        for (i, &x) in self.c.iter().enumerate() {
            out[(n - i) % n] = x;
        }
        ZZeta { c: out }
    }

    /// The same element viewed in Z[x]/(x^m - 1), m a multiple of the order.
    pub fn embed(&self, m: u32) -> ZZeta {
        let n = self.c.len() as u32;
        assert!(m.is_multiple_of(n), "cannot embed order {n} into {m}");
        let step = (m / n) as usize;
        let mut out = vec![0; m as usize];
        for (i, &x) in self.c.iter().enumerate() {
            out[i * step] = x;
        }
        ZZeta { c: out }
    }

    /// Sum of coefficients times ζ^(k·i) with ζ^(n)=1, i.e. the value under x ↦ x^k.
    pub fn galois(&self, k: i64) -> ZZeta {
        let n = self.c.len() as i64;
        let mut out = vec![0; n as usize];
        for (i, &x) in self.c.iter().enumerate() {
            out[(i as i64 * k).rem_euclid(n) as usize] += x;
        }
        ZZeta { c: out }
    }

    pub fn to_cyclo(&self) -> Cyclo {
        let coeffs = self.c.iter().map(|&x| BigInt::from(x)).collect();
        Cyclo::from_raw(self.c.len() as u32, coeffs, BigInt::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).len() - 1, 48);
    }

    #[test]
    fn roots_and_sums() {
        let w = Cyclo::e(1, 3);
        let s = &(&Cyclo::one() + &w) + &w.pow(2);
        assert!(s.is_zero());
        assert_eq!(Cyclo::e(1, 4).pow(2), Cyclo::from_int(-1));
        assert_eq!(Cyclo::e(2, 8), Cyclo::i());
    }

    #[test]
    fn square_roots_square_back() {
        for n in [2u64, 3, 5, 6, 7, 12, 243, 30, 64, 11] {
            let r = Cyclo::sqrt_int(n);
            assert_eq!(&r * &r, Cyclo::from_int(n as i64), "n = {n}");
            assert!((r.to_complex().re - (n as f64).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn inverse_and_real_part() {
        let z = &Cyclo::sqrt_int(3) + &Cyclo::e(1, 8);
        let zi = z.inv().unwrap();
        assert_eq!(&z * &zi, Cyclo::one());
        let re = Cyclo::e(1, 6).real_part();
        assert_eq!(re.to_rational(), Some(rat(1, 2)));
    }

    #[test]
    fn zzeta_matches_cyclo() {
        let a = &ZZeta::root(6, 1).scale(3);
        let b = ZZeta::root(6, 4);
        let p = a.mul(&b);
        assert_eq!(p.to_cyclo(), &Cyclo::from_int(3) * &Cyclo::e(5, 6));
        assert_eq!(ZZeta::root(6, 1).conj().to_cyclo(), Cyclo::e(-1, 6));
    }
}
