//! Genus symbols of square-free level and explicit discriminant forms.
//!
//! Odd components p^(εn) are modelled as (Z/p)^n with Q(x) = Σ a_i x_i²/p,
//! where a_i = 1 for i < n and the last a_n is fixed by (Π a_i / p) = ε·(2/p)^n.
//! With this choice the Gauss sum of p^(εn) is p^(n/2)·e(-excess/8) with
//! excess = n(p-1) + 4[ε = -1]. Even 2-adic components 2_II^(εn) are sums of
//! U (Q = xy/2) and at most one V (Q = (x²+xy+y²)/2), a V present iff ε = -1.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, kronecker_two, legendre, non_residue};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JordanComponent {
    pub p: u32,
    pub rank: u32,
    pub sign: i8,
}

impl JordanComponent {
    pub fn new(p: u32, rank: u32, sign: i8) -> Self {
        JordanComponent { p, rank, sign }
    }

    /// p-excess for odd p, oddity for p = 2 (always even type here).
    pub fn excess(&self) -> i64 {
        let neg = if self.sign < 0 { 4 } else { 0 };
        if self.p == 2 {
            neg
        } else {
            (self.rank as i64 * (self.p as i64 - 1) + neg).rem_euclid(8)
        }
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.rank)
    }

    fn check(&self) -> Result<()> {
        if !is_prime(self.p as u64) {
            return Err(Error::Parse(format!("{} is not prime", self.p)));
        }
        if self.rank == 0 {
            return Err(Error::Parse("component of rank 0".into()));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::Parse("sign must be + or -".into()));
        }
        if self.p == 2 && self.rank % 2 == 1 {
            return Err(Error::Invalid(format!(
                "2_II^{}{} has odd rank and cannot be realized",
                sign_char(self.sign),
                self.rank
            )));
        }
        Ok(())
    }
}

fn sign_char(s: i8) -> char {
    if s < 0 {
        '-'
    } else {
        '+'
    }
}

impl fmt::Display for JordanComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 2 {
            write!(f, "2_II^{}{}", sign_char(self.sign), self.rank)
        } else {
            write!(f, "{}^{}{}", self.p, sign_char(self.sign), self.rank)
        }
    }
}

/// Genus symbol II_(2,n)(components) of an even lattice of signature (2, n).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenusSymbol {
    pub n: u32,
    pub components: Vec<JordanComponent>,
}

impl GenusSymbol {
    pub fn new(n: u32, mut components: Vec<JordanComponent>) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::Parse(format!("signature (2,{n}) is not even")));
        }
        components.sort();
        for w in components.windows(2) {
            if w[0].p == w[1].p {
                return Err(Error::Parse(format!("prime {} repeated", w[0].p)));
            }
        }
        for c in &components {
            c.check()?;
        }
        Ok(GenusSymbol { n, components })
    }

    /// Signature b⁺ - b⁻ = 2 - n.
    pub fn r(&self) -> i64 {
        2 - self.n as i64
    }

    pub fn level(&self) -> u64 {
        self.components.iter().map(|c| c.p as u64).product()
    }

    pub fn order(&self) -> u128 {
        self.components.iter().map(|c| c.order()).product()
    }

    pub fn component(&self, p: u32) -> Option<&JordanComponent> {
        self.components.iter().find(|c| c.p == p)
    }

    /// Signature mod 8 implied by the components (oddity minus p-excesses).
    pub fn signature_mod8(&self) -> i64 {
        let mut s = 0;
        for c in &self.components {
            if c.p == 2 {
                s += c.excess();
            } else {
                s -= c.excess();
            }
        }
        s.rem_euclid(8)
    }

    pub fn milgram_ok(&self) -> bool {
        self.signature_mod8() == self.r().rem_euclid(8)
    }

    /// Whether an even lattice of signature (2, n) with this discriminant form exists.
    pub fn exists(&self) -> bool {
        if !self.milgram_ok() {
            return false;
        }
        let rank = self.n + 2;
        let d = self.order();
        for c in &self.components {
            if c.rank > rank {
                return false;
            }
            if c.rank == rank {
                let cofactor = d / c.order();
                let want = if c.p == 2 {
                    kronecker_two((cofactor % 8) as i64)
                } else {
                    legendre((cofactor % c.p as u128) as i64, c.p as i64)
                };
                if want != c.sign as i32 {
                    return false;
                }
            }
        }
        true
    }

    pub fn form(&self) -> DiscriminantForm {
        DiscriminantForm::realize(&self.components).expect("validated components")
    }
}

impl fmt::Display for GenusSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "II_(2,{})({})", self.n, parts.join(" "))
    }
}

impl FromStr for GenusSymbol {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("malformed genus symbol: {m} in {text:?}"));
        let t = text.trim().replace('\u{2212}', "-");
        let rest = t
            .strip_prefix("II_(")
            .ok_or_else(|| bad("expected II_(b+,b-)"))?;
        let (sig, rest) = rest.split_once(')').ok_or_else(|| bad("unclosed signature"))?;
        let (bp, bm) = sig.split_once(',').ok_or_else(|| bad("signature needs two entries"))?;
        let bp: u32 = bp.trim().parse().map_err(|_| bad("bad b+"))?;
        let n: u32 = bm.trim().parse().map_err(|_| bad("bad b-"))?;
        if bp != 2 {
            return Err(bad("only signature (2,n) is supported"));
        }
        let body = rest
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| bad("expected parenthesised component list"))?;
        let mut comps = Vec::new();
        let mut last = 0u32;
        for tok in body.split_whitespace() {
            let (base, exp) = tok.split_once('^').ok_or_else(|| bad("component lacks '^'"))?;
            let p: u32 = if let Some(b) = base.strip_suffix("_II") {
                if b != "2" {
                    return Err(bad("_II marker only applies to p = 2"));
                }
                2
            } else {
                let p: u32 = base.parse().map_err(|_| bad("bad prime"))?;
                if p == 2 {
                    return Err(Error::Unsupported(format!(
                        "odd 2-adic component {tok:?} (square-free level needs 2_II)"
                    )));
                }
                p
            };
            let mut chars = exp.chars();
            let sign = match chars.next() {
                Some('+') => 1,
                Some('-') => -1,
                _ => return Err(bad("component sign must be + or -")),
            };
            let rank: u32 = chars.as_str().parse().map_err(|_| bad("bad rank"))?;
            if p <= last {
                return Err(if p == last {
                    bad("repeated prime")
                } else {
                    bad("primes must be ascending")
                });
            }
            last = p;
            comps.push(JordanComponent::new(p, rank, sign));
        }
        GenusSymbol::new(n, comps)
    }
}

/// Orthogonal building block of a discriminant form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    /// Z/p with Q(x) = a x²/p.
    Diag { p: u32, a: u32 },
    /// (Z/p)² with Q(x, y) = xy/p.
    Hyp { p: u32 },
    /// (Z/2)² with Q(x, y) = (x² + xy + y²)/2.
    V2,
}

impl Block {
    pub fn prime(&self) -> u32 {
        match *self {
            Block::Diag { p, .. } | Block::Hyp { p } => p,
            Block::V2 => 2,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Block::Diag { .. } => 1,
            _ => 2,
        }
    }

    pub fn size(&self) -> u32 {
        self.prime().pow(self.dim() as u32)
    }

    /// p·Q(x) as an integer mod p.
    pub fn norm_p(&self, x: &[u32]) -> u32 {
        let p = self.prime() as u64;
        let v = match *self {
            Block::Diag { a, .. } => a as u64 * x[0] as u64 * x[0] as u64,
            Block::Hyp { .. } => x[0] as u64 * x[1] as u64,
            Block::V2 => (x[0] * x[0] + x[0] * x[1] + x[1] * x[1]) as u64,
        };
        (v % p) as u32
    }

    /// p·(x, y) as an integer mod p.
    pub fn bilinear_p(&self, x: &[u32], y: &[u32]) -> u32 {
        let p = self.prime() as u64;
        let v = match *self {
            Block::Diag { a, .. } => 2 * a as u64 * x[0] as u64 * y[0] as u64,
            Block::Hyp { .. } | Block::V2 => (x[0] * y[1] + x[1] * y[0]) as u64,
        };
        (v % p) as u32
    }

    fn points(&self) -> Vec<Vec<u32>> {
        let p = self.prime();
        match self.dim() {
            1 => (0..p).map(|x| vec![x]).collect(),
            _ => (0..p)
                .flat_map(|x| (0..p).map(move |y| vec![x, y]))
                .collect(),
        }
    }

    /// Brute-force Σ_x e(n·Q(x)) over the block.
    pub fn gauss_sum(&self, n: i64) -> Cyclo {
        let p = self.prime() as i64;
        let mut counts = vec![0i64; p as usize];
        for x in self.points() {
            let v = (n * self.norm_p(&x) as i64).rem_euclid(p);
            counts[v as usize] += 1;
        }
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold(Cyclo::zero(), |acc, (j, &c)| {
                &acc + &(&Cyclo::e(j as i64, p) * &Cyclo::from_int(c))
            })
    }
}

/// An element of D as its coordinate vector, one entry per block coordinate.
pub type DElement = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantForm {
    pub components: Vec<JordanComponent>,
    pub blocks: Vec<Block>,
    moduli: Vec<u32>,
    level: u64,
}

impl DiscriminantForm {
    pub fn realize(components: &[JordanComponent]) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut comps = components.to_vec();
        comps.sort();
        for c in &comps {
            c.check()?;
            if c.p == 2 {
                let v = usize::from(c.sign < 0);
                for _ in 0..(c.rank as usize / 2 - v) {
                    blocks.push(Block::Hyp { p: 2 });
                }
                if v == 1 {
                    blocks.push(Block::V2);
                }
            } else {
                let p = c.p;
                for _ in 1..c.rank {
                    blocks.push(Block::Diag { p, a: 1 });
                }
                let want = c.sign as i32 * legendre(2, p as i64).pow(c.rank);
                let a = if want == 1 { 1 } else { non_residue(p as u64) as u32 };
                blocks.push(Block::Diag { p, a });
            }
        }
        Ok(DiscriminantForm::from_blocks(comps, blocks))
    }

    /// A form given directly by blocks; `components` is informational.
    pub fn from_blocks(components: Vec<JordanComponent>, blocks: Vec<Block>) -> Self {
        let moduli: Vec<u32> = blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.prime(), b.dim()))
            .collect();
        let mut primes: Vec<u32> = blocks.iter().map(|b| b.prime()).collect();
        primes.sort();
        primes.dedup();
        let level = primes.iter().map(|&p| p as u64).product();
        DiscriminantForm {
            components,
            blocks,
            moduli,
            level,
        }
    }

    pub fn trivial() -> Self {
        DiscriminantForm::from_blocks(vec![], vec![])
    }

    pub fn order(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn zero(&self) -> DElement {
        vec![0; self.moduli.len()]
    }

    /// Mixed-radix decoding of an index in 0..|D|.
    pub fn element(&self, mut idx: usize) -> DElement {
        let mut out = vec![0; self.moduli.len()];
        for (i, &m) in self.moduli.iter().enumerate().rev() {
            out[i] = (idx % m as usize) as u32;
            idx /= m as usize;
        }
        out
    }

    pub fn index(&self, x: &[u32]) -> usize {
        let mut idx = 0usize;
        for (&xi, &m) in x.iter().zip(&self.moduli) {
            idx = idx * m as usize + (xi % m) as usize;
        }
        idx
    }

    pub fn elements(&self) -> impl Iterator<Item = DElement> + '_ {
        (0..self.order() as usize).map(move |i| self.element(i))
    }

    pub fn neg(&self, x: &[u32]) -> DElement {
        x.iter()
            .zip(&self.moduli)
            .map(|(&a, &m)| (m - a % m) % m)
            .collect()
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> DElement {
        x.iter()
            .zip(y)
            .zip(&self.moduli)
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect()
    }

    pub fn scale(&self, k: i64, x: &[u32]) -> DElement {
        x.iter()
            .zip(&self.moduli)
            .map(|(&a, &m)| (k.rem_euclid(m as i64) as u64 * a as u64 % m as u64) as u32)
            .collect()
    }

    fn block_slices<'a>(&'a self, x: &'a [u32]) -> impl Iterator<Item = (&'a Block, &'a [u32])> {
        let mut off = 0;
        self.blocks.iter().map(move |b| {
            let s = &x[off..off + b.dim()];
            off += b.dim();
            (b, s)
        })
    }

    /// N·Q(x) mod N, where N is the level.
    pub fn norm_num(&self, x: &[u32]) -> u64 {
        let n = self.level.max(1);
        let mut acc = 0u64;
        for (b, s) in self.block_slices(x) {
            acc += b.norm_p(s) as u64 * (n / b.prime() as u64);
        }
        acc % n
    }

    /// N·(x, y) mod N.
    pub fn bilinear_num(&self, x: &[u32], y: &[u32]) -> u64 {
        let n = self.level.max(1);
        let mut acc = 0u64;
        let mut off = 0;
        for b in &self.blocks {
            let d = b.dim();
            acc += b.bilinear_p(&x[off..off + d], &y[off..off + d]) as u64 * (n / b.prime() as u64);
            off += d;
        }
        acc % n
    }

    /// Q(x) in [0, 1).
    pub fn q_value(&self, x: &[u32]) -> Rational64 {
        Rational64::new(self.norm_num(x) as i64, self.level.max(1) as i64)
    }

    /// (x, y) in [0, 1).
    pub fn bilinear(&self, x: &[u32], y: &[u32]) -> Rational64 {
        Rational64::new(self.bilinear_num(x, y) as i64, self.level.max(1) as i64)
    }

    /// G(n) = Σ_γ e(n Q(γ)), as a product of block sums.
    pub fn gauss_sum(&self, n: i64) -> Cyclo {
        let mut tally: BTreeMap<(u32, u8, u32), u32> = BTreeMap::new();
        for b in &self.blocks {
            let key = match *b {
                Block::Diag { p, a } => (p, 0, a),
                Block::Hyp { p } => (p, 1, 0),
                Block::V2 => (2, 2, 0),
            };
            *tally.entry(key).or_default() += 1;
        }
        let mut out = Cyclo::one();
        for ((p, kind, a), cnt) in tally {
            let b = match kind {
                0 => Block::Diag { p, a },
                1 => Block::Hyp { p },
                _ => Block::V2,
            };
            out = &out * &b.gauss_sum(n).pow(cnt);
        }
        out
    }

    /// Whole-group brute force of G(n), for cross-checks on small forms.
    pub fn gauss_sum_brute(&self, n: i64) -> Cyclo {
        let level = self.level.max(1) as i64;
        let mut counts = vec![0i64; level as usize];
        for x in self.elements() {
            counts[(n * self.norm_num(&x) as i64).rem_euclid(level) as usize] += 1;
        }
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold(Cyclo::zero(), |acc, (j, &c)| {
                &acc + &(&Cyclo::e(j as i64, level) * &Cyclo::from_int(c))
            })
    }

    /// G(n)/√|D| from per-block closed forms.
    pub fn normalized_gauss(&self, n: i64) -> Cyclo {
        let mut rational = BigRational::one();
        let mut i_power = 0i64;
        let mut sqrt_part = 1u64;
        for b in &self.blocks {
            let p = b.prime() as i64;
            let divides = n.rem_euclid(p) == 0;
            match *b {
                Block::Diag { a, .. } => {
                    if divides {
                        sqrt_part *= p as u64;
                    } else {
                        if legendre(n * a as i64, p) < 0 {
                            rational = -rational;
                        }
                        if p % 4 == 3 {
                            i_power += 1;
                        }
                    }
                }
                Block::Hyp { .. } => {
                    if divides {
                        rational *= BigInt::from(p);
                    }
                }
                Block::V2 => {
                    if divides {
                        rational *= BigInt::from(2);
                    } else {
                        rational = -rational;
                    }
                }
            }
        }
        // Collect p·p pairs from the square-root part.
        let mut s = 1u64;
        let mut r = sqrt_part;
        let mut f = 2u64;
        while f * f <= r {
            while r.is_multiple_of(f * f) {
                r /= f * f;
                s *= f;
            }
            f += 1;
        }
        let base = Cyclo::from_rational(&(rational * BigInt::from(s)));
        let unit = Cyclo::e(i_power.rem_euclid(4), 4);
        let root = if r == 1 { Cyclo::one() } else { Cyclo::sqrt_int(r) };
        &(&base * &unit) * &root
    }

    /// D^m = {γ : mγ = 0}; for square-free level this is the part at primes dividing m.
    pub fn torsion_subgroup(&self, m: u64) -> DiscriminantForm {
        let comps = self
            .components
            .iter()
            .copied()
            .filter(|c| m.is_multiple_of(c.p as u64))
            .collect();
        let blocks = self
            .blocks
            .iter()
            .copied()
            .filter(|b| m.is_multiple_of(b.prime() as u64))
            .collect();
        DiscriminantForm::from_blocks(comps, blocks)
    }

    /// Distribution of p·Q over one prime's blocks, indexed by t ∈ Z/p.
    fn prime_norm_counts(&self, p: u32) -> Vec<u128> {
        let blocks: Vec<&Block> = self.blocks.iter().filter(|b| b.prime() == p).collect();
        let diag_only = p != 2 && blocks.iter().all(|b| matches!(b, Block::Diag { .. }));
        if diag_only {
            let delta: i64 = blocks
                .iter()
                .map(|b| match b {
                    Block::Diag { a, .. } => *a as i64,
                    _ => 1,
                })
                .fold(1, |x, y| x * y % p as i64);
            return odd_norm_counts(p, blocks.len() as u32, delta);
        }
        let mut dist = vec![0u128; p as usize];
        dist[0] = 1;
        for b in blocks {
            let mut bd = vec![0u128; p as usize];
            for x in b.points() {
                bd[b.norm_p(&x) as usize] += 1;
            }
            let mut next = vec![0u128; p as usize];
            for (i, &u) in dist.iter().enumerate() {
                if u == 0 {
                    continue;
                }
                for (j, &v) in bd.iter().enumerate() {
                    next[(i + j) % p as usize] += u * v;
                }
            }
            dist = next;
        }
        dist
    }

    /// Counts of γ with Q(γ) = j/N for j in 0..N, via CRT convolution over primes.
    pub fn norm_counts(&self) -> Vec<u128> {
        let n = self.level.max(1) as usize;
        let mut primes: Vec<u32> = self.blocks.iter().map(|b| b.prime()).collect();
        primes.sort();
        primes.dedup();
        let mut acc = vec![0u128; n];
        acc[0] = 1;
        for p in primes {
            let dist = self.prime_norm_counts(p);
            let step = n / p as usize;
            let mut next = vec![0u128; n];
            for (j, &u) in acc.iter().enumerate() {
                if u == 0 {
                    continue;
                }
                for (t, &v) in dist.iter().enumerate() {
                    if v != 0 {
                        next[(j + t * step) % n] += u * v;
                    }
                }
            }
            acc = next;
        }
        acc
    }

    /// (Σ_γ {−Q(γ)}, #{γ : Q(γ) = 0}) without materialising counts over all of Z/N
    /// for the largest prime: the other primes are convolved over Z/M, M = N/P,
    /// and the last prime is summed against them directly in O(N).
    pub fn frac_sum_and_zeros(&self) -> (BigRational, u128) {
        let mut primes: Vec<u32> = self.blocks.iter().map(|b| b.prime()).collect();
        primes.sort();
        primes.dedup();
        let Some(&big) = primes.last() else {
            return (BigRational::from_integer(BigInt::from(0)), 1);
        };
        let n = self.level as u128;
        let m = (self.level / big as u64) as usize;
        let mut acc = vec![0u128; m];
        acc[0] = 1;
        for &p in &primes[..primes.len() - 1] {
            let dist = self.prime_norm_counts(p);
            let step = m / p as usize;
            let mut next = vec![0u128; m];
            for (j, &u) in acc.iter().enumerate() {
                if u == 0 {
                    continue;
                }
                for (t, &v) in dist.iter().enumerate() {
                    if v != 0 {
                        next[(j + t * step) % m] += u * v;
                    }
                }
            }
            acc = next;
        }
        let last = self.prime_norm_counts(big);
        let pb = big as u128;
        let mm = m as u128;
        // Q = u/M + t/P = (u·P + t·M)/N; {−Q} = ((−(uP + tM)) mod N)/N.
        let mut total = 0u128;
        let mut zeros = 0u128;
        for (u, &cu) in acc.iter().enumerate() {
            if cu == 0 {
                continue;
            }
            for (t, &ct) in last.iter().enumerate() {
                let y = (u as u128 * pb + t as u128 * mm) % n;
                let w = cu * ct;
                if y == 0 {
                    zeros += w;
                } else {
                    total += w * (n - y);
                }
            }
        }
        (
            BigRational::new(BigInt::from(total), BigInt::from(n)),
            zeros,
        )
    }

    /// Norm counts by enumerating every element.
    pub fn norm_counts_brute(&self) -> Vec<u128> {
        let mut out = vec![0u128; self.level.max(1) as usize];
        for x in self.elements() {
            out[self.norm_num(&x) as usize] += 1;
        }
        out
    }
}

/// #{x ∈ (Z/p)^n : Σ a_i x_i² ≡ t} for t ∈ Z/p, with δ = Π a_i.
pub fn odd_norm_counts(p: u32, n: u32, delta: i64) -> Vec<u128> {
    let pp = p as u128;
    let mut out = vec![0u128; p as usize];
    if n == 0 {
        out[0] = 1;
        return out;
    }
    let base = pp.pow(n - 1);
    let pi = p as i64;
    if n % 2 == 1 {
        let h = pp.pow((n - 1) / 2);
        let sgn = if ((n - 1) / 2) % 2 == 1 { -1 } else { 1 };
        out[0] = base;
        for t in 1..p {
            let eta = legendre(sgn * t as i64 * delta, pi);
            out[t as usize] = if eta > 0 { base + h } else { base - h };
        }
    } else {
        let sgn = if (n / 2) % 2 == 1 { -1 } else { 1 };
        let eta = legendre(sgn * delta, pi);
        let h = pp.pow(n / 2 - 1);
        out[0] = if eta > 0 { base + (pp - 1) * h } else { base - (pp - 1) * h };
        for t in 1..p {
            out[t as usize] = if eta > 0 { base - h } else { base + h };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_and_u_norms() {
        let v = GenusSymbol::from_str("II_(2,6)(2_II^-2)").unwrap().form();
        assert_eq!(v.norm_counts(), vec![1, 3]);
        let u = GenusSymbol::from_str("II_(2,10)(2_II^+2)").unwrap().form();
        assert_eq!(u.norm_counts(), vec![3, 1]);
        let x = vec![1, 0];
        let y = vec![0, 1];
        assert_eq!(v.bilinear(&x, &y), Rational64::new(1, 2));
    }

    #[test]
    fn three_plus_one_model() {
        let d = GenusSymbol::from_str("II_(2,4)(3^+1)").unwrap().form();
        assert_eq!(d.norm_counts(), vec![1, 0, 2]);
    }

    #[test]
    fn closed_counts_match_brute() {
        for p in [3u32, 5, 7] {
            for n in 1..5 {
                for delta in [1, non_residue(p as u64) as i64] {
                    let blocks: Vec<Block> = (0..n)
                        .map(|i| Block::Diag {
                            p,
                            a: if i + 1 == n { delta as u32 } else { 1 },
                        })
                        .collect();
                    let d = DiscriminantForm::from_blocks(vec![], blocks);
                    assert_eq!(d.norm_counts(), d.norm_counts_brute(), "p={p} n={n}");
                }
            }
        }
    }
}
