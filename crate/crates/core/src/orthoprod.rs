//! Formal Borcherds product expansions at a level N cusp of
//! L = K ⊕ II_(1,1)(N) for the two explicit lattices K = A₂(-1) ⊕ II_(1,1)(3)
//! and K = D₄(-1) ⊕ II_(1,1)(2).
//!
//! Vectors of K ⊗ Q are stored as integer coordinates `a` in the Gram basis
//! of K, scaled by N, so λ = a/N. Every λ ∈ K′ has this form.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::genus::{Block, DElement, DiscriminantForm, GenusSymbol};
use crate::lifts::{gamma1_lift, LiftCase, VVForm};
use crate::qseries::{eta_quotient, EtaQuotientSpec};
use crate::weilrep::WeilRep;

pub type Vector = Vec<i64>;

fn r64(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn add(a: &[i64], b: &[i64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scaled(k: i64, a: &[i64]) -> Vector {
    a.iter().map(|x| k * x).collect()
}

type RatMat = Vec<Vec<Rational64>>;

fn rat_inverse(m: &RatMat) -> Option<RatMat> {
    let n = m.len();
    let mut a: RatMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Rational64::from_integer((i == j) as i64)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..2 * n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn rat_det(m: &RatMat) -> Rational64 {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational64::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational64::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    det
}

/// (positive, negative) inertia of a symmetric rational matrix.
fn signature(m: &RatMat) -> (usize, usize) {
    let n = m.len();
    let mut a = m.clone();
    let (mut pos, mut neg) = (0, 0);
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                // replace e_i by e_i + e_j, which has norm 2 a_ij
                for c in 0..n {
                    let v = a[j][c];
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j];
                    a[r][i] += v;
                }
            } else {
                continue;
            }
        }
        let d = a[i][i];
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for r in i + 1..n {
            let f = a[r][i] / d;
            for c in i..n {
                let v = a[i][c];
                a[r][c] -= f * v;
            }
        }
        for c in i + 1..n {
            a[i][c] = Rational64::zero();
        }
        for r in i + 1..n {
            a[r][i] = Rational64::zero();
        }
    }
    (pos, neg)
}

/// Cholesky factor in the (q_ii, q_ij) form used by Fincke–Pohst.
fn fp_coefficients(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut q = m.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    (0..n).all(|i| q[i][i] > 0.0).then_some(q)
}

fn f64_inverse(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let rm: RatMat = m
        .iter()
        .map(|r| r.iter().map(|&x| Rational64::approximate_float(x).unwrap_or_default()).collect())
        .collect();
    let inv = rat_inverse(&rm)?;
    Some(
        inv.iter()
            .map(|r| r.iter().map(|x| *x.numer() as f64 / *x.denom() as f64).collect())
            .collect(),
    )
}

/// Even lattice of signature (1, r - 1) with K′/K of exponent N.
#[derive(Clone, Debug)]
pub struct HyperbolicLattice {
    pub name: String,
    pub gram: Vec<Vec<i64>>,
    pub level: i64,
    /// Columns are N times the dual basis, in `a` coordinates.
    pub dual_basis: Vec<Vector>,
    /// Blocks modelling K′/K.
    pub blocks: Vec<Block>,
    /// Linear maps a mod N ↦ block coordinates of λ + K.
    class_rows: Vec<Vec<i64>>,
    /// Indices of the isotropic pair x, ξ spanning the II_(1,1)(N) summand.
    pub x_index: usize,
    pub xi_index: usize,
}

impl HyperbolicLattice {
    fn new(
        name: &str,
        gram: Vec<Vec<i64>>,
        level: i64,
        blocks: Vec<Block>,
        class_rows: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let r = gram.len();
        let g: RatMat = gram
            .iter()
            .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
            .collect();
        let inv = rat_inverse(&g).ok_or_else(|| Error::Invalid("degenerate Gram matrix".into()))?;
        let mut dual_basis = vec![vec![0; r]; r];
        for (i, row) in inv.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let v = *x * level;
                if !v.is_integer() {
                    return Err(Error::Invalid(format!("{level}·K′ is not contained in K")));
                }
                dual_basis[j][i] = v.to_integer();
            }
        }
        let k = HyperbolicLattice {
            name: name.into(),
            gram,
            level,
            dual_basis,
            blocks,
            class_rows,
            x_index: r - 2,
            xi_index: r - 1,
        };
        k.validate()?;
        Ok(k)
    }

    /// A₂(-1) ⊕ II_(1,1)(3).
    pub fn level3() -> Self {
        let gram = vec![
            vec![-2, 1, 0, 0],
            vec![1, -2, 0, 0],
            vec![0, 0, 0, 3],
            vec![0, 0, 3, 0],
        ];
        let rows = vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]];
        HyperbolicLattice::new(
            "A2(-1)+II_(1,1)(3)",
            gram,
            3,
            vec![Block::Diag { p: 3, a: 2 }, Block::Hyp { p: 3 }],
            rows,
        )
        .expect("valid lattice")
    }

    /// D₄(-1) ⊕ II_(1,1)(2).
    pub fn level2() -> Self {
        let gram = vec![
            vec![-2, 1, 0, 0, 0, 0],
            vec![1, -2, 1, 1, 0, 0],
            vec![0, 1, -2, 0, 0, 0],
            vec![0, 1, 0, -2, 0, 0],
            vec![0, 0, 0, 0, 0, 2],
            vec![0, 0, 0, 0, 2, 0],
        ];
        let mut rows = Vec::new();
        for i in 2..6 {
            let mut r = vec![0; 6];
            r[i] = 1;
            rows.push(r);
        }
        HyperbolicLattice::new("D4(-1)+II_(1,1)(2)", gram, 2, vec![Block::V2, Block::Hyp { p: 2 }], rows)
            .expect("valid lattice")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    fn gram_rat(&self) -> RatMat {
        self.gram
            .iter()
            .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
            .collect()
    }

    pub fn signature(&self) -> (usize, usize) {
        signature(&self.gram_rat())
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    fn validate(&self) -> Result<()> {
        if self.signature() != (1, self.rank() - 1) {
            return Err(Error::Invalid(format!("{} is not hyperbolic", self.name)));
        }
        if !self.is_even() {
            return Err(Error::Invalid(format!("{} is odd", self.name)));
        }
        Ok(())
    }

    /// ⟨a/N, b/N⟩.
    pub fn pair(&self, a: &[i64], b: &[i64]) -> Rational64 {
        let mut s = 0i64;
        for (i, row) in self.gram.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            let t: i64 = row.iter().zip(b).map(|(g, y)| g * y).sum();
            s += a[i] * t;
        }
        r64(s, self.level * self.level)
    }

    /// q(λ) = ⟨λ, λ⟩/2.
    pub fn q(&self, a: &[i64]) -> Rational64 {
        self.pair(a, a) / 2
    }

    /// Dual coordinates ⟨λ, e_i⟩.
    pub fn dual_coords(&self, a: &[i64]) -> Vec<Rational64> {
        (0..self.rank())
            .map(|i| {
                let s: i64 = self.gram[i].iter().zip(a).map(|(g, y)| g * y).sum();
                r64(s, self.level)
            })
            .collect()
    }

    pub fn in_dual(&self, a: &[i64]) -> bool {
        self.dual_coords(a).iter().all(|x| x.is_integer())
    }

    /// n with λ = n·μ for μ primitive in K′ (0 for λ = 0, None if λ ∉ K′).
    pub fn dual_content(&self, a: &[i64]) -> Option<i64> {
        let y = self.dual_coords(a);
        if !y.iter().all(|x| x.is_integer()) {
            return None;
        }
        Some(y.iter().fold(0i64, |g, x| g.gcd(&x.to_integer())))
    }

    /// λ = Σ y_i·(dual basis)_i.
    pub fn from_dual(&self, y: &[i64]) -> Vector {
        let mut a = vec![0; self.rank()];
        for (yi, col) in y.iter().zip(&self.dual_basis) {
            for (ai, c) in a.iter_mut().zip(col) {
                *ai += yi * c;
            }
        }
        a
    }

    /// K′/K as a discriminant form.
    pub fn discriminant_form(&self) -> DiscriminantForm {
        DiscriminantForm::from_blocks(vec![], self.blocks.clone())
    }

    /// Class of λ ∈ K′ in K′/K.
    pub fn class(&self, a: &[i64]) -> DElement {
        let n = self.level;
        self.class_rows
            .iter()
            .map(|row| {
                let s: i64 = row.iter().zip(a).map(|(r, x)| r * x).sum();
                s.rem_euclid(n) as u32
            })
            .collect()
    }

    /// N times the basis vector e_i.
    pub fn basis(&self, i: usize) -> Vector {
        let mut a = vec![0; self.rank()];
        a[i] = self.level;
        a
    }

    /// x/N, the generator of the isotropic ray used as Weyl vector.
    pub fn x_over_n(&self) -> Vector {
        let mut a = vec![0; self.rank()];
        a[self.x_index] = 1;
        a
    }

    /// (x - ξ)/N.
    pub fn gamma_projection(&self) -> Vector {
        let mut a = vec![0; self.rank()];
        a[self.x_index] = 1;
        a[self.xi_index] = -1;
        a
    }

    /// Interior point s·x + t·ξ of the positive cone.
    pub fn cone_point(&self, s: i64, t: i64) -> Vector {
        let mut a = vec![0; self.rank()];
        a[self.x_index] = s * self.level;
        a[self.xi_index] = t * self.level;
        a
    }

    /// Integer matrix of v ↦ v + N⟨α, v⟩α on `a` coordinates, as rationals.
    pub fn reflection_matrix(&self, alpha: &[i64]) -> RatMat {
        let r = self.rank();
        let qa = self.q(alpha);
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let mut e = vec![0; r];
                        e[j] = 1;
                        let coeff = -self.pair(alpha, &e) / qa;
                        let base = Rational64::from_integer((i == j) as i64);
                        base + coeff * alpha[i]
                    })
                    .collect()
            })
            .collect()
    }

    /// σ_α(v) = v - ⟨α, v⟩/q(α)·α.
    pub fn reflect(&self, alpha: &[i64], v: &[i64]) -> Result<Vector> {
        let c = -self.pair(alpha, v) / self.q(alpha);
        if !c.is_integer() {
            return Err(Error::Consistency(format!("reflection in {alpha:?} leaves K′")));
        }
        let c = c.to_integer();
        Ok(v.iter().zip(alpha).map(|(x, y)| x + c * y).collect())
    }

    /// det σ_α = -1 and σ_α preserves the form and K′.
    pub fn reflection_ok(&self, alpha: &[i64]) -> bool {
        let m = self.reflection_matrix(alpha);
        if rat_det(&m) != -Rational64::one() {
            return false;
        }
        let g = self.gram_rat();
        let r = self.rank();
        for i in 0..r {
            for j in 0..r {
                let mut s = Rational64::zero();
                for k in 0..r {
                    for l in 0..r {
                        s += m[k][i] * g[k][l] * m[l][j];
                    }
                }
                if s != g[i][j] {
                    return false;
                }
            }
        }
        self.dual_basis
            .iter()
            .all(|b| self.reflect(alpha, b).is_ok_and(|v| self.in_dual(&v)))
    }
}

fn check_w0(k: &HyperbolicLattice, w0: &[i64]) -> Result<Rational64> {
    let ww = k.pair(w0, w0);
    if !ww.is_positive() {
        return Err(Error::Invalid(format!("w0 = {w0:?} does not have positive norm")));
    }
    Ok(ww)
}

/// Positive definite majorant 2⟨λ,w₀⟩²/⟨w₀,w₀⟩ - ⟨λ,λ⟩ in dual coordinates,
/// together with the bound it takes on the slab.
fn majorant(k: &HyperbolicLattice, w0: &[i64], h: Rational64, q_min: Rational64) -> Result<(Vec<Vec<f64>>, f64)> {
    let ww = check_w0(k, w0)?;
    let r = k.rank();
    let f = |x: Rational64| *x.numer() as f64 / *x.denom() as f64;
    let cols: Vec<Vector> = k.dual_basis.clone();
    let mut m = vec![vec![0.0; r]; r];
    for i in 0..r {
        for j in 0..r {
            let hi = k.pair(&cols[i], w0);
            let hj = k.pair(&cols[j], w0);
            m[i][j] = f(hi * hj * 2 / ww - k.pair(&cols[i], &cols[j]));
        }
    }
    let bound = f(h * h * 2 / ww - q_min * 2);
    Ok((m, bound))
}

fn slab_filter(k: &HyperbolicLattice, w0: &[i64], h: Rational64, q_min: Rational64, a: &[i64]) -> bool {
    let ht = k.pair(a, w0);
    ht.is_positive() && ht <= h && k.q(a) >= q_min
}

fn sort_slab(k: &HyperbolicLattice, w0: &[i64], v: &mut [Vector]) {
    v.sort_by(|a, b| (k.pair(a, w0), a).cmp(&(k.pair(b, w0), b)));
}

/// All λ ∈ K′ with q(λ) ≥ q_min and 0 < ⟨λ, w₀⟩ ≤ H, sorted by height.
///
/// Fincke–Pohst on the majorant, with a small floating slack and an exact
/// filter afterwards.
pub fn enumerate_slab(
    k: &HyperbolicLattice,
    w0: &[i64],
    h: Rational64,
    q_min: Rational64,
) -> Result<Vec<Vector>> {
    if !h.is_positive() {
        return Ok(vec![]);
    }
    let (m, bound) = majorant(k, w0, h, q_min)?;
    let q = fp_coefficients(&m).ok_or_else(|| Error::Consistency("majorant is not definite".into()))?;
    let r = k.rank();
    let slack = 1e-7 * (1.0 + bound);
    let mut out = Vec::new();
    let mut y = vec![0i64; r];

    fn rec(
        i: usize,
        q: &[Vec<f64>],
        remaining: f64,
        slack: f64,
        y: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        let r = q.len();
        let c: f64 = -(i + 1..r).map(|j| q[i][j] * y[j] as f64).sum::<f64>();
        let width = ((remaining + slack).max(0.0) / q[i][i]).sqrt();
        let lo = (c - width).ceil() as i64;
        let hi = (c + width).floor() as i64;
        for v in lo..=hi {
            y[i] = v;
            let t = v as f64 - c;
            let rem = remaining - q[i][i] * t * t;
            if rem < -slack {
                continue;
            }
            if i == 0 {
                visit(y);
            } else {
                rec(i - 1, q, rem, slack, y, visit);
            }
        }
        y[i] = 0;
    }

    let mut visit = |y: &[i64]| {
        let a = k.from_dual(y);
        if slab_filter(k, w0, h, q_min, &a) {
            out.push(a);
        }
    };
    rec(r - 1, &q, bound, slack, &mut y, &mut visit);
    sort_slab(k, w0, &mut out);
    Ok(out)
}

/// The same set by a plain coordinate box from the inverse majorant; slow,
/// used to cross-check completeness.
pub fn enumerate_slab_box(
    k: &HyperbolicLattice,
    w0: &[i64],
    h: Rational64,
    q_min: Rational64,
) -> Result<Vec<Vector>> {
    if !h.is_positive() {
        return Ok(vec![]);
    }
    let (m, bound) = majorant(k, w0, h, q_min)?;
    let inv = f64_inverse(&m).ok_or_else(|| Error::Consistency("singular majorant".into()))?;
    let r = k.rank();
    let widths: Vec<i64> = (0..r)
        .map(|i| ((bound * inv[i][i]).max(0.0).sqrt() + 1e-6).floor() as i64 + 1)
        .collect();
    let mut out = Vec::new();
    let mut y: Vec<i64> = widths.iter().map(|w| -w).collect();
    loop {
        let a = k.from_dual(&y);
        if slab_filter(k, w0, h, q_min, &a) {
            out.push(a);
        }
        let mut i = 0;
        loop {
            if i == r {
                sort_slab(k, w0, &mut out);
                return Ok(out);
            }
            y[i] += 1;
            if y[i] <= widths[i] {
                break;
            }
            y[i] = -widths[i];
            i += 1;
        }
    }
}

/// The four expansions computed here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductCase {
    Level3Cone,
    Level3Weyl,
    Level2Cone,
    Level2Weyl,
}

impl ProductCase {
    pub const ALL: [ProductCase; 4] = [
        ProductCase::Level3Cone,
        ProductCase::Level3Weyl,
        ProductCase::Level2Cone,
        ProductCase::Level2Weyl,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "level3-cone" => ProductCase::Level3Cone,
            "level3-weyl" => ProductCase::Level3Weyl,
            "level2-cone" => ProductCase::Level2Cone,
            "level2-weyl" => ProductCase::Level2Weyl,
            _ => return Err(Error::Parse(format!("unknown product case {s:?}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ProductCase::Level3Cone => "level3-cone",
            ProductCase::Level3Weyl => "level3-weyl",
            ProductCase::Level2Cone => "level2-cone",
            ProductCase::Level2Weyl => "level2-weyl",
        }
    }

    pub fn lift_case(self) -> LiftCase {
        match self {
            ProductCase::Level3Cone | ProductCase::Level3Weyl => LiftCase::Level3,
            ProductCase::Level2Cone | ProductCase::Level2Weyl => LiftCase::Level2,
        }
    }

    pub fn is_weyl(self) -> bool {
        matches!(self, ProductCase::Level3Weyl | ProductCase::Level2Weyl)
    }

    pub fn cusp(self) -> CuspData {
        let k = match self.lift_case() {
            LiftCase::Level3 => HyperbolicLattice::level3(),
            LiftCase::Level2 => HyperbolicLattice::level2(),
        };
        CuspData::new(k, self.lift_case().symbol())
    }

    /// Grading point: x + ξ for the cone, 2x + ξ inside the Weyl chamber.
    pub fn default_w0(self, k: &HyperbolicLattice) -> Vector {
        if self.is_weyl() {
            k.cone_point(2, 1)
        } else {
            k.cone_point(1, 1)
        }
    }

    /// Expansion expected along an isotropic ray (cone case) or for one
    /// Weyl group image of ρ (Weyl case).
    pub fn ray_spec(self) -> EtaQuotientSpec {
        match self {
            ProductCase::Level3Cone => EtaQuotientSpec::new(9, [(1, 3), (3, -1)]),
            ProductCase::Level3Weyl => EtaQuotientSpec::new(9, [(9, 3), (3, -1)]),
            ProductCase::Level2Cone => EtaQuotientSpec::new(4, [(1, 8), (2, -4)]),
            ProductCase::Level2Weyl => EtaQuotientSpec::new(4, [(4, 8), (2, -4)]),
        }
        .expect("valid eta quotient")
    }
}

/// Integer coefficients b_0, ..., b_count of an eta quotient with integral
/// exponents.
pub fn ray_series(spec: &EtaQuotientSpec, count: usize) -> Result<Vec<BigInt>> {
    let s = eta_quotient(spec, Rational64::from_integer(count as i64 + 1))?;
    (0..=count)
        .map(|n| {
            s.coeff(Rational64::from_integer(n as i64))
                .ok_or_else(|| Error::Precision(format!("q^{n} beyond series precision")))
        })
        .collect()
}

/// L = K ⊕ span(z, ζ) with ⟨z, ζ⟩ = N; z/N and ζ/N span the last block of L′/L.
#[derive(Clone, Debug)]
pub struct CuspData {
    pub k: HyperbolicLattice,
    pub symbol: GenusSymbol,
    pub form: DiscriminantForm,
}

impl CuspData {
    pub fn new(k: HyperbolicLattice, symbol: GenusSymbol) -> Self {
        let mut blocks = k.blocks.clone();
        blocks.push(Block::Hyp { p: k.level as u32 });
        let form = DiscriminantForm::from_blocks(symbol.components.clone(), blocks);
        CuspData { k, symbol, form }
    }

    pub fn level(&self) -> i64 {
        self.k.level
    }

    /// Class of λ + j·z/N in L′/L.
    pub fn delta(&self, a: &[i64], j: i64) -> DElement {
        let mut d = self.k.class(a);
        d.push(j.rem_euclid(self.level()) as u32);
        d.push(0);
        d
    }

    /// z/N - ζ/N.
    pub fn gamma_cone(&self) -> DElement {
        let mut d = self.k.discriminant_form().zero();
        d.push(1);
        d.push((self.level() - 1) as u32);
        d
    }

    /// x/N - ξ/N with x, ξ ∈ K.
    pub fn gamma_weyl(&self) -> DElement {
        self.delta(&self.k.gamma_projection(), 0)
    }

    pub fn lift(&self, case: LiftCase, gamma: &[u32], trunc: Rational64) -> Result<VVForm> {
        let w = WeilRep::new(self.form.clone(), self.symbol.r())?;
        gamma1_lift(&case.spec(), case.level(), gamma, &w, trunc)
    }
}

/// c(λ + j·z/N + L, q(λ)) for j = 0, ..., N-1.
pub fn exponents(cusp: &CuspData, f: &VVForm, a: &[i64]) -> Result<Vec<BigInt>> {
    let q = cusp.k.q(a);
    (0..cusp.level())
        .map(|j| {
            f.coeff(&cusp.delta(a, j), q).ok_or_else(|| {
                Error::Precision(format!("lifted form is not known at q^{q}"))
            })
        })
        .collect()
}

/// Π_j (1 - e(j/N) X)^(c_j) up to X^kmax. Fails if a coefficient is not an
/// integer, which would make the representative rule ambiguous.
pub fn factor_series(n: i64, c: &[BigInt], kmax: usize) -> Result<Vec<BigInt>> {
    let mut series = vec![Cyclo::zero(); kmax + 1];
    series[0] = Cyclo::one();
    for (j, cj) in c.iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let minus_u = &Cyclo::from_int(-1) * &Cyclo::e(j as i64, n);
        let mut binom = BigRational::one();
        let mut upow = Cyclo::one();
        let mut term = vec![Cyclo::one()];
        for k in 1..=kmax {
            binom = binom * BigRational::from_integer(cj - BigInt::from(k - 1)) / BigRational::from_integer(BigInt::from(k));
            upow = &upow * &minus_u;
            term.push(upow.scale(&binom));
        }
        let mut next = vec![Cyclo::zero(); kmax + 1];
        for (i, a) in series.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (l, b) in term.iter().enumerate().take(kmax + 1 - i) {
                if !b.is_zero() {
                    next[i + l] = &next[i + l] + &(a * b);
                }
            }
        }
        series = next;
    }
    series
        .iter()
        .map(|x| {
            x.to_integer().ok_or_else(|| {
                Error::Consistency(format!("factor coefficient {x} for exponents {c:?} is not an integer"))
            })
        })
        .collect()
}

/// Truncated expansion Σ c(λ) e((λ, Z)) graded by ⟨λ, w₀⟩.
#[derive(Clone, Debug)]
pub struct ProductExpansion {
    pub w0: Vector,
    pub height: Rational64,
    /// Nonzero coefficients, keyed by `a` coordinates.
    pub coeffs: BTreeMap<Vector, BigInt>,
}

impl ProductExpansion {
    pub fn coeff(&self, a: &[i64]) -> BigInt {
        self.coeffs.get(a).cloned().unwrap_or_default()
    }

    pub fn to_json(&self, k: &HyperbolicLattice) -> Value {
        json!({
            "w0": self.w0,
            "height": self.height.to_string(),
            "coordinates": format!("lambda = a/{} in the Gram basis of K", k.level),
            "coefficients": self.coeffs.iter().map(|(a, c)| json!({
                "lambda": a,
                "height": k.pair(a, &self.w0).to_string(),
                "q": k.q(a).to_string(),
                "c": c.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// One nontrivial factor of the product.
#[derive(Clone, Debug)]
pub struct Factor {
    pub lambda: Vector,
    pub exponents: Vec<BigInt>,
    pub series: Vec<BigInt>,
}

/// Smallest integral truncation covering q(λ) on the slab.
fn truncation_for(k: &HyperbolicLattice, slab: &[Vector]) -> Rational64 {
    let max_q = slab.iter().map(|a| k.q(a)).max().unwrap_or_default();
    Rational64::from_integer(max_q.floor().to_integer().max(0) + 1)
}

/// Exponent lookup and factor series for every slab vector.
pub fn factors(cusp: &CuspData, f: &VVForm, w0: &[i64], h: Rational64, slab: &[Vector]) -> Result<Vec<Factor>> {
    let k = &cusp.k;
    let found: Vec<Result<Option<Factor>>> = slab
        .par_iter()
        .map(|a| {
            let e = exponents(cusp, f, a)?;
            if e.iter().all(|x| x.is_zero()) {
                return Ok(None);
            }
            let kmax = (h / k.pair(a, w0)).floor().to_integer() as usize;
            let series = factor_series(cusp.level(), &e, kmax)?;
            Ok(Some(Factor {
                lambda: a.clone(),
                exponents: e,
                series,
            }))
        })
        .collect();
    let mut out = Vec::new();
    for r in found {
        if let Some(x) = r? {
            out.push(x);
        }
    }
    Ok(out)
}

/// Multiply the factors in slab order, dropping terms above height h.
pub fn multiply_factors(k: &HyperbolicLattice, w0: &[i64], h: Rational64, fs: &[Factor]) -> BTreeMap<Vector, BigInt> {
    let mut acc: HashMap<Vector, (BigInt, Rational64)> = HashMap::new();
    acc.insert(vec![0; k.rank()], (BigInt::one(), Rational64::zero()));
    for f in fs {
        let hl = k.pair(&f.lambda, w0);
        let mut snapshot: Vec<(Vector, BigInt, Rational64)> = acc
            .iter()
            .filter(|(_, (_, hv))| *hv + hl <= h)
            .map(|(v, (c, hv))| (v.clone(), c.clone(), *hv))
            .collect();
        snapshot.sort();
        for (v, c, hv) in snapshot {
            let mut w = v;
            for (j, s) in f.series.iter().enumerate().skip(1) {
                let hw = hv + hl * j as i64;
                if hw > h {
                    break;
                }
                w = add(&w, &f.lambda);
                if s.is_zero() {
                    continue;
                }
                let e = acc.entry(w.clone()).or_insert_with(|| (BigInt::zero(), hw));
                e.0 += &c * s;
            }
        }
    }
    acc.into_iter()
        .filter(|(_, (c, _))| !c.is_zero())
        .map(|(v, (c, _))| (v, c))
        .collect()
}

/// Primitive isotropic ray and its coefficients c(nμ), n = 1, 2, ...
#[derive(Clone, Debug)]
pub struct RayCheck {
    pub mu: Vector,
    pub coefficients: Vec<BigInt>,
    pub expected: Vec<BigInt>,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct ConeReport {
    pub case: ProductCase,
    pub expansion: ProductExpansion,
    pub slab_size: usize,
    pub factor_count: usize,
    /// Nonzero coefficients at vectors of nonzero norm.
    pub off_ray_nonzero: Vec<Vector>,
    pub rays: Vec<RayCheck>,
    pub max_multiples: usize,
    pub singular_support: bool,
    pub rays_ok: bool,
}

impl ConeReport {
    pub fn verdict(&self) -> bool {
        self.singular_support && self.rays_ok && self.max_multiples >= 5
    }

    pub fn to_json(&self, k: &HyperbolicLattice) -> Value {
        json!({
            "case": self.case.name(),
            "lattice": k.name,
            "slab_size": self.slab_size,
            "factors": self.factor_count,
            "singular_support": self.singular_support,
            "off_ray_nonzero": self.off_ray_nonzero,
            "rays": self.rays.iter().map(|r| json!({
                "mu": r.mu,
                "coefficients": r.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "ok": r.ok,
            })).collect::<Vec<_>>(),
            "max_multiples": self.max_multiples,
            "rays_ok": self.rays_ok,
            "verdict": if self.verdict() { "pass" } else { "fail" },
            "expansion": self.expansion.to_json(k),
        })
    }
}

/// Expansion at the cusp for γ = z/N - ζ/N, where the Weyl vector is 0.
pub fn product_expansion_cone_case(case: ProductCase, w0: Option<Vector>, h: Rational64) -> Result<ConeReport> {
    if case.is_weyl() {
        return Err(Error::Invalid(format!("{} is not a cone case", case.name())));
    }
    let cusp = case.cusp();
    let k = &cusp.k;
    let w0 = w0.unwrap_or_else(|| case.default_w0(k));
    let slab = enumerate_slab(k, &w0, h, Rational64::zero())?;
    let f = cusp.lift(case.lift_case(), &cusp.gamma_cone(), truncation_for(k, &slab))?;
    let fs = factors(&cusp, &f, &w0, h, &slab)?;
    let coeffs = multiply_factors(k, &w0, h, &fs);

    let off_ray_nonzero: Vec<Vector> = coeffs
        .keys()
        .filter(|a| a.iter().any(|&x| x != 0) && !k.q(a).is_zero())
        .cloned()
        .collect();
    let mut rays = Vec::new();
    let max_n = slab
        .iter()
        .map(|a| (h / k.pair(a, &w0)).floor().to_integer() as usize)
        .max()
        .unwrap_or(0);
    let expected_all = ray_series(&case.ray_spec(), max_n)?;
    for a in &slab {
        if !k.q(a).is_zero() || k.dual_content(a) != Some(1) {
            continue;
        }
        let n = (h / k.pair(a, &w0)).floor().to_integer() as usize;
        let coefficients: Vec<BigInt> = (1..=n)
            .map(|m| coeffs.get(&scaled(m as i64, a)).cloned().unwrap_or_default())
            .collect();
        let expected = expected_all[1..=n].to_vec();
        let ok = coefficients == expected;
        rays.push(RayCheck {
            mu: a.clone(),
            coefficients,
            expected,
            ok,
        });
    }
    let max_multiples = rays.iter().map(|r| r.coefficients.len()).max().unwrap_or(0);
    let rays_ok = rays.iter().all(|r| r.ok);
    Ok(ConeReport {
        case,
        expansion: ProductExpansion {
            w0,
            height: h,
            coeffs,
        },
        slab_size: slab.len(),
        factor_count: fs.len(),
        singular_support: off_ray_nonzero.is_empty(),
        off_ray_nonzero,
        rays,
        max_multiples,
        rays_ok,
    })
}

/// Roots α ∈ K′ with q(α) = -1/N, α + K = ±p(γ) and 0 < ⟨α, w₀⟩ ≤ H.
pub fn positive_roots(k: &HyperbolicLattice, w0: &[i64], h: Rational64) -> Result<Vec<Vector>> {
    let p = k.gamma_projection();
    let classes = [k.class(&p), k.class(&scaled(-1, &p))];
    let qr = r64(-1, k.level);
    Ok(enumerate_slab(k, w0, h, qr)?
        .into_iter()
        .filter(|a| k.q(a) == qr && classes.contains(&k.class(a)))
        .collect())
}

/// Orbit of ρ under the reflections, restricted to height ≤ H.
#[derive(Clone, Debug)]
pub struct WeylOrbit {
    /// (w(ρ), det w).
    pub points: BTreeMap<Vector, i8>,
    /// Raised from ρ by reflections in every positive root of height ≤ H,
    /// which reaches every image of height ≤ H; false if the cap was hit or
    /// a point was reached with both determinants.
    pub certified: bool,
}

pub fn weyl_orbit(
    k: &HyperbolicLattice,
    rho: &[i64],
    roots: &[Vector],
    w0: &[i64],
    h: Rational64,
    cap: usize,
) -> Result<WeylOrbit> {
    let mut points = BTreeMap::new();
    points.insert(rho.to_vec(), 1i8);
    let mut queue = VecDeque::from([rho.to_vec()]);
    let mut certified = true;
    while let Some(u) = queue.pop_front() {
        let su = points[&u];
        for alpha in roots {
            if !k.pair(alpha, &u).is_positive() {
                continue;
            }
            let v = k.reflect(alpha, &u)?;
            if k.pair(&v, w0) > h {
                continue;
            }
            match points.get(&v) {
                Some(&s) if s != -su => certified = false,
                Some(_) => {}
                None => {
                    if points.len() >= cap {
                        certified = false;
                        continue;
                    }
                    points.insert(v.clone(), -su);
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(WeylOrbit { points, certified })
}

#[derive(Clone, Debug)]
pub struct WeylReport {
    pub case: ProductCase,
    pub rho: Vector,
    pub roots: Vec<Vector>,
    pub reflections_ok: bool,
    pub orbit: WeylOrbit,
    pub product: ProductExpansion,
    pub sum: BTreeMap<Vector, BigInt>,
    /// Vectors where product and sum side differ.
    pub mismatches: Vec<Vector>,
    /// c(mρ + j z/N, 0) for m = 1, 2, ..., one row per m.
    pub ray_exponents: Vec<Vec<BigInt>>,
    pub ray_pattern_ok: bool,
    /// Product restricted to the ray of ρ against the eta quotient.
    pub ray_series: Vec<BigInt>,
    pub ray_series_ok: bool,
    pub antisymmetric: bool,
}

impl WeylReport {
    pub fn identity_ok(&self) -> bool {
        self.orbit.certified && self.mismatches.is_empty()
    }

    /// The full identity when coverage is certified, otherwise the ray
    /// identity alone.
    pub fn verdict(&self) -> bool {
        let ray = self.ray_pattern_ok && self.ray_series_ok && self.reflections_ok;
        if self.orbit.certified {
            ray && self.identity_ok() && self.antisymmetric
        } else {
            ray
        }
    }

    pub fn to_json(&self, k: &HyperbolicLattice) -> Value {
        let strs = |v: &[BigInt]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        json!({
            "case": self.case.name(),
            "lattice": k.name,
            "rho": self.rho,
            "roots": self.roots.len(),
            "reflections_ok": self.reflections_ok,
            "orbit": self.orbit.points.iter().map(|(v, s)| json!({"w_rho": v, "det": s})).collect::<Vec<_>>(),
            "orbit_certified": self.orbit.certified,
            "mismatches": self.mismatches,
            "ray_exponents": self.ray_exponents.iter().map(|r| strs(r)).collect::<Vec<_>>(),
            "ray_pattern_ok": self.ray_pattern_ok,
            "ray_series": strs(&self.ray_series),
            "ray_series_ok": self.ray_series_ok,
            "antisymmetric": self.antisymmetric,
            "identity": if self.orbit.certified { json!(self.identity_ok()) } else { json!("inconclusive") },
            "verdict": if self.verdict() { "pass" } else { "fail" },
            "product": self.product.to_json(k),
        })
    }
}

fn expected_ray_exponent(case: ProductCase, m: i64) -> i64 {
    match case.lift_case() {
        LiftCase::Level3 => {
            if m % 3 == 0 {
                2
            } else {
                -1
            }
        }
        LiftCase::Level2 => {
            if m % 2 == 0 {
                4
            } else {
                -4
            }
        }
    }
}

/// Product side and antisymmetrized sum side at the cusp for γ = x/N - ξ/N
/// with Weyl vector ρ = x/N.
pub fn weyl_group_expansion(case: ProductCase, w0: Option<Vector>, h: Rational64) -> Result<WeylReport> {
    if !case.is_weyl() {
        return Err(Error::Invalid(format!("{} is not a Weyl chamber case", case.name())));
    }
    let cusp = case.cusp();
    let k = &cusp.k;
    let n = k.level;
    let w0 = w0.unwrap_or_else(|| case.default_w0(k));
    check_w0(k, &w0)?;
    let rho = k.x_over_n();
    let h_rho = k.pair(&rho, &w0);
    if !weyl_vector_consistency(k, &rho, &w0) {
        return Err(Error::Consistency("ρ is not a Weyl vector for this chamber".into()));
    }
    let roots = positive_roots(k, &w0, h)?;
    let reflections_ok = roots.iter().all(|a| k.reflection_ok(a));

    // product side
    let inner = h - h_rho;
    let slab = enumerate_slab(k, &w0, inner, r64(-1, n))?;
    let f = cusp.lift(case.lift_case(), &cusp.gamma_weyl(), truncation_for(k, &slab))?;
    let fs = factors(&cusp, &f, &w0, inner, &slab)?;
    let coeffs: BTreeMap<Vector, BigInt> = multiply_factors(k, &w0, inner, &fs)
        .into_iter()
        .map(|(v, c)| (add(&v, &rho), c))
        .collect();

    // sum side
    let orbit = weyl_orbit(k, &rho, &roots, &w0, h, 200_000)?;
    let max_m = (h / h_rho).floor().to_integer() as usize;
    let b = ray_series(&case.ray_spec(), max_m)?;
    let mut sum: BTreeMap<Vector, BigInt> = BTreeMap::new();
    for (v, &s) in &orbit.points {
        let hv = k.pair(v, &w0);
        let mut m = 1;
        while hv * m <= h {
            let c = &b[m as usize] * BigInt::from(s);
            if !c.is_zero() {
                *sum.entry(scaled(m, v)).or_default() += c;
            }
            m += 1;
        }
    }
    sum.retain(|_, c| !c.is_zero());
    let keys: BTreeSet<&Vector> = coeffs.keys().chain(sum.keys()).collect();
    let mismatches: Vec<Vector> = keys
        .into_iter()
        .filter(|v| coeffs.get(*v) != sum.get(*v))
        .cloned()
        .collect();

    let mut antisymmetric = true;
    for alpha in &roots {
        for (v, c) in &sum {
            let w = k.reflect(alpha, v)?;
            let hw = k.pair(&w, &w0);
            if hw.is_positive() && hw <= h && sum.get(&w).cloned().unwrap_or_default() != -c {
                antisymmetric = false;
            }
        }
    }

    // the ray of ρ alone
    let mut ray_exponents = Vec::new();
    let mut ray_pattern_ok = true;
    let mut ray = vec![BigInt::zero(); max_m + 1];
    ray[1] = BigInt::one();
    for m in 1..max_m as i64 {
        let a = scaled(m, &rho);
        let e = exponents(&cusp, &f, &a)?;
        let want = BigInt::from(expected_ray_exponent(case, m));
        ray_pattern_ok &= e.iter().all(|x| *x == want);
        let kmax = (max_m - 1) / m as usize;
        let s = factor_series(n, &e, kmax)?;
        let mut next = vec![BigInt::zero(); max_m + 1];
        for (i, x) in ray.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in s.iter().enumerate() {
                let idx = i + j * m as usize;
                if idx > max_m {
                    break;
                }
                next[idx] += x * y;
            }
        }
        ray = next;
        ray_exponents.push(e);
    }
    let ray_series_ok = ray == b;

    Ok(WeylReport {
        case,
        rho,
        roots,
        reflections_ok,
        orbit,
        product: ProductExpansion {
            w0,
            height: h,
            coeffs,
        },
        sum,
        mismatches,
        ray_exponents,
        ray_pattern_ok,
        ray_series: ray,
        ray_series_ok,
        antisymmetric,
    })
}

/// ρ is isotropic and primitive in K′, lies in the closure of the chamber
/// containing w₀ (checked against roots up to a height bound), and satisfies
/// ⟨ρ, p(γ)⟩ ≡ -1/N mod 1.
pub fn weyl_vector_consistency(k: &HyperbolicLattice, rho: &[i64], w0: &[i64]) -> bool {
    if !k.q(rho).is_zero() || k.dual_content(rho) != Some(1) {
        return false;
    }
    let pg = k.pair(rho, &k.gamma_projection()) + r64(1, k.level);
    if !pg.is_integer() {
        return false;
    }
    let bound = (k.pair(rho, w0) * 4).max(Rational64::from_integer(8));
    match positive_roots(k, w0, bound) {
        Ok(roots) => roots.iter().all(|a| !k.pair(a, rho).is_negative()),
        Err(_) => false,
    }
}
