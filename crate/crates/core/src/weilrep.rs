//! The Weil representation on C[D] and exact eigenvalue invariants.
//!
//! ρ(T)e_γ = e(Q(γ))e_γ and ρ(S)e_γ = e(-r/8)/√|D| · Σ_β e(-(β,γ))e_β.
//! Matrices are stored as a [`Cyclo`] scalar times a dense matrix over
//! Z[ζ_N]; the dual representation is entrywise complex conjugation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{lcm_u32, rat_int};
use crate::cyclo::{Cyclo, ZZeta};
use crate::error::{Error, Result};
use crate::genus::{Block, DiscriminantForm};

/// Scalar times a dense square matrix over Z[ζ_n].
#[derive(Clone, Debug)]
pub struct ScaledMatrix {
    pub scalar: Cyclo,
    pub dim: usize,
    pub entries: Vec<ZZeta>,
}

impl ScaledMatrix {
    pub fn identity(dim: usize, order: u32) -> Self {
        let mut entries = vec![ZZeta::zero(order); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ZZeta::from_int(order, 1);
        }
        ScaledMatrix {
            scalar: Cyclo::one(),
            dim,
            entries,
        }
    }

    pub fn order(&self) -> u32 {
        self.entries.first().map(|z| z.order()).unwrap_or(1)
    }

    pub fn get(&self, i: usize, j: usize) -> &ZZeta {
        &self.entries[i * self.dim + j]
    }

    /// Diagonal matrix with entries ζ_n^(k_i).
    pub fn diagonal_roots(order: u32, exps: &[i64]) -> Self {
        let dim = exps.len();
        let mut entries = vec![ZZeta::zero(order); dim * dim];
        for (i, &k) in exps.iter().enumerate() {
            entries[i * dim + i] = ZZeta::root(order, k);
        }
        ScaledMatrix {
            scalar: Cyclo::one(),
            dim,
            entries,
        }
    }

    pub fn mul(&self, o: &ScaledMatrix) -> ScaledMatrix {
        assert_eq!(self.dim, o.dim);
        let n = self.dim;
        let ord = lcm_u32(self.order(), o.order());
        let a: Vec<ZZeta> = self.entries.iter().map(|z| z.embed(ord)).collect();
        let b: Vec<ZZeta> = o.entries.iter().map(|z| z.embed(ord)).collect();
        let mut out = vec![ZZeta::zero(ord); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = &a[i * n + k];
                if aik.is_zero_repr() {
                    continue;
                }
                for j in 0..n {
                    let bkj = &b[k * n + j];
                    if !bkj.is_zero_repr() {
                        out[i * n + j].fma(aik, bkj);
                    }
                }
            }
        }
        ScaledMatrix {
            scalar: &self.scalar * &o.scalar,
            dim: n,
            entries: out,
        }
    }

    pub fn conj(&self) -> ScaledMatrix {
        ScaledMatrix {
            scalar: self.scalar.conj(),
            dim: self.dim,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn conj_transpose(&self) -> ScaledMatrix {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).conj());
            }
        }
        ScaledMatrix {
            scalar: self.scalar.conj(),
            dim: n,
            entries,
        }
    }

    pub fn scale(&self, c: &Cyclo) -> ScaledMatrix {
        ScaledMatrix {
            scalar: &self.scalar * c,
            dim: self.dim,
            entries: self.entries.clone(),
        }
    }

    /// Exact entry (i, j) including the scalar.
    pub fn entry(&self, i: usize, j: usize) -> Cyclo {
        &self.scalar * &self.get(i, j).to_cyclo()
    }

    /// Exact equality of the represented matrices.
    pub fn equals(&self, o: &ScaledMatrix) -> bool {
        if self.dim != o.dim {
            return false;
        }
        if self.scalar.is_zero() || o.scalar.is_zero() {
            let z = |m: &ScaledMatrix| {
                m.scalar.is_zero() || m.entries.iter().all(|e| e.to_cyclo().is_zero())
            };
            return z(self) && z(o);
        }
        let ratio = &o.scalar * &self.scalar.inv().expect("nonzero scalar");
        self.entries
            .iter()
            .zip(&o.entries)
            .all(|(a, b)| a.to_cyclo() == &ratio * &b.to_cyclo())
    }

    pub fn trace(&self) -> Cyclo {
        let mut t = ZZeta::zero(self.order());
        for i in 0..self.dim {
            t.add_assign(self.get(i, i));
        }
        &self.scalar * &t.to_cyclo()
    }
}

/// Weil representation ρ_L for a discriminant form and signature r = b⁺ - b⁻.
#[derive(Clone, Debug)]
pub struct WeilRep {
    pub d: DiscriminantForm,
    pub r: i64,
}

impl WeilRep {
    pub fn new(d: DiscriminantForm, r: i64) -> Result<Self> {
        if r % 2 != 0 {
            return Err(Error::Unsupported("odd signature".into()));
        }
        Ok(WeilRep { d, r })
    }

    pub fn dim(&self) -> usize {
        self.d.order() as usize
    }

    fn order(&self) -> u32 {
        self.d.level().max(1) as u32
    }

    /// e(-r/8)/√|D|.
    pub fn s_scalar(&self) -> Cyclo {
        let root = Cyclo::sqrt_int(self.d.order() as u64);
        &Cyclo::e(-self.r, 8) * &root.inv().expect("nonzero")
    }

    pub fn rho_t(&self) -> ScaledMatrix {
        let exps: Vec<i64> = self
            .d
            .elements()
            .map(|x| self.d.norm_num(&x) as i64)
            .collect();
        ScaledMatrix::diagonal_roots(self.order(), &exps)
    }

    pub fn rho_t_inv(&self) -> ScaledMatrix {
        let exps: Vec<i64> = self
            .d
            .elements()
            .map(|x| -(self.d.norm_num(&x) as i64))
            .collect();
        ScaledMatrix::diagonal_roots(self.order(), &exps)
    }

    /// Entry (β, γ) of ρ(S) is e(-r/8)/√|D| · e(-(β, γ)).
    pub fn rho_s(&self) -> ScaledMatrix {
        let n = self.dim();
        let ord = self.order();
        let elems: Vec<_> = self.d.elements().collect();
        let mut entries = Vec::with_capacity(n * n);
        for b in &elems {
            for g in &elems {
                entries.push(ZZeta::root(ord, -(self.d.bilinear_num(b, g) as i64)));
            }
        }
        ScaledMatrix {
            scalar: self.s_scalar(),
            dim: n,
            entries,
        }
    }

    pub fn rho_s_inv(&self) -> ScaledMatrix {
        self.rho_s().conj_transpose()
    }

    /// ρ of a word in S, T and their inverses s, t, multiplied in the order written.
    pub fn rho_word(&self, word: &str) -> Result<ScaledMatrix> {
        let mut out = ScaledMatrix::identity(self.dim(), self.order());
        let (s, si, t, ti) = (self.rho_s(), self.rho_s_inv(), self.rho_t(), self.rho_t_inv());
        for ch in word.chars() {
            let m = match ch {
                'S' => &s,
                's' => &si,
                'T' => &t,
                't' => &ti,
                c if c.is_whitespace() => continue,
                c => return Err(Error::Invalid(format!("unknown letter {c:?} in word"))),
            };
            out = out.mul(m);
        }
        Ok(out)
    }

    /// ρ(M) for M ∈ Γ₁(N) with upper-right entry b: diag(e(b·Q(γ))).
    pub fn rho_gamma1(&self, m: [[i64; 2]; 2]) -> Result<ScaledMatrix> {
        let n = self.d.level().max(1) as i64;
        let [[a, b], [c, d]] = m;
        if a * d - b * c != 1 || (a - 1).rem_euclid(n) != 0 || (d - 1).rem_euclid(n) != 0 || c.rem_euclid(n) != 0 {
            return Err(Error::Invalid(format!("{m:?} is not in Gamma1({n})")));
        }
        let exps: Vec<i64> = self
            .d
            .elements()
            .map(|x| b * self.d.norm_num(&x) as i64)
            .collect();
        Ok(ScaledMatrix::diagonal_roots(self.order(), &exps))
    }

    /// Index of -γ for every γ.
    pub fn negation_map(&self) -> Vec<usize> {
        self.d
            .elements()
            .map(|x| self.d.index(&self.d.neg(&x)))
            .collect()
    }
}

/// Multiplicities m_j of e(j/M) on an invariant subspace from the traces tr(X^t P), t = 0..M.
///
/// Requires X^M = 1 on the subspace; this is checked through tr(X^M P) = tr(P).
pub fn multiplicities_from_traces(traces: &[Cyclo], m: u32) -> Result<Vec<u64>> {
    if traces.len() < m as usize + 1 {
        return Err(Error::Invalid("need traces for t = 0..=M".into()));
    }
    if traces[m as usize] != traces[0] {
        return Err(Error::Consistency(format!("matrix does not have order dividing {m}")));
    }
    let mut out = Vec::with_capacity(m as usize);
    for j in 0..m as i64 {
        let mut acc = Cyclo::zero();
        for (t, tr) in traces.iter().take(m as usize).enumerate() {
            acc = &acc + &(&Cyclo::e(-j * t as i64, m as i64) * tr);
        }
        let v = acc
            .to_rational()
            .map(|x| x / rat_int(m as i64))
            .ok_or_else(|| Error::Consistency("eigenvalue multiplicity is not rational".into()))?;
        if !v.is_integer() || v < BigRational::zero() {
            return Err(Error::Consistency(format!("eigenvalue multiplicity {v} is not a natural number")));
        }
        out.push(v.to_integer().to_u64().unwrap_or(0));
    }
    Ok(out)
}

/// α = Σ_j (j/M)·m_j.
pub fn alpha_from_multiplicities(mult: &[u64]) -> BigRational {
    let m = mult.len() as i64;
    mult.iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (j, &c)| {
            acc + BigRational::new(BigInt::from(j as i64 * c as i64), BigInt::from(m))
        })
}

/// α(X) for a matrix of order dividing M, from exact traces of its powers.
pub fn alpha_invariant(x: &ScaledMatrix, m: u32) -> Result<BigRational> {
    let mut traces = Vec::with_capacity(m as usize + 1);
    let mut p = ScaledMatrix::identity(x.dim, x.order());
    for _ in 0..=m {
        traces.push(p.trace());
        p = p.mul(x);
    }
    Ok(alpha_from_multiplicities(&multiplicities_from_traces(&traces, m)?))
}

/// tr(B^t) and tr(B^t Z) for t = 0..=tmax using powers up to B^ceil(tmax/2).
///
/// `neg` is the permutation γ ↦ -γ, so (B^t Z)_{γγ} = (B^t)_{γ,-γ}.
pub fn power_traces(b: &ScaledMatrix, neg: &[usize], tmax: usize) -> Vec<(ZZeta, ZZeta)> {
    let n = b.dim;
    let ord = b.order();
    let half = tmax.div_ceil(2);
    let mut pows = vec![ScaledMatrix::identity(n, ord)];
    for _ in 0..half {
        let next = pows.last().unwrap().mul(b);
        pows.push(next);
    }
    let mut out = Vec::with_capacity(tmax + 1);
    for t in 0..=tmax {
        let a = t.min(half);
        let c = t - a;
        let (pa, pc) = (&pows[a], &pows[c]);
        let ordt = lcm_u32(pa.order(), pc.order());
        let mut tr = ZZeta::zero(ordt);
        let mut trz = ZZeta::zero(ordt);
        for i in 0..n {
            for j in 0..n {
                let x = pa.get(i, j).embed(ordt);
                if x.is_zero_repr() {
                    continue;
                }
                tr.fma(&x, &pc.get(j, i).embed(ordt));
                trz.fma(&x, &pc.get(j, neg[i]).embed(ordt));
            }
        }
        out.push((tr, trz));
    }
    out
}

/// Per-block matrix factors of ρ(S) (unscaled) and ρ(T), for Kronecker-factored traces.
pub fn block_matrices(b: &Block) -> (ScaledMatrix, ScaledMatrix, Vec<usize>) {
    let d = DiscriminantForm::from_blocks(vec![], vec![*b]);
    let w = WeilRep { d, r: 0 };
    let mut s = w.rho_s();
    s.scalar = Cyclo::one();
    (s, w.rho_t(), w.negation_map())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::genus::GenusSymbol;

    #[test]
    fn alpha_of_simple_diagonals() {
        let id = ScaledMatrix::identity(3, 1);
        assert!(alpha_invariant(&id, 1).unwrap().is_zero());
        let d = ScaledMatrix::diagonal_roots(3, &[1, 2]);
        assert_eq!(alpha_invariant(&d, 3).unwrap(), rat(1, 1));
    }

    #[test]
    fn three_plus_one_t_matrix() {
        let g: GenusSymbol = "II_(2,4)(3^+1)".parse().unwrap();
        let w = WeilRep::new(g.form(), g.r()).unwrap();
        let t = w.rho_t();
        let diag: Vec<Cyclo> = (0..3).map(|i| t.entry(i, i)).collect();
        assert_eq!(diag, vec![Cyclo::one(), Cyclo::e(2, 3), Cyclo::e(2, 3)]);
    }
}
