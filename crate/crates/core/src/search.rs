//! Non-negative principal parts and the weights of the resulting products.
//!
//! The search works with types: a type is a pair (class of γ, m) where the
//! class collects orbits {γ, -γ} on which q(γ, ·) agrees. A candidate assigns
//! a total multiplicity to each type; `orbit_count` says how many orbits the
//! multiplicity may be distributed over.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::arith::rat;
use crate::dimensions::dim_report_symbol;
use crate::eisenstein::{bernoulli, to_f64, zeta_bracket, EisensteinProvider, ProviderKind};
use crate::error::{Error, Result};
use crate::genus::{DElement, DiscriminantForm, GenusSymbol};

/// Finitely many c(γ, m) ≥ 0 with m < 0, m ≡ Q(γ) mod 1 and c(γ, m) = c(-γ, m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalPart {
    terms: BTreeMap<(DElement, Rational64), u64>,
}

impl PrincipalPart {
    pub fn empty() -> Self {
        PrincipalPart {
            terms: BTreeMap::new(),
        }
    }

    /// Entries for γ imply the same entry for -γ; conflicting entries fail.
    pub fn from_entries(form: &DiscriminantForm, entries: &[(DElement, Rational64, u64)]) -> Result<Self> {
        let mut terms: BTreeMap<(DElement, Rational64), u64> = BTreeMap::new();
        for (g, m, c) in entries {
            if g.len() != form.moduli().len() || g.iter().zip(form.moduli()).any(|(x, n)| x >= n) {
                return Err(Error::Invalid(format!("{g:?} is not an element of D")));
            }
            if !m.is_negative() {
                return Err(Error::Invalid(format!("exponent {m} is not negative")));
            }
            if !(*m - form.q_value(g)).is_integer() {
                return Err(Error::Invalid(format!("exponent {m} is not congruent to Q(γ) mod 1")));
            }
            for key in [(g.clone(), *m), (form.neg(g), *m)] {
                if let Some(old) = terms.insert(key.clone(), *c) {
                    if old != *c {
                        return Err(Error::Invalid(format!(
                            "c(γ, {m}) differs between γ = {:?} and -γ",
                            key.0
                        )));
                    }
                }
            }
        }
        terms.retain(|_, c| *c > 0);
        Ok(PrincipalPart { terms })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DElement, Rational64, u64)> {
        self.terms.iter().map(|((g, m), c)| (g, *m, *c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for PrincipalPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(g, m, c)| format!("{c}*e({m}τ)e_{g:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// -(1/4) Σ c(γ, m) q(γ, -m).
pub fn product_weight(provider: &EisensteinProvider, pp: &PrincipalPart) -> Result<BigRational> {
    let mut w = BigRational::zero();
    for (g, m, c) in pp.terms() {
        w -= provider.q(g, -m)? * rat(c as i64, 1);
    }
    Ok(w / rat(4, 1))
}

/// True when no cusp form obstructs pp. Only decided on simple lattices.
pub fn obstruction_check(g: &GenusSymbol, pp: &PrincipalPart) -> Result<bool> {
    if pp.is_empty() {
        return Ok(true);
    }
    let dim_s = dim_report_symbol(g, 1 + g.n as i64 / 2)?.dim_s_int()?;
    if dim_s == 0 {
        Ok(true)
    } else {
        Err(Error::Unsupported(format!(
            "{g} has {dim_s} cusp forms of weight {}; no basis available",
            1 + g.n / 2
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ClassKey {
    zero: bool,
    norm: Rational64,
    orbit_size: usize,
}

#[derive(Clone, Debug)]
struct Class {
    key: ClassKey,
    representative: DElement,
    orbits: usize,
}

fn classes(provider: &EisensteinProvider) -> Vec<Class> {
    let form = &provider.form;
    let mut map: BTreeMap<ClassKey, Class> = BTreeMap::new();
    for g in form.elements() {
        if !provider.covers(&g) {
            continue;
        }
        let neg = form.neg(&g);
        if neg < g {
            continue;
        }
        let key = ClassKey {
            zero: g.iter().all(|&x| x == 0),
            norm: form.q_value(&g),
            orbit_size: if neg == g { 1 } else { 2 },
        };
        map.entry(key.clone())
            .and_modify(|c| c.orbits += 1)
            .or_insert(Class {
                key,
                representative: g,
                orbits: 1,
            });
    }
    map.into_values().collect()
}

fn label(key: &ClassKey) -> String {
    if key.zero {
        "γ = 0".to_string()
    } else {
        format!("γ ≠ 0, Q(γ) = {}", key.norm)
    }
}

/// Lower bound for -q(γ, μ), valid for every admissible μ ≥ m_abs in the class
/// except where q vanishes identically.
fn tail_bound(kind: ProviderKind, m_abs: Rational64) -> Result<BigRational> {
    let m = BigRational::new((*m_abs.numer()).into(), (*m_abs.denom()).into());
    let m2 = &m * &m;
    let (_, z2) = zeta_bracket(2)?;
    let two = rat(2, 1);
    Ok(match kind {
        ProviderKind::Level1 { k } => {
            // σ_{k-1}(μ) ≥ μ^(k-1)
            let c = rat(4 * k as i64, 1) / bernoulli(k);
            let mut p = c;
            for _ in 0..k - 1 {
                p *= &m;
            }
            p
        }
        // γ ≠ 0: 2(3μ)²(2 - ζ(2)); γ = 0: at least 18μ²(2 - ζ(2))
        ProviderKind::Level3Rank5 => rat(18, 1) * m2 * (two - z2),
        ProviderKind::Level6Zero => m2 * (rat(18, 1) * (&two - &z2) - two * z2),
    })
}

#[derive(Clone, Debug)]
pub struct TypeTerm {
    pub label: String,
    pub representative: DElement,
    pub m: Rational64,
    pub orbit_size: usize,
    pub orbit_count: usize,
    pub q: BigRational,
    /// Weight added by one orbit with coefficient 1.
    pub contribution: BigRational,
}

impl TypeTerm {
    fn to_json(&self) -> Value {
        json!({
            "class": self.label,
            "m": self.m.to_string(),
            "orbit_size": self.orbit_size,
            "orbit_count": self.orbit_count,
            "q": self.q.to_string(),
            "contribution": self.contribution.to_string(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct ProductCandidate {
    pub terms: Vec<(TypeTerm, u64)>,
    pub weight: BigRational,
    pub singular: bool,
}

impl ProductCandidate {
    /// Puts every multiplicity on the representative orbit of its type.
    pub fn principal_part(&self, form: &DiscriminantForm) -> Result<PrincipalPart> {
        let entries: Vec<_> = self
            .terms
            .iter()
            .map(|(t, c)| (t.representative.clone(), t.m, *c))
            .collect();
        PrincipalPart::from_entries(form, &entries)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "terms": self.terms.iter().map(|(t, c)| json!({"type": t.to_json(), "c": c})).collect::<Vec<_>>(),
            "weight": self.weight.to_string(),
            "singular": self.singular,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub symbol: String,
    pub singular_weight: BigRational,
    pub m_floor: Rational64,
    pub coverage: String,
    pub types: Vec<TypeTerm>,
    /// Types with q = 0; their coefficients do not change the weight and are set to 0.
    pub neutral: Vec<TypeTerm>,
    pub candidates: Vec<ProductCandidate>,
    /// Every type below m_floor provably adds more than the singular weight.
    pub tail_certified: bool,
    pub tail_bounds: Vec<(String, Rational64, BigRational)>,
    pub cusp_forms: u64,
}

impl SearchReport {
    pub fn to_json(&self) -> Value {
        json!({
            "genus": self.symbol,
            "singular_weight": self.singular_weight.to_string(),
            "m_floor": self.m_floor.to_string(),
            "coverage": self.coverage,
            "dimS": self.cusp_forms,
            "types_examined": self.types.len(),
            "weight_neutral_types": self.neutral.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            "candidates": self.candidates.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "tail_certified": self.tail_certified,
            "tail_bounds": self.tail_bounds.iter().map(|(l, m, b)| json!({
                "class": l, "m": m.to_string(), "min_contribution": b.to_string(),
                "approx": to_f64(b),
            })).collect::<Vec<_>>(),
        })
    }
}

fn admissible_exponents(norm: Rational64, m_floor: Rational64) -> (Vec<Rational64>, Rational64) {
    // m ≡ norm mod 1, m_floor ≤ m < 0
    let base = norm - norm.floor();
    let mut m = if base.is_zero() { Rational64::from_integer(-1) } else { base - 1 };
    let mut out = Vec::new();
    while m >= m_floor {
        out.push(m);
        m -= 1;
    }
    (out, m)
}

/// All type-level principal parts with exponents ≥ m_floor giving singular weight.
pub fn search_singular(g: &GenusSymbol, m_floor: Rational64) -> Result<SearchReport> {
    let provider = EisensteinProvider::for_symbol(g)?;
    let cusp_forms = dim_report_symbol(g, 1 + g.n as i64 / 2)?.dim_s_int()?;
    let target = rat(g.n as i64 / 2 - 1, 1);
    let coverage = match provider.kind {
        ProviderKind::Level6Zero => "γ = 0 components only".to_string(),
        _ => "complete".to_string(),
    };
    let mut types = Vec::new();
    let mut neutral = Vec::new();
    let mut tail_bounds = Vec::new();
    let mut tail_certified = true;
    for class in classes(&provider) {
        let (ms, mut next) = admissible_exponents(class.key.norm, m_floor);
        for m in ms {
            let q = provider.q(&class.representative, -m)?;
            let contribution = -&q * rat(class.key.orbit_size as i64, 4);
            let t = TypeTerm {
                label: label(&class.key),
                representative: class.representative.clone(),
                m,
                orbit_size: class.key.orbit_size,
                orbit_count: class.orbits,
                q: q.clone(),
                contribution,
            };
            if q.is_zero() {
                neutral.push(t);
            } else if q.is_positive() {
                return Err(Error::Consistency(format!(
                    "positive Eisenstein coefficient at m = {m}"
                )));
            } else {
                types.push(t);
            }
        }
        // first non-neutral exponent below the floor
        while provider.q(&class.representative, -next)?.is_zero() {
            next -= 1;
        }
        let bound = tail_bound(provider.kind, -next)?
            * rat(class.key.orbit_size as i64, 4);
        if bound <= target {
            tail_certified = false;
        }
        tail_bounds.push((label(&class.key), next, bound));
    }

    let usable: Vec<&TypeTerm> = types.iter().filter(|t| t.contribution <= target).collect();
    let mut candidates = Vec::new();
    let mut chosen = vec![0u64; usable.len()];
    fn rec(
        i: usize,
        left: &BigRational,
        usable: &[&TypeTerm],
        chosen: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if left.is_zero() {
            out.push(chosen.clone());
            return;
        }
        if i == usable.len() {
            return;
        }
        let mut c = 0u64;
        let mut rest = left.clone();
        while !rest.is_negative() {
            chosen[i] = c;
            rec(i + 1, &rest, usable, chosen, out);
            rest -= &usable[i].contribution;
            c += 1;
        }
        chosen[i] = 0;
    }
    let mut raw = Vec::new();
    if !target.is_zero() {
        rec(0, &target, &usable, &mut chosen, &mut raw);
    }
    for sol in raw {
        let terms: Vec<(TypeTerm, u64)> = sol
            .iter()
            .zip(&usable)
            .filter(|(c, _)| **c > 0)
            .map(|(c, t)| ((*t).clone(), *c))
            .collect();
        let weight = terms
            .iter()
            .map(|(t, c)| &t.contribution * rat(*c as i64, 1))
            .fold(BigRational::zero(), |a, b| a + b);
        candidates.push(ProductCandidate {
            singular: weight == target,
            terms,
            weight,
        });
    }
    Ok(SearchReport {
        symbol: g.to_string(),
        singular_weight: target,
        m_floor,
        coverage,
        types,
        neutral,
        candidates,
        tail_certified,
        tail_bounds,
        cusp_forms,
    })
}
