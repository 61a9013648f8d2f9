//! Canonical heights assembled from local Green functions, membership in T_d,
//! preperiodicity detection and the naive-height ratio diagnostic.
//!
//! Heights are normalized by 1/[K:Q]: ĥ(a) = [K:Q]^{−1} Σ_v n_v g_v(a).

use super::green::{green, GreenStatus, GreenValue, EXACT_BIT_CAP};
use crate::algebra::places::{relevant_places, Place, PlaceKind};
use crate::algebra::rational::bit_size;
use crate::algebra::{CertifiedReal, FieldElement};
use crate::bottcher::{classify_polynomial_type, PolynomialSystem};
use crate::error::{Error, Result};
use rug::{Integer, Rational};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug)]
pub struct HeightValue {
    /// p ↦ c_p with finite contribution Σ c_p log p.
    pub finite: BTreeMap<Integer, Rational>,
    /// Weighted sum of the archimedean Green values.
    pub arch: CertifiedReal,
    pub undecided_places: Vec<Place>,
    pub locals: Vec<GreenValue>,
}

impl HeightValue {
    pub fn is_complete(&self) -> bool {
        self.undecided_places.is_empty()
    }

    /// Σ c_p log p + arch; meaningful only when complete.
    pub fn value(&self, prec: u32) -> CertifiedReal {
        let mut acc = self.arch.with_prec(prec);
        for (p, c) in &self.finite {
            acc = acc.add(&CertifiedReal::ln_integer(p, prec).mul_rational(c));
        }
        acc
    }

    /// True when every place was decided bounded.
    pub fn is_zero(&self) -> bool {
        self.is_complete() && self.finite.is_empty() && self.locals.iter().all(|g| !g.escaped())
    }

    /// Archimedean part is certainly zero (all archimedean places bounded).
    pub fn arch_is_zero(&self) -> bool {
        self.locals
            .iter()
            .filter(|g| g.place.is_archimedean())
            .all(|g| matches!(g.status, GreenStatus::BoundedCertified))
    }

    pub fn symbolic(&self) -> String {
        let mut parts: Vec<String> = self.finite.iter().map(|(p, c)| format!("{c}*log({p})")).collect();
        if !self.arch_is_zero() {
            parts.push(format!("({})", self.arch));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let finite: serde_json::Map<String, serde_json::Value> =
            self.finite.iter().map(|(p, c)| (p.to_string(), serde_json::Value::String(c.to_string()))).collect();
        serde_json::json!({
            "finite": finite,
            "arch": self.arch.to_json(),
            "normalized": true,
            "undecided_places": self.undecided_places.iter().map(|p| p.name()).collect::<Vec<_>>(),
            "symbolic": self.symbolic(),
            "locals": self.locals.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
        })
    }
}

pub fn canonical_height(f: &PolynomialSystem, a: &FieldElement, prec: u32, budget: usize) -> Result<HeightValue> {
    let a = a.in_field(f.field())?;
    let places = relevant_places(f.coeffs(), std::slice::from_ref(&a), f.field());
    let kq = Rational::from(f.field().degree());
    let mut finite: BTreeMap<Integer, Rational> = BTreeMap::new();
    let mut arch = CertifiedReal::zero(prec);
    let mut undecided = Vec::new();
    let mut locals = Vec::new();
    for v in &places {
        let g = green(f, &a, v, prec, budget)?;
        let w = Rational::from(v.local_degree()) / &kq;
        match &g.status {
            GreenStatus::EscapedExact { p, c } => {
                *finite.entry(p.clone()).or_default() += Rational::from(c * &w);
            }
            GreenStatus::EscapedCertified(r) => arch = arch.add(&r.mul_rational(&w)),
            GreenStatus::BoundedCertified => {}
            GreenStatus::UndecidedWithinBudget => undecided.push(v.clone()),
        }
        locals.push(g);
    }
    finite.retain(|_, c| *c != 0);
    Ok(HeightValue { finite, arch, undecided_places: undecided, locals })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Preperiodicity {
    /// Tail and period when the cycle was found exactly.
    Preperiodic { tail: Option<usize>, period: Option<usize> },
    /// Escape at this place makes ĥ > 0.
    NotPreperiodic { witness: Place },
    Undecided,
}

/// Exact orbit search for a repeat, up to `steps` iterates.
pub fn exact_cycle(f: &PolynomialSystem, a: &FieldElement, steps: usize) -> Option<(usize, usize)> {
    let mut seen: HashMap<FieldElement, usize> = HashMap::new();
    let mut u = a.clone();
    for n in 0..=steps {
        if let Some(&j) = seen.get(&u) {
            return Some((j, n - j));
        }
        seen.insert(u.clone(), n);
        u = f.eval(&u);
        if bit_size(u.a()) + bit_size(u.b()) > EXACT_BIT_CAP {
            return None;
        }
    }
    None
}

pub fn preperiodicity(f: &PolynomialSystem, a: &FieldElement, prec: u32, budget: usize) -> Result<Preperiodicity> {
    let a = a.in_field(f.field())?;
    if let Some((tail, period)) = exact_cycle(f, &a, budget) {
        return Ok(Preperiodicity::Preperiodic { tail: Some(tail), period: Some(period) });
    }
    let h = canonical_height(f, &a, prec, budget)?;
    if let Some(g) = h.locals.iter().find(|g| g.escaped()) {
        return Ok(Preperiodicity::NotPreperiodic { witness: g.place.clone() });
    }
    if h.is_complete() {
        // ĥ = 0 over a number field forces preperiodicity; the orbit is finite
        let found = exact_cycle(f, &a, 64 * budget.max(64));
        return Ok(Preperiodicity::Preperiodic { tail: found.map(|x| x.0), period: found.map(|x| x.1) });
    }
    Ok(Preperiodicity::Undecided)
}

#[derive(Clone, Debug, PartialEq)]
pub enum TdMembership {
    Yes { witness: Place },
    NoCertified,
    Undecided,
}

impl TdMembership {
    pub fn name(&self) -> &'static str {
        match self {
            TdMembership::Yes { .. } => "Yes",
            TdMembership::NoCertified => "NoCertified",
            TdMembership::Undecided => "Undecided",
        }
    }
}

/// Some archimedean place escapes (Yes) or all are certified bounded (NoCertified).
pub fn in_t_d(f: &PolynomialSystem, a: &FieldElement, prec: u32, budget: usize) -> Result<TdMembership> {
    let a = a.in_field(f.field())?;
    if classify_polynomial_type(f)?.is_monomial_type() {
        return Err(Error::Precondition(format!("{f} is of monomial type")));
    }
    if let Some((tail, period)) = exact_cycle(f, &a, budget) {
        return Err(Error::Precondition(format!("{a} is preperiodic (tail {tail}, period {period})")));
    }
    let mut all_bounded = true;
    for v in Place::archimedean(f.field()) {
        let g = green(f, &a, &v, prec, budget)?;
        match g.status {
            GreenStatus::EscapedCertified(_) => return Ok(TdMembership::Yes { witness: v }),
            GreenStatus::BoundedCertified => {}
            _ => all_bounded = false,
        }
    }
    Ok(if all_bounded { TdMembership::NoCertified } else { TdMembership::Undecided })
}

#[derive(Clone, Debug)]
pub struct LiminfEntry {
    pub n: usize,
    /// g_v(f^n(a)) / h(f^n(a)); `None` when h vanishes (index skipped).
    pub ratio: Option<CertifiedReal>,
}

/// Naive local height log max(1, |x|_v).
fn naive_local(x: &FieldElement, v: &Place, prec: u32) -> Result<CertifiedReal> {
    if x.is_zero() {
        return Ok(CertifiedReal::zero(prec));
    }
    match &v.kind {
        PlaceKind::Finite { p, .. } => {
            let c = v.log_coefficient(x)?;
            if c <= 0 {
                Ok(CertifiedReal::zero(prec))
            } else {
                Ok(CertifiedReal::ln_integer(p, prec).mul_rational(&c))
            }
        }
        PlaceKind::Archimedean(_) => {
            let l = v.embed(x, prec + 32)?.abs();
            if l.hi() <= &1 {
                return Ok(CertifiedReal::zero(prec));
            }
            let one = CertifiedReal::from_i64(1, prec + 32);
            Ok(l.max(&one).ln().expect("≥ 1").with_prec(prec))
        }
    }
}

/// Naive height h(x) = [K:Q]^{−1} Σ_v n_v log max(1, |x|_v).
pub fn naive_height(x: &FieldElement, prec: u32) -> Result<CertifiedReal> {
    let field = x.field();
    // |x|_v > 1 only at archimedean places and primes of the denominators
    let places = relevant_places(&[], std::slice::from_ref(x), field);
    let kq = Rational::from(field.degree());
    let mut acc = CertifiedReal::zero(prec);
    for v in &places {
        let w = Rational::from(v.local_degree()) / &kq;
        acc = acc.add(&naive_local(x, v, prec)?.mul_rational(&w));
    }
    Ok(acc)
}

pub fn liminf_diagnostic(
    f: &PolynomialSystem,
    a: &FieldElement,
    v: &Place,
    n_max: usize,
    prec: u32,
) -> Result<Vec<LiminfEntry>> {
    let mut u = a.in_field(f.field())?;
    let mut out = Vec::new();
    for n in 0..=n_max {
        let h = naive_height(&u, prec)?;
        let ratio = if h.contains_zero() { None } else { naive_local(&u, v, prec)?.div(&h) };
        out.push(LiminfEntry { n, ratio });
        if n < n_max {
            u = f.eval(&u);
        }
    }
    Ok(out)
}
