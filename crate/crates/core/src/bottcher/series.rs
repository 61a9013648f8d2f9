//! Böttcher coordinates φ(z) = b_1 z + b_0 + b_{-1} z^{-1} + … with φ∘f = φ^d.
//!
//! The coefficient of z^{d−k} in φ∘f − φ^d is linear in b_{1−k} with slope
//! −d·b_1^{d−1} = −d·a_d and involves only b_1, …, b_{2−k} otherwise, so the
//! coefficients are solved one at a time.

use super::system::PolynomialSystem;
use crate::algebra::quotient::QuotientElement;
use crate::algebra::rational::rational_roots_of_power;
use crate::algebra::roots::{factor, roots_in_field};
use crate::algebra::{FieldElement, FieldSpec, LaurentSeries, Poly, QPoly, Ring};
use crate::error::{Error, Result};
use rug::Rational;
use std::sync::Arc;

/// How b_1 is realized: a root in the base field, or the class of t in Q[t]/(m).
#[derive(Clone, Debug, PartialEq)]
pub enum LeadingRoot {
    InField(FieldElement),
    Adjoined(QPoly),
}

#[derive(Clone, Debug)]
pub enum BottcherCoeffs {
    Field(LaurentSeries<FieldElement>),
    Quotient(LaurentSeries<QuotientElement>),
}

#[derive(Clone, Debug)]
pub struct BottcherSeries {
    pub coeffs: BottcherCoeffs,
    pub leading: LeadingRoot,
    pub degree: usize,
}

/// Candidates for b_1 in the deterministic order used by `root_choice`.
pub fn leading_root_candidates(f: &PolynomialSystem, prec: u32) -> Result<Vec<LeadingRoot>> {
    let d = f.degree();
    let ad = f.lead();
    let k = (d - 1) as u32;
    let mut out = Vec::new();
    match f.field() {
        FieldSpec::Rational => {
            let mut rs = rational_roots_of_power(ad.a(), k);
            rs.sort_by(|x, y| {
                Rational::from(x.abs_ref()).cmp(&Rational::from(y.abs_ref())).then_with(|| y.cmp(x))
            });
            out.extend(rs.into_iter().map(|r| LeadingRoot::InField(FieldElement::rational(r))));
            let mut m = vec![Rational::new(); d];
            m[0] = Rational::from(-ad.a());
            m[d - 1] = Rational::from(1);
            for g in factor(&QPoly::new(m), prec)? {
                if g.degree().unwrap_or(0) >= 2 {
                    out.push(LeadingRoot::Adjoined(g));
                }
            }
        }
        field => {
            let mut m = vec![f.zero(); d];
            m[0] = ad.neg();
            m[d - 1] = f.one();
            let mut rs = roots_in_field(&Poly::new(m), field, prec)?;
            rs.sort_by(|x, y| {
                (!x.is_rational())
                    .cmp(&!y.is_rational())
                    .then_with(|| Rational::from(x.a().abs_ref()).cmp(&Rational::from(y.a().abs_ref())))
                    .then_with(|| y.a().cmp(x.a()))
                    .then_with(|| y.b().cmp(x.b()))
            });
            out.extend(rs.into_iter().map(LeadingRoot::InField));
            if out.is_empty() {
                return Err(Error::Unsupported(format!(
                    "leading coefficient {ad} has no {k}-th root in {field}; adjoining it over a quadratic field is not supported"
                )));
            }
        }
    }
    Ok(out)
}

fn solve<R: Ring>(f: &Poly<R>, b1: R, n: usize) -> Result<LaurentSeries<R>> {
    let d = f.degree().expect("nonzero") as i64;
    let ad = f.lead().expect("nonzero").clone();
    let slope_inv = ad
        .scale(&Rational::from(d))
        .try_inv()
        .ok_or_else(|| Error::Internal("leading coefficient not invertible".into()))?;
    let mut coeffs = vec![b1];
    for k in 1..n as i64 {
        let mut trial = coeffs.clone();
        trial.push(coeffs[0].zero_like());
        let phi0 = LaurentSeries::new(1, trial);
        let e = d - k;
        let lhs = phi0.compose_poly(f)?.coeff(e).ok_or_else(|| Error::Internal("composition lost order".into()))?;
        let rhs = phi0.pow(d as u32).coeff(e).ok_or_else(|| Error::Internal("power lost order".into()))?;
        coeffs.push(lhs.sub(&rhs).mul(&slope_inv));
    }
    Ok(LaurentSeries::new(1, coeffs))
}

/// φ∘f − φ^d on the window where both sides are determined.
pub fn functional_residual<R: Ring>(phi: &LaurentSeries<R>, f: &Poly<R>) -> Result<LaurentSeries<R>> {
    let d = f.degree().expect("nonzero") as u32;
    let lhs = phi.compose_poly(f)?;
    let rhs = phi.pow(d);
    let low = lhs.low().max(rhs.low());
    Ok(lhs.truncate(low).sub(&rhs.truncate(low)))
}

/// Böttcher coordinate to `order` coefficients, b_1 chosen by `root_choice`.
pub fn compute_bottcher(f: &PolynomialSystem, order: usize, root_choice: usize) -> Result<BottcherSeries> {
    if order < 2 {
        return Err(Error::Argument(format!("Böttcher order must be at least 2, got {order}")));
    }
    let cands = leading_root_candidates(f, 128)?;
    let leading = cands
        .get(root_choice)
        .cloned()
        .ok_or_else(|| Error::Argument(format!("root_choice {root_choice} out of range ({} candidates)", cands.len())))?;
    let coeffs = match &leading {
        LeadingRoot::InField(b1) => {
            let s = solve(f.poly(), b1.clone(), order)?;
            if !functional_residual(&s, f.poly())?.all_zero() {
                return Err(Error::Internal("Böttcher functional equation failed verification".into()));
            }
            BottcherCoeffs::Field(s)
        }
        LeadingRoot::Adjoined(m) => {
            let m = Arc::new(m.clone());
            let fq: Poly<QuotientElement> = f.poly().map(|c| QuotientElement::rational(c.a().clone(), m.clone()));
            let b1 = QuotientElement::generator(m.clone());
            let s = solve(&fq, b1, order)?;
            if !functional_residual(&s, &fq)?.all_zero() {
                return Err(Error::Internal("Böttcher functional equation failed verification".into()));
            }
            BottcherCoeffs::Quotient(s)
        }
    };
    Ok(BottcherSeries { coeffs, leading, degree: f.degree() })
}

impl BottcherSeries {
    pub fn order(&self) -> usize {
        match &self.coeffs {
            BottcherCoeffs::Field(s) => s.valid_order(),
            BottcherCoeffs::Quotient(s) => s.valid_order(),
        }
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        match &self.coeffs {
            BottcherCoeffs::Field(s) => s.coeffs().iter().map(|c| c.to_string()).collect(),
            BottcherCoeffs::Quotient(s) => s.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn ring_name(&self, field: FieldSpec) -> String {
        match &self.leading {
            LeadingRoot::InField(_) => field.to_string(),
            LeadingRoot::Adjoined(m) => format!("Q[t]/({})", crate::algebra::quotient::format_in_t(m)),
        }
    }

    pub fn field_series(&self) -> Option<&LaurentSeries<FieldElement>> {
        match &self.coeffs {
            BottcherCoeffs::Field(s) => Some(s),
            _ => None,
        }
    }

    pub fn to_json(&self, field: FieldSpec) -> serde_json::Value {
        let ring = self.ring_name(field);
        match &self.coeffs {
            BottcherCoeffs::Field(s) => s.to_json(&ring),
            BottcherCoeffs::Quotient(s) => s.to_json(&ring),
        }
    }
}
