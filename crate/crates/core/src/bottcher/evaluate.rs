//! Numerical values of φ_f at escaping points of an archimedean place.
//!
//! With u_n = f^n(a) and w_n = f(u_n)/(a_d u_n^d), the functional equation gives
//! φ(u_m) = b_1 · u_m · exp(Σ_{n≥m} Log w_n / d^{n−m+1}) once u_m enters a disk
//! about ∞ on which |w − 1| < 1. Only φ(u_m) is returned: passing back to φ(a)
//! needs a d^m-th root whose branch the series does not see.

use super::escape::telescope;
use super::series::{leading_root_candidates, LeadingRoot};
use super::system::PolynomialSystem;
use crate::algebra::places::Place;
use crate::algebra::{CertifiedComplex, CertifiedReal, FieldElement, QPoly};
use crate::error::{Error, Result};
use rug::Rational;

#[derive(Clone, Debug)]
pub struct BottcherValue {
    /// φ_f(f^m(a)).
    pub value: CertifiedComplex,
    /// The start index m.
    pub start_index: usize,
    pub leading: LeadingRoot,
}

impl BottcherValue {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "start_index": self.start_index,
            "value": self.value.to_json(),
            "modulus": self.value.abs().to_json(),
        })
    }
}

/// Enclosure of b_1 at the place. For an adjoined root the first (d−1)-th
/// root of a_d, scanned from the principal one, at which m(t) can vanish.
pub fn leading_root_value(f: &PolynomialSystem, leading: &LeadingRoot, v: &Place, prec: u32) -> Result<CertifiedComplex> {
    match leading {
        LeadingRoot::InField(b) => v.embed(b, prec),
        LeadingRoot::Adjoined(m) => {
            let k = (f.degree() - 1) as u64;
            let ad = v.embed(f.lead(), prec)?;
            let la = ad.ln().ok_or_else(|| Error::Precision("leading coefficient not separated from 0".into()))?;
            let base = CertifiedComplex::new(la.re.div_u64(k), la.im.div_u64(k)).exp();
            let two_pi = CertifiedReal::pi(prec).mul_rational(&Rational::from(2));
            for j in 0..k {
                let th = two_pi.mul_rational(&Rational::from((j as i64, k as i64)));
                let zeta = CertifiedComplex::new(th.cos(), th.sin());
                let r = base.mul(&zeta);
                if eval_q(m, &r, prec).contains_zero() {
                    return Ok(r);
                }
            }
            Err(Error::Precision("could not match the adjoined root to an embedding".into()))
        }
    }
}

fn eval_q(m: &QPoly, z: &CertifiedComplex, prec: u32) -> CertifiedComplex {
    let mut acc = CertifiedComplex::from_rational(&Rational::new(), prec);
    for c in m.coeffs().iter().rev() {
        acc = acc.mul(z).add(&CertifiedComplex::from_rational(c, prec));
    }
    acc
}

pub fn evaluate_bottcher_arch(
    f: &PolynomialSystem,
    a: &FieldElement,
    v: &Place,
    prec: u32,
    budget: usize,
    root_choice: usize,
) -> Result<BottcherValue> {
    if !v.is_archimedean() {
        return Err(Error::Argument(format!("{v} is not an archimedean place")));
    }
    let a = a.in_field(f.field())?;
    let cands = leading_root_candidates(f, prec)?;
    let leading = cands
        .get(root_choice)
        .cloned()
        .ok_or_else(|| Error::Argument(format!("root_choice {root_choice} out of range ({} candidates)", cands.len())))?;
    let t = telescope(f, &a, v, prec, budget)?
        .ok_or_else(|| Error::Undecided(format!("orbit of {a} not observed to escape at {v} within {budget} iterations")))?;
    let b1 = leading_root_value(f, &leading, v, prec + 64)?;
    let value = b1.mul(&t.u_start).mul(&t.log_sum.exp());
    Ok(BottcherValue { value, start_index: t.start, leading })
}
