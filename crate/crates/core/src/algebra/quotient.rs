//! Residues of Q[t] modulo a fixed monic modulus m(t).

use super::poly::QPoly;
use super::ring::{ExactRing, Ring};
use rug::Rational;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct QuotientElement {
    rep: QPoly,
    modulus: Arc<QPoly>,
}

impl PartialEq for QuotientElement {
    fn eq(&self, o: &Self) -> bool {
        self.rep == o.rep && self.modulus == o.modulus
    }
}

impl QuotientElement {
    /// Reduces `rep` modulo the monic `modulus`.
    pub fn new(rep: QPoly, modulus: Arc<QPoly>) -> Self {
        assert!(modulus.degree().is_some_and(|d| d >= 1), "modulus of degree ≥ 1");
        assert!(modulus.lead().is_some_and(|c| *c == 1), "modulus must be monic");
        let rep = rep.rem(&modulus).expect("nonzero modulus");
        QuotientElement { rep, modulus }
    }

    /// The class of t.
    pub fn generator(modulus: Arc<QPoly>) -> Self {
        let t = QPoly::x(&Rational::new());
        Self::new(t, modulus)
    }

    pub fn rational(q: Rational, modulus: Arc<QPoly>) -> Self {
        Self::new(QPoly::constant(q), modulus)
    }

    pub fn rep(&self) -> &QPoly {
        &self.rep
    }

    pub fn modulus(&self) -> &Arc<QPoly> {
        &self.modulus
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.rep.degree() {
            None => Some(Rational::new()),
            Some(0) => Some(self.rep.coeffs()[0].clone()),
            _ => None,
        }
    }

    fn wrap(&self, rep: QPoly) -> Self {
        QuotientElement::new(rep, self.modulus.clone())
    }
}

/// Renders a rational polynomial in the variable t, e.g. "t^2-2".
pub fn format_in_t(p: &QPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        let neg = c.cmp0() == std::cmp::Ordering::Less;
        let a = Rational::from(c.abs_ref());
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let one = a == 1;
        out += &match (k, one) {
            (0, _) => a.to_string(),
            (1, true) => "t".into(),
            (1, false) => format!("{a}*t"),
            (_, true) => format!("t^{k}"),
            (_, false) => format!("{a}*t^{k}"),
        };
    }
    out
}

impl fmt::Display for QuotientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_in_t(&self.rep))
    }
}

impl Ring for QuotientElement {
    fn zero_like(&self) -> Self {
        self.wrap(QPoly::zero())
    }
    fn one_like(&self) -> Self {
        self.wrap(QPoly::constant(Rational::from(1)))
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.modulus, o.modulus);
        QuotientElement { rep: self.rep.add(&o.rep), modulus: self.modulus.clone() }
    }
    fn sub(&self, o: &Self) -> Self {
        QuotientElement { rep: self.rep.sub(&o.rep), modulus: self.modulus.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        self.wrap(self.rep.mul(&o.rep))
    }
    fn neg(&self) -> Self {
        QuotientElement { rep: self.rep.neg(), modulus: self.modulus.clone() }
    }
    fn scale(&self, q: &Rational) -> Self {
        QuotientElement { rep: self.rep.scale_q(q), modulus: self.modulus.clone() }
    }
    /// Inverse through the extended gcd; `None` when the residue is a zero divisor.
    fn try_inv(&self) -> Option<Self> {
        if self.rep.is_zero() {
            return None;
        }
        let (g, s, _) = self.rep.ext_gcd(&self.modulus)?;
        if g.degree() != Some(0) {
            return None;
        }
        let c = g.coeffs()[0].clone().recip();
        Some(self.wrap(s.scale_q(&c)))
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        self.wrap(QPoly::constant(q.clone()))
    }
}

impl ExactRing for QuotientElement {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::qpoly_from_ints;

    #[test]
    fn generator_satisfies_modulus() {
        // t^2 - 2
        let m = Arc::new(qpoly_from_ints(&[-2, 0, 1]));
        let t = QuotientElement::generator(m.clone());
        assert_eq!(t.mul(&t).as_rational(), Some(Rational::from(2)));
        let inv = t.try_inv().unwrap();
        assert!(inv.mul(&t).is_one());
        assert_eq!(inv.to_string(), "1/2*t");
    }

    #[test]
    fn zero_divisors_have_no_inverse() {
        // (t - 1)(t + 1) is reducible
        let m = Arc::new(qpoly_from_ints(&[-1, 0, 1]));
        let x = QuotientElement::new(qpoly_from_ints(&[-1, 1]), m);
        assert!(x.try_inv().is_none());
    }
}
