//! Polynomial self-maps of the affine line over Q or Q(√D).

use crate::algebra::{FieldElement, FieldSpec, Poly, QPoly, Ring};
use crate::error::{Error, Result};
use rug::Rational;
use std::fmt;

/// f(z) = a_d z^d + … + a_0 with d ≥ 2 and a_d ≠ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialSystem {
    poly: Poly<FieldElement>,
    field: FieldSpec,
}

impl PolynomialSystem {
    /// Coefficients a_0, …, a_d; every entry must lie in `field`.
    pub fn new(coeffs: Vec<FieldElement>, field: FieldSpec) -> Result<Self> {
        let coeffs = coeffs.into_iter().map(|c| c.in_field(field)).collect::<Result<Vec<_>>>()?;
        let poly = Poly::new(coeffs);
        match poly.degree() {
            Some(d) if d >= 2 => Ok(PolynomialSystem { poly, field }),
            _ => Err(Error::Argument("a polynomial system needs degree at least 2".into())),
        }
    }

    pub fn from_poly(poly: Poly<FieldElement>, field: FieldSpec) -> Result<Self> {
        Self::new(poly.into_coeffs(), field)
    }

    pub fn from_rationals(cs: &[Rational]) -> Result<Self> {
        Self::new(cs.iter().cloned().map(FieldElement::rational).collect(), FieldSpec::Rational)
    }

    /// Integer coefficients, low degree first.
    pub fn from_ints(cs: &[i64]) -> Result<Self> {
        Self::new(cs.iter().map(|&c| FieldElement::from_i64(c)).collect(), FieldSpec::Rational)
    }

    /// Parses coefficient strings such as `["0", "1/2", "1"]`.
    pub fn parse(cs: &[&str], field: FieldSpec) -> Result<Self> {
        let v = cs.iter().map(|s| FieldElement::parse(s, field)).collect::<Result<Vec<_>>>()?;
        Self::new(v, field)
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().expect("nonzero")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn poly(&self) -> &Poly<FieldElement> {
        &self.poly
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        self.poly.coeffs()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.poly.coeff_or_zero(i, &self.zero())
    }

    pub fn lead(&self) -> &FieldElement {
        self.poly.lead().expect("nonzero")
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero().in_field(self.field).expect("zero lies in every field")
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one().in_field(self.field).expect("one lies in every field")
    }

    pub fn eval(&self, z: &FieldElement) -> FieldElement {
        self.poly.eval(z)
    }

    /// Rational coefficients, if the system is defined over Q.
    pub fn as_qpoly(&self) -> Option<QPoly> {
        if self.coeffs().iter().all(|c| c.is_rational()) {
            Some(self.poly.map(|c| c.a().clone()))
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_qpoly().is_some()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &PolynomialSystem) -> Result<PolynomialSystem> {
        let field = self.field.join(other.field)?;
        Self::from_poly(self.poly.compose(&other.poly), field)
    }

    /// The n-th iterate (n ≥ 1).
    pub fn iterate(&self, n: usize) -> PolynomialSystem {
        let mut g = self.clone();
        for _ in 1..n {
            g = self.compose(&g).expect("same field");
        }
        g
    }

    /// Orbit a, f(a), …, f^{n-1}(a) computed exactly.
    pub fn orbit(&self, a: &FieldElement, n: usize) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(n);
        let mut z = a.clone();
        for _ in 0..n {
            out.push(z.clone());
            z = self.eval(&z);
        }
        out
    }

    /// Applies the nontrivial automorphism of Q(√D) to every coefficient.
    pub fn galois_conjugate(&self) -> PolynomialSystem {
        PolynomialSystem { poly: self.poly.map(|c| c.conj()), field: self.field }
    }

    pub fn derivative(&self) -> Poly<FieldElement> {
        self.poly.derivative()
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        (0..=self.degree()).map(|i| self.coeff(i).to_string()).collect()
    }
}

impl fmt::Display for PolynomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in (0..=self.degree()).rev() {
            let c = self.coeff(i);
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if c.is_one() && i > 0 { String::new() } else if i > 0 { format!("({c})*") } else { format!("({c})") };
            match i {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}z")?,
                _ => write!(f, "{cs}z^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterates_compose() {
        let f = PolynomialSystem::from_ints(&[1, 0, 1]).unwrap();
        let f2 = f.iterate(2);
        assert_eq!(f2.degree(), 4);
        assert_eq!(f2.eval(&FieldElement::from_i64(1)), FieldElement::from_i64(5));
        assert_eq!(f.to_string(), "z^2 + (1)");
        assert!(PolynomialSystem::from_ints(&[1, 1]).is_err());
    }
}
