use crate::algebra::FieldElement;
use crate::bottcher::{classify_polynomial_type, PolynomialSystem};
use crate::error::{Error, Result};
use crate::heights::{preperiodicity, Preperiodicity};
use std::fmt;

/// A nonexceptional polynomial with a wandering starting point.
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicalPair {
    pub f: PolynomialSystem,
    pub a: FieldElement,
}

impl DynamicalPair {
    /// Rejects monomial-type maps and points proven preperiodic. A point whose
    /// preperiodicity stays undecided within the budget is accepted.
    pub fn new(f: PolynomialSystem, a: FieldElement, prec: u32, budget: usize) -> Result<Self> {
        let a = a.in_field(f.field())?;
        if classify_polynomial_type(&f)?.is_monomial_type() {
            return Err(Error::Precondition(format!("{f} is of monomial type")));
        }
        if let Preperiodicity::Preperiodic { .. } = preperiodicity(&f, &a, prec, budget)? {
            return Err(Error::Precondition(format!("{a} is preperiodic for {f}")));
        }
        Ok(DynamicalPair { f, a })
    }

    /// Skips the admissibility checks; for points already known to wander.
    pub fn new_unchecked(f: PolynomialSystem, a: FieldElement) -> Result<Self> {
        let a = a.in_field(f.field())?;
        Ok(DynamicalPair { f, a })
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    /// (σf, σa) for the nontrivial automorphism σ of the quadratic base field.
    pub fn conjugate(&self) -> DynamicalPair {
        DynamicalPair { f: self.f.galois_conjugate(), a: self.a.conj() }
    }

    /// (f, f^n(a)).
    pub fn advance(&self, n: usize) -> DynamicalPair {
        let mut a = self.a.clone();
        for _ in 0..n {
            a = self.f.eval(&a);
        }
        DynamicalPair { f: self.f.clone(), a }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": self.f.field().to_string(),
            "coeffs": self.f.coeff_strings(),
            "point": self.a.to_string(),
        })
    }
}

impl fmt::Display for DynamicalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f, self.a)
    }
}
