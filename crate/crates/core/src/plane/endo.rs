use crate::algebra::mpoly::MPoly;
use crate::algebra::{FieldElement, FieldSpec};
use crate::error::{Error, Result};
use std::fmt;

pub type Form = MPoly<FieldElement>;

/// A dominant polynomial map (f_1, f_2) of A² with algebraic degree d ≥ 2.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneEndomorphism {
    f1: Form,
    f2: Form,
    field: FieldSpec,
}

pub(crate) fn total_degree(p: &Form) -> Option<u32> {
    p.terms().keys().map(|(i, j)| i + j).max()
}

impl PlaneEndomorphism {
    pub fn new(f1: Form, f2: Form, field: FieldSpec) -> Result<Self> {
        let lift = |p: &Form| -> Result<Form> {
            Ok(MPoly::from_terms(p.terms().iter().map(|(k, c)| Ok((*k, c.in_field(field)?))).collect::<Result<Vec<_>>>()?))
        };
        let (f1, f2) = (lift(&f1)?, lift(&f2)?);
        let d = total_degree(&f1).unwrap_or(0).max(total_degree(&f2).unwrap_or(0));
        if d < 2 {
            return Err(Error::Argument(format!("algebraic degree {d} is below 2")));
        }
        let f = PlaneEndomorphism { f1, f2, field };
        if f.jacobian().is_zero() {
            return Err(Error::Argument("Jacobian determinant vanishes identically (map not dominant)".into()));
        }
        Ok(f)
    }

    /// From integer triples (i, j, c) for x^i y^j.
    pub fn from_ints(f1: &[(u32, u32, i64)], f2: &[(u32, u32, i64)]) -> Result<Self> {
        let conv = |ts: &[(u32, u32, i64)]| MPoly::from_terms(ts.iter().map(|&(i, j, c)| ((i, j), FieldElement::from_i64(c))));
        Self::new(conv(f1), conv(f2), FieldSpec::Rational)
    }

    /// Terms given as [[i, j, "c"], …] over `field`.
    pub fn from_json_terms(f1: &serde_json::Value, f2: &serde_json::Value, field: FieldSpec) -> Result<Self> {
        Self::new(parse_terms(f1, field)?, parse_terms(f2, field)?, field)
    }

    pub fn f1(&self) -> &Form {
        &self.f1
    }

    pub fn f2(&self) -> &Form {
        &self.f2
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero().in_field(self.field).expect("Q embeds")
    }

    pub fn degree(&self) -> u32 {
        total_degree(&self.f1).unwrap_or(0).max(total_degree(&self.f2).unwrap_or(0))
    }

    pub fn jacobian(&self) -> Form {
        self.f1.dx().mul(&self.f2.dy()).sub(&self.f1.dy().mul(&self.f2.dx()))
    }

    /// Degree-d homogeneous parts (f̄_1, f̄_2).
    pub fn top_forms(&self) -> (Form, Form) {
        let d = self.degree();
        (self.f1.homogeneous_part(d), self.f2.homogeneous_part(d))
    }

    /// self ∘ other.
    pub fn compose(&self, other: &PlaneEndomorphism) -> PlaneEndomorphism {
        let like = self.zero();
        PlaneEndomorphism {
            f1: self.f1.compose(&other.f1, &other.f2, &like),
            f2: self.f2.compose(&other.f1, &other.f2, &like),
            field: self.field,
        }
    }

    /// f^n for n ≥ 1.
    pub fn iterate(&self, n: usize) -> PlaneEndomorphism {
        let mut g = self.clone();
        for _ in 1..n {
            g = self.compose(&g);
        }
        g
    }

    pub fn apply(&self, x: &FieldElement, y: &FieldElement) -> (FieldElement, FieldElement) {
        (self.f1.eval(x, y), self.f2.eval(x, y))
    }

    /// P(f_1, f_2).
    pub fn pullback(&self, p: &Form) -> Form {
        p.compose(&self.f1, &self.f2, &self.zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": self.field.to_string(),
            "f1": self.f1.to_json(),
            "f2": self.f2.to_json(),
        })
    }
}

impl fmt::Display for PlaneEndomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f1, self.f2)
    }
}

pub fn parse_terms(v: &serde_json::Value, field: FieldSpec) -> Result<Form> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("polynomial must be a list of [i, j, \"c\"] terms".into()))?;
    let mut out = MPoly::zero();
    for t in arr {
        let bad = || Error::Parse(format!("malformed term {t}"));
        let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(bad)?;
        let i = t[0].as_u64().ok_or_else(bad)? as u32;
        let j = t[1].as_u64().ok_or_else(bad)? as u32;
        let c = match &t[2] {
            serde_json::Value::String(s) => FieldElement::parse(s, field)?,
            serde_json::Value::Number(n) => FieldElement::parse(&n.to_string(), field)?,
            _ => return Err(bad()),
        };
        out.add_term((i, j), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_maps() {
        assert!(PlaneEndomorphism::from_ints(&[(1, 0, 1)], &[(0, 1, 1)]).is_err());
        // (x², x²) has zero Jacobian
        assert!(PlaneEndomorphism::from_ints(&[(2, 0, 1)], &[(2, 0, 1)]).is_err());
    }

    #[test]
    fn iterate_matches_pointwise_composition() {
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1), (0, 0, 1)], &[(1, 1, 2)]).unwrap();
        let f2 = f.iterate(2);
        let (x, y) = (FieldElement::frac(1, 3), FieldElement::from_i64(2));
        let (a, b) = f.apply(&x, &y);
        assert_eq!(f2.apply(&x, &y), f.apply(&a, &b));
        assert_eq!(f2.degree(), 4);
    }

    #[test]
    fn json_terms_round_trip() {
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1)], &[(1, 1, 2)]).unwrap();
        let j = f.to_json();
        let g = PlaneEndomorphism::from_json_terms(&j["f1"], &j["f2"], FieldSpec::Rational).unwrap();
        assert_eq!(f, g);
    }
}
