//! Q and quadratic fields Q(√D) with exact elements a + b√D.

use super::rational::{format_rational, is_squarefree, parse_rational};
use super::ring::{ExactRing, Ring};
use crate::error::{Error, Result};
use rug::Rational;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Quadratic(i64),
}

impl FieldSpec {
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 1 || !is_squarefree(d) {
            return Err(Error::Argument(format!("Q(sqrt({d})): D must be squarefree and not 0 or 1")));
        }
        Ok(FieldSpec::Quadratic(d))
    }

    pub fn degree(&self) -> u32 {
        match self {
            FieldSpec::Rational => 1,
            FieldSpec::Quadratic(_) => 2,
        }
    }

    pub fn d(&self) -> Option<i64> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Quadratic(d) => Some(*d),
        }
    }

    /// Smallest field containing both.
    pub fn join(self, other: FieldSpec) -> Result<FieldSpec> {
        match (self, other) {
            (FieldSpec::Rational, o) | (o, FieldSpec::Rational) => Ok(o),
            (FieldSpec::Quadratic(a), FieldSpec::Quadratic(b)) if a == b => Ok(self),
            _ => Err(Error::Unsupported(format!("compositum of {self} and {other}"))),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Q" || t == "QQ" {
            return Ok(FieldSpec::Rational);
        }
        let inner = t
            .strip_prefix("Q(sqrt(")
            .and_then(|r| r.strip_suffix("))"))
            .ok_or_else(|| Error::Parse(format!("field spec `{s}`: expected Q or Q(sqrt(D))")))?;
        let d: i64 = inner
            .parse()
            .map_err(|_| Error::Parse(format!("field spec `{s}`: bad D")))?;
        FieldSpec::quadratic(d)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

/// a + b√D. Elements with b = 0 are compatible with every field.
#[derive(Clone, Debug)]
pub struct FieldElement {
    a: Rational,
    b: Rational,
    field: FieldSpec,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.cmp0() == Ordering::Equal || self.field == other.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl FieldElement {
    pub fn new(a: Rational, b: Rational, field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rational => {
                assert!(b.cmp0() == Ordering::Equal, "irrational part over Q");
                FieldElement { a, b, field }
            }
            FieldSpec::Quadratic(_) => FieldElement { a, b, field },
        }
    }

    pub fn rational(a: Rational) -> Self {
        FieldElement { a, b: Rational::new(), field: FieldSpec::Rational }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rational(Rational::from((n, d)))
    }

    pub fn sqrt_d(field: FieldSpec) -> Self {
        FieldElement { a: Rational::new(), b: Rational::from(1), field }
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    /// Same value viewed in `field` (which must contain it).
    pub fn in_field(&self, field: FieldSpec) -> Result<Self> {
        let f = self.field_of_value().join(field)?;
        Ok(FieldElement { a: self.a.clone(), b: self.b.clone(), field: f })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Field generated by the value itself: Q when b = 0.
    pub fn field_of_value(&self) -> FieldSpec {
        if self.is_rational() {
            FieldSpec::Rational
        } else {
            self.field
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.cmp0() == Ordering::Equal
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn dval(&self) -> i64 {
        self.field.d().unwrap_or(0)
    }

    fn joined(&self, other: &Self) -> FieldSpec {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => {
                if self.field == FieldSpec::Rational {
                    other.field
                } else {
                    self.field
                }
            }
            (true, false) => other.field,
            (false, true) => self.field,
            (false, false) => {
                assert_eq!(self.field, other.field, "mixing elements of different quadratic fields");
                self.field
            }
        }
    }

    pub fn norm(&self) -> Rational {
        let d = Rational::from(self.dval());
        Rational::from(&self.a * &self.a) - Rational::from(&self.b * &self.b) * d
    }

    pub fn trace(&self) -> Rational {
        Rational::from(&self.a * 2u32)
    }

    pub fn conj(&self) -> Self {
        FieldElement { a: self.a.clone(), b: Rational::from(-&self.b), field: self.field }
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.cmp0() == Ordering::Equal {
            return None;
        }
        let c = self.conj();
        Some(FieldElement {
            a: Rational::from(&c.a / &n),
            b: Rational::from(&c.b / &n),
            field: self.field,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.a.cmp0() == Ordering::Equal && self.b.cmp0() == Ordering::Equal
    }

    /// Parses "3/4", "3-2*sqrt(2)", "(1/2)*sqrt(2)", "-sqrt(-3)" and similar sums.
    pub fn parse(s: &str, field: FieldSpec) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let bad = || Error::Parse(format!("scalar `{s}` is not of the form a+b*sqrt(D)"));
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut depth = 0i32;
        for (i, ch) in t.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && i > 0 && !cur.is_empty() && !cur.ends_with('*') && !cur.ends_with('/') => {
                    terms.push(std::mem::take(&mut cur));
                }
                _ => {}
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut a = Rational::new();
        let mut b = Rational::new();
        let strip_parens = |x: &str| -> String {
            let x = x.trim();
            if x.starts_with('(') && x.ends_with(')') {
                x[1..x.len() - 1].to_string()
            } else {
                x.to_string()
            }
        };
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(r) => (-1, r.to_string()),
                None => (1, term.strip_prefix('+').unwrap_or(&term).to_string()),
            };
            if let Some(pos) = body.find("sqrt(") {
                let dstr = body[pos + 5..].strip_suffix(')').ok_or_else(bad)?;
                let d: i64 = dstr.parse().map_err(|_| bad())?;
                match field {
                    FieldSpec::Quadratic(fd) if fd == d => {}
                    _ => {
                        return Err(Error::Parse(format!("scalar `{s}` uses sqrt({d}) outside field {field}")))
                    }
                }
                let coef_str = body[..pos].trim_end_matches('*');
                let coef = if coef_str.is_empty() {
                    Rational::from(1)
                } else {
                    parse_rational(&strip_parens(coef_str)).ok_or_else(bad)?
                };
                b += coef * sign;
            } else {
                let q = parse_rational(&strip_parens(&body)).ok_or_else(bad)?;
                a += q * sign;
            }
        }
        Ok(FieldElement { a, b, field })
    }

    pub fn pow_i(&self, n: i64) -> Option<Self> {
        if n >= 0 {
            Some(Ring::pow(self, n as u64))
        } else {
            self.inv().map(|x| Ring::pow(&x, n.unsigned_abs()))
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", format_rational(&self.a));
        }
        let d = self.dval();
        if self.a.cmp0() == Ordering::Equal {
            return write!(f, "{}*sqrt({d})", format_rational(&self.b));
        }
        if self.b.cmp0() == Ordering::Less {
            write!(f, "{}-{}*sqrt({d})", format_rational(&self.a), format_rational(&Rational::from(-&self.b)))
        } else {
            write!(f, "{}+{}*sqrt({d})", format_rational(&self.a), format_rational(&self.b))
        }
    }
}

impl Ring for FieldElement {
    fn zero_like(&self) -> Self {
        FieldElement { a: Rational::new(), b: Rational::new(), field: self.field }
    }
    fn one_like(&self) -> Self {
        FieldElement { a: Rational::from(1), b: Rational::new(), field: self.field }
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        FieldElement {
            a: Rational::from(&self.a + &o.a),
            b: Rational::from(&self.b + &o.b),
            field: self.joined(o),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        FieldElement {
            a: Rational::from(&self.a - &o.a),
            b: Rational::from(&self.b - &o.b),
            field: self.joined(o),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        let field = self.joined(o);
        if self.is_rational() && o.is_rational() {
            return FieldElement { a: Rational::from(&self.a * &o.a), b: Rational::new(), field };
        }
        let d = field.d().unwrap_or(0);
        let bb = Rational::from(&self.b * &o.b) * d;
        let a = Rational::from(&self.a * &o.a) + bb;
        let b = Rational::from(&self.a * &o.b) + Rational::from(&self.b * &o.a);
        FieldElement { a, b, field }
    }
    fn neg(&self) -> Self {
        FieldElement { a: Rational::from(-&self.a), b: Rational::from(-&self.b), field: self.field }
    }
    fn scale(&self, q: &Rational) -> Self {
        FieldElement { a: Rational::from(&self.a * q), b: Rational::from(&self.b * q), field: self.field }
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        FieldElement { a: q.clone(), b: Rational::new(), field: self.field }
    }
}

impl ExactRing for FieldElement {}

macro_rules! fe_binop {
    ($tr:ident, $m:ident, $rm:ident) => {
        impl std::ops::$tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                Ring::$rm(self, o)
            }
        }
        impl std::ops::$tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                Ring::$rm(&self, &o)
            }
        }
    };
}

fe_binop!(Add, add, add);
fe_binop!(Sub, sub, sub);
fe_binop!(Mul, mul, mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        Ring::neg(self)
    }
}

impl std::ops::Div<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn div(self, o: &FieldElement) -> FieldElement {
        let inv = o.inv().expect("division by zero field element");
        Ring::mul(self, &inv)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_i64(n)
    }
}

impl From<Rational> for FieldElement {
    fn from(q: Rational) -> Self {
        FieldElement::rational(q)
    }
}

/// Nontrivial automorphism of Q(√D); identity on Q.
pub fn galois_conjugate(x: &FieldElement) -> FieldElement {
    x.conj()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> FieldSpec {
        FieldSpec::quadratic(2).unwrap()
    }

    #[test]
    fn arithmetic_in_q_sqrt2() {
        let x = FieldElement::parse("3+2*sqrt(2)", q2()).unwrap();
        let y = FieldElement::parse("3-2*sqrt(2)", q2()).unwrap();
        assert_eq!(&x * &y, FieldElement::from_i64(1));
        assert_eq!(x.inv().unwrap(), y);
        assert_eq!(x.norm(), 1);
    }

    #[test]
    fn conjugation_examples() {
        let x = FieldElement::parse("3+2*sqrt(2)", q2()).unwrap();
        assert_eq!(galois_conjugate(&x).to_string(), "3-2*sqrt(2)");
        assert_eq!(galois_conjugate(&FieldElement::from_i64(5)), FieldElement::from_i64(5));
        let h = FieldElement::parse("(1/2)*sqrt(2)", q2()).unwrap();
        assert_eq!(galois_conjugate(&h).to_string(), "-1/2*sqrt(2)");
    }

    #[test]
    fn display_parse_round_trip() {
        for s in ["0", "-7/3", "1/2*sqrt(2)", "-1/2*sqrt(2)", "3-2*sqrt(2)", "1/3+5*sqrt(2)"] {
            let x = FieldElement::parse(s, q2()).unwrap();
            assert_eq!(x.to_string(), s);
            assert_eq!(FieldElement::parse(&x.to_string(), q2()).unwrap(), x);
        }
        assert!(FieldElement::parse("sqrt(3)", q2()).is_err());
        assert!(FieldElement::parse("1+", FieldSpec::Rational).is_err());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rational);
        assert_eq!(FieldSpec::parse("Q(sqrt(-3))").unwrap(), FieldSpec::Quadratic(-3));
        assert!(FieldSpec::parse("Q(sqrt(4))").is_err());
        assert!(FieldSpec::parse("Q(sqrt(1))").is_err());
    }
}
