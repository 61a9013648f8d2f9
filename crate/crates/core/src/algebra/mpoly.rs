//! Sparse bivariate polynomials; the key (i, j) indexes the monomial x^i y^j.

use super::poly::Poly;
use super::ring::Ring;
use rug::Rational;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Ring> MPoly<T> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), T)>>(it: I) -> Self {
        let mut p = MPoly::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn constant(c: T) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn x(like: &T) -> Self {
        Self::from_terms([((1, 0), like.one_like())])
    }

    pub fn y(like: &T) -> Self {
        Self::from_terms([((0, 1), like.one_like())])
    }

    /// Embeds a univariate polynomial in x (or y when `in_y`).
    pub fn from_univariate(p: &Poly<T>, in_y: bool) -> Self {
        Self::from_terms(
            p.coeffs().iter().enumerate().map(|(k, c)| (if in_y { (0, k as u32) } else { (k as u32, 0) }, c.clone())),
        )
    }

    pub fn add_term(&mut self, k: (u32, u32), c: T) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&k) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(k, merged);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), T> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> Option<&T> {
        self.terms.get(&(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sample(&self) -> Option<&T> {
        self.terms.values().next()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = MPoly::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &o.terms {
                r.add_term((i + k, j + l), a.mul(b));
            }
        }
        r
    }

    pub fn scale(&self, c: &T) -> Self {
        MPoly::from_terms(self.terms.iter().map(|(k, a)| (*k, a.mul(c))))
    }

    pub fn scale_q(&self, q: &Rational) -> Self {
        MPoly::from_terms(self.terms.iter().map(|(k, a)| (*k, a.scale(q))))
    }

    pub fn pow(&self, n: u32, like: &T) -> Self {
        let mut acc = MPoly::constant(like.one_like());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        let mut acc = x.zero_like();
        for ((i, j), c) in &self.terms {
            acc = acc.add(&c.mul(&x.pow(*i as u64)).mul(&y.pow(*j as u64)));
        }
        acc
    }

    /// P(F(x, y), G(x, y)).
    pub fn compose(&self, f: &Self, g: &Self, like: &T) -> Self {
        let dx = self.deg_x().unwrap_or(0);
        let dy = self.deg_y().unwrap_or(0);
        let mut fp = vec![MPoly::constant(like.one_like())];
        for k in 0..dx as usize {
            fp.push(fp[k].mul(f));
        }
        let mut gp = vec![MPoly::constant(like.one_like())];
        for k in 0..dy as usize {
            gp.push(gp[k].mul(g));
        }
        let mut r = MPoly::zero();
        for ((i, j), c) in &self.terms {
            r = r.add(&fp[*i as usize].mul(&gp[*j as usize]).scale(c));
        }
        r
    }

    /// P(f(x), g(y)) for univariate f, g.
    pub fn compose_univariate(&self, f: &Poly<T>, g: &Poly<T>, like: &T) -> Self {
        self.compose(&MPoly::from_univariate(f, false), &MPoly::from_univariate(g, true), like)
    }

    /// Homogeneous component of total degree k.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        MPoly { terms: self.terms.iter().filter(|((i, j), _)| i + j == k).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn dx(&self) -> Self {
        MPoly::from_terms(
            self.terms.iter().filter(|((i, _), _)| *i > 0).map(|((i, j), c)| ((i - 1, *j), c.scale(&Rational::from(*i)))),
        )
    }

    pub fn dy(&self) -> Self {
        MPoly::from_terms(
            self.terms.iter().filter(|((_, j), _)| *j > 0).map(|((i, j), c)| ((*i, j - 1), c.scale(&Rational::from(*j)))),
        )
    }

    /// Leading term for lex order with y > x.
    fn lead_lex(&self) -> Option<((u32, u32), &T)> {
        self.terms.iter().max_by_key(|((i, j), _)| (*j, *i)).map(|(k, c)| (*k, c))
    }

    /// Quotient Q with self = Q·d exactly, or `None` when d does not divide self.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let ((di, dj), dc) = d.lead_lex()?;
        let inv = dc.try_inv()?;
        let mut r = self.clone();
        let mut q = MPoly::zero();
        while let Some(((ri, rj), rc)) = r.lead_lex() {
            if ri < di || rj < dj {
                return None;
            }
            let c = rc.mul(&inv);
            let m = MPoly::from_terms([((ri - di, rj - dj), c)]);
            r = r.sub(&m.mul(d));
            q = q.add(&m);
        }
        Some(q)
    }

    /// Binary-form view of the degree-k component: coefficient list in t = y/x, index = power of y.
    pub fn binary_form(&self, k: u32, like: &T) -> Vec<T> {
        (0..=k).map(|j| self.coeff(k - j, j).cloned().unwrap_or_else(|| like.zero_like())).collect()
    }

    pub fn map<U: Ring, F: Fn(&T) -> U>(&self, f: F) -> MPoly<U> {
        MPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, f(c))))
    }

    /// Substitution x ↦ x + a, y ↦ y + b.
    pub fn translate(&self, a: &T, b: &T) -> Self {
        let like = a;
        let xs = MPoly::from_terms([((1, 0), like.one_like()), ((0, 0), a.clone())]);
        let ys = MPoly::from_terms([((0, 1), like.one_like()), ((0, 0), b.clone())]);
        self.compose(&xs, &ys, like)
    }

    /// Scales so that the lex-leading coefficient is one.
    pub fn monic(&self) -> Option<Self> {
        let (_, c) = self.lead_lex()?;
        let inv = c.try_inv()?;
        Some(self.scale(&inv))
    }
}

impl<T: Ring + fmt::Display> MPoly<T> {
    /// Terms as [[i, j, "c"], …] for serialization.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms.iter().map(|((i, j), c)| serde_json::json!([i, j, c.to_string()])).collect(),
        )
    }
}

impl<T: Ring + fmt::Display> fmt::Display for MPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match (i, j) {
                (0, 0) => String::new(),
                (1, 0) => "x".into(),
                (0, 1) => "y".into(),
                (i, 0) => format!("x^{i}"),
                (0, j) => format!("y^{j}"),
                (1, 1) => "x*y".into(),
                (1, j) => format!("x*y^{j}"),
                (i, 1) => format!("x^{i}*y"),
                (i, j) => format!("x^{i}*y^{j}"),
            };
            if mono.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        Ok(())
    }
}

pub type QMPoly = MPoly<Rational>;

/// Bivariate polynomial from integer triples (i, j, c).
pub fn qmpoly(terms: &[(u32, u32, i64)]) -> QMPoly {
    MPoly::from_terms(terms.iter().map(|&(i, j, c)| ((i, j), Rational::from(c))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::qpoly_from_ints;
    use proptest::prelude::*;

    #[test]
    fn graph_is_invariant_under_product_map() {
        // P = y - (x^2 + 1), f = g = z^2 + 1
        let p = qmpoly(&[(0, 1, 1), (2, 0, -1), (0, 0, -1)]);
        let f = qpoly_from_ints(&[1, 0, 1]);
        let img = p.compose_univariate(&f, &f, &Rational::new());
        let q = img.div_exact(&p).expect("divisible");
        assert_eq!(q.mul(&p), img);
        let diag = qmpoly(&[(0, 1, 1), (1, 0, -1)]);
        assert!(img.div_exact(&diag).is_none());
    }

    #[test]
    fn translation_round_trip() {
        let p = qmpoly(&[(2, 0, 1), (0, 2, -1), (1, 1, 3), (0, 0, 5)]);
        let a = Rational::from(2);
        let b = Rational::from(-3);
        let back = p.translate(&a, &b).translate(&Rational::from(-2), &Rational::from(3));
        assert_eq!(back, p);
    }

    fn arb() -> impl Strategy<Value = QMPoly> {
        prop::collection::vec((0u32..3, 0u32..3, -5i64..6), 1..6).prop_map(|v| {
            MPoly::from_terms(v.into_iter().map(|(i, j, c)| ((i, j), Rational::from(c))))
        })
    }

    proptest! {
        #[test]
        fn exact_division_recovers_factor(a in arb(), b in arb()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let prod = a.mul(&b);
            let q = prod.div_exact(&b).expect("product is divisible");
            prop_assert_eq!(q, a);
        }
    }
}
