//! Dense univariate polynomials over a [`Ring`], coefficients stored low degree first.

use super::ring::Ring;
use rug::Rational;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    /// Trailing certain-zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial z over the ring of `like`.
    pub fn x(like: &T) -> Self {
        Poly::new(vec![like.zero_like(), like.one_like()])
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![c.zero_like(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Coefficient of z^k (zero beyond the degree, built from `like`).
    pub fn coeff(&self, k: usize) -> Option<&T> {
        self.coeffs.get(k)
    }

    pub fn coeff_or_zero(&self, k: usize, like: &T) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(|| like.zero_like())
    }

    fn sample(&self) -> Option<&T> {
        self.coeffs.first()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => v.push(a.add(b)),
                (Some(a), None) => v.push(a.clone()),
                (None, Some(b)) => v.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Poly::new(v)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn scale_q(&self, q: &Rational) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.scale(q)).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let Some(s) = self.sample() else {
            return if n == 0 { panic!("0^0 polynomial without a ring sample") } else { Poly::zero() };
        };
        let mut acc = Poly::constant(s.one_like());
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

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// self(g(z)).
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rational::from(k as u64)))
                .collect(),
        )
    }

    /// Taylor shift: coefficients of self(z + c).
    pub fn shift(&self, c: &T) -> Self {
        self.compose(&Poly::new(vec![c.clone(), c.one_like()]))
    }

    /// Division with remainder; requires an invertible leading coefficient.
    pub fn divrem(&self, d: &Self) -> Option<(Self, Self)> {
        let dl = d.lead()?.try_inv()?;
        let dd = d.degree()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let z = dl.zero_like();
        let mut q = vec![z; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&dl);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub(&c.mul(dc));
                }
            }
            q[k] = c;
            r.truncate(k + dd);
        }
        Some((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Option<Self> {
        self.divrem(d).map(|(_, r)| r)
    }

    pub fn monic(&self) -> Option<Self> {
        let inv = self.lead()?.try_inv()?;
        Some(self.scale(&inv))
    }

    /// Monic gcd over a field (exact rings only).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("gcd over a non-field");
            a = b;
            b = r;
        }
        a.monic().unwrap_or(a)
    }

    /// (g, s, t) with s·self + t·o = g monic.
    pub fn ext_gcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let one = self.sample().or(o.sample())?.one_like();
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::constant(one.clone()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(one));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let inv = r0.lead()?.try_inv()?;
        Some((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// Squarefree part (product of distinct irreducible factors), monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic().unwrap_or_else(|| self.clone());
        }
        let g = self.gcd(&self.derivative());
        let (q, _) = self.divrem(&g).expect("squarefree over a non-field");
        q.monic().unwrap_or(q)
    }

    /// Yun's decomposition: entry k holds the monic product of factors of multiplicity k+1.
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic().expect("nonzero");
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.divrem(&a).unwrap().0;
        let mut c = fp.divrem(&a).unwrap().0;
        let mut d = c.sub(&b.derivative());
        loop {
            let g = b.gcd(&d);
            out.push(g.clone());
            b = b.divrem(&g).unwrap().0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&g).unwrap().0;
            d = c.sub(&b.derivative());
        }
        while out.last().is_some_and(|p| p.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    pub fn map<U: Ring, F: Fn(&T) -> U>(&self, f: F) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{k}")?,
            }
        }
        Ok(())
    }
}

pub type QPoly = Poly<Rational>;

/// Polynomial with small integer coefficients, low degree first.
pub fn qpoly_from_ints(cs: &[i64]) -> QPoly {
    Poly::new(cs.iter().map(|&c| Rational::from(c)).collect())
}

/// Scales a rational polynomial to a primitive integer polynomial with positive leading coefficient.
pub fn primitive_integer(p: &QPoly) -> Vec<rug::Integer> {
    use rug::Integer;
    let l = super::rational::lcm_denoms(p.coeffs());
    let mut ints: Vec<Integer> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * Integer::from(&l / c.denom()))
        .collect();
    let mut g = Integer::new();
    for c in &ints {
        g.gcd_mut(c);
    }
    if g == 0 {
        return ints;
    }
    if ints.last().is_some_and(|c| c.cmp0() == std::cmp::Ordering::Less) {
        g = -g;
    }
    for c in ints.iter_mut() {
        *c /= &g;
    }
    ints
}
