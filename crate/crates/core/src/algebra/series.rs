//! Truncated Laurent series in z^{-1}: Σ_{e=low}^{top} c_e z^e + O(z^{low-1}).
//!
//! Every stored coefficient is exact; operations shrink the window so that
//! nothing below the provable order is ever reported.

use super::poly::Poly;
use super::ring::Ring;
use crate::error::{Error, Result};
use rug::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<T> {
    top: i64,
    /// coeffs[i] is the coefficient of z^(top - i).
    coeffs: Vec<T>,
}

impl<T: Ring> LaurentSeries<T> {
    /// Series with given top exponent and coefficients from z^top downward.
    pub fn new(top: i64, coeffs: Vec<T>) -> Self {
        LaurentSeries { top, coeffs }
    }

    /// Exact Laurent polynomial Σ c_e z^e, padded with zeros down to `floor`.
    pub fn from_poly(p: &Poly<T>, like: &T, floor: i64) -> Self {
        let top = p.degree().map_or(0, |d| d as i64).max(floor);
        let coeffs = (floor..=top)
            .rev()
            .map(|e| if e >= 0 { p.coeff_or_zero(e as usize, like) } else { like.zero_like() })
            .collect();
        LaurentSeries { top, coeffs }
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    /// Lowest exponent whose coefficient is known.
    pub fn low(&self) -> i64 {
        self.top - self.coeffs.len() as i64 + 1
    }

    /// Number of retained (valid) coefficients.
    pub fn valid_order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of z^e; zero above the top, `None` below the valid window.
    pub fn coeff(&self, e: i64) -> Option<T> {
        if e > self.top {
            return self.coeffs.first().map(|c| c.zero_like());
        }
        let i = self.top - e;
        self.coeffs.get(i as usize).cloned()
    }

    fn sample(&self) -> &T {
        self.coeffs.first().expect("empty series")
    }

    fn window(&self, top: i64, low: i64, f: impl Fn(i64) -> T) -> Self {
        if low > top {
            return LaurentSeries { top, coeffs: Vec::new() };
        }
        LaurentSeries { top, coeffs: (low..=top).rev().map(f).collect() }
    }

    /// Drops coefficients below `low`.
    pub fn truncate(&self, low: i64) -> Self {
        if low <= self.low() {
            return self.clone();
        }
        let keep = (self.top - low + 1).max(0) as usize;
        LaurentSeries { top: self.top, coeffs: self.coeffs[..keep.min(self.coeffs.len())].to_vec() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let z = self.sample().zero_like();
        let top = self.top.max(o.top);
        let low = self.low().max(o.low());
        self.window(top, low, |e| {
            self.coeff(e).unwrap_or_else(|| z.clone()).add(&o.coeff(e).unwrap_or_else(|| z.clone()))
        })
    }

    pub fn neg(&self) -> Self {
        LaurentSeries { top: self.top, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        LaurentSeries { top: self.top, coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn scale_q(&self, q: &Rational) -> Self {
        LaurentSeries { top: self.top, coeffs: self.coeffs.iter().map(|a| a.scale(q)).collect() }
    }

    /// Multiplies by z^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { top: self.top + k, coeffs: self.coeffs.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let top = self.top + o.top;
        let low = (self.low() + o.top).max(o.low() + self.top);
        let z = self.sample().zero_like();
        let mut out = vec![z; (top - low + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let idx = i + j;
                if idx >= out.len() {
                    break;
                }
                out[idx] = out[idx].add(&a.mul(b));
            }
        }
        LaurentSeries { top, coeffs: out }
    }

    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return LaurentSeries { top: 0, coeffs: vec![self.sample().one_like(); 1] }.extend_exact(-(self.valid_order() as i64) + 1);
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// Pads an exact series with zeros down to `low`; only valid for exact Laurent polynomials.
    fn extend_exact(mut self, low: i64) -> Self {
        let z = self.sample().zero_like();
        while self.low() > low {
            self.coeffs.push(z.clone());
        }
        self
    }

    /// Reciprocal with the same relative precision; leading coefficient must be invertible.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.coeffs.len();
        if n == 0 {
            return Err(Error::Precision("inverse of an empty series".into()));
        }
        let inv0 = self.coeffs[0]
            .try_inv()
            .ok_or_else(|| Error::Domain("leading coefficient not invertible".into()))?;
        let mut out: Vec<T> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = inv0.zero_like();
            for j in 1..=k {
                acc = acc.add(&self.coeffs[j].mul(&out[k - j]));
            }
            out.push(acc.mul(&inv0).neg());
        }
        Ok(LaurentSeries { top: -self.top, coeffs: out })
    }

    /// s∘f for a polynomial f of degree d ≥ 1; valid down to (low−1)·d + 1.
    pub fn compose_poly(&self, f: &Poly<T>) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::Precision("composition of a series with no valid coefficients".into()));
        }
        let d = f.degree().filter(|&d| d >= 1).ok_or_else(|| Error::Argument("compose with a constant".into()))? as i64;
        let like = self.sample().clone();
        let low = self.low();
        let out_low = (low - 1) * d + 1;
        let out_top = self.top.max(low) * d;
        let out_top = out_top.max(out_low);
        let mut acc = self.window(out_top, out_low, |_| like.zero_like());
        // Nonnegative powers: exact polynomials.
        if self.top >= 0 {
            let mut p = Poly::constant(like.one_like());
            for e in 0..=self.top {
                if e >= low {
                    if let Some(c) = self.coeff(e).filter(|c| !c.is_zero()) {
                        let term = LaurentSeries::from_poly(&p.scale(&c), &like, out_low).truncate(out_low);
                        acc = acc.add(&term.cover(out_top, &like));
                    }
                }
                p = p.mul(f);
            }
        }
        if low < 0 {
            let need = -d - out_low + 1;
            if need > 0 {
                let fs = LaurentSeries::from_poly(f, &like, d - need + 1).truncate(d - need + 1);
                let finv = fs.inverse()?;
                let mut pk = finv.clone();
                for e in 1..=(-low) {
                    if e > 1 {
                        pk = pk.mul(&finv).truncate(out_low);
                    }
                    if -e > self.top {
                        continue;
                    }
                    if let Some(c) = self.coeff(-e).filter(|c| !c.is_zero()) {
                        let term = pk.scale(&c).truncate(out_low);
                        if term.low() > out_low {
                            return Err(Error::Internal("negative power lost precision".into()));
                        }
                        acc = acc.add(&term.cover(out_top, &like));
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Re-expresses with an explicit zero-padded top (for aligned addition).
    fn cover(&self, top: i64, like: &T) -> Self {
        let mut s = self.clone();
        while s.top < top {
            s.coeffs.insert(0, like.zero_like());
            s.top += 1;
        }
        s
    }

    /// Removes leading exact zeros, keeping the valid window's bottom.
    pub fn normalized(&self) -> Self {
        let mut s = self.clone();
        while s.coeffs.len() > 1 && s.coeffs[0].is_zero() {
            s.coeffs.remove(0);
            s.top -= 1;
        }
        s
    }

    /// True when every coefficient in the common valid window is certainly zero.
    pub fn all_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn map<U: Ring, F: Fn(&T) -> U>(&self, f: F) -> LaurentSeries<U> {
        LaurentSeries { top: self.top, coeffs: self.coeffs.iter().map(f).collect() }
    }
}

/// compose_series from the operation list: s∘f with the recorded valid order.
pub fn compose_series<T: Ring>(s: &LaurentSeries<T>, f: &Poly<T>) -> Result<LaurentSeries<T>> {
    s.compose_poly(f)
}

impl<T: Ring + std::fmt::Display> LaurentSeries<T> {
    pub fn to_json(&self, ring: &str) -> serde_json::Value {
        serde_json::json!({
            "top_exp": self.top,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "valid_order": self.valid_order(),
            "ring": ring,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::qpoly_from_ints;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn ser(top: i64, cs: &[i64]) -> LaurentSeries<Rational> {
        LaurentSeries::new(top, cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn compose_identity_series() {
        // z + 0 + O(z^-1) composed with z^2 + 1 is known down to z^-1.
        let s = ser(1, &[1, 0]);
        let f = qpoly_from_ints(&[1, 0, 1]);
        let r = s.compose_poly(&f).unwrap();
        assert_eq!(r.top(), 2);
        assert_eq!(r.coeffs(), &[q(1), q(0), q(1), q(0)]);
        // a bare z + O(1) only determines the top two coefficients
        assert_eq!(ser(1, &[1]).compose_poly(&f).unwrap().valid_order(), 2);
    }

    #[test]
    fn compose_with_z_squared_substitutes() {
        let s = LaurentSeries::new(1, vec![q(1), q(0), Rational::from((1, 2))]);
        let f = qpoly_from_ints(&[0, 0, 1]);
        let r = s.compose_poly(&f).unwrap();
        // valid down to (low-1)d+1 = -3
        assert_eq!(r.low(), -3);
        for (e, want) in [(2, q(1)), (1, q(0)), (0, q(0)), (-1, q(0)), (-2, Rational::from((1, 2))), (-3, q(0))] {
            assert_eq!(r.coeff(e).unwrap(), want, "exponent {e}");
        }
    }

    #[test]
    fn compose_geometric_expansion() {
        // (z + z^-1) with four retained coefficients composed with z^2 + 1.
        let s = ser(1, &[1, 0, 1, 0]);
        let f = qpoly_from_ints(&[1, 0, 1]);
        let r = s.compose_poly(&f).unwrap();
        assert_eq!(r.low(), -5);
        let want = [1, 0, 1, 0, 1, 0, -1, 0];
        assert_eq!(r.coeffs(), ser(2, &want).coeffs());
    }

    #[test]
    fn inverse_of_geometric() {
        let s = ser(0, &[1, -1, 0, 0, 0]);
        let inv = s.inverse().unwrap();
        assert_eq!(inv.coeffs(), ser(0, &[1, 1, 1, 1, 1]).coeffs());
    }

    fn arb_series() -> impl Strategy<Value = LaurentSeries<Rational>> {
        prop::collection::vec(-4i64..5, 2..7).prop_map(|mut v| {
            if v[0] == 0 {
                v[0] = 1;
            }
            ser(1, &v)
        })
    }

    proptest! {
        #[test]
        fn product_compatible_with_composition(s in arb_series(), t in arb_series(),
            f in prop::collection::vec(-3i64..4, 2..4)) {
            let mut f = f;
            if *f.last().unwrap() == 0 { *f.last_mut().unwrap() = 1; }
            let f = qpoly_from_ints(&f);
            let lhs = s.mul(&t).compose_poly(&f).unwrap();
            let rhs = s.compose_poly(&f).unwrap().mul(&t.compose_poly(&f).unwrap());
            let low = lhs.low().max(rhs.low());
            for e in low..=lhs.top().max(rhs.top()) {
                prop_assert_eq!(lhs.coeff(e), rhs.coeff(e));
            }
        }

        #[test]
        fn composition_with_power_matches_repeated_product(s in arb_series(), n in 1u32..4) {
            let f = qpoly_from_ints(&[2, 1, 1]);
            let lhs = s.pow(n).compose_poly(&f).unwrap();
            let rhs = s.compose_poly(&f).unwrap().pow(n);
            let low = lhs.low().max(rhs.low());
            for e in low..=lhs.top() {
                prop_assert_eq!(lhs.coeff(e), rhs.coeff(e));
            }
        }
    }
}
