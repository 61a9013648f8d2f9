//! Coefficient ring abstraction shared by polynomials, series and linear algebra.
//!
//! Elements carry their own context (quadratic field, quotient modulus,
//! precision), so constants are produced from an existing element with
//! `zero_like`/`one_like` instead of a static constructor.

use rug::Rational;
use std::fmt::Debug;

pub trait Ring: Clone + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// True only when the element is certainly zero.
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
    /// `None` when the element is zero (or not certainly invertible).
    fn try_inv(&self) -> Option<Self>;

    fn from_rational_like(&self, q: &Rational) -> Self {
        self.one_like().scale(q)
    }

    fn from_int_like(&self, n: i64) -> Self {
        self.from_rational_like(&Rational::from(n))
    }

    fn is_one(&self) -> bool {
        self.sub(&self.one_like()).is_zero()
    }

    fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn try_div(&self, other: &Self) -> Option<Self> {
        other.try_inv().map(|inv| self.mul(&inv))
    }
}

/// Rings where `is_zero` is a decision rather than a certificate.
pub trait ExactRing: Ring + PartialEq {}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn one_like(&self) -> Self {
        Rational::from(1)
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn add(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn scale(&self, q: &Rational) -> Self {
        Rational::from(self * q)
    }
    fn try_inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(Rational::from(self.recip_ref()))
        }
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }
}

impl ExactRing for Rational {}
