//! A root of unity of order k lies in a field of degree n only if φ(k) ≤ n, and
//! φ(k) ≥ √(k/2), so k ≤ 2n² bounds the search.

use crate::algebra::quotient::QuotientElement;
use crate::algebra::{FieldElement, Ring};

fn totient(mut k: u64) -> u64 {
    let mut out = k;
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            while k.is_multiple_of(p) {
                k /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if k > 1 {
        out -= out / k;
    }
    out
}

fn order<T: Ring>(x: &T, degree: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    (1..=2 * degree * degree).filter(|&k| totient(k) <= degree).find(|&k| x.pow(k).is_one())
}

/// Multiplicative order of x when x is a root of unity.
pub fn is_root_of_unity(x: &FieldElement) -> Option<u64> {
    let degree = if x.is_rational() { 1 } else { 2 };
    order(x, degree)
}

/// Same test in Q[t]/(m); the modulus degree bounds the orders that can occur
/// in any field quotient.
pub fn quotient_root_of_unity(x: &QuotientElement) -> Option<u64> {
    let degree = x.modulus().degree().unwrap_or(0).max(1) as u64;
    order(x, degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::qpoly_from_ints;
    use crate::algebra::FieldSpec;
    use std::sync::Arc;

    #[test]
    fn small_orders() {
        assert_eq!(is_root_of_unity(&FieldElement::from_i64(1)), Some(1));
        assert_eq!(is_root_of_unity(&FieldElement::from_i64(-1)), Some(2));
        assert_eq!(is_root_of_unity(&FieldElement::from_i64(2)), None);
        let k = FieldSpec::quadratic(-3).unwrap();
        // (−1 + √−3)/2 has order 3
        let w = FieldElement::parse("-1/2+1/2*sqrt(-3)", k).unwrap();
        assert_eq!(is_root_of_unity(&w), Some(3));
        assert_eq!(is_root_of_unity(&-&w), Some(6));
        let i = FieldElement::sqrt_d(FieldSpec::quadratic(-1).unwrap());
        assert_eq!(is_root_of_unity(&i), Some(4));
        assert_eq!(is_root_of_unity(&FieldElement::sqrt_d(FieldSpec::quadratic(2).unwrap())), None);
    }

    #[test]
    fn quotient_generator() {
        // t in Q[t]/(t^4 + 1) is a primitive 8th root of unity
        let m = Arc::new(qpoly_from_ints(&[1, 0, 0, 0, 1]));
        assert_eq!(quotient_root_of_unity(&QuotientElement::generator(m.clone())), Some(8));
        let two = QuotientElement::rational(rug::Rational::from(2), m);
        assert_eq!(quotient_root_of_unity(&two), None);
    }

    #[test]
    fn totients() {
        let t: Vec<u64> = (1..=10).map(totient).collect();
        assert_eq!(t, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4]);
    }
}
