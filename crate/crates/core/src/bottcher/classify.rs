//! Monomial-type versus nonexceptional polynomials.
//!
//! Over an algebraically closed field of characteristic zero, a polynomial of
//! degree d is exceptional exactly when it is affinely conjugate to z^d or to
//! ±C_d, where C_d is the monic Chebyshev polynomial (C_d(z + 1/z) = z^d + z^{−d}).
//!
//! After centering, h(z) = f(z + s) − s has no z^{d−1} term. Conjugating by
//! z ↦ z/ν turns ε·C_d into ε Σ_k c_k ν^{k−1} z^k, so matching the z^d and
//! z^{d−2} coefficients forces ν² = μ := −d·a_d / h_{d−2}. For even d the scale
//! ν itself lies in the base field; for odd d only even powers of ν occur.
//! Either way the comparison is exact over the base field.

use super::system::PolynomialSystem;
use crate::algebra::{FieldElement, Poly, Ring};
use crate::error::Result;
use rug::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum MonomialForm {
    Power,
    /// ε·C_d after rescaling by ν with ν² = μ.
    Chebyshev { sign: i32, mu: FieldElement },
}

#[derive(Clone, Debug, PartialEq)]
pub enum PolynomialType {
    MonomialType { form: MonomialForm, center: FieldElement },
    Nonexceptional,
}

impl PolynomialType {
    pub fn is_monomial_type(&self) -> bool {
        matches!(self, PolynomialType::MonomialType { .. })
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            PolynomialType::Nonexceptional => serde_json::json!({ "type": "Nonexceptional" }),
            PolynomialType::MonomialType { form, center } => {
                let form = match form {
                    MonomialForm::Power => serde_json::json!({ "normal_form": "z^d" }),
                    MonomialForm::Chebyshev { sign, mu } => serde_json::json!({
                        "normal_form": if *sign > 0 { "C_d" } else { "-C_d" },
                        "scale_squared": mu.to_string(),
                    }),
                };
                serde_json::json!({ "type": "MonomialType", "center": center.to_string(), "form": form })
            }
        }
    }
}

/// Monic Chebyshev polynomials C_0 = 2, C_1 = z, C_{k+1} = z·C_k − C_{k−1}, integer coefficients.
pub fn chebyshev(d: usize) -> Vec<i64> {
    let mut prev = vec![2i64];
    let mut cur = vec![0i64, 1];
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let mut next = vec![0i64; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// h(z) = f(z + s) − s with s = −a_{d−1}/(d·a_d).
pub fn centered(f: &PolynomialSystem) -> (Poly<FieldElement>, FieldElement) {
    let d = f.degree();
    let ad = f.lead().clone();
    let dd = FieldElement::from_i64(d as i64).in_field(f.field()).expect("rational");
    let s = -&(&f.coeff(d - 1) / &(&dd * &ad));
    let shifted = f.poly().shift(&s);
    let mut cs = shifted.into_coeffs();
    cs[0] = &cs[0] - &s;
    (Poly::new(cs), s)
}

pub fn classify_polynomial_type(f: &PolynomialSystem) -> Result<PolynomialType> {
    let d = f.degree();
    let (h, center) = centered(f);
    let zero = f.zero();
    let c = |k: usize| h.coeff_or_zero(k, &zero);
    if (0..d).all(|k| c(k).is_zero()) {
        return Ok(PolynomialType::MonomialType { form: MonomialForm::Power, center });
    }
    let ad = c(d);
    let low = c(d - 2);
    if low.is_zero() {
        return Ok(PolynomialType::Nonexceptional);
    }
    let dd = FieldElement::from_i64(d as i64);
    let mu = -&(&(&dd * &ad) / &low);
    let cheb = chebyshev(d);
    // ν^{k−1} for the exponents that occur (k ≡ d mod 2)
    let (sign, nu_pow): (i32, Box<dyn Fn(usize) -> FieldElement>) = if d.is_multiple_of(2) {
        let nu = &ad / &mu.pow_i(((d - 2) / 2) as i64).expect("μ ≠ 0");
        if &nu * &nu != mu {
            return Ok(PolynomialType::Nonexceptional);
        }
        let nu2 = nu.clone();
        (1, Box::new(move |k: usize| nu2.pow_i(k as i64 - 1).expect("ν ≠ 0")))
    } else {
        let m = mu.pow_i(((d - 1) / 2) as i64).expect("μ ≠ 0");
        let sign = if m == ad {
            1
        } else if -&m == ad {
            -1
        } else {
            return Ok(PolynomialType::Nonexceptional);
        };
        let mu2 = mu.clone();
        (sign, Box::new(move |k: usize| mu2.pow_i(((k as i64) - 1) / 2).expect("μ ≠ 0")))
    };
    for (k, &ck) in cheb.iter().enumerate() {
        let want = if ck == 0 {
            zero.clone()
        } else {
            nu_pow(k).scale(&Rational::from(ck * sign as i64))
        };
        if c(k) != want {
            return Ok(PolynomialType::Nonexceptional);
        }
    }
    Ok(PolynomialType::MonomialType { form: MonomialForm::Chebyshev { sign, mu }, center })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;

    #[test]
    fn chebyshev_recurrence() {
        assert_eq!(chebyshev(2), vec![-2, 0, 1]);
        assert_eq!(chebyshev(3), vec![0, -3, 0, 1]);
        assert_eq!(chebyshev(4), vec![2, 0, -4, 0, 1]);
    }

    #[test]
    fn spec_examples() {
        let cube = PolynomialSystem::from_ints(&[0, 0, 0, 1]).unwrap();
        assert!(classify_polynomial_type(&cube).unwrap().is_monomial_type());
        let cheb = PolynomialSystem::from_ints(&[-2, 0, 1]).unwrap();
        assert!(matches!(
            classify_polynomial_type(&cheb).unwrap(),
            PolynomialType::MonomialType { form: MonomialForm::Chebyshev { sign: 1, .. }, .. }
        ));
        let f = PolynomialSystem::from_ints(&[1, 0, 1]).unwrap();
        assert_eq!(classify_polynomial_type(&f).unwrap(), PolynomialType::Nonexceptional);
    }

    #[test]
    fn conjugates_are_detected() {
        // L∘(±C_d)∘L^{-1} with L(z) = 2z + 1
        let l = Poly::new(vec![FieldElement::from_i64(1), FieldElement::from_i64(2)]);
        let linv = Poly::new(vec![FieldElement::frac(-1, 2), FieldElement::frac(1, 2)]);
        for (d, sign) in [(3usize, 1i64), (3, -1), (4, 1), (5, -1)] {
            let c: Vec<FieldElement> = chebyshev(d).iter().map(|&x| FieldElement::from_i64(sign * x)).collect();
            let g = l.compose(&Poly::new(c).compose(&linv));
            let f = PolynomialSystem::from_poly(g, FieldSpec::Rational).unwrap();
            assert!(classify_polynomial_type(&f).unwrap().is_monomial_type(), "d = {d}, sign = {sign}");
        }
        // (z + 2)^3/4 − 2 is conjugate to z^3/4 by z ↦ z − 2
        let pw = PolynomialSystem::parse(&["0", "3", "3/2", "1/4"], FieldSpec::Rational).unwrap();
        assert!(classify_polynomial_type(&pw).unwrap().is_monomial_type());
    }

    #[test]
    fn quadratic_field_chebyshev() {
        let q = FieldSpec::quadratic(2).unwrap();
        // conjugate z^2 − 2 by z ↦ √2 z: h(z) = (2z^2 − 2)/√2 = √2 z^2 − √2
        let f = PolynomialSystem::parse(&["-sqrt(2)", "0", "sqrt(2)"], q).unwrap();
        assert!(classify_polynomial_type(&f).unwrap().is_monomial_type());
        let g = PolynomialSystem::parse(&["sqrt(2)", "0", "1"], q).unwrap();
        assert_eq!(classify_polynomial_type(&g).unwrap(), PolynomialType::Nonexceptional);
    }
}
