//! Polynomial semiconjugacies g∘π = π∘f^k.
//!
//! With D = deg g = (deg f)^k and e = deg π, comparing z^{De} coefficients gives
//! c_e^{D−1} = F_D^e / g_D for F = f^k. The z^{De−j} coefficient is then affine in
//! c_{e−j} with slope D·g_D·c_e^{D−1} and involves only c_e, …, c_{e−j+1} otherwise,
//! so the remaining coefficients follow by a triangular solve.

use crate::algebra::roots::roots_in_field;
use crate::algebra::{FieldElement, Poly, Ring};
use crate::bottcher::PolynomialSystem;
use crate::error::{Error, Result};
use rug::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct Semiconjugacy {
    pub k: usize,
    pub pi: Poly<FieldElement>,
}

impl Semiconjugacy {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "pi": self.pi.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn iterate_exponent(df: usize, dg: usize, iterate_bound: usize) -> Option<usize> {
    let mut pow = 1usize;
    for k in 1..=iterate_bound {
        pow = pow.checked_mul(df)?;
        if pow == dg {
            return Some(k);
        }
        if pow > dg {
            return None;
        }
    }
    None
}

/// All π of degree 1..=deg_bound with g∘π = π∘f^k, k ≤ iterate_bound, in increasing degree.
pub fn semiconjugacies(
    f: &PolynomialSystem,
    g: &PolynomialSystem,
    deg_bound: usize,
    iterate_bound: usize,
) -> Result<Vec<Semiconjugacy>> {
    let field = f.field().join(g.field())?;
    let Some(k) = iterate_exponent(f.degree(), g.degree(), iterate_bound) else {
        return Ok(Vec::new());
    };
    let big_f = PolynomialSystem::new(f.coeffs().to_vec(), field)?.iterate(k);
    let g = PolynomialSystem::new(g.coeffs().to_vec(), field)?;
    let d = g.degree();
    let zero = g.zero();
    let mut out = Vec::new();
    for e in 1..=deg_bound {
        // c^{D−1} = F_D^e / g_D
        let rhs = &big_f.lead().pow_i(e as i64).expect("nonzero") / g.lead();
        let mut cs = vec![zero.clone(); d];
        cs[0] = -&rhs;
        cs[d - 1] = g.one();
        let lead_eq = Poly::new(cs);
        for ce in roots_in_field(&lead_eq, field, 128)? {
            if ce.is_zero() {
                continue;
            }
            if let Some(pi) = solve_lower(&big_f, &g, e, ce)? {
                out.push(Semiconjugacy { k, pi });
            }
        }
    }
    Ok(out)
}

/// The first semiconjugacy found, by increasing degree of π.
pub fn semiconjugacy_search(
    f: &PolynomialSystem,
    g: &PolynomialSystem,
    deg_bound: usize,
    iterate_bound: usize,
) -> Result<Option<Semiconjugacy>> {
    Ok(semiconjugacies(f, g, deg_bound, iterate_bound)?.into_iter().next())
}

fn residual(big_f: &PolynomialSystem, g: &PolynomialSystem, pi: &Poly<FieldElement>) -> Poly<FieldElement> {
    g.poly().compose(pi).sub(&pi.compose(big_f.poly()))
}

fn solve_lower(
    big_f: &PolynomialSystem,
    g: &PolynomialSystem,
    e: usize,
    ce: FieldElement,
) -> Result<Option<Poly<FieldElement>>> {
    let d = g.degree();
    let zero = g.zero();
    let mut cs = vec![zero.clone(); e + 1];
    cs[e] = ce.clone();
    let slope = (g.lead() * &ce.pow_i(d as i64 - 1).expect("nonzero")).scale(&Rational::from(d));
    let inv = slope.inv().ok_or_else(|| Error::Internal("zero slope in triangular solve".into()))?;
    for j in 1..=e {
        let r = residual(big_f, g, &Poly::new(cs.clone()));
        let c = r.coeff_or_zero(d * e - j, &zero);
        cs[e - j] = -&(&c * &inv);
    }
    let pi = Poly::new(cs);
    Ok(residual(big_f, g, &pi).is_zero().then_some(pi))
}
