//! Zariski closure data for an orbit of a product map F = f_1 × … × f_r (r ≤ 3).
//!
//! The closure of a wandering orbit is a finite tail followed by a union of p
//! components permuted cyclically. Polynomials of degree ≤ m in each variable
//! that vanish on late orbit points give generators; the period is the least q
//! whose residue subsequences carry the largest vanishing space, and the tail is
//! the first index from which every point satisfies the generators.

use super::interp::{modular_kernel, reductions, ModKernel, Reduction};
use crate::algebra::linalg::rref;
use crate::algebra::modular::{mulmod, nullspace_mod};
use crate::algebra::{FieldElement, FieldSpec, Ring};
use crate::bottcher::PolynomialSystem;
use crate::error::{Error, Result};
use std::fmt;

/// Largest period tried.
const MAX_PERIOD: usize = 4;
const MAX_PRIMES: usize = 40;
/// Points checked without reduction.
const EXACT_CHECKS: usize = 6;

/// A polynomial in r ≤ 3 variables as (exponent vector, coefficient) terms.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly {
    pub terms: Vec<(Vec<u32>, FieldElement)>,
}

impl SparsePoly {
    pub fn eval(&self, pt: &[FieldElement]) -> FieldElement {
        let mut acc = FieldElement::zero().in_field(pt[0].field()).expect("same field");
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in pt.iter().zip(e) {
                t = t.mul(&x.pow(*k as u64));
            }
            acc = acc.add(&t);
        }
        acc
    }

    fn eval_mod(&self, pt: &[u64], red: Reduction) -> Option<u64> {
        let p = red.p;
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = red.reduce(c)?;
            for (x, k) in pt.iter().zip(e) {
                t = mulmod(t, crate::algebra::modular::powmod(*x, *k as u64, p), p);
            }
            acc = crate::algebra::modular::addmod(acc, t, p);
        }
        Some(acc)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const VARS: [&str; 3] = ["x", "y", "z"];
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { VARS[i].to_string() } else { format!("{}^{k}", VARS[i]) })
                .collect();
            if mono.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct OrbitStructure {
    pub tail: usize,
    pub period: usize,
    pub generators: Vec<SparsePoly>,
    /// Late points where the generators were checked (modulo an independent prime).
    pub checked_points: usize,
}

impl OrbitStructure {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "tail": self.tail,
            "period": self.period,
            "generators": self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "checked_points": self.checked_points,
        })
    }
}

/// Exponent vectors in the box [0, m]^r with total degree ≤ k, in a fixed order.
fn monomials(r: usize, m: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                (0..=m).map(move |i| {
                    let mut e2 = e.clone();
                    e2.push(i);
                    e2
                })
            })
            .collect();
    }
    out.retain(|e| e.iter().sum::<u32>() <= k);
    out.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
    out
}

fn orbit_points_mod(systems: &[PolynomialSystem], point: &[FieldElement], red: Reduction, n: usize) -> Option<Vec<Vec<u64>>> {
    let cs: Vec<Vec<u64>> =
        systems.iter().map(|f| f.coeffs().iter().map(|c| red.reduce(c)).collect()).collect::<Option<_>>()?;
    let mut z: Vec<u64> = point.iter().map(|x| red.reduce(x)).collect::<Option<_>>()?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(z.clone());
        z = z.iter().zip(&cs).map(|(x, c)| red.eval(c, *x)).collect();
    }
    Some(out)
}

fn rows(points: &[Vec<u64>], monos: &[Vec<u32>], p: u64) -> Vec<Vec<u64>> {
    points
        .iter()
        .map(|pt| {
            monos
                .iter()
                .map(|e| {
                    pt.iter().zip(e).fold(1 % p, |acc, (x, k)| mulmod(acc, crate::algebra::modular::powmod(*x, *k as u64, p), p))
                })
                .collect()
        })
        .collect()
}

/// Orbit structure with generators of degree ≤ m in each variable from orbit_len points on.
pub fn orbit_structure(
    systems: &[PolynomialSystem],
    point: &[FieldElement],
    m: u32,
    orbit_len: usize,
) -> Result<OrbitStructure> {
    let r = systems.len();
    if r == 0 || r > 3 || point.len() != r {
        return Err(Error::Argument(format!("need 1 to 3 maps and a matching point, got {r} and {}", point.len())));
    }
    let mut field = FieldSpec::Rational;
    for f in systems {
        field = field.join(f.field())?;
    }
    let systems: Vec<PolynomialSystem> =
        systems.iter().map(|f| PolynomialSystem::new(f.coeffs().to_vec(), field)).collect::<Result<_>>()?;
    let point: Vec<FieldElement> = point.iter().map(|x| x.in_field(field)).collect::<Result<_>>()?;
    let box_monos = monomials(r, m, m * r as u32);
    let unknowns = box_monos.len();
    if orbit_len < unknowns {
        return Err(Error::Argument(format!("orbit_len {orbit_len} is below the {unknowns} unknowns")));
    }
    // late window [orbit_len, orbit_len + span)
    let span = MAX_PERIOD * (unknowns + 4);
    let total = orbit_len + span;
    let late = |red: Reduction| -> Option<Vec<Vec<u64>>> {
        Some(orbit_points_mod(&systems, &point, red, total)?.split_off(orbit_len))
    };

    let (red0, _) = *reductions(field).first().ok_or_else(|| Error::Internal("no usable prime".into()))?;
    let pts0 = late(red0).ok_or_else(|| Error::Internal("bad reduction".into()))?;
    let mut period = 1;
    let mut best = 0;
    for q in 1..=MAX_PERIOD {
        let sub: Vec<Vec<u64>> = pts0.iter().step_by(q).take(unknowns + 4).cloned().collect();
        let (free, _) = nullspace_mod(&rows(&sub, &box_monos, red0.p), unknowns, red0.p);
        if free.len() > best {
            best = free.len();
            period = q;
        }
    }

    let generators = minimal_generators(&late, r, m, field)?;

    // tail and an independent check on late points
    let (red1, _) = *reductions(field).get(1).ok_or_else(|| Error::Internal("no second prime".into()))?;
    let all = orbit_points_mod(&systems, &point, red1, total).ok_or_else(|| Error::Internal("bad reduction".into()))?;
    let vanishes = |pt: &[u64]| generators.iter().all(|g| g.eval_mod(pt, red1) == Some(0));
    for (n, pt) in all.iter().enumerate().skip(orbit_len) {
        if !vanishes(pt) {
            return Err(Error::Internal(format!("generator fails at late point {n}")));
        }
    }
    let tail = (0..orbit_len).rev().find(|&n| !vanishes(&all[n])).map_or(0, |n| n + 1);
    let mut exact = point.clone();
    for n in 0..EXACT_CHECKS.min(orbit_len) {
        if n >= tail && generators.iter().any(|g| !g.eval(&exact).is_zero()) {
            return Err(Error::Internal(format!("generator fails exactly at point {n}")));
        }
        exact = exact.iter().zip(&systems).map(|(x, f)| f.eval(x)).collect();
    }
    Ok(OrbitStructure { tail, period, generators, checked_points: span })
}

/// Kernel vectors by increasing total degree, skipping those generated by earlier ones.
fn minimal_generators<F>(late: &F, r: usize, m: u32, field: FieldSpec) -> Result<Vec<SparsePoly>>
where
    F: Fn(Reduction) -> Option<Vec<Vec<u64>>>,
{
    let zero = FieldElement::zero().in_field(field)?;
    let mut gens: Vec<SparsePoly> = Vec::new();
    for k in 1..=m * r as u32 {
        let monos = monomials(r, m, k);
        let ncols = monos.len();
        let build = |red: Reduction| Some(rows(&late(red)?, &monos, red.p));
        let ModKernel::Basis(basis) = modular_kernel(build, ncols, field, MAX_PRIMES)? else {
            continue;
        };
        let index = |e: &[u32]| monos.iter().position(|x| x == e);
        // span of monomial multiples of the generators found so far
        let mut span: Vec<Vec<FieldElement>> = Vec::new();
        for g in &gens {
            for shift in &monos {
                let mut v = vec![zero.clone(); ncols];
                let mut ok = true;
                for (e, c) in &g.terms {
                    let moved: Vec<u32> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
                    match index(&moved) {
                        Some(i) => v[i] = c.clone(),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    span.push(v);
                }
            }
        }
        let mut rank = {
            let mut s = span.clone();
            rref(&mut s, ncols).len()
        };
        for v in basis {
            let mut s = span.clone();
            s.push(v.clone());
            let new_rank = rref(&mut s.clone(), ncols).len();
            if new_rank > rank {
                rank = new_rank;
                span = s;
                let terms = monos.iter().zip(&v).filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e.clone(), c.clone())).collect();
                gens.push(SparsePoly { terms });
            }
        }
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PolynomialSystem {
        PolynomialSystem::from_ints(&[1, 0, 1]).unwrap()
    }

    #[test]
    fn single_map_has_no_relations() {
        let s = orbit_structure(&[f()], &[FieldElement::from_i64(1)], 3, 20).unwrap();
        assert!(s.generators.is_empty());
        assert_eq!((s.tail, s.period), (0, 1));
    }

    #[test]
    fn graph_generator() {
        let s = orbit_structure(&[f(), f()], &[FieldElement::from_i64(1), FieldElement::from_i64(2)], 2, 40).unwrap();
        assert_eq!(s.generators.len(), 1, "{}", s.to_json());
        assert_eq!(s.generators[0].terms.len(), 3);
        assert_eq!((s.tail, s.period), (0, 1));
    }

    #[test]
    fn tail_before_the_diagonal() {
        // (−1, 1) ↦ (2, 2): the orbit meets the diagonal after one step
        let s = orbit_structure(&[f(), f()], &[FieldElement::from_i64(-1), FieldElement::from_i64(1)], 1, 20).unwrap();
        assert_eq!(s.generators.len(), 1);
        assert_eq!(s.tail, 1);
        assert_eq!(s.period, 1);
    }

    #[test]
    fn three_factors() {
        let pt = [FieldElement::from_i64(1), FieldElement::from_i64(2), FieldElement::from_i64(3)];
        let s = orbit_structure(&[f(), f(), f()], &pt, 1, 20).unwrap();
        // only y = x² + 1 relates the coordinates, and it needs degree 2 in x
        assert!(s.generators.is_empty());
        let e = orbit_structure(&[f(), f(), f()], &pt, 3, 20).unwrap_err();
        assert!(matches!(e, Error::Argument(_)));
    }
}
