//! Kernels of exact matrices over K recovered from their reductions modulo word-size primes.
//!
//! Rank can only drop under reduction, so a trivial kernel at a single prime is a
//! proof that the exact kernel is trivial. A nontrivial kernel is lifted by CRT and
//! rational reconstruction from primes sharing the generic pivot pattern; the
//! caller verifies the lift exactly. Over Q(√D) only split primes are used, and the
//! two images √D ↦ ±r give the a and b parts of a + b√D.

use crate::algebra::modular::{
    addmod, crt_step, invmod, large_primes, mulmod, nullspace_mod, rational_reconstruct, reduce_field, sqrt_mod,
    submod,
};
use crate::algebra::{FieldElement, FieldSpec};
use crate::error::{Error, Result};
use rug::{Integer, Rational};

/// A ring map K → F_p: the prime and the image of √D (0 over Q).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Reduction {
    pub p: u64,
    pub r: u64,
}

impl Reduction {
    pub fn reduce(&self, x: &FieldElement) -> Option<u64> {
        reduce_field(x, self.p, self.r)
    }

    pub fn eval(&self, coeffs: &[u64], z: u64) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| addmod(mulmod(acc, z, self.p), c, self.p))
    }
}

/// Usable reductions, each with its Galois partner over a quadratic field.
pub(crate) fn reductions(field: FieldSpec) -> Vec<(Reduction, Option<Reduction>)> {
    large_primes()
        .iter()
        .filter_map(|&p| match field.d() {
            None => Some((Reduction { p, r: 0 }, None)),
            Some(d) => sqrt_mod(d, p).map(|r| (Reduction { p, r }, Some(Reduction { p, r: p - r }))),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum ModKernel {
    Trivial,
    /// RREF-normalized basis: one vector per free column, 1 in that slot.
    Basis(Vec<Vec<FieldElement>>),
}

struct Accumulator {
    free: Vec<usize>,
    modulus: Integer,
    a: Vec<Vec<Integer>>,
    b: Vec<Vec<Integer>>,
    last: Option<Vec<Vec<FieldElement>>>,
}

pub(crate) fn modular_kernel<F>(build: F, ncols: usize, field: FieldSpec, max_primes: usize) -> Result<ModKernel>
where
    F: Fn(Reduction) -> Option<Vec<Vec<u64>>>,
{
    let mut acc: Option<Accumulator> = None;
    let mut used = 0;
    for (red, partner) in reductions(field) {
        if used >= max_primes {
            break;
        }
        let Some(m) = build(red) else { continue };
        let (free, ker) = nullspace_mod(&m, ncols, red.p);
        if free.is_empty() {
            return Ok(ModKernel::Trivial);
        }
        let (av, bv) = match partner {
            None => (ker, vec![vec![0u64; ncols]; free.len()]),
            Some(pr) => {
                let Some(m2) = build(pr) else { continue };
                let (free2, ker2) = nullspace_mod(&m2, ncols, pr.p);
                if free2.is_empty() {
                    return Ok(ModKernel::Trivial);
                }
                if free2 != free {
                    continue;
                }
                split_parts(&ker, &ker2, red)
            }
        };
        used += 1;
        let reset = match &acc {
            None => true,
            Some(s) => free.len() < s.free.len(),
        };
        if reset {
            acc = Some(Accumulator {
                free: free.clone(),
                modulus: Integer::from(red.p),
                a: av.iter().map(|v| v.iter().map(|&x| Integer::from(x)).collect()).collect(),
                b: bv.iter().map(|v| v.iter().map(|&x| Integer::from(x)).collect()).collect(),
                last: None,
            });
            continue;
        }
        let s = acc.as_mut().expect("initialized");
        if free != s.free {
            continue;
        }
        let mut new_mod = s.modulus.clone();
        for (k, (va, vb)) in av.iter().zip(&bv).enumerate() {
            for c in 0..ncols {
                let (x, m1) = crt_step(&s.a[k][c], &s.modulus, va[c], red.p);
                s.a[k][c] = x;
                let (y, _) = crt_step(&s.b[k][c], &s.modulus, vb[c], red.p);
                s.b[k][c] = y;
                new_mod = m1;
            }
        }
        s.modulus = new_mod;
        let lifted = lift(s, field);
        if lifted.is_some() && lifted == s.last {
            return Ok(ModKernel::Basis(lifted.expect("checked")));
        }
        s.last = lifted;
    }
    Err(Error::Precision(format!("kernel lift did not stabilize within {max_primes} primes")))
}

/// a = (v₊ + v₋)/2, b = (v₊ − v₋)/(2r).
fn split_parts(plus: &[Vec<u64>], minus: &[Vec<u64>], red: Reduction) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let p = red.p;
    let half = invmod(2, p).expect("odd prime");
    let inv2r = invmod(mulmod(2, red.r, p), p).expect("r ≠ 0");
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (u, w) in plus.iter().zip(minus) {
        a.push(u.iter().zip(w).map(|(&x, &y)| mulmod(addmod(x, y, p), half, p)).collect());
        b.push(u.iter().zip(w).map(|(&x, &y)| mulmod(submod(x, y, p), inv2r, p)).collect());
    }
    (a, b)
}

fn lift(s: &Accumulator, field: FieldSpec) -> Option<Vec<Vec<FieldElement>>> {
    let rec = |x: &Integer| -> Option<Rational> { rational_reconstruct(x, &s.modulus) };
    let mut out = Vec::new();
    for (va, vb) in s.a.iter().zip(&s.b) {
        let mut v = Vec::with_capacity(va.len());
        for (x, y) in va.iter().zip(vb) {
            v.push(FieldElement::new(rec(x)?, rec(y)?, field));
        }
        out.push(v);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::nullspace;
    use crate::algebra::Ring;

    fn exact_rows() -> Vec<Vec<FieldElement>> {
        // rank 2 in 4 columns with non-integral kernel entries
        let q = |n, d| FieldElement::frac(n, d);
        vec![vec![q(1, 1), q(2, 3), q(0, 1), q(5, 1)], vec![q(3, 1), q(1, 1), q(7, 2), q(-1, 1)]]
    }

    #[test]
    fn agrees_with_exact_nullspace() {
        let m = exact_rows();
        let want = nullspace(&m, 4, &FieldElement::zero());
        let got = modular_kernel(
            |red| m.iter().map(|row| row.iter().map(|x| red.reduce(x)).collect::<Option<Vec<_>>>()).collect(),
            4,
            FieldSpec::Rational,
            32,
        )
        .unwrap();
        assert_eq!(got, ModKernel::Basis(want));
    }

    #[test]
    fn quadratic_entries_are_recovered() {
        let k = FieldSpec::quadratic(2).unwrap();
        let s = FieldElement::sqrt_d(k);
        let one = FieldElement::one().in_field(k).unwrap();
        let m = vec![vec![s.clone(), one.clone(), &s + &one], vec![one.clone(), &s * &s, FieldElement::frac(1, 3).in_field(k).unwrap()]];
        let want = nullspace(&m, 3, &one.zero_like());
        let got = modular_kernel(
            |red| m.iter().map(|row| row.iter().map(|x| red.reduce(x)).collect::<Option<Vec<_>>>()).collect(),
            3,
            k,
            32,
        )
        .unwrap();
        assert_eq!(got, ModKernel::Basis(want));
    }

    #[test]
    fn full_rank_is_trivial() {
        let m = [vec![FieldElement::from_i64(1), FieldElement::from_i64(2)], vec![FieldElement::from_i64(3), FieldElement::from_i64(4)]];
        let got = modular_kernel(
            |red| m.iter().map(|row| row.iter().map(|x| red.reduce(x)).collect::<Option<Vec<_>>>()).collect(),
            2,
            FieldSpec::Rational,
            8,
        )
        .unwrap();
        assert_eq!(got, ModKernel::Trivial);
    }
}
