//! Word-size prime-field arithmetic, CRT and rational reconstruction.

use super::field::FieldElement;
use rug::{Integer, Rational};
use std::sync::OnceLock;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse by Fermat; p prime and a ≠ 0 mod p.
pub fn invmod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

/// Decreasing primes just below 2^62.
pub fn large_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut n: u64 = (1u64 << 62) - 1;
        while out.len() < 96 {
            if super::rational::is_prime(&Integer::from(n)) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

pub fn reduce_integer(n: &Integer, p: u64) -> u64 {
    let r = Integer::from(n % p);
    let r = if r < 0 { r + p } else { r };
    r.to_u64().expect("residue fits")
}

/// q mod p; `None` when p divides the denominator.
pub fn reduce_rational(q: &Rational, p: u64) -> Option<u64> {
    let n = reduce_integer(q.numer(), p);
    let d = reduce_integer(q.denom(), p);
    Some(mulmod(n, invmod(d, p)?, p))
}

/// Image of a + b√D under √D ↦ r (mod p).
pub fn reduce_field(x: &FieldElement, p: u64, r: u64) -> Option<u64> {
    let a = reduce_rational(x.a(), p)?;
    if x.is_rational() {
        return Some(a);
    }
    let b = reduce_rational(x.b(), p)?;
    Some(addmod(a, mulmod(b, r, p), p))
}

/// A square root of D modulo p when D is a nonzero square.
pub fn sqrt_mod(d: i64, p: u64) -> Option<u64> {
    let dp = Integer::from(d);
    let pp = Integer::from(p);
    let dm = Integer::from(&dp % &pp);
    if dm == 0 {
        return None;
    }
    super::rational::sqrt_mod_prime(&dp, &pp).map(|r| r.to_u64().unwrap())
}

/// Reduced row echelon form mod p; returns pivot columns.
pub fn rref_mod(m: &mut Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(pr) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = invmod(m[row][col], p).unwrap();
        for c in col..ncols {
            m[row][c] = mulmod(m[row][c], inv, p);
        }
        let pivot_row = m[row].clone();
        for (r, rr) in m.iter_mut().enumerate() {
            if r != row && rr[col] != 0 {
                let f = rr[col];
                for c in col..ncols {
                    rr[c] = submod(rr[c], mulmod(f, pivot_row[c], p), p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

/// RREF-normalized kernel basis: vector k has a 1 at the k-th free column.
pub fn nullspace_mod(m: &[Vec<u64>], ncols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut a = m.to_vec();
    let pivots = rref_mod(&mut a, ncols, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut v = vec![0u64; ncols];
        v[f] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[r][f]) % p;
        }
        out.push(v);
    }
    (free, out)
}

/// Combines x ≡ a (mod m) with x ≡ b (mod p) into a residue modulo m·p.
pub fn crt_step(a: &Integer, m: &Integer, b: u64, p: u64) -> (Integer, Integer) {
    let am = reduce_integer(a, p);
    let mm = reduce_integer(m, p);
    let t = mulmod(submod(b, am, p), invmod(mm, p).expect("coprime moduli"), p);
    let x = a + Integer::from(m * t);
    (x, Integer::from(m * p))
}

/// Rational n/d ≡ a (mod m) with |n|, d ≤ sqrt(m/2), if one exists.
pub fn rational_reconstruct(a: &Integer, m: &Integer) -> Option<Rational> {
    let bound = Integer::from(m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), Integer::from(a % m));
    if r1 < 0 {
        r1 += m;
    }
    let (mut t0, mut t1) = (Integer::new(), Integer::from(1));
    while r1 > bound {
        let q = Integer::from(&r0 / &r1);
        let r2 = &r0 - Integer::from(&q * &r1);
        let t2 = &t0 - Integer::from(&q * &t1);
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1 == 0 || Integer::from(t1.abs_ref()) > bound {
        return None;
    }
    if Integer::from(r1.gcd_ref(&t1)) != 1 {
        return None;
    }
    Some(Rational::from((r1, t1)))
}
