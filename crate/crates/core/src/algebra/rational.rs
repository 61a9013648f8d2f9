//! Integer and rational helpers: parsing, valuations, factorization, exact roots.

use rug::integer::IsPrime;
use rug::{Assign, Integer, Rational};
use std::cmp::Ordering;

/// Parses `"p/q"`, `"-7"` or a terminating decimal such as `"0.001"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if s.contains('/') {
            return None;
        }
        let (neg, int_part) = match int_part.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        let all_digits = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) || (int_part.is_empty() && frac_part.is_empty()) {
            return None;
        }
        let digits = format!("{}{}", int_part, frac_part);
        let num = Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).ok()?;
        let den = Integer::from(Integer::u_pow_u(10, frac_part.len() as u32));
        let mut q = Rational::from((num, den));
        if neg {
            q = -q;
        }
        return Some(q);
    }
    let t = s.strip_prefix('+').unwrap_or(s);
    let q: Rational = t.parse().ok()?;
    Some(q)
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &Integer, p: &Integer) -> u32 {
    debug_assert!(n.cmp0() != Ordering::Equal);
    let (_, k) = n.clone().remove_factor(p);
    k
}

/// p-adic valuation of a nonzero rational.
pub fn val_rat(q: &Rational, p: &Integer) -> i64 {
    val_int(q.numer(), p) as i64 - val_int(q.denom(), p) as i64
}

pub fn is_prime(n: &Integer) -> bool {
    n.is_probably_prime(40) != IsPrime::No
}

fn pollard_brent(n: &Integer) -> Integer {
    // n is composite and odd here.
    let mut c = Integer::from(1);
    loop {
        let f = |x: &Integer| -> Integer { Integer::from(x * x + &c) % n };
        let mut y = Integer::from(2);
        let mut r: u64 = 1;
        let mut q = Integer::from(1);
        let mut g = Integer::from(1);
        let mut x = Integer::new();
        let mut ys = Integer::new();
        let m = 128u64;
        while g == 1 {
            x.assign(&y);
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys.assign(&y);
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = Integer::from(&x - &y).abs();
                    q = Integer::from(&q * &diff) % n;
                }
                g = Integer::from(q.gcd_ref(n));
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = Integer::from(&x - &ys).abs();
                g = Integer::from(diff.gcd_ref(n));
                if g > 1 {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1;
    }
}

/// Distinct prime factors of |n| in increasing order; empty for |n| ≤ 1.
pub fn prime_factors(n: &Integer) -> Vec<Integer> {
    let mut out = Vec::new();
    let mut m = Integer::from(n.abs_ref());
    if m <= 1 {
        return out;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pi = Integer::from(p);
        if m.is_divisible(&pi) {
            out.push(pi.clone());
            m = m.remove_factor(&pi).0;
        }
    }
    let mut p = 41u32;
    while p < 20_000 && m > 1 {
        let pi = Integer::from(p);
        if m.is_divisible(&pi) {
            out.push(pi.clone());
            m = m.remove_factor(&pi).0;
        }
        p += 2;
    }
    let mut stack = vec![m];
    while let Some(k) = stack.pop() {
        if k <= 1 {
            continue;
        }
        if is_prime(&k) {
            if !out.contains(&k) {
                out.push(k);
            }
            continue;
        }
        let d = pollard_brent(&k);
        let other = Integer::from(&k / &d);
        stack.push(d);
        stack.push(other);
    }
    out.sort();
    out.dedup();
    out
}

/// Exact integer n-th root when one exists (odd roots of negatives allowed).
pub fn exact_int_root(x: &Integer, n: u32) -> Option<Integer> {
    if n == 1 {
        return Some(x.clone());
    }
    if x.cmp0() == Ordering::Less {
        if n.is_multiple_of(2) {
            return None;
        }
        return exact_int_root(&Integer::from(-x), n).map(|r| -r);
    }
    let (r, rem) = x.clone().root_rem(Integer::new(), n);
    if rem == 0 {
        Some(r)
    } else {
        None
    }
}

/// All rational solutions y of y^n = q, sorted ascending.
pub fn rational_roots_of_power(q: &Rational, n: u32) -> Vec<Rational> {
    if q.cmp0() == Ordering::Equal {
        return vec![Rational::new()];
    }
    let (num, den) = (q.numer(), q.denom());
    let (Some(a), Some(b)) = (exact_int_root(num, n), exact_int_root(den, n)) else {
        return Vec::new();
    };
    let r = Rational::from((a, b));
    if n.is_multiple_of(2) {
        let mut v = vec![Rational::from(-&r), r];
        v.sort();
        v
    } else {
        vec![r]
    }
}

/// Checks that D is squarefree; D may be negative.
pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut m = d.unsigned_abs();
    let mut p: u64 = 2;
    while p * p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        if m.is_multiple_of(p) {
            m /= p;
        }
        p += 1;
    }
    // m now has at most two prime factors, both above the cube root.
    let r = (m as f64).sqrt() as u64;
    for s in r.saturating_sub(2)..=r + 2 {
        if s > 1 && s * s == m {
            return false;
        }
    }
    true
}

/// Legendre symbol (a/p) for odd prime p.
pub fn legendre(a: &Integer, p: &Integer) -> i32 {
    a.legendre(p)
}

/// A square root of a modulo an odd prime p (Tonelli–Shanks); `None` if a is a non-residue.
pub fn sqrt_mod_prime(a: &Integer, p: &Integer) -> Option<Integer> {
    let mut a = Integer::from(a % p);
    if a < 0 {
        a += p;
    }
    if a == 0 {
        return Some(Integer::new());
    }
    if a.legendre(p) != 1 {
        return None;
    }
    let pm1 = Integer::from(p - 1u32);
    let (q, s) = pm1.clone().remove_factor(&Integer::from(2));
    let mut z = Integer::from(2);
    while z.legendre(p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.pow_mod(&q, p).ok()?;
    let mut t = a.clone().pow_mod(&q, p).ok()?;
    let e = Integer::from(&q + 1u32) / 2u32;
    let mut r = a.pow_mod(&e, p).ok()?;
    while t != 1 {
        let mut i = 0;
        let mut t2 = t.clone();
        while t2 != 1 {
            t2 = Integer::from(&t2 * &t2) % p;
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = c.clone().pow_mod(&Integer::from(Integer::u_pow_u(2, m - i - 1)), p).ok()?;
        m = i;
        c = Integer::from(&b * &b) % p;
        t = Integer::from(&t * &c) % p;
        r = Integer::from(&r * &b) % p;
    }
    Some(r)
}

/// Lowest common denominator of a list of rationals.
pub fn lcm_denoms<'a, I: IntoIterator<Item = &'a Rational>>(qs: I) -> Integer {
    let mut l = Integer::from(1);
    for q in qs {
        l.lcm_mut(q.denom());
    }
    l
}

/// Integer part of log2 |q| (floor), for nonzero q.
pub fn log2_floor(q: &Rational) -> i64 {
    let n = q.numer().significant_bits() as i64;
    let d = q.denom().significant_bits() as i64;
    n - d - 1
}

/// Bit size of a rational: bits of numerator plus bits of denominator.
pub fn bit_size(q: &Rational) -> u64 {
    q.numer().significant_bits() as u64 + q.denom().significant_bits() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4"), Some(Rational::from((3, 4))));
        assert_eq!(parse_rational("-0.001"), Some(Rational::from((-1, 1000))));
        assert_eq!(parse_rational("+5"), Some(Rational::from(5)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn factors_products_of_large_primes() {
        let p = Integer::from(1_000_000_007u64);
        let q = Integer::from(998_244_353u64);
        let n = Integer::from(&p * &q) * 12u32;
        assert_eq!(
            prime_factors(&n),
            vec![Integer::from(2), Integer::from(3), q, p]
        );
        assert!(prime_factors(&Integer::from(1)).is_empty());
    }

    #[test]
    fn squarefree_detection() {
        assert!(is_squarefree(2));
        assert!(is_squarefree(-3));
        assert!(!is_squarefree(12));
        assert!(!is_squarefree(49));
        assert!(is_squarefree(1_000_003 * 999_983));
        assert!(!is_squarefree(1_000_003 * 1_000_003));
    }

    #[test]
    fn tonelli_shanks_roots_square() {
        let p = Integer::from(1_000_000_009u64);
        for a in [2u32, 5, 7, 11, 13] {
            if let Some(r) = sqrt_mod_prime(&Integer::from(a), &p) {
                assert_eq!(Integer::from(&r * &r) % &p, a);
            }
        }
    }

    #[test]
    fn power_roots() {
        assert_eq!(
            rational_roots_of_power(&Rational::from((4, 9)), 2),
            vec![Rational::from((-2, 3)), Rational::from((2, 3))]
        );
        assert_eq!(rational_roots_of_power(&Rational::from(-8), 3), vec![Rational::from(-2)]);
        assert!(rational_roots_of_power(&Rational::from(2), 2).is_empty());
    }
}
