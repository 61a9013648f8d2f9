//! Places of Q and Q(√D) with normalized absolute values.
//!
//! Finite data stays exact: `log|x|_v = c · log p` with c rational. The
//! absolute value at v is the unique extension of the usual |·|_p (or |·|_∞),
//! so the product formula reads Σ_v n_v log|x|_v = 0.

use super::field::{FieldElement, FieldSpec};
use super::rational::{prime_factors, sqrt_mod_prime, val_int};
use super::real::{CertifiedComplex, CertifiedReal};
use crate::error::{Error, Result};
use rug::{Integer, Rational};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Decomposition {
    /// The base field is Q.
    Rational,
    /// √D ↦ the p-adic root congruent to this residue (mod p, or mod 4 when p = 2).
    Split(Integer),
    Inert,
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    /// For real quadratic fields, index 0 sends √D to the positive root.
    Archimedean(usize),
    Finite { p: Integer, decomposition: Decomposition },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Place {
    pub kind: PlaceKind,
    pub field: FieldSpec,
}

/// log|x|_v: exact multiple of log p at finite places, an enclosure otherwise.
#[derive(Clone, Debug)]
pub enum LocalLog {
    Finite { p: Integer, c: Rational },
    Arch(CertifiedReal),
}

impl LocalLog {
    pub fn to_real(&self, prec: u32) -> CertifiedReal {
        match self {
            LocalLog::Finite { p, c } => CertifiedReal::ln_integer(p, prec).mul_rational(c),
            LocalLog::Arch(r) => r.clone(),
        }
    }
}

impl Place {
    pub fn archimedean(field: FieldSpec) -> Vec<Place> {
        let n = match field.d() {
            Some(d) if d > 0 => 2,
            _ => 1,
        };
        (0..n).map(|k| Place { kind: PlaceKind::Archimedean(k), field }).collect()
    }

    pub fn rational_prime(p: u64) -> Place {
        Place {
            kind: PlaceKind::Finite { p: Integer::from(p), decomposition: Decomposition::Rational },
            field: FieldSpec::Rational,
        }
    }

    pub fn infinity() -> Place {
        Place { kind: PlaceKind::Archimedean(0), field: FieldSpec::Rational }
    }

    /// All places of `field` above the rational prime p.
    pub fn above(p: &Integer, field: FieldSpec) -> Vec<Place> {
        let f = |decomposition| Place { kind: PlaceKind::Finite { p: p.clone(), decomposition }, field };
        let Some(d) = field.d() else {
            return vec![f(Decomposition::Rational)];
        };
        let d = Integer::from(d);
        if *p == 2 {
            let dm = Integer::from(d.mod_u(8));
            return match dm.to_u32().unwrap() {
                1 => vec![f(Decomposition::Split(Integer::from(1))), f(Decomposition::Split(Integer::from(3)))],
                5 => vec![f(Decomposition::Inert)],
                _ => vec![f(Decomposition::Ramified)],
            };
        }
        if d.is_divisible(p) {
            return vec![f(Decomposition::Ramified)];
        }
        match d.legendre(p) {
            1 => {
                let r = sqrt_mod_prime(&d, p).expect("residue");
                let s = Integer::from(p - &r);
                let (lo, hi) = if r < s { (r, s) } else { (s, r) };
                vec![f(Decomposition::Split(lo)), f(Decomposition::Split(hi))]
            }
            _ => vec![f(Decomposition::Inert)],
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self.kind, PlaceKind::Archimedean(_))
    }

    pub fn prime(&self) -> Option<&Integer> {
        match &self.kind {
            PlaceKind::Finite { p, .. } => Some(p),
            _ => None,
        }
    }

    /// n_v = [K_v : Q_p] or [K_v : R].
    pub fn local_degree(&self) -> u32 {
        match &self.kind {
            PlaceKind::Archimedean(_) => match self.field.d() {
                Some(d) if d < 0 => 2,
                _ => 1,
            },
            PlaceKind::Finite { decomposition, .. } => match decomposition {
                Decomposition::Rational | Decomposition::Split(_) => 1,
                Decomposition::Inert | Decomposition::Ramified => 2,
            },
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            PlaceKind::Archimedean(k) => format!("inf:{k}"),
            PlaceKind::Finite { p, decomposition } => match decomposition {
                Decomposition::Rational => p.to_string(),
                Decomposition::Split(r) => format!("{p}:split:{r}"),
                Decomposition::Inert => format!("{p}:inert"),
                Decomposition::Ramified => format!("{p}:ram"),
            },
        }
    }

    /// Accepts "inf", "inf:k", "p", "p:split:r", "p:inert", "p:ram".
    pub fn parse(s: &str, field: FieldSpec) -> Result<Place> {
        let bad = || Error::Parse(format!("unrecognized place `{s}`"));
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Place { kind: PlaceKind::Archimedean(0), field });
        }
        if let Some(k) = s.strip_prefix("inf:") {
            let k: usize = k.parse().map_err(|_| bad())?;
            let places = Place::archimedean(field);
            return places.into_iter().nth(k).ok_or_else(|| Error::Argument(format!("no archimedean place {k} for {field}")));
        }
        let mut parts = s.split(':');
        let p: Integer = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if p < 2 || !super::rational::is_prime(&p) {
            return Err(Error::Argument(format!("{p} is not prime")));
        }
        let above = Place::above(&p, field);
        let rest: Vec<&str> = parts.collect();
        let found = match rest.as_slice() {
            [] if above.len() == 1 => above.into_iter().next(),
            ["split", r] => {
                let r: Integer = r.parse().map_err(|_| bad())?;
                above.into_iter().find(|pl| matches!(&pl.kind, PlaceKind::Finite { decomposition: Decomposition::Split(x), .. } if *x == r))
            }
            ["inert"] => above.into_iter().find(|pl| matches!(&pl.kind, PlaceKind::Finite { decomposition: Decomposition::Inert, .. })),
            ["ram"] => above.into_iter().find(|pl| matches!(&pl.kind, PlaceKind::Finite { decomposition: Decomposition::Ramified, .. })),
            _ => None,
        };
        found.ok_or_else(|| Error::Argument(format!("place `{s}` does not exist over {field}")))
    }

    /// Embeds an element of the place's field into C.
    pub fn embed(&self, x: &FieldElement, prec: u32) -> Result<CertifiedComplex> {
        let PlaceKind::Archimedean(k) = self.kind else {
            return Err(Error::Argument("embedding requested at a finite place".into()));
        };
        let a = CertifiedReal::from_rational(x.a(), prec);
        if x.is_rational() {
            return Ok(CertifiedComplex::from_real(a));
        }
        let d = self.field.d().ok_or_else(|| Error::Domain("irrational element over Q".into()))?;
        if x.field_of_value() != self.field {
            return Err(Error::Argument(format!("element {x} is not in {}", self.field)));
        }
        let b = CertifiedReal::from_rational(x.b(), prec);
        let s = CertifiedReal::from_i64(d.abs(), prec).sqrt().expect("positive");
        if d > 0 {
            let s = if k == 0 { s } else { s.neg() };
            Ok(CertifiedComplex::from_real(a.add(&b.mul(&s))))
        } else {
            Ok(CertifiedComplex::new(a, b.mul(&s)))
        }
    }

    /// The exponent c with log|x|_v = c·log p at a finite place.
    pub fn log_coefficient(&self, x: &FieldElement) -> Result<Rational> {
        let PlaceKind::Finite { p, decomposition } = &self.kind else {
            return Err(Error::Argument("finite place required".into()));
        };
        if x.is_zero() {
            return Err(Error::Domain("log|0|_v is undefined".into()));
        }
        if x.is_rational() {
            return Ok(Rational::from(-super::rational::val_rat(x.a(), p)));
        }
        match decomposition {
            Decomposition::Rational => Err(Error::Domain(format!("element {x} is not rational"))),
            Decomposition::Inert | Decomposition::Ramified => {
                let n = x.norm();
                Ok(Rational::from((-super::rational::val_rat(&n, p), 2)))
            }
            Decomposition::Split(label) => {
                let d = Integer::from(self.field.d().expect("quadratic"));
                let den = Integer::from(x.a().denom()).lcm(x.b().denom());
                let aa = (x.a() * Rational::from(den.clone())).numer().clone();
                let bb = (x.b() * Rational::from(den.clone())).numer().clone();
                let aa2 = Integer::from(&aa * &aa);
                let bb2d = Integer::from(&bb * &bb) * &d;
                let nrm = aa2 - bb2d;
                let k = val_int(&nrm, p);
                let r = padic_sqrt(&d, p, label, k + 1);
                let modulus = ipow(p, k + 1);
                let mut t = Integer::from(&bb * &r) + &aa;
                t %= &modulus;
                let v_num = if t == 0 { k + 1 } else { val_int(&t, p) };
                debug_assert!(v_num <= k);
                let v_den = val_int(&den, p) as i64;
                Ok(Rational::from(-(v_num as i64) + v_den))
            }
        }
    }
}

fn ipow(p: &Integer, k: u32) -> Integer {
    Integer::from(rug::ops::Pow::pow(p, k))
}

/// A root r of r² = D in Z_p, correct modulo p^prec, on the branch named by `label`.
fn padic_sqrt(d: &Integer, p: &Integer, label: &Integer, prec: u32) -> Integer {
    if *p == 2 {
        // Lift modulo 2^(prec+1); each step fixes one more bit.
        let target = prec + 2;
        let mut r = label.clone();
        let mut j = 3;
        while j < target {
            let m = Integer::from(Integer::u_pow_u(2, j + 1));
            let diff = Integer::from(&r * &r) - d;
            if Integer::from(&diff % &m) != 0 {
                r += Integer::from(Integer::u_pow_u(2, j - 1));
            }
            j += 1;
        }
        return r;
    }
    let mut r = label.clone();
    let mut k = 1u32;
    while k < prec {
        k = (2 * k).min(prec);
        let m = ipow(p, k);
        let f = Integer::from(&r * &r) - d;
        let two_r = Integer::from(&r * 2u32);
        let inv = two_r.invert(&m).expect("unit derivative");
        r = &r - (f * inv);
        r %= &m;
        if r < 0 {
            r += &m;
        }
    }
    r
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// log|x|_v in its natural representation.
pub fn abs_value(x: &FieldElement, v: &Place, prec: u32) -> Result<LocalLog> {
    if x.is_zero() {
        return Err(Error::Domain("log|0|_v is undefined".into()));
    }
    match &v.kind {
        PlaceKind::Finite { p, .. } => Ok(LocalLog::Finite { p: p.clone(), c: v.log_coefficient(x)? }),
        PlaceKind::Archimedean(_) => {
            let z = v.embed(x, prec + 16)?;
            let l = z.log_abs().ok_or_else(|| Error::Precision("cannot separate |x| from 0".into()))?;
            Ok(LocalLog::Arch(l.with_prec(prec)))
        }
    }
}

/// Primes dividing the discriminant of the field.
pub fn discriminant_primes(field: FieldSpec) -> Vec<Integer> {
    match field.d() {
        None => Vec::new(),
        Some(d) => {
            let mut ps = prime_factors(&Integer::from(d));
            if d.rem_euclid(4) != 1 && !ps.contains(&Integer::from(2)) {
                ps.push(Integer::from(2));
                ps.sort();
            }
            ps
        }
    }
}

fn add_den_primes(ps: &mut Vec<Integer>, x: &FieldElement) {
    for q in [x.a(), x.b()] {
        if q.denom() != &1 {
            ps.extend(prime_factors(q.denom()));
        }
    }
}

/// Archimedean places plus every finite place where the good-reduction test can fail.
pub fn relevant_places(coeffs: &[FieldElement], points: &[FieldElement], field: FieldSpec) -> Vec<Place> {
    let mut ps: Vec<Integer> = Vec::new();
    for c in coeffs {
        add_den_primes(&mut ps, c);
    }
    if let Some(lead) = coeffs.iter().rev().find(|c| !c.is_zero()) {
        let n = lead.norm();
        ps.extend(prime_factors(n.numer()));
        ps.extend(prime_factors(n.denom()));
    }
    for a in points {
        add_den_primes(&mut ps, a);
    }
    ps.extend(discriminant_primes(field));
    ps.sort();
    ps.dedup();
    let mut out = Place::archimedean(field);
    for p in ps {
        out.extend(Place::above(&p, field));
    }
    out
}

/// Σ over finite places above the given primes of n_v · c_v(x); zero for every x ≠ 0
/// once paired with the archimedean part. Exposed for product-formula checks.
pub fn finite_log_sum(x: &FieldElement, field: FieldSpec) -> Result<Vec<(Integer, Rational)>> {
    let n = x.norm();
    let mut ps = prime_factors(n.numer());
    ps.extend(prime_factors(n.denom()));
    for q in [x.a(), x.b()] {
        ps.extend(prime_factors(q.denom()));
    }
    ps.sort();
    ps.dedup();
    let mut out = Vec::new();
    for p in ps {
        let mut s = Rational::new();
        for v in Place::above(&p, field) {
            s += v.log_coefficient(x)? * Rational::from(v.local_degree());
        }
        if s.cmp0() != Ordering::Equal {
            out.push((p, s));
        }
    }
    Ok(out)
}
