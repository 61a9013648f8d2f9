//! Escape radii and the archimedean machinery shared by Böttcher evaluation and
//! Green functions.
//!
//! At a finite place, |z|_v > B_v forces |f(z)|_v = |a_d|_v |z|_v^d, because the
//! leading term then strictly dominates every other term. At an archimedean place
//! we bound S(r) = Σ_{i<d} |a_i| r^i from above and |a_d| from below.

use super::system::PolynomialSystem;
use crate::algebra::places::{Place, PlaceKind};
use crate::algebra::rational::bit_size;
use crate::algebra::{CertifiedComplex, CertifiedReal, FieldElement};
use crate::error::{Error, Result};
use rug::{Float, Rational};

/// Smallest power of two tried for an archimedean radius.
const MIN_LOG2: i64 = -64;
const MAX_LOG2: i64 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub enum EscapeBound {
    /// log B_v = c · log p.
    Finite { c: Rational },
    /// B_v = 2^k.
    Arch { log2: i64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EscapeRadius {
    pub place: Place,
    pub bound: EscapeBound,
}

impl EscapeRadius {
    pub fn log_bound(&self, prec: u32) -> CertifiedReal {
        match &self.bound {
            EscapeBound::Finite { c } => {
                let p = self.place.prime().expect("finite place");
                CertifiedReal::ln_integer(p, prec).mul_rational(c)
            }
            EscapeBound::Arch { log2 } => CertifiedReal::ln2(prec).mul_rational(&Rational::from(*log2)),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.bound {
            EscapeBound::Finite { c } => serde_json::json!({
                "place": self.place.name(), "log_bound_over_log_p": c.to_string(),
            }),
            EscapeBound::Arch { log2 } => serde_json::json!({
                "place": self.place.name(), "bound": format!("2^{log2}"),
            }),
        }
    }
}

/// Closed form at finite places:
/// log B = max(max_{i<d} c(a_i/a_d)/(d−i), −c(a_d)/(d−1)) where log|x|_v = c(x)·log p.
pub fn finite_log_radius(f: &PolynomialSystem, v: &Place) -> Result<Rational> {
    let d = f.degree();
    let ad = f.lead();
    let mut best = -v.log_coefficient(ad)? / Rational::from(d as u64 - 1);
    for i in 0..d {
        let ai = f.coeff(i);
        if ai.is_zero() {
            continue;
        }
        let c = v.log_coefficient(&(&ai / ad))? / Rational::from((d - i) as u64);
        if c > best {
            best = c;
        }
    }
    Ok(best)
}

pub fn escape_radius(f: &PolynomialSystem, v: &Place) -> Result<EscapeRadius> {
    if v.field != f.field() {
        return Err(Error::Argument(format!("place {v} is over {}, system over {}", v.field, f.field())));
    }
    let bound = match v.kind {
        PlaceKind::Finite { .. } => EscapeBound::Finite { c: finite_log_radius(f, v)? },
        PlaceKind::Archimedean(_) => {
            let data = ArchData::new(f, v, 128)?;
            EscapeBound::Arch { log2: data.escape_log2()? }
        }
    };
    Ok(EscapeRadius { place: v.clone(), bound })
}

/// Coefficients of f embedded at an archimedean place.
pub(crate) struct ArchData {
    pub d: usize,
    pub coeffs: Vec<CertifiedComplex>,
    /// a_i / a_d for i < d.
    pub ratios: Vec<CertifiedComplex>,
    /// Upper bounds for |a_i|, i < d.
    abs_upper: Vec<Float>,
    /// Lower bound for |a_d|.
    lead_lower: Float,
    pub prec: u32,
}

impl ArchData {
    pub fn new(f: &PolynomialSystem, v: &Place, prec: u32) -> Result<Self> {
        let d = f.degree();
        let coeffs = f.coeffs().iter().map(|c| v.embed(c, prec)).collect::<Result<Vec<_>>>()?;
        let lead_inv = coeffs[d].inv().ok_or_else(|| Error::Precision("leading coefficient not separated from 0".into()))?;
        let ratios = coeffs[..d].iter().map(|c| c.mul(&lead_inv)).collect();
        let abs_upper = coeffs[..d].iter().map(|c| c.abs().hi().clone()).collect();
        let lead_lower = coeffs[d].abs().lo().clone();
        Ok(ArchData { d, coeffs, ratios, abs_upper, lead_lower, prec })
    }

    /// Upper bound for S(r) with r = 2^k.
    fn s_upper(&self, k: i64) -> Float {
        let mut s = Float::with_val(self.prec, 0);
        for (i, a) in self.abs_upper.iter().enumerate() {
            // exact: scaling by a power of two
            let t = Float::with_val(self.prec, a * pow2(self.prec, k * i as i64));
            s = round_up_add(self.prec, &s, &t);
        }
        s
    }

    fn lead_times(&self, k: i64, e: i64) -> Float {
        Float::with_val(self.prec, &self.lead_lower * pow2(self.prec, k * e))
    }

    /// Smallest k with S(2^k) ≤ (|a_d|/2)·2^{kd} and (|a_d|/2)·2^{k(d−1)} ≥ 1.
    pub fn escape_log2(&self) -> Result<i64> {
        let d = self.d as i64;
        for k in MIN_LOG2..MAX_LOG2 {
            let half_top = Float::with_val(self.prec, self.lead_times(k, d) >> 1u32);
            let half_grow = Float::with_val(self.prec, self.lead_times(k, d - 1) >> 1u32);
            if self.s_upper(k) <= half_top && half_grow >= 1 {
                return Ok(k);
            }
        }
        Err(Error::Precision("no escape radius found".into()))
    }

    /// Smallest k with |a_d| r^d − S(r) ≥ r at r = 2^k. For |z| > r this gives
    /// |f(z)| > |z| and |w(z) − 1| < 1 with w = f(z)/(a_d z^d).
    pub fn convergence_log2(&self) -> Result<i64> {
        let d = self.d as i64;
        for k in MIN_LOG2..MAX_LOG2 {
            let top = self.lead_times(k, d);
            let need = round_up_add(self.prec, &self.s_upper(k), &pow2(self.prec, k));
            if top >= need {
                return Ok(k);
            }
        }
        Err(Error::Precision("no convergence radius found".into()))
    }

    /// Upper bound on S(|u|)/(|a_d| |u|^d), valid for every |z| ≥ |u|.
    pub fn tail_ratio(&self, abs_lower: &Float) -> Float {
        let p = self.prec;
        let mut s = Float::with_val(p, 0);
        let mut r = Float::with_val(p, 1);
        for a in &self.abs_upper {
            let t = Float::with_val_round(p, a * &r, rug::float::Round::Up).0;
            s = round_up_add(p, &s, &t);
            r = Float::with_val_round(p, &r * abs_lower, rug::float::Round::Down).0;
        }
        // r = |u|^d (rounded down)
        let den = Float::with_val_round(p, &self.lead_lower * &r, rug::float::Round::Down).0;
        Float::with_val_round(p, &s / &den, rug::float::Round::Up).0
    }

    pub fn eval(&self, z: &CertifiedComplex) -> CertifiedComplex {
        let mut acc = self.coeffs[self.d].clone();
        for c in self.coeffs[..self.d].iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    /// w(z) = f(z)/(a_d z^d) = 1 + Σ_{i<d} (a_i/a_d) z^{i−d}.
    pub fn w(&self, z: &CertifiedComplex) -> Option<CertifiedComplex> {
        let inv = z.inv()?;
        let one = CertifiedComplex::from_rational(&Rational::from(1), self.prec);
        // Horner in 1/z: ((r_0/z + r_1)/z + … + r_{d−1})/z
        let mut acc = CertifiedComplex::from_rational(&Rational::new(), self.prec);
        for r in self.ratios.iter() {
            acc = acc.mul(&inv).add(r);
        }
        Some(one.add(&acc.mul(&inv)))
    }
}

fn pow2(prec: u32, k: i64) -> Float {
    let one = Float::with_val(prec, 1);
    if k >= 0 {
        one << (k as u32)
    } else {
        one >> ((-k) as u32)
    }
}

fn round_up_add(p: u32, a: &Float, b: &Float) -> Float {
    Float::with_val_round(p, a + b, rug::float::Round::Up).0
}

/// Exact iterates are kept while they stay below this many bits per coordinate.
const EXACT_BITS: u64 = 2048;

/// The orbit at an archimedean place after it has entered {|z| > r_conv}.
pub(crate) struct Telescoped {
    /// First index m with |f^m(a)| > r_conv.
    pub start: usize,
    pub u_start: CertifiedComplex,
    /// Σ_{n≥m} Log w(f^n(a)) / d^{n−m+1}, tail included.
    pub log_sum: CertifiedComplex,
}

/// Iterates until the orbit enters the convergence region (at most `budget`
/// steps), then sums the telescoping series until its tail is below 2^−prec.
/// `Ok(None)` means no escape was observed.
pub(crate) fn telescope(
    f: &PolynomialSystem,
    a: &FieldElement,
    v: &Place,
    prec: u32,
    budget: usize,
) -> Result<Option<Telescoped>> {
    let mut wp = prec + 64;
    for _ in 0..4 {
        match telescope_at(f, a, v, prec, wp, budget)? {
            Some(Attempt::Done(t)) => return Ok(Some(t)),
            Some(Attempt::NeedPrecision) => wp *= 2,
            None => return Ok(None),
        }
    }
    Err(Error::Precision(format!("telescoping sum did not reach {prec} bits")))
}

enum Attempt {
    Done(Telescoped),
    NeedPrecision,
}

fn telescope_at(
    f: &PolynomialSystem,
    a: &FieldElement,
    v: &Place,
    prec: u32,
    wp: u32,
    budget: usize,
) -> Result<Option<Attempt>> {
    let data = ArchData::new(f, v, wp)?;
    let r = pow2(wp, data.convergence_log2()?);
    let d = data.d as u64;
    let mut exact = Some(a.clone());
    let mut u = v.embed(a, wp)?;
    let mut m = 0usize;
    loop {
        if u.abs().lo() > &r {
            break;
        }
        if m >= budget {
            return Ok(None);
        }
        exact = exact.and_then(|x| {
            let y = f.eval(&x);
            (bit_size(y.a()) + bit_size(y.b()) <= EXACT_BITS).then_some(y)
        });
        u = match &exact {
            Some(x) => v.embed(x, wp)?,
            None => data.eval(&u),
        };
        m += 1;
    }
    let u_start = u.clone();
    let target = Float::with_val(wp, Float::with_val(wp, 1) >> (prec + 4));
    let mut sum = CertifiedComplex::from_rational(&Rational::new(), wp);
    let mut weight = Rational::from((1, d));
    let mut z = u;
    for _ in 0..4096 {
        let eps = data.tail_ratio(z.abs().lo());
        // |Log w| ≤ 2|w − 1| once |w − 1| ≤ 1/2, and Σ_{n≥N} d^{−(n−m+1)} ≤ 2·weight
        if eps <= 0.5 {
            let wt = Float::with_val_round(wp, &weight, rug::float::Round::Up).0;
            let t = Float::with_val_round(wp, Float::with_val(wp, &eps * 4u32) * &wt, rug::float::Round::Up).0;
            if t <= target {
                let log_sum = CertifiedComplex::new(sum.re.widen(&t), sum.im.widen(&t));
                if log_sum.re.width() > Float::with_val(wp, Float::with_val(wp, 1) >> (prec / 2)) {
                    return Ok(Some(Attempt::NeedPrecision));
                }
                return Ok(Some(Attempt::Done(Telescoped { start: m, u_start, log_sum })));
            }
        }
        let Some(w) = data.w(&z) else {
            return Ok(Some(Attempt::NeedPrecision));
        };
        let Some(lw) = w.ln() else {
            return Ok(Some(Attempt::NeedPrecision));
        };
        sum = sum.add(&CertifiedComplex::new(lw.re.mul_rational(&weight), lw.im.mul_rational(&weight)));
        weight /= d;
        z = data.eval(&z);
    }
    Ok(Some(Attempt::NeedPrecision))
}
