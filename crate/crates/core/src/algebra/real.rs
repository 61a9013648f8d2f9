//! Certified real and complex enclosures on MPFR with outward (directed) rounding.
//!
//! Internally an enclosure is an interval `[lo, hi]`; the midpoint–radius view
//! (`mid`, `rad`) is derived and always contains the interval.

use super::ring::Ring;
use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug)]
pub struct CertifiedReal {
    lo: Float,
    hi: Float,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

fn fmin(a: Float, b: Float) -> Float {
    if a <= b {
        a
    } else {
        b
    }
}

fn fmax(a: Float, b: Float) -> Float {
    if a >= b {
        a
    } else {
        b
    }
}

impl CertifiedReal {
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(lo <= hi, "inverted interval");
        CertifiedReal { lo, hi }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        CertifiedReal { lo: down(prec, q), hi: up(prec, q) }
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        CertifiedReal { lo: down(prec, n), hi: up(prec, n) }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_rational(&Rational::from(n), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn point(f: Float) -> Self {
        CertifiedReal { lo: f.clone(), hi: f }
    }

    pub fn pi(prec: u32) -> Self {
        CertifiedReal { lo: down(prec, Constant::Pi), hi: up(prec, Constant::Pi) }
    }

    pub fn ln2(prec: u32) -> Self {
        CertifiedReal { lo: down(prec, Constant::Log2), hi: up(prec, Constant::Log2) }
    }

    /// log p for a positive integer p.
    pub fn ln_integer(p: &Integer, prec: u32) -> Self {
        Self::from_integer(p, prec + 8).ln().expect("log of positive integer").with_prec(prec)
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        CertifiedReal { lo: down(prec, &self.lo), hi: up(prec, &self.hi) }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn mid(&self) -> Float {
        let p = self.prec();
        let s = Float::with_val(p + 1, &self.lo + &self.hi);
        Float::with_val(p, s / 2u32)
    }

    /// Radius such that [mid − rad, mid + rad] ⊇ [lo, hi].
    pub fn rad(&self) -> Float {
        let m = self.mid();
        let p = 64;
        let a = up(p, &self.hi - &m);
        let b = up(p, &m - &self.lo);
        fmax(a, b)
    }

    pub fn width(&self) -> Float {
        up(64, &self.hi - &self.lo)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.cmp0() != Some(Ordering::Greater) && self.hi.cmp0() != Some(Ordering::Less)
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo <= *q && self.hi >= *q
    }

    pub fn contains(&self, o: &CertifiedReal) -> bool {
        self.lo <= o.lo && self.hi >= o.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.cmp0() == Some(Ordering::Greater)
    }

    pub fn is_negative(&self) -> bool {
        self.hi.cmp0() == Some(Ordering::Less)
    }

    pub fn certainly_lt(&self, o: &CertifiedReal) -> bool {
        self.hi < o.lo
    }

    pub fn certainly_le(&self, o: &CertifiedReal) -> bool {
        self.hi <= o.lo
    }

    pub fn certainly_gt(&self, o: &CertifiedReal) -> bool {
        self.lo > o.hi
    }

    pub fn certainly_gt_rational(&self, q: &Rational) -> bool {
        self.lo > *q
    }

    pub fn certainly_lt_rational(&self, q: &Rational) -> bool {
        self.hi < *q
    }

    pub fn intersects(&self, o: &CertifiedReal) -> bool {
        !(self.hi < o.lo || o.hi < self.lo)
    }

    pub fn hull(&self, o: &CertifiedReal) -> Self {
        CertifiedReal { lo: fmin(self.lo.clone(), o.lo.clone()), hi: fmax(self.hi.clone(), o.hi.clone()) }
    }

    /// Enlarges by ±e.
    pub fn widen(&self, e: &Float) -> Self {
        let p = self.prec();
        CertifiedReal { lo: down(p, &self.lo - e), hi: up(p, &self.hi + e) }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        CertifiedReal { lo: down(p, &self.lo + &o.lo), hi: up(p, &self.hi + &o.hi) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        CertifiedReal { lo: down(p, &self.lo - &o.hi), hi: up(p, &self.hi - &o.lo) }
    }

    pub fn neg(&self) -> Self {
        CertifiedReal { lo: Float::with_val(self.hi.prec(), -&self.hi), hi: Float::with_val(self.lo.prec(), -&self.lo) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let l = down(p, a * b);
            let h = up(p, a * b);
            lo = Some(match lo {
                None => l,
                Some(x) => fmin(x, l),
            });
            hi = Some(match hi {
                None => h,
                Some(x) => fmax(x, h),
            });
        }
        CertifiedReal { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    pub fn sqr(&self) -> Self {
        let p = self.prec();
        if self.contains_zero() {
            let a = up(p, self.lo.clone().square());
            let b = up(p, self.hi.clone().square());
            return CertifiedReal { lo: Float::with_val(p, 0), hi: fmax(a, b) };
        }
        let a = self.abs();
        CertifiedReal { lo: down(p, a.lo.clone().square()), hi: up(p, a.hi.clone().square()) }
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        self.mul(&CertifiedReal::from_rational(q, self.prec()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.contains_zero() {
            return None;
        }
        let p = self.prec().max(o.prec());
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let l = down(p, a / b);
            let h = up(p, a / b);
            lo = Some(match lo {
                None => l,
                Some(x) => fmin(x, l),
            });
            hi = Some(match hi {
                None => h,
                Some(x) => fmax(x, h),
            });
        }
        Some(CertifiedReal { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    /// Division by 2^k, exact.
    pub fn div_2exp(&self, k: u32) -> Self {
        CertifiedReal { lo: Float::with_val(self.lo.prec(), &self.lo >> k), hi: Float::with_val(self.hi.prec(), &self.hi >> k) }
    }

    pub fn div_u64(&self, n: u64) -> Self {
        self.div(&CertifiedReal::from_integer(&Integer::from(n), self.prec())).expect("n > 0")
    }

    pub fn abs(&self) -> Self {
        if self.lo.cmp0() != Some(Ordering::Less) {
            self.clone()
        } else if self.hi.cmp0() != Some(Ordering::Greater) {
            self.neg()
        } else {
            let a = Float::with_val(self.lo.prec(), -&self.lo);
            let p = self.prec();
            CertifiedReal { lo: Float::with_val(p, 0), hi: fmax(a, self.hi.clone()) }
        }
    }

    pub fn max(&self, o: &Self) -> Self {
        CertifiedReal { lo: fmax(self.lo.clone(), o.lo.clone()), hi: fmax(self.hi.clone(), o.hi.clone()) }
    }

    pub fn min(&self, o: &Self) -> Self {
        CertifiedReal { lo: fmin(self.lo.clone(), o.lo.clone()), hi: fmin(self.hi.clone(), o.hi.clone()) }
    }

    pub fn sqrt(&self) -> Option<Self> {
        if self.hi.cmp0() == Some(Ordering::Less) {
            return None;
        }
        let p = self.prec();
        let lo = if self.lo.cmp0() == Some(Ordering::Greater) {
            let (r, _) = Float::with_val_round(p, self.lo.sqrt_ref(), Round::Down);
            r
        } else {
            Float::with_val(p, 0)
        };
        let (hi, _) = Float::with_val_round(p, self.hi.sqrt_ref(), Round::Up);
        Some(CertifiedReal { lo, hi })
    }

    pub fn ln(&self) -> Option<Self> {
        if !self.is_positive() {
            return None;
        }
        let p = self.prec();
        let (lo, _) = Float::with_val_round(p, self.lo.ln_ref(), Round::Down);
        let (hi, _) = Float::with_val_round(p, self.hi.ln_ref(), Round::Up);
        Some(CertifiedReal { lo, hi })
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let (lo, _) = Float::with_val_round(p, self.lo.exp_ref(), Round::Down);
        let (hi, _) = Float::with_val_round(p, self.hi.exp_ref(), Round::Up);
        CertifiedReal { lo, hi }
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut acc = CertifiedReal::from_i64(1, self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// sin on an interval; widths ≥ 1 fall back to [-1, 1].
    pub fn sin(&self) -> Self {
        let p = self.prec();
        let unit = CertifiedReal { lo: Float::with_val(p, -1), hi: Float::with_val(p, 1) };
        if self.width() >= 1 {
            return unit;
        }
        let (sa_lo, _) = Float::with_val_round(p, self.lo.sin_ref(), Round::Down);
        let (sa_hi, _) = Float::with_val_round(p, self.lo.sin_ref(), Round::Up);
        let (sb_lo, _) = Float::with_val_round(p, self.hi.sin_ref(), Round::Down);
        let (sb_hi, _) = Float::with_val_round(p, self.hi.sin_ref(), Round::Up);
        let mut lo = fmin(sa_lo, sb_lo);
        let mut hi = fmax(sa_hi, sb_hi);
        // Critical points π/2 + kπ: parameter t = (θ − π/2)/π.
        let pi = CertifiedReal::pi(p);
        let t = self.sub(&pi.div_2exp(1)).div(&pi).expect("pi > 0");
        let kmin = t.lo.to_integer_round(Round::Up).map(|(k, _)| k);
        let kmax = t.hi.to_integer_round(Round::Down).map(|(k, _)| k);
        if let (Some(kmin), Some(kmax)) = (kmin, kmax) {
            let mut k = kmin;
            while k <= kmax {
                if k.is_even() {
                    hi = Float::with_val(p, 1);
                } else {
                    lo = Float::with_val(p, -1);
                }
                k += 1;
            }
        }
        let one = Float::with_val(p, 1);
        let mone = Float::with_val(p, -1);
        CertifiedReal { lo: fmax(lo, mone), hi: fmin(hi, one) }
    }

    pub fn cos(&self) -> Self {
        let p = self.prec();
        self.add(&CertifiedReal::pi(p).div_2exp(1)).sin()
    }

    /// atan2(self, x) with self the y-coordinate; `None` if the box meets the origin.
    pub fn atan2(&self, x: &CertifiedReal) -> Option<Self> {
        let y = self;
        if y.contains_zero() && x.contains_zero() {
            return None;
        }
        let p = self.prec().max(x.prec());
        if y.contains_zero() && x.is_negative() {
            // straddles the branch cut
            let pi = CertifiedReal::pi(p);
            return Some(pi.neg().hull(&pi));
        }
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for yy in [&y.lo, &y.hi] {
            for xx in [&x.lo, &x.hi] {
                let (l, _) = Float::with_val_round(p, yy.atan2_ref(xx), Round::Down);
                let (h, _) = Float::with_val_round(p, yy.atan2_ref(xx), Round::Up);
                lo = Some(match lo {
                    None => l,
                    Some(v) => fmin(v, l),
                });
                hi = Some(match hi {
                    None => h,
                    Some(v) => fmax(v, h),
                });
            }
        }
        Some(CertifiedReal { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    /// A rational inside the interval (the rounded midpoint).
    pub fn mid_rational(&self) -> Rational {
        self.mid().to_rational().unwrap_or_default()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mid": float_string(&self.mid(), 40),
            "rad": float_string(&self.rad(), 6),
        })
    }
}

pub fn float_string(f: &Float, digits: usize) -> String {
    if f.is_zero() {
        return "0".into();
    }
    f.to_string_radix(10, Some(digits))
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", float_string(&self.mid(), 20), float_string(&self.rad(), 3))
    }
}

impl Ring for CertifiedReal {
    fn zero_like(&self) -> Self {
        CertifiedReal::zero(self.prec())
    }
    fn one_like(&self) -> Self {
        CertifiedReal::from_i64(1, self.prec())
    }
    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        CertifiedReal::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        CertifiedReal::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        CertifiedReal::mul(self, o)
    }
    fn neg(&self) -> Self {
        CertifiedReal::neg(self)
    }
    fn scale(&self, q: &Rational) -> Self {
        self.mul_rational(q)
    }
    fn try_inv(&self) -> Option<Self> {
        self.one_like().div(self)
    }
}

#[derive(Clone, Debug)]
pub struct CertifiedComplex {
    pub re: CertifiedReal,
    pub im: CertifiedReal,
}

impl CertifiedComplex {
    pub fn new(re: CertifiedReal, im: CertifiedReal) -> Self {
        CertifiedComplex { re, im }
    }

    pub fn from_real(re: CertifiedReal) -> Self {
        let p = re.prec();
        CertifiedComplex { re, im: CertifiedReal::zero(p) }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Self::from_real(CertifiedReal::from_rational(q, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, o: &Self) -> Self {
        CertifiedComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CertifiedComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        CertifiedComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        CertifiedComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero_exact() && o.im.is_zero_exact() {
            return CertifiedComplex::from_real(self.re.mul(&o.re));
        }
        CertifiedComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_real(&self, r: &CertifiedReal) -> Self {
        CertifiedComplex { re: self.re.mul(r), im: self.im.mul(r) }
    }

    pub fn sqr(&self) -> Self {
        if self.im.is_zero_exact() {
            return CertifiedComplex::from_real(self.re.sqr());
        }
        let two = CertifiedReal::from_i64(2, self.prec());
        CertifiedComplex { re: self.re.sqr().sub(&self.im.sqr()), im: self.re.mul(&self.im).mul(&two) }
    }

    pub fn abs2(&self) -> CertifiedReal {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn abs(&self) -> CertifiedReal {
        if self.im.is_zero_exact() {
            return self.re.abs();
        }
        self.abs2().sqrt().expect("nonnegative")
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.abs2();
        if !n.is_positive() {
            return None;
        }
        let c = self.conj();
        Some(CertifiedComplex { re: c.re.div(&n)?, im: c.im.div(&n)? })
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    pub fn log_abs(&self) -> Option<CertifiedReal> {
        if self.im.is_zero_exact() {
            return self.re.abs().ln();
        }
        Some(self.abs2().ln()?.div_2exp(1))
    }

    pub fn arg(&self) -> Option<CertifiedReal> {
        self.im.atan2(&self.re)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Option<Self> {
        Some(CertifiedComplex { re: self.log_abs()?, im: self.arg()? })
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        if self.im.is_zero_exact() {
            return CertifiedComplex::from_real(m);
        }
        CertifiedComplex { re: m.mul(&self.im.cos()), im: m.mul(&self.im.sin()) }
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut acc = CertifiedComplex::from_rational(&Rational::from(1), self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn is_real_exact(&self) -> bool {
        self.im.is_zero_exact()
    }

    /// Upper bound on the distance between any two points of the box.
    pub fn diameter(&self) -> Float {
        
        Float::with_val(64, self.re.width() + self.im.width())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "re": self.re.to_json(), "im": self.im.to_json() })
    }
}

impl CertifiedReal {
    fn is_zero_exact(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl fmt::Display for CertifiedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

impl Ring for CertifiedComplex {
    fn zero_like(&self) -> Self {
        CertifiedComplex::from_rational(&Rational::new(), self.prec())
    }
    fn one_like(&self) -> Self {
        CertifiedComplex::from_rational(&Rational::from(1), self.prec())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero_exact() && self.im.is_zero_exact()
    }
    fn add(&self, o: &Self) -> Self {
        CertifiedComplex::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        CertifiedComplex::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        CertifiedComplex::mul(self, o)
    }
    fn neg(&self) -> Self {
        CertifiedComplex::neg(self)
    }
    fn scale(&self, q: &Rational) -> Self {
        let r = CertifiedReal::from_rational(q, self.prec());
        self.mul_real(&r)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_enclosure() {
        let l = CertifiedReal::from_i64(2, 128).ln().unwrap();
        assert!(l.contains_rational(&Rational::from((6931471805599453u64, 10_000_000_000_000_000u64)).clone()) || l.width() < 1e-30);
        assert!(l.width() < 1e-35);
        let approx = Rational::from_f64(std::f64::consts::LN_2).unwrap();
        assert!(l.widen(&Float::with_val(64, 1e-15)).contains_rational(&approx));
    }

    #[test]
    fn sin_and_cos_enclose_known_values() {
        let p = 128;
        let half_pi = CertifiedReal::pi(p).div_2exp(1);
        let s = half_pi.sin();
        assert!(s.contains_rational(&Rational::from(1)));
        let c = CertifiedReal::pi(p).cos();
        assert!(c.contains_rational(&Rational::from(-1)));
        let z = CertifiedReal::zero(p).sin();
        assert!(z.contains_zero() && z.width() < 1e-30);
    }

    #[test]
    fn complex_log_exp_round_trip() {
        let p = 128;
        let z = CertifiedComplex::new(CertifiedReal::from_i64(3, p), CertifiedReal::from_i64(-4, p));
        let w = z.ln().unwrap().exp();
        assert!(w.re.widen(&Float::with_val(64, 1e-30)).contains_rational(&Rational::from(3)));
        assert!(w.im.widen(&Float::with_val(64, 1e-30)).contains_rational(&Rational::from(-4)));
        let a = z.abs();
        assert!(a.contains_rational(&Rational::from(5)));
    }

    #[test]
    fn division_and_radius_are_conservative() {
        let p = 64;
        let one = CertifiedReal::from_i64(1, p);
        let three = CertifiedReal::from_i64(3, p);
        let t = one.div(&three).unwrap();
        assert!(t.contains_rational(&Rational::from((1, 3))));
        let m = t.mid();
        let r = t.rad();
        assert!(Float::with_val(p, &m - &r) <= *t.lo() && Float::with_val(p, &m + &r) >= *t.hi());
        assert!(one.div(&CertifiedReal::zero(p)).is_none());
    }
}
