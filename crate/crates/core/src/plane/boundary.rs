//! The induced map f̄ = [f̄_1 : f̄_2] on the line at infinity H_∞ ≅ P¹.
//!
//! Points are [x : y] with chart coordinate t = y/x; [0 : 1] is t = ∞. Binary
//! forms B of formal degree N are handled through B(1, t) together with the root
//! at ∞ of multiplicity N − deg B(1, t). Fixed points of f̄^n are the roots of
//! x·Q_n − y·P_n where (P_n, Q_n) are the iterated top forms.

use super::endo::{Form, PlaneEndomorphism};
use crate::algebra::mpoly::MPoly;
use crate::algebra::roots::{isolate_roots, roots_in_field};
use crate::algebra::{CertifiedComplex, FieldElement, FieldSpec, Poly, QPoly, Ring};
use crate::error::{Error, Result};
use rug::{Integer, Rational};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryPoint {
    Finite(FieldElement),
    Infinity,
}

impl BoundaryPoint {
    /// Homogeneous representative (1, t) or (0, 1).
    pub fn coords(&self, field: FieldSpec) -> (FieldElement, FieldElement) {
        let one = FieldElement::one().in_field(field).expect("Q embeds");
        match self {
            BoundaryPoint::Finite(t) => (one, t.in_field(field).expect("point in field")),
            BoundaryPoint::Infinity => (one.zero_like(), one),
        }
    }

    pub fn from_coords(x: &FieldElement, y: &FieldElement) -> Self {
        if x.is_zero() {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Finite(y / x)
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(t) => write!(f, "t={t}"),
            BoundaryPoint::Infinity => write!(f, "t=inf"),
        }
    }
}

/// [x : y] ↦ [P(x, y) : Q(x, y)] with P, Q binary forms of degree d.
#[derive(Clone, Debug)]
pub struct BoundaryMap {
    pub p: Form,
    pub q: Form,
    pub d: u32,
    pub field: FieldSpec,
}

/// The chart polynomial B(1, t) of a binary form of degree n.
pub fn chart_poly(b: &Form, n: u32, like: &FieldElement) -> Poly<FieldElement> {
    Poly::new(b.binary_form(n, like))
}

/// Multiplicity of the root t = ∞, i.e. n − deg B(1, t).
fn infinity_multiplicity(b: &Form, n: u32, like: &FieldElement) -> u32 {
    let c = chart_poly(b, n, like);
    match c.degree() {
        Some(k) => n - k as u32,
        None => n,
    }
}

fn det(mut m: Vec<Vec<FieldElement>>, like: &FieldElement) -> FieldElement {
    let n = m.len();
    let mut acc = like.one_like();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return like.zero_like();
        };
        if pr != col {
            m.swap(pr, col);
            acc = -&acc;
        }
        let piv = m[col][col].clone();
        acc = &acc * &piv;
        let inv = piv.inv().expect("nonzero pivot");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    acc
}

/// Sylvester resultant of two binary forms of formal degrees m and n.
pub fn binary_resultant(p: &Form, m: u32, q: &Form, n: u32, like: &FieldElement) -> FieldElement {
    // coefficients of t^k in B(1, t), highest first, padded to formal degree
    let pc: Vec<FieldElement> = p.binary_form(m, like).into_iter().rev().collect();
    let qc: Vec<FieldElement> = q.binary_form(n, like).into_iter().rev().collect();
    let size = (m + n) as usize;
    if size == 0 {
        return like.one_like();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n as usize {
        let mut r = vec![like.zero_like(); size];
        for (k, c) in pc.iter().enumerate() {
            r[i + k] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m as usize {
        let mut r = vec![like.zero_like(); size];
        for (k, c) in qc.iter().enumerate() {
            r[i + k] = c.clone();
        }
        rows.push(r);
    }
    det(rows, like)
}

/// Resultant of the top forms; nonzero exactly when f extends to an endomorphism of P².
pub fn top_resultant(f: &PlaneEndomorphism) -> FieldElement {
    let (p, q) = f.top_forms();
    binary_resultant(&p, f.degree(), &q, f.degree(), &f.zero())
}

pub fn extends_to_p2(f: &PlaneEndomorphism) -> bool {
    !top_resultant(f).is_zero()
}

/// Number of distinct roots over Q̄ of a binary form of degree n, ∞ included.
pub fn distinct_roots(b: &Form, n: u32, like: &FieldElement) -> usize {
    let c = chart_poly(b, n, like);
    let finite = c.squarefree_part().degree().unwrap_or(0);
    finite + usize::from(infinity_multiplicity(b, n, like) > 0)
}

impl BoundaryMap {
    pub fn new(f: &PlaneEndomorphism) -> Result<Self> {
        if !extends_to_p2(f) {
            return Err(Error::Precondition("top forms share a root: f does not extend to P²".into()));
        }
        let (p, q) = f.top_forms();
        Ok(BoundaryMap { p, q, d: f.degree(), field: f.field() })
    }

    /// t ↦ num(t)/den(t) with max(deg num, deg den) = d and no common factor.
    pub fn from_rational_function(num: &Poly<FieldElement>, den: &Poly<FieldElement>, field: FieldSpec) -> Result<Self> {
        let d = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0)) as u32;
        if d < 2 {
            return Err(Error::Argument("boundary map needs degree ≥ 2".into()));
        }
        // B(x, y) = x^d b(y/x)
        let hom = |b: &Poly<FieldElement>| -> Form {
            MPoly::from_terms(b.coeffs().iter().enumerate().map(|(j, c)| ((d - j as u32, j as u32), c.clone())))
        };
        let like = FieldElement::zero().in_field(field)?;
        let (p, q) = (hom(den), hom(num));
        if binary_resultant(&p, d, &q, d, &like).is_zero() {
            return Err(Error::Argument("numerator and denominator share a root".into()));
        }
        Ok(BoundaryMap { p, q, d, field })
    }

    fn like(&self) -> FieldElement {
        FieldElement::zero().in_field(self.field).expect("Q embeds")
    }

    pub fn apply(&self, pt: &BoundaryPoint) -> BoundaryPoint {
        let (x, y) = pt.coords(self.field);
        BoundaryPoint::from_coords(&self.p.eval(&x, &y), &self.q.eval(&x, &y))
    }

    /// (P_n, Q_n), binary forms of degree d^n.
    pub fn iterate_forms(&self, n: usize) -> (Form, Form) {
        let like = self.like();
        let (mut pn, mut qn) = (self.p.clone(), self.q.clone());
        for _ in 1..n {
            let p2 = self.p.compose(&pn, &qn, &like);
            let q2 = self.q.compose(&pn, &qn, &like);
            pn = p2;
            qn = q2;
        }
        (pn, qn)
    }

    pub fn iterate_degree(&self, n: usize) -> u32 {
        self.d.pow(n as u32)
    }

    /// x·Q_n − y·P_n, of degree d^n + 1.
    pub fn period_form(&self, n: usize) -> Form {
        let like = self.like();
        let (pn, qn) = self.iterate_forms(n);
        MPoly::x(&like).mul(&qn).sub(&MPoly::y(&like).mul(&pn))
    }

    /// Critical points are the roots of P_x Q_y − P_y Q_x (degree 2d − 2).
    pub fn wronskian(&self) -> Form {
        self.p.dx().mul(&self.q.dy()).sub(&self.p.dy().mul(&self.q.dx()))
    }

    /// Least k ≤ n_max with f̄^k(pt) = pt.
    pub fn exact_period(&self, pt: &BoundaryPoint, n_max: usize) -> Option<usize> {
        let mut z = pt.clone();
        for k in 1..=n_max {
            z = self.apply(&z);
            if z == *pt {
                return Some(k);
            }
        }
        None
    }

    /// Multiplier of f̄^n at a fixed point v: det J(v)/(D·c²) with F(v) = c·v, D = d^n.
    pub fn multiplier(&self, n: usize, pt: &BoundaryPoint) -> Result<FieldElement> {
        let (pn, qn) = self.iterate_forms(n);
        let (x, y) = pt.coords(self.field);
        let (px, qy) = (pn.eval(&x, &y), qn.eval(&x, &y));
        if BoundaryPoint::from_coords(&px, &qy) != *pt {
            return Err(Error::Argument(format!("{pt} is not fixed by the {n}-th iterate")));
        }
        let c = if x.is_zero() { qy } else { &px / &x };
        let jac = pn.dx().mul(&qn.dy()).sub(&pn.dy().mul(&qn.dx()));
        let dd = FieldElement::from_i64(self.iterate_degree(n) as i64);
        Ok(&jac.eval(&x, &y) / &(&dd * &(&c * &c)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "degree": self.d, "p": self.p.to_string(), "q": self.q.to_string() })
    }
}

#[derive(Clone, Debug)]
pub enum PointRepr {
    Exact(BoundaryPoint),
    /// Isolating enclosure for a root outside the base field.
    Numeric(CertifiedComplex),
}

#[derive(Clone, Debug)]
pub enum MultiplierRepr {
    Exact(FieldElement),
    Numeric(CertifiedComplex),
    Unknown,
}

#[derive(Clone, Debug)]
pub struct BoundaryPeriodicPoint {
    /// Exact (minimal) period.
    pub period: usize,
    pub point: PointRepr,
    pub multiplier: MultiplierRepr,
}

impl BoundaryPeriodicPoint {
    pub fn exact_point(&self) -> Option<&BoundaryPoint> {
        match &self.point {
            PointRepr::Exact(p) => Some(p),
            PointRepr::Numeric(_) => None,
        }
    }

    pub fn exact_multiplier(&self) -> Option<&FieldElement> {
        match &self.multiplier {
            MultiplierRepr::Exact(m) => Some(m),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let point = match &self.point {
            PointRepr::Exact(p) => serde_json::json!({ "exact": p.to_string() }),
            PointRepr::Numeric(z) => serde_json::json!({ "enclosure": z.to_json() }),
        };
        let multiplier = match &self.multiplier {
            MultiplierRepr::Exact(m) => serde_json::json!({ "exact": m.to_string() }),
            MultiplierRepr::Numeric(z) => serde_json::json!({ "enclosure": z.to_json() }),
            MultiplierRepr::Unknown => serde_json::Value::Null,
        };
        serde_json::json!({ "period": self.period, "point": point, "multiplier": multiplier })
    }
}

/// p / gcd(p, q) repeatedly, so no root of q remains.
fn strip(p: &Poly<FieldElement>, q: &Poly<FieldElement>) -> Poly<FieldElement> {
    let mut p = p.clone();
    loop {
        let g = p.gcd(q);
        if g.degree().unwrap_or(0) == 0 {
            return p;
        }
        p = p.divrem(&g).expect("field").0;
    }
}

fn eval_complex(b: &Form, z: &CertifiedComplex, prec: u32) -> CertifiedComplex {
    // B(1, z) for a form with rational coefficients
    let mut acc = CertifiedComplex::from_rational(&Rational::new(), prec);
    for ((_, j), c) in b.terms() {
        acc = acc.add(&CertifiedComplex::from_rational(c.a(), prec).mul(&z.powu(*j)));
    }
    acc
}

/// Boundary points of exact period n ≤ n_max. Roots outside the base field are
/// enclosed numerically when the map has rational coefficients.
pub fn periodic_points_at_infinity(fbar: &BoundaryMap, n_max: usize, prec: u32) -> Result<Vec<BoundaryPeriodicPoint>> {
    let like = fbar.like();
    let rational = fbar.p.terms().values().chain(fbar.q.terms().values()).all(|c| c.is_rational());
    let mut out = Vec::new();
    let mut lower: Vec<Poly<FieldElement>> = Vec::new();
    for n in 1..=n_max {
        let bn = fbar.period_form(n);
        let deg = fbar.iterate_degree(n) + 1;
        let mut prim = chart_poly(&bn, deg, &like).squarefree_part();
        for (k, lk) in lower.iter().enumerate() {
            if n % (k + 1) == 0 {
                prim = strip(&prim, lk);
            }
        }
        lower.push(chart_poly(&bn, deg, &like));
        if infinity_multiplicity(&bn, deg, &like) > 0 && fbar.exact_period(&BoundaryPoint::Infinity, n) == Some(n) {
            let m = fbar.multiplier(n, &BoundaryPoint::Infinity)?;
            out.push(BoundaryPeriodicPoint {
                period: n,
                point: PointRepr::Exact(BoundaryPoint::Infinity),
                multiplier: MultiplierRepr::Exact(m),
            });
        }
        let exact = roots_in_field(&prim, fbar.field, prec)?;
        let mut rest = prim.clone();
        for r in &exact {
            let pt = BoundaryPoint::Finite(r.clone());
            let m = fbar.multiplier(n, &pt)?;
            out.push(BoundaryPeriodicPoint { period: n, point: PointRepr::Exact(pt), multiplier: MultiplierRepr::Exact(m) });
            let lin = Poly::new(vec![-r, like.one_like()]);
            rest = rest.divrem(&lin).expect("field").0;
        }
        if rest.degree().unwrap_or(0) == 0 {
            continue;
        }
        if !rational {
            // roots in an unsupported extension: counted, not enclosed
            for _ in 0..rest.degree().unwrap_or(0) {
                out.push(BoundaryPeriodicPoint {
                    period: n,
                    point: PointRepr::Numeric(CertifiedComplex::from_rational(&Rational::new(), 2)),
                    multiplier: MultiplierRepr::Unknown,
                });
            }
            continue;
        }
        let q: QPoly = rest.map(|c| c.a().clone());
        let (pn, qn) = fbar.iterate_forms(n);
        let jac = pn.dx().mul(&qn.dy()).sub(&pn.dy().mul(&qn.dx()));
        let dd = Rational::from(Integer::from(fbar.iterate_degree(n)));
        for disk in isolate_roots(&q, prec)? {
            let z = disk.enclosure.clone();
            let c = eval_complex(&pn, &z, prec);
            let num = eval_complex(&jac, &z, prec);
            let den = c.mul(&c);
            let den = CertifiedComplex::new(den.re.mul_rational(&dd), den.im.mul_rational(&dd));
            let multiplier = match num.div(&den) {
                Some(m) => MultiplierRepr::Numeric(m),
                None => MultiplierRepr::Unknown,
            };
            out.push(BoundaryPeriodicPoint { period: n, point: PointRepr::Numeric(z), multiplier });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum NsResult {
    NSUpToBound { n_max: usize },
    /// A critical point of f̄ lies on a cycle of this period.
    NotNS { period: usize, factor: Poly<FieldElement>, at_infinity: bool, points: Vec<BoundaryPoint> },
}

impl NsResult {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            NsResult::NSUpToBound { n_max } => serde_json::json!({ "result": "NSUpToBound", "n_max": n_max }),
            NsResult::NotNS { period, factor, at_infinity, points } => serde_json::json!({
                "result": "NotNS",
                "period": period,
                "critical_factor": factor.to_string(),
                "at_infinity": at_infinity,
                "points": points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Common roots of two binary forms: the gcd of the charts and whether ∞ is shared.
fn common_roots(a: &Form, na: u32, b: &Form, nb: u32, like: &FieldElement) -> (Poly<FieldElement>, bool) {
    let g = chart_poly(a, na, like).gcd(&chart_poly(b, nb, like));
    let inf = infinity_multiplicity(a, na, like) > 0 && infinity_multiplicity(b, nb, like) > 0;
    (g, inf)
}

fn exact_points(g: &Poly<FieldElement>, inf: bool, field: FieldSpec) -> Result<Vec<BoundaryPoint>> {
    let mut pts: Vec<BoundaryPoint> = if g.degree().unwrap_or(0) > 0 {
        roots_in_field(g, field, 128)?.into_iter().map(BoundaryPoint::Finite).collect()
    } else {
        Vec::new()
    };
    if inf {
        pts.push(BoundaryPoint::Infinity);
    }
    Ok(pts)
}

/// Some d f̄^n vanishes on an n-cycle iff a critical point of f̄ is n-periodic.
pub fn ns_check(fbar: &BoundaryMap, n_max: usize) -> Result<NsResult> {
    let like = fbar.like();
    let w = fbar.wronskian();
    let nw = 2 * fbar.d - 2;
    for n in 1..=n_max {
        let bn = fbar.period_form(n);
        let (g, inf) = common_roots(&w, nw, &bn, fbar.iterate_degree(n) + 1, &like);
        if g.degree().unwrap_or(0) > 0 || inf {
            let points = exact_points(&g, inf, fbar.field)?;
            return Ok(NsResult::NotNS { period: n, factor: g.monic().unwrap_or(g), at_infinity: inf, points });
        }
    }
    Ok(NsResult::NSUpToBound { n_max })
}

#[derive(Clone, Debug)]
pub enum NpResult {
    NP,
    /// The exceptional set: roots of `factor`, plus ∞ when flagged.
    NotNP { factor: Poly<FieldElement>, at_infinity: bool, points: Vec<BoundaryPoint> },
}

impl NpResult {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            NpResult::NP => serde_json::json!({ "result": "NP" }),
            NpResult::NotNP { factor, at_infinity, points } => serde_json::json!({
                "result": "NotNP",
                "exceptional_factor": factor.to_string(),
                "at_infinity": at_infinity,
                "points": points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Exceptional points are the u with u and f̄(u) totally ramified and f̄²(u) = u.
pub fn np_check(fbar: &BoundaryMap) -> Result<NpResult> {
    let like = fbar.like();
    let d = fbar.d;
    let nw = 2 * d - 2;
    let w = fbar.wronskian();
    // totally ramified points: roots of W of multiplicity d − 1
    let dec = chart_poly(&w, nw, &like).squarefree_decomposition();
    let mut t_chart = Poly::constant(like.one_like());
    for (k, g) in dec.iter().enumerate() {
        if k + 1 >= (d - 1) as usize {
            t_chart = t_chart.mul(g);
        }
    }
    let t_inf = infinity_multiplicity(&w, nw, &like) >= d - 1;
    let nt = t_chart.degree().unwrap_or(0) as u32 + u32::from(t_inf);
    if nt == 0 {
        return Ok(NpResult::NP);
    }
    // T as a binary form of degree nt
    let t_form: Form = MPoly::from_terms(t_chart.coeffs().iter().enumerate().map(|(j, c)| ((nt - j as u32, j as u32), c.clone())));
    let t_pulled = t_form.compose(&fbar.p, &fbar.q, &like);
    let b2 = fbar.period_form(2);
    let (g1, inf1) = common_roots(&t_form, nt, &b2, fbar.iterate_degree(2) + 1, &like);
    let g = g1.gcd(&chart_poly(&t_pulled, nt * d, &like));
    let inf = inf1 && infinity_multiplicity(&t_pulled, nt * d, &like) > 0;
    if g.degree().unwrap_or(0) == 0 && !inf {
        return Ok(NpResult::NP);
    }
    let points = exact_points(&g, inf, fbar.field)?;
    Ok(NpResult::NotNP { factor: g.monic().unwrap_or(g), at_infinity: inf, points })
}

#[derive(Clone, Debug)]
pub struct FixedPointRow {
    pub n: usize,
    pub count: usize,
    pub d_pow: Integer,
    pub ratio: f64,
}

/// |Fix(f̄^n)| over Q̄ against d^n for n = 1..=n_max.
pub fn fixed_point_count_diagnostic(fbar: &BoundaryMap, n_max: usize) -> Vec<FixedPointRow> {
    let like = fbar.like();
    (1..=n_max)
        .map(|n| {
            let count = distinct_roots(&fbar.period_form(n), fbar.iterate_degree(n) + 1, &like);
            let d_pow = Integer::from(Integer::u_pow_u(fbar.d, n as u32));
            let ratio = count as f64 / d_pow.to_f64();
            FixedPointRow { n, count, d_pow, ratio }
        })
        .collect()
}
