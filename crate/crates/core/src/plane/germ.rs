//! Invariant formal curves at boundary periodic points and their algebraicity.
//!
//! Chart at a finite boundary point [1 : t₀ : 0]: u = y/x − t₀ along H_∞ and
//! w = 1/x, so {w = 0} = H_∞. With F_k(X, Y, W) = W^D f_k(X/W, Y/W) for g = f^n of
//! degree D, the germ of g at o is
//!
//!   A(u, w) = F_2(1, t₀ + u, w)/F_1(1, t₀ + u, w) − t₀,   B(u, w) = w^D/F_1(1, t₀ + u, w).
//!
//! At [0 : 1 : 0] the roles swap: u = x/y, w = 1/y, A = F_1/F_2 and B = w^D/F_2
//! evaluated at (u, 1, w). For g = (x² − y², 2xy) at t₀ = 0 this gives
//! A = 2u/(1 − u²) and B = w²/(1 − u²), whose invariant curve is u = 0.
//!
//! The invariant curve u = s(w) solves A(s(w), w) = s(B(s(w), w)); since B vanishes
//! to order D ≥ 2 in w, the coefficient of w^k reads λ·c_k = (terms in c_1 … c_{k−1}).

use super::boundary::{BoundaryMap, BoundaryPeriodicPoint, BoundaryPoint};
use super::endo::{total_degree, Form, PlaneEndomorphism};
use crate::algebra::linalg::nullspace;
use crate::algebra::mpoly::MPoly;
use crate::algebra::{FieldElement, Ring};
use crate::error::{Error, Result};

/// Truncated power series c_0 + c_1 w + … + c_N w^N.
type Series = Vec<FieldElement>;

fn s_zero(n: usize, like: &FieldElement) -> Series {
    vec![like.zero_like(); n + 1]
}

fn s_mul(a: &Series, b: &Series) -> Series {
    let n = a.len() - 1;
    let mut out = s_zero(n, &a[0]);
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().take(n + 1 - i).enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn s_inv(a: &Series) -> Result<Series> {
    let n = a.len() - 1;
    let inv0 = a[0].inv().ok_or_else(|| Error::Domain("series with zero constant term is not invertible".into()))?;
    let mut out = s_zero(n, &a[0]);
    out[0] = inv0.clone();
    for k in 1..=n {
        let mut acc = a[0].zero_like();
        for j in 1..=k {
            acc = &acc + &(&a[j] * &out[k - j]);
        }
        out[k] = -&(&acc * &inv0);
    }
    Ok(out)
}

/// Σ_k c_k b^k for b without constant term.
fn s_compose(c: &Series, b: &Series) -> Series {
    let n = b.len() - 1;
    let like = &b[0];
    let mut out = s_zero(n, like);
    let mut pw = s_zero(n, like);
    pw[0] = like.one_like();
    for ck in c {
        if !ck.is_zero() {
            for (o, p) in out.iter_mut().zip(&pw) {
                *o = &*o + &(ck * p);
            }
        }
        pw = s_mul(&pw, b);
    }
    out
}

fn keep_from(p: &Form, min_degree: u32) -> Form {
    MPoly::from_terms(p.terms().iter().filter(|((i, j), _)| i + j >= min_degree).map(|(k, c)| (*k, c.clone())))
}

/// Top `keep + 1` homogeneous layers of f(g_1, g_2), where g has formal degree dg
/// and only its top `keep + 1` layers are supplied.
fn top_compose(f: &Form, d: u32, g1: &Form, g2: &Form, dg: u32, keep: u32, like: &FieldElement) -> Form {
    let floor = (d * dg).saturating_sub(keep);
    let mut p1 = vec![MPoly::constant(like.one_like())];
    let mut p2 = vec![MPoly::constant(like.one_like())];
    for k in 1..=d {
        let m = (k * dg).saturating_sub(keep);
        p1.push(keep_from(&p1[k as usize - 1].mul(g1), m));
        p2.push(keep_from(&p2[k as usize - 1].mul(g2), m));
    }
    let mut out = MPoly::zero();
    for ((i, j), c) in f.terms() {
        if (d - i - j) * dg > keep {
            continue;
        }
        out = out.add(&keep_from(&p1[*i as usize].mul(&p2[*j as usize]), floor).scale(c));
    }
    out
}

/// Top `keep + 1` layers of the components of f^n.
pub(crate) fn iterate_top(f: &PlaneEndomorphism, n: usize, keep: u32) -> (Form, Form) {
    let d = f.degree();
    let like = f.zero();
    let floor = d.saturating_sub(keep);
    let (mut g1, mut g2) = (keep_from(f.f1(), floor), keep_from(f.f2(), floor));
    let mut dg = d;
    for _ in 1..n {
        let h1 = top_compose(f.f1(), d, &g1, &g2, dg, keep, &like);
        let h2 = top_compose(f.f2(), d, &g1, &g2, dg, keep, &like);
        g1 = h1;
        g2 = h2;
        dg *= d;
    }
    (g1, g2)
}

/// F(1, t₀ + s, w) (finite chart) or F(s, 1, w) (at ∞) for a form-family of formal degree dd.
fn chart_series(p: &Form, dd: u32, point: &BoundaryPoint, s: &Series) -> Series {
    let n = s.len() - 1;
    let like = &s[0];
    let base = match point {
        BoundaryPoint::Finite(t0) => {
            let mut b = s.clone();
            b[0] = &b[0] + t0;
            b
        }
        BoundaryPoint::Infinity => s.clone(),
    };
    let mut pows = vec![{
        let mut one = s_zero(n, like);
        one[0] = like.one_like();
        one
    }];
    let maxk = p.terms().keys().map(|(i, j)| if matches!(point, BoundaryPoint::Finite(_)) { *j } else { *i }).max().unwrap_or(0);
    for k in 1..=maxk as usize {
        pows.push(s_mul(&pows[k - 1], &base));
    }
    let mut out = s_zero(n, like);
    for ((i, j), c) in p.terms() {
        let wexp = (dd - i - j) as usize;
        if wexp > n {
            continue;
        }
        let k = if matches!(point, BoundaryPoint::Finite(_)) { *j } else { *i } as usize;
        for (m, v) in pows[k].iter().take(n + 1 - wexp).enumerate() {
            out[m + wexp] = &out[m + wexp] + &(c * v);
        }
    }
    out
}

/// The germ (A, B) of g at `point`, restricted to u = s(w).
fn germ_components(g: &(Form, Form), dd: u32, point: &BoundaryPoint, s: &Series) -> Result<(Series, Series)> {
    let n = s.len() - 1;
    let like = &s[0];
    let (num, den) = match point {
        BoundaryPoint::Finite(_) => (&g.1, &g.0),
        BoundaryPoint::Infinity => (&g.0, &g.1),
    };
    let den_s = chart_series(den, dd, point, s);
    let inv = s_inv(&den_s)?;
    let mut a = s_mul(&chart_series(num, dd, point, s), &inv);
    if let BoundaryPoint::Finite(t0) = point {
        a[0] = &a[0] - t0;
    }
    let mut wd = s_zero(n, like);
    if (dd as usize) <= n {
        wd[dd as usize] = like.one_like();
    }
    Ok((a, s_mul(&wd, &inv)))
}

fn residual(g: &(Form, Form), dd: u32, point: &BoundaryPoint, s: &Series) -> Result<Series> {
    let (a, b) = germ_components(g, dd, point, s)?;
    let sb = s_compose(s, &b);
    Ok(a.iter().zip(&sb).map(|(x, y)| x - y).collect())
}

#[derive(Clone, Debug)]
pub struct GermSeries {
    pub map: PlaneEndomorphism,
    pub point: BoundaryPoint,
    pub period: usize,
    pub multiplier: FieldElement,
    /// c_0 = 0, c_1, …, c_N.
    pub coeffs: Vec<FieldElement>,
}

impl GermSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// All c_k with k ≥ 2 vanish.
    pub fn is_linear(&self) -> bool {
        self.coeffs.iter().skip(2).all(|c| c.is_zero())
    }

    /// A(s, w) − s(B(s, w)) mod w^{N+1}, recomputed from scratch.
    pub fn residual(&self) -> Result<Vec<FieldElement>> {
        let dd = self.map.degree().pow(self.period as u32);
        let g = iterate_top(&self.map, self.period, self.order() as u32);
        residual(&g, dd, &self.point, &self.coeffs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "point": self.point.to_string(),
            "period": self.period,
            "multiplier": self.multiplier.to_string(),
            "order": self.order(),
            "coefficients": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "linear": self.is_linear(),
        })
    }
}

/// The unique g-invariant formal curve transverse to H_∞ at o, g = f^period, to order N.
pub fn invariant_germ(f: &PlaneEndomorphism, o: &BoundaryPeriodicPoint, order: usize) -> Result<GermSeries> {
    let point = o
        .exact_point()
        .ok_or_else(|| Error::Unsupported("germs need a boundary point over the base field".into()))?
        .clone();
    germ_at(f, &point, o.period, order)
}

/// As [`invariant_germ`] for an exact boundary point fixed by f̄^period.
pub fn germ_at(f: &PlaneEndomorphism, point: &BoundaryPoint, period: usize, order: usize) -> Result<GermSeries> {
    if order == 0 {
        return Err(Error::Argument("germ order must be positive".into()));
    }
    let fbar = BoundaryMap::new(f)?;
    let lambda = fbar.multiplier(period, point)?;
    if lambda.is_zero() {
        return Err(Error::Precondition(format!("{point} is superattracting for the boundary map (multiplier 0)")));
    }
    let dd = f.degree().pow(period as u32);
    let g = iterate_top(f, period, order as u32);
    let like = f.zero();
    let mut s = s_zero(order, &like);
    for k in 1..=order {
        let r = residual(&g, dd, point, &s)?;
        s[k] = -&(&r[k] / &lambda);
    }
    if residual(&g, dd, point, &s)?.iter().any(|c| !c.is_zero()) {
        return Err(Error::Internal("germ recursion left a nonzero residual".into()));
    }
    Ok(GermSeries { map: f.clone(), point: point.clone(), period, multiplier: lambda, coeffs: s })
}

#[derive(Clone, Debug)]
pub enum Algebraicity {
    /// An f-periodic curve P = 0 containing the germ; period is the least k with P | P∘f^k.
    Curve { curve: Form, degree: u32, period: usize },
    /// No curve of degree ≤ e_max contains the germ; `certified` when NS for all n was asserted.
    NoCurveUpToDegree { e_max: u32, certified: bool },
}

impl Algebraicity {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Algebraicity::Curve { curve, degree, period } => serde_json::json!({
                "result": "Curve",
                "curve": curve.to_string(),
                "terms": curve.to_json(),
                "degree": degree,
                "period": period,
            }),
            Algebraicity::NoCurveUpToDegree { e_max, certified } => {
                serde_json::json!({ "result": "NoCurveUpToDegree", "e_max": e_max, "certified": certified })
            }
        }
    }
}

/// Minimal jet order for the degree-e_max test.
pub fn required_jet(e_max: u32) -> usize {
    ((e_max + 1) * (e_max + 2) / 2 + 2) as usize
}

/// Least k ≤ limit with P | P∘f^k.
pub(crate) fn curve_period(f: &PlaneEndomorphism, p: &Form, limit: usize) -> Option<usize> {
    let mut h = p.clone();
    for k in 1..=limit {
        h = f.pullback(&h);
        if h.div_exact(p).is_some() {
            return Some(k);
        }
    }
    None
}

/// Searches for P of degree e ≤ e_max with P(germ) ≡ 0 to the jet order, then proves
/// periodicity by exact divisibility.
pub fn germ_algebraicity_test(germ: &GermSeries, e_max: u32, jet_order: usize, assume_ns: bool) -> Result<Algebraicity> {
    let need = required_jet(e_max);
    if jet_order < need || germ.order() < need {
        return Err(Error::Argument(format!(
            "degree {e_max} test needs a jet of order {need}; have order {} (requested {jet_order})",
            germ.order()
        )));
    }
    let jet = jet_order.min(germ.order());
    let s: Series = germ.coeffs[..=jet].to_vec();
    let like = germ.map.zero();
    for e in 1..=e_max {
        let monos: Vec<(u32, u32)> = (0..=e).flat_map(|i| (0..=e - i).map(move |j| (i, j))).collect();
        // column (i, j): x^i y^j · w^e as a series in w on the germ
        let cols: Vec<Series> = monos
            .iter()
            .map(|&(i, j)| {
                let mono: Form = MPoly::from_terms([((i, j), like.one_like())]);
                chart_series(&mono, e, &germ.point, &s)
            })
            .collect();
        let rows: Vec<Vec<FieldElement>> = (0..=jet).map(|k| cols.iter().map(|c| c[k].clone()).collect()).collect();
        for v in nullspace(&rows, monos.len(), &like) {
            let p: Form = MPoly::from_terms(monos.iter().zip(v).map(|(m, c)| (*m, c)));
            let p = p.monic().expect("nonzero kernel vector");
            if total_degree(&p) != Some(e) {
                continue;
            }
            if let Some(k) = curve_period(&germ.map, &p, germ.period) {
                if germ.period.is_multiple_of(k) {
                    return Ok(Algebraicity::Curve { curve: p, degree: e, period: k });
                }
            }
        }
    }
    Ok(Algebraicity::NoCurveUpToDegree { e_max, certified: assume_ns && e_max >= 2 })
}

/// The branch u = s(w) of P = 0 through o transverse to H_∞, to order N, when P is
/// smooth and transverse there.
pub fn curve_branch(p: &Form, point: &BoundaryPoint, order: usize) -> Result<Vec<FieldElement>> {
    let e = total_degree(p).ok_or_else(|| Error::Argument("zero curve".into()))?;
    let like = p.sample().expect("nonzero").zero_like();
    let mut s = s_zero(order, &like);
    if !chart_series(p, e, point, &s)[0].is_zero() {
        return Err(Error::Argument(format!("curve does not pass through {point}")));
    }
    // ∂P̃/∂u at the origin
    let du = match point {
        BoundaryPoint::Finite(_) => p.dy(),
        BoundaryPoint::Infinity => p.dx(),
    };
    let slope = chart_series(&du, e - 1, point, &s_zero(order, &like))[0].clone();
    if slope.is_zero() {
        return Err(Error::Precondition("curve is not transverse to H_∞ or singular at the point".into()));
    }
    for k in 1..=order {
        let r = chart_series(p, e, point, &s);
        s[k] = -&(&r[k] / &slope);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> FieldElement {
        FieldElement::from_i64(n)
    }

    fn hom() -> PlaneEndomorphism {
        PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1)], &[(1, 1, 2)]).unwrap()
    }

    #[test]
    fn series_oracles() {
        // 1/(1 − w) = Σ w^k
        let a = vec![q(1), q(-1), q(0), q(0)];
        assert_eq!(s_inv(&a).unwrap(), vec![q(1); 4]);
        // (w + w²) ∘ (2w) = 2w + 4w²
        let c = vec![q(0), q(1), q(1), q(0)];
        assert_eq!(s_compose(&c, &vec![q(0), q(2), q(0), q(0)]), vec![q(0), q(2), q(4), q(0)]);
    }

    #[test]
    fn truncated_iterates_match_full_ones() {
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1), (0, 0, 1), (0, 1, 3)], &[(1, 1, 2), (1, 0, -1)]).unwrap();
        let full = f.iterate(3);
        let (g1, _) = iterate_top(&f, 3, 3);
        assert_eq!(g1, keep_from(full.f1(), 5));
    }

    #[test]
    fn superattracting_point_is_rejected() {
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1)], &[(0, 2, 1), (1, 0, 1)]).unwrap();
        let e = germ_at(&f, &BoundaryPoint::Finite(q(0)), 1, 10).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
    }

    #[test]
    fn homogeneous_germ_is_the_axis() {
        let g = germ_at(&hom(), &BoundaryPoint::Finite(q(0)), 1, 10).unwrap();
        assert_eq!(g.multiplier, q(2));
        assert!(g.is_linear());
        assert!(g.residual().unwrap().iter().all(|c| c.is_zero()));
        match germ_algebraicity_test(&g, 2, 10, false).unwrap() {
            Algebraicity::Curve { curve, degree, period } => {
                assert_eq!(curve, MPoly::y(&q(0)));
                assert_eq!((degree, period), (1, 1));
            }
            other => panic!("expected y = 0, got {other:?}"),
        }
    }

    #[test]
    fn perturbation_keeps_the_axis_invariant() {
        // f(x, 0) = (x² + 1, 0): the germ at t = 0 is still u = 0
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1), (0, 0, 1)], &[(1, 1, 2)]).unwrap();
        let g = germ_at(&f, &BoundaryPoint::Finite(q(0)), 1, 10).unwrap();
        assert!(g.is_linear());
        assert!(matches!(germ_algebraicity_test(&g, 2, 10, false).unwrap(), Algebraicity::Curve { degree: 1, .. }));
    }

    #[test]
    fn generic_perturbation_has_a_nonlinear_germ() {
        // adding y to the second component destroys y = 0
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1), (0, 0, 1)], &[(1, 1, 2), (0, 0, 1)]).unwrap();
        let g = germ_at(&f, &BoundaryPoint::Finite(q(0)), 1, 12).unwrap();
        assert!(!g.is_linear());
        assert!(g.residual().unwrap().iter().all(|c| c.is_zero()));
        let r = germ_algebraicity_test(&g, 2, 12, true).unwrap();
        assert!(matches!(r, Algebraicity::NoCurveUpToDegree { e_max: 2, certified: true }), "{r:?}");
    }

    #[test]
    fn diagonal_of_the_square_map() {
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1)], &[(0, 2, 1)]).unwrap();
        let g = germ_at(&f, &BoundaryPoint::Finite(q(1)), 1, 10).unwrap();
        let Algebraicity::Curve { curve, .. } = germ_algebraicity_test(&g, 2, 10, false).unwrap() else { panic!() };
        assert_eq!(curve, MPoly::from_terms([((0, 1), q(1)), ((1, 0), q(-1))]));
    }

    #[test]
    fn germ_at_infinity_chart() {
        // ∞ ↦ 0 ↦ 0 under 2t/(1 − t²), so ∞ is not periodic
        assert!(germ_at(&hom(), &BoundaryPoint::Infinity, 2, 10).is_err());
        // (2xy, x² − y²): s = x/y ↦ 2s/(s² − 1) fixes s = 0 with multiplier −2, and x = 0 is invariant
        let f = PlaneEndomorphism::from_ints(&[(1, 1, 2)], &[(2, 0, 1), (0, 2, -1)]).unwrap();
        let g = germ_at(&f, &BoundaryPoint::Infinity, 1, 10).unwrap();
        assert_eq!(g.multiplier, q(-2));
        let Algebraicity::Curve { curve, .. } = germ_algebraicity_test(&g, 2, 10, false).unwrap() else { panic!() };
        assert_eq!(curve, MPoly::x(&q(0)));
        // (x² + y, y² + 1) has t ↦ t², superattracting at ∞
        let sq = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 1, 1)], &[(0, 2, 1), (0, 0, 1)]).unwrap();
        assert!(matches!(germ_at(&sq, &BoundaryPoint::Infinity, 1, 8).unwrap_err(), Error::Precondition(_)));
    }

    #[test]
    fn branch_of_a_found_curve_matches_the_germ() {
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1)], &[(0, 2, 1)]).unwrap();
        let g = germ_at(&f, &BoundaryPoint::Finite(q(1)), 1, 10).unwrap();
        let Algebraicity::Curve { curve, .. } = germ_algebraicity_test(&g, 2, 10, false).unwrap() else { panic!() };
        assert_eq!(curve_branch(&curve, &g.point, 10).unwrap(), g.coeffs);
    }

    #[test]
    fn short_jets_are_rejected() {
        let g = germ_at(&hom(), &BoundaryPoint::Finite(q(0)), 1, 5).unwrap();
        assert!(matches!(germ_algebraicity_test(&g, 2, 5, false).unwrap_err(), Error::Argument(_)));
    }
}
