//! Periodic curves found through their branches at boundary periodic points.
//!
//! Only points with nonzero multiplier carry an invariant germ, so curves whose
//! branches at infinity all sit at superattracting boundary points are out of reach;
//! those points are listed so the gap is visible in every report.

use super::boundary::{ns_check, periodic_points_at_infinity, BoundaryMap, BoundaryPeriodicPoint, BoundaryPoint, NsResult};
use super::endo::{Form, PlaneEndomorphism};
use super::germ::{germ_algebraicity_test, invariant_germ, Algebraicity, GermSeries};
use crate::algebra::FieldElement;
use crate::error::Result;
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct FoundCurve {
    pub curve: Form,
    pub degree: u32,
    pub period: usize,
    /// Boundary points whose germ produced this curve.
    pub points: Vec<BoundaryPoint>,
}

#[derive(Clone, Debug)]
pub struct UnmatchedGerm {
    pub germ: GermSeries,
    /// Non-algebraic of degree ≤ 2 is a theorem when NS holds for all n.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct PeriodicCurveReport {
    pub curves: Vec<FoundCurve>,
    pub unmatched: Vec<UnmatchedGerm>,
    /// Exact boundary periodic points with multiplier 0.
    pub superattracting: Vec<(BoundaryPoint, usize)>,
    /// Boundary periodic points outside the base field.
    pub unsupported: Vec<BoundaryPeriodicPoint>,
    pub ns: NsResult,
    pub n_max: usize,
    pub e_max: u32,
    pub jet_order: usize,
}

impl PeriodicCurveReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "curves": self.curves.iter().map(|c| serde_json::json!({
                "curve": c.curve.to_string(),
                "terms": c.curve.to_json(),
                "degree": c.degree,
                "period": c.period,
                "points": c.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "verified": true,
            })).collect::<Vec<_>>(),
            "unmatched_germs": self.unmatched.iter().map(|u| serde_json::json!({
                "germ": u.germ.to_json(),
                "certified_non_algebraic": u.certified,
            })).collect::<Vec<_>>(),
            "superattracting_excluded": self.superattracting.iter()
                .map(|(p, n)| serde_json::json!({ "point": p.to_string(), "period": n }))
                .collect::<Vec<_>>(),
            "unsupported_points": self.unsupported.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "ns": self.ns.to_json(),
            "n_max": self.n_max,
            "e_max": self.e_max,
            "jet_order": self.jet_order,
            "limitation": "curves meeting H_inf only at superattracting boundary points are not searched",
        })
    }
}

/// `assume_ns` asserts NS for every n; it only upgrades verdicts when NS also holds up to n_max.
pub fn periodic_curve_census(
    f: &PlaneEndomorphism,
    n_max: usize,
    e_max: u32,
    jet_order: usize,
    assume_ns: bool,
    prec: u32,
) -> Result<PeriodicCurveReport> {
    let fbar = BoundaryMap::new(f)?;
    let ns = ns_check(&fbar, n_max)?;
    let ns_ok = assume_ns && matches!(ns, NsResult::NSUpToBound { .. });
    let points = periodic_points_at_infinity(&fbar, n_max, prec)?;
    let mut superattracting = Vec::new();
    let mut unsupported = Vec::new();
    let mut candidates = Vec::new();
    for p in points {
        match (p.exact_point(), p.exact_multiplier()) {
            (Some(pt), Some(m)) if m.is_zero() => superattracting.push((pt.clone(), p.period)),
            (Some(_), Some(_)) => candidates.push(p),
            _ => unsupported.push(p),
        }
    }
    let results: Vec<Result<(GermSeries, Algebraicity)>> = candidates
        .par_iter()
        .map(|p| {
            let g = invariant_germ(f, p, jet_order)?;
            let a = germ_algebraicity_test(&g, e_max, jet_order, ns_ok)?;
            Ok((g, a))
        })
        .collect();
    let mut curves: Vec<FoundCurve> = Vec::new();
    let mut unmatched = Vec::new();
    for r in results {
        let (germ, alg) = r?;
        match alg {
            Algebraicity::Curve { curve, degree, period } => match curves.iter_mut().find(|c| c.curve == curve) {
                Some(c) => c.points.push(germ.point.clone()),
                None => curves.push(FoundCurve { curve, degree, period, points: vec![germ.point.clone()] }),
            },
            Algebraicity::NoCurveUpToDegree { certified, .. } => unmatched.push(UnmatchedGerm { germ, certified }),
        }
    }
    Ok(PeriodicCurveReport { curves, unmatched, superattracting, unsupported, ns, n_max, e_max, jet_order })
}

/// Whether the curve is a line through o.
pub fn is_line_through(curve: &Form, o: &(FieldElement, FieldElement)) -> bool {
    curve.total_degree() == Some(1) && curve.eval(&o.0, &o.1).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mpoly::MPoly;
    use crate::algebra::FieldSpec;

    fn q(n: i64) -> FieldElement {
        FieldElement::from_i64(n)
    }

    #[test]
    fn homogeneous_quadratic() {
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1)], &[(1, 1, 2)]).unwrap();
        let r = periodic_curve_census(&f, 2, 2, 12, false, 128).unwrap();
        assert_eq!(r.curves.len(), 1);
        assert_eq!(r.curves[0].curve, MPoly::y(&q(0)));
        // ±i are fixed with multiplier 0 and the 2-cycle ±√3 is irrational over Q
        assert_eq!(r.unsupported.len(), 4);
        assert!(r.unmatched.is_empty());
    }

    #[test]
    fn quadratic_extension_finds_the_two_cycle_lines() {
        let k = FieldSpec::quadratic(3).unwrap();
        let f = PlaneEndomorphism::new(
            MPoly::from_terms([((2, 0), q(1)), ((0, 2), q(-1))]),
            MPoly::from_terms([((1, 1), q(2))]),
            k,
        )
        .unwrap();
        let r = periodic_curve_census(&f, 2, 2, 12, false, 128).unwrap();
        let o = (q(0).in_field(k).unwrap(), q(0).in_field(k).unwrap());
        assert_eq!(r.curves.len(), 3);
        assert!(r.curves.iter().all(|c| is_line_through(&c.curve, &o)));
        assert_eq!(r.curves.iter().filter(|c| c.period == 2).count(), 2);
    }

    #[test]
    fn square_map() {
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1)], &[(0, 2, 1)]).unwrap();
        let r = periodic_curve_census(&f, 3, 2, 12, false, 128).unwrap();
        assert_eq!(r.curves.len(), 1);
        assert_eq!(r.curves[0].curve, MPoly::from_terms([((0, 1), q(1)), ((1, 0), q(-1))]));
        let sup: Vec<_> = r.superattracting.iter().map(|(p, _)| p.clone()).collect();
        assert!(sup.contains(&BoundaryPoint::Finite(q(0))) && sup.contains(&BoundaryPoint::Infinity));
        assert!(!r.unsupported.is_empty());
    }

    #[test]
    fn generic_ns_map() {
        // boundary map t ↦ (t² + 3t)/(2t² + 5t + 7) fixes t = 0 with multiplier 3/7
        let f = PlaneEndomorphism::from_ints(
            &[(2, 0, 7), (1, 1, 5), (0, 2, 2), (1, 0, 1), (0, 0, 1)],
            &[(1, 1, 3), (0, 2, 1), (0, 1, -1), (0, 0, 2)],
        )
        .unwrap();
        let r = periodic_curve_census(&f, 2, 2, 12, true, 128).unwrap();
        assert!(matches!(r.ns, NsResult::NSUpToBound { .. }));
        assert!(r.curves.is_empty());
        assert!(!r.unmatched.is_empty());
        assert!(r.unmatched.iter().all(|u| u.certified));
    }
}
