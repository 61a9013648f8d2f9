//! f is homogeneous at o when f(o + v) − o has only degree-d terms in v.
//!
//! The degree-(d − 1) part of f(o + v) is f_{d−1}(v) + (o·∇) f_d(v), which is linear
//! in o, so o is found by a linear solve and then confirmed by exact translation.
//! When f extends to P² the solve has at most one solution: a direction killed by
//! both ∂_o f̄_1 and ∂_o f̄_2 makes both top forms powers of one linear form.

use super::endo::{Form, PlaneEndomorphism};
use crate::algebra::linalg::{nullspace, solve};
use crate::algebra::mpoly::MPoly;
use crate::algebra::{FieldElement, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Homogeneity {
    /// f(o + v) = o + (h_1(v), h_2(v)) with h_k homogeneous of degree d.
    Homogeneous { o: (FieldElement, FieldElement), forms: (Form, Form) },
    NotHomogeneous,
}

impl Homogeneity {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Homogeneity::Homogeneous { o, forms } => serde_json::json!({
                "result": "Homogeneous",
                "o": [o.0.to_string(), o.1.to_string()],
                "forms": [forms.0.to_string(), forms.1.to_string()],
            }),
            Homogeneity::NotHomogeneous => serde_json::json!({ "result": "NotHomogeneous" }),
        }
    }
}

/// f(o + v) − o as polynomials in v, when they are homogeneous of degree d.
fn translated_forms(f: &PlaneEndomorphism, a: &FieldElement, b: &FieldElement) -> Option<(Form, Form)> {
    let d = f.degree();
    let shift = |p: &Form, c: &FieldElement| p.translate(a, b).sub(&MPoly::constant(c.clone()));
    let (h1, h2) = (shift(f.f1(), a), shift(f.f2(), b));
    let homogeneous = |h: &Form| h.terms().keys().all(|(i, j)| i + j == d);
    (homogeneous(&h1) && homogeneous(&h2)).then_some((h1, h2))
}

pub fn homogeneity_detect(f: &PlaneEndomorphism) -> Result<Homogeneity> {
    let d = f.degree();
    let like = f.zero();
    let (mut rows, mut rhs) = (Vec::new(), Vec::new());
    for p in [f.f1(), f.f2()] {
        let top = p.homogeneous_part(d);
        let (px, py) = (top.dx(), top.dy());
        let low = p.homogeneous_part(d - 1);
        for i in 0..d {
            let j = d - 1 - i;
            let c = |q: &Form| q.coeff(i, j).cloned().unwrap_or_else(|| like.zero_like());
            rows.push(vec![c(&px), c(&py)]);
            rhs.push(-&c(&low));
        }
    }
    let Some(o) = solve(&rows, &rhs, 2, &like) else {
        return Ok(Homogeneity::NotHomogeneous);
    };
    if let Some(forms) = translated_forms(f, &o[0], &o[1]) {
        return Ok(Homogeneity::Homogeneous { o: (o[0].clone(), o[1].clone()), forms });
    }
    if nullspace(&rows, 2, &like).is_empty() {
        Ok(Homogeneity::NotHomogeneous)
    } else {
        Err(Error::Unsupported("top forms share a direction: the centre is not determined linearly".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> FieldElement {
        FieldElement::from_i64(n)
    }

    #[test]
    fn origin() {
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1)], &[(1, 1, 2)]).unwrap();
        let Homogeneity::Homogeneous { o, forms } = homogeneity_detect(&f).unwrap() else { panic!() };
        assert_eq!(o, (q(0), q(0)));
        assert_eq!(&forms.0, f.f1());
    }

    #[test]
    fn shifted_centre_round_trips() {
        let g = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1)], &[(1, 1, 2)]).unwrap();
        // f(p) = o + g(p − o) with o = (1, 2)
        let (a, b) = (q(1), q(2));
        let f1 = g.f1().translate(&-&a, &-&b).add(&MPoly::constant(a.clone()));
        let f2 = g.f2().translate(&-&a, &-&b).add(&MPoly::constant(b.clone()));
        let f = PlaneEndomorphism::new(f1, f2, g.field()).unwrap();
        let Homogeneity::Homogeneous { o, forms } = homogeneity_detect(&f).unwrap() else { panic!() };
        assert_eq!(o, (a.clone(), b.clone()));
        assert_eq!(f.apply(&a, &b), (a.clone(), b.clone()));
        let back1 = forms.0.translate(&-&a, &-&b).add(&MPoly::constant(a.clone()));
        assert_eq!(&back1, f.f1());
    }

    #[test]
    fn not_homogeneous() {
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 1, 1)], &[(0, 2, 1), (1, 0, 1)]).unwrap();
        assert!(matches!(homogeneity_detect(&f).unwrap(), Homogeneity::NotHomogeneous));
        // the linear solve passes (o = 0) but the constant term survives
        let f = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 0, 1)], &[(0, 2, 1)]).unwrap();
        assert!(matches!(homogeneity_detect(&f).unwrap(), Homogeneity::NotHomogeneous));
    }
}
