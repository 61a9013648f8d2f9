//! Equivalence certificates, height ratios and geometric data.

use arithdyn::algebra::{FieldElement, FieldSpec};
use arithdyn::bottcher::PolynomialSystem;
use arithdyn::heights::canonical_height;
use arithdyn::pairs::{equivalent, geometric_data, ratio, DynamicalPair, EquivOptions, Equivalence};
use proptest::prelude::*;
use rug::Rational;

fn opts() -> EquivOptions {
    EquivOptions { bidegree: 4, orbit_len: 40, ..EquivOptions::default() }
}

/// z² + c with a wandering rational start, or None when the point is preperiodic.
fn pair(c: (i64, i64), a: (i64, i64)) -> Option<DynamicalPair> {
    let f = PolynomialSystem::new(
        vec![FieldElement::frac(c.0, c.1), FieldElement::from_i64(0), FieldElement::from_i64(1)],
        FieldSpec::Rational,
    )
    .ok()?;
    DynamicalPair::new(f, FieldElement::frac(a.0, a.1), 128, 64).ok()
}

fn coeffs() -> impl Strategy<Value = (i64, i64)> {
    (prop_oneof![-5i64..=-1, 1i64..=5], 1i64..=3).prop_filter("avoid z² − 2", |&(n, d)| n != -2 * d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn certificate_is_sound(c in coeffs(), a in (-6i64..=6, 1i64..=4), k in 1usize..=2) {
        let Some(p) = pair(c, a) else { return Ok(()) };
        let q = p.advance(k);
        let e = equivalent(&p, &q, &opts()).unwrap();
        let cert = e.certificate().expect("(f, a) and (f, f^k(a)) lie on y = f^k(x)").clone();
        let like = p.f.zero();
        let lifted = cert.curve.compose_univariate(p.f.poly(), q.f.poly(), &like);
        prop_assert_eq!(lifted, cert.cofactor.mul(&cert.curve));
        let (mut x, mut y) = (p.advance(cert.start).a, q.advance(cert.start).a);
        for _ in 0..4 {
            prop_assert!(cert.curve.eval(&x, &y).is_zero());
            x = p.f.eval(&x);
            y = q.f.eval(&y);
        }
        prop_assert_eq!(cert.ratio(), Rational::from((1, 1u32 << k)));
    }

    #[test]
    fn ratios_compose_and_invert(c in coeffs(), a in (-6i64..=6, 1i64..=4)) {
        let Some(p) = pair(c, a) else { return Ok(()) };
        let (p1, p2) = (p.advance(1), p.advance(2));
        let r01 = ratio(&p, &p1, &opts()).unwrap().unwrap();
        let r12 = ratio(&p1, &p2, &opts()).unwrap().unwrap();
        let r02 = ratio(&p, &p2, &opts()).unwrap().unwrap();
        prop_assert_eq!(Rational::from(&r01 * &r12), r02);
        let r10 = ratio(&p1, &p, &opts()).unwrap().unwrap();
        prop_assert_eq!(Rational::from(&r01 * &r10), Rational::from(1));
        prop_assert_eq!(ratio(&p, &p, &opts()).unwrap(), Some(Rational::from(1)));
    }

    #[test]
    fn certified_ratio_lies_in_the_height_ratio(c in coeffs(), a in (-6i64..=6, 1i64..=4)) {
        let Some(p) = pair(c, a) else { return Ok(()) };
        let q = p.advance(1);
        let h1 = canonical_height(&p.f, &p.a, 128, 64).unwrap();
        let h2 = canonical_height(&q.f, &q.a, 128, 64).unwrap();
        prop_assume!(h1.is_complete() && h2.is_complete());
        let r = ratio(&p, &q, &opts()).unwrap().unwrap();
        if let Some(enclosure) = h1.value(128).div(&h2.value(128)) {
            prop_assert!(enclosure.contains_rational(&r));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn blocks_are_invariant_under_advance(c in coeffs(), a in (-6i64..=6, 1i64..=4), b in (-6i64..=6, 1i64..=4)) {
        let (Some(p), Some(r)) = (pair(c, a), pair(c, b)) else { return Ok(()) };
        let pairs = vec![p.clone(), p.advance(1), r.clone()];
        let moved = vec![p.advance(2), p.advance(1), r.advance(1)];
        let g = geometric_data(&pairs, &opts(), false).unwrap();
        let h = geometric_data(&moved, &opts(), false).unwrap();
        let members = |g: &arithdyn::pairs::GeometricData| g.blocks.iter().map(|b| b.members.clone()).collect::<Vec<_>>();
        prop_assert_eq!(members(&g), members(&h));
        prop_assert_eq!(g.block_of(0), g.block_of(1));
    }
}

#[test]
fn distinct_height_vectors_are_certified_inequivalent() {
    let p = pair((1, 4), (1, 3)).unwrap();
    let q = pair((1, 4), (1, 5)).unwrap();
    let e = equivalent(&p, &q, &opts()).unwrap();
    assert!(matches!(e, Equivalence::HeightRatioObstruction { .. }), "{}", e.name());
}
