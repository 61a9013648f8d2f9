//! Fixed inputs shared by the benchmarks.

use arithdyn::algebra::{FieldElement, FieldSpec};
use arithdyn::bottcher::PolynomialSystem;
use arithdyn::pairs::DynamicalPair;
use arithdyn::plane::PlaneEndomorphism;

pub fn system(cs: &[&str]) -> PolynomialSystem {
    PolynomialSystem::parse(cs, FieldSpec::Rational).expect("valid coefficients")
}

pub fn point(s: &str) -> FieldElement {
    FieldElement::parse(s, FieldSpec::Rational).expect("valid point")
}

/// (z² + 1, 1) and (z² + 1, 2), related by y = x² + 1.
pub fn related_pairs() -> (DynamicalPair, DynamicalPair) {
    let f = system(&["1", "0", "1"]);
    let p = DynamicalPair::new(f.clone(), point("1"), 128, 64).expect("wandering");
    let q = DynamicalPair::new(f, point("2"), 128, 64).expect("wandering");
    (p, q)
}

/// (x² − y², 2xy), homogeneous at the origin.
pub fn square_map() -> PlaneEndomorphism {
    PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1)], &[(1, 1, 2)]).expect("valid map")
}
