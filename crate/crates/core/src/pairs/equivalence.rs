//! Equivalence of dynamical pairs: the orbit of (f × g) through (a, b) lies on a curve.
//!
//! A curve P(x, y) = 0 of bidegree at most (B, B) through the first N orbit points
//! is a kernel vector of the N × (B + 1)² evaluation matrix. Kernels are computed
//! modulo primes (see [`super::interp`]); a lifted candidate is accepted only when
//! P vanishes at the starting point and P(f(x), g(y)) = R·P exactly, which forces
//! vanishing along the whole orbit.
//!
//! Because ĥ_f(a)/ĥ_g(b) = deg_y P / deg_x P for such a curve, canonical heights
//! give a cheap obstruction that is tried first.

use super::interp::{modular_kernel, ModKernel, Reduction};
use super::pair::DynamicalPair;
use crate::algebra::modular::mulmod;
use crate::algebra::mpoly::MPoly;
use crate::algebra::{CertifiedReal, FieldElement, FieldSpec};
use crate::bottcher::PolynomialSystem;
use crate::error::{Error, Result};
use crate::heights::canonical_height;
use rug::Rational;

/// Largest orbit offset tried when early points lie off the curve.
const MAX_SHIFT: usize = 3;
const MAX_PRIMES: usize = 40;

#[derive(Clone, Debug)]
pub struct EquivOptions {
    pub bidegree: u32,
    pub orbit_len: usize,
    pub height_screen: bool,
    pub prec: u32,
    pub budget: usize,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions { bidegree: 6, orbit_len: 80, height_screen: true, prec: 128, budget: 64 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceCertificate {
    /// P(x, y) with x on the first orbit and y on the second.
    pub curve: MPoly<FieldElement>,
    /// R with P(f(x), g(y)) = R·P.
    pub cofactor: MPoly<FieldElement>,
    /// Orbit offset s: P(f^s(a), g^s(b)) = 0.
    pub start: usize,
    pub orbit_len: usize,
}

impl EquivalenceCertificate {
    pub fn deg_x(&self) -> u32 {
        self.curve.deg_x().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.curve.deg_y().unwrap_or(0)
    }

    /// ĥ_f(a)/ĥ_g(b).
    pub fn ratio(&self) -> Rational {
        Rational::from((self.deg_y(), self.deg_x()))
    }

    /// The certificate for the pairs in the opposite order.
    pub fn transposed(&self) -> EquivalenceCertificate {
        let swap = |p: &MPoly<FieldElement>| MPoly::from_terms(p.terms().iter().map(|((i, j), c)| ((*j, *i), c.clone())));
        EquivalenceCertificate {
            curve: swap(&self.curve),
            cofactor: swap(&self.cofactor),
            start: self.start,
            orbit_len: self.orbit_len,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "curve": self.curve.to_string(),
            "curve_terms": self.curve.to_json(),
            "cofactor_terms": self.cofactor.to_json(),
            "bidegree": [self.deg_x(), self.deg_y()],
            "start": self.start,
            "orbit_len": self.orbit_len,
            "ratio": self.ratio().to_string(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Obstruction {
    /// Enclosure of ĥ_f(a)/ĥ_g(b).
    pub ratio: CertifiedReal,
    /// The ratio itself when both heights are finite combinations of logarithms of primes.
    pub exact_ratio: Option<Rational>,
    /// The heights are not rationally related, so no curve of any bidegree exists.
    pub all_bidegrees: bool,
}

#[derive(Clone, Debug)]
pub enum Equivalence {
    Equivalent(EquivalenceCertificate),
    /// No curve of bidegree ≤ (bidegree, bidegree) through the first orbit_len points.
    NotEquivalentUpToBound { bidegree: u32, orbit_len: usize },
    /// The height ratio is not deg_y/deg_x for any admissible bidegree.
    HeightRatioObstruction { obstruction: Obstruction, bidegree: u32 },
}

impl Equivalence {
    pub fn certificate(&self) -> Option<&EquivalenceCertificate> {
        match self {
            Equivalence::Equivalent(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        self.certificate().is_some()
    }

    /// Inequivalence holds with no degree bound attached.
    pub fn certified_inequivalent(&self) -> bool {
        matches!(self, Equivalence::HeightRatioObstruction { obstruction, .. } if obstruction.all_bidegrees)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Equivalence::Equivalent(_) => "Equivalent",
            Equivalence::NotEquivalentUpToBound { .. } => "NotEquivalentUpToBound",
            Equivalence::HeightRatioObstruction { .. } => "HeightRatioObstruction",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Equivalence::Equivalent(c) => serde_json::json!({ "result": self.name(), "certificate": c.to_json() }),
            Equivalence::NotEquivalentUpToBound { bidegree, orbit_len } => serde_json::json!({
                "result": self.name(),
                "bidegree": [bidegree, bidegree],
                "orbit_len": orbit_len,
            }),
            Equivalence::HeightRatioObstruction { obstruction, bidegree } => serde_json::json!({
                "result": self.name(),
                "bidegree": [bidegree, bidegree],
                "height_ratio": obstruction.ratio.to_json(),
                "exact_ratio": obstruction.exact_ratio.as_ref().map(|q| q.to_string()),
                "all_bidegrees": obstruction.all_bidegrees,
            }),
        }
    }
}

fn reduce_poly(f: &PolynomialSystem, red: Reduction) -> Option<Vec<u64>> {
    f.coeffs().iter().map(|c| red.reduce(c)).collect()
}

/// f^n(a) mod p for n in [start, start + count).
fn orbit_mod(f: &PolynomialSystem, a: &FieldElement, red: Reduction, start: usize, count: usize) -> Option<Vec<u64>> {
    let cs = reduce_poly(f, red)?;
    let mut z = red.reduce(a)?;
    for _ in 0..start {
        z = red.eval(&cs, z);
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(z);
        z = red.eval(&cs, z);
    }
    Some(out)
}

fn powers(x: u64, n: u32, p: u64) -> Vec<u64> {
    let mut out = vec![1 % p];
    for k in 0..n as usize {
        out.push(mulmod(out[k], x, p));
    }
    out
}

/// Rows x^i y^j, column index i·(dy + 1) + j.
fn evaluation_rows(xs: &[u64], ys: &[u64], dx: u32, dy: u32, p: u64) -> Vec<Vec<u64>> {
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let px = powers(x, dx, p);
            let py = powers(y, dy, p);
            let mut row = Vec::with_capacity(((dx + 1) * (dy + 1)) as usize);
            for xi in &px {
                for yj in &py {
                    row.push(mulmod(*xi, *yj, p));
                }
            }
            row
        })
        .collect()
}

fn curve_from_vector(v: &[FieldElement], dy: u32) -> MPoly<FieldElement> {
    MPoly::from_terms(v.iter().enumerate().map(|(c, x)| (((c as u32) / (dy + 1), (c as u32) % (dy + 1)), x.clone())))
}

fn height_screen(p1: &DynamicalPair, p2: &DynamicalPair, opts: &EquivOptions) -> Result<Option<Obstruction>> {
    let h1 = canonical_height(&p1.f, &p1.a, opts.prec, opts.budget)?;
    let h2 = canonical_height(&p2.f, &p2.a, opts.prec, opts.budget)?;
    if !h1.is_complete() || !h2.is_complete() {
        return Ok(None);
    }
    let v1 = h1.value(opts.prec);
    let v2 = h2.value(opts.prec);
    let b = opts.bidegree as i64;
    if h1.arch_is_zero() && h2.arch_is_zero() {
        // log p are Q-linearly independent, so the ratio is rational iff the vectors are proportional
        let lambda = match (h1.finite.iter().next(), h2.finite.iter().next()) {
            (Some((p, c1)), Some(_)) => h2.finite.get(p).map(|c2| Rational::from(c1 / c2)),
            _ => None,
        };
        let proportional = lambda.as_ref().is_some_and(|l| {
            h1.finite.len() == h2.finite.len()
                && h1.finite.iter().all(|(p, c1)| h2.finite.get(p).is_some_and(|c2| Rational::from(c2 * l) == *c1))
        });
        let ratio = v1.div(&v2).unwrap_or_else(|| CertifiedReal::zero(opts.prec));
        if !proportional {
            return Ok(Some(Obstruction { ratio, exact_ratio: None, all_bidegrees: true }));
        }
        let l = lambda.expect("proportional");
        let fits = *l.numer() <= b && *l.denom() <= b;
        return Ok((!fits).then_some(Obstruction { ratio, exact_ratio: Some(l), all_bidegrees: false }));
    }
    let Some(ratio) = v1.div(&v2) else { return Ok(None) };
    let admissible = (1..=b).any(|p| (1..=b).any(|q| ratio.contains_rational(&Rational::from((p, q)))));
    Ok((!admissible).then_some(Obstruction { ratio, exact_ratio: None, all_bidegrees: false }))
}

/// Searches for a curve of bidegree ≤ (B, B) containing the orbit of (f × g) from (a, b).
pub fn equivalent(p1: &DynamicalPair, p2: &DynamicalPair, opts: &EquivOptions) -> Result<Equivalence> {
    if p1.degree() != p2.degree() {
        return Err(Error::Precondition(format!("degrees {} and {} differ", p1.degree(), p2.degree())));
    }
    let b = opts.bidegree;
    if b == 0 {
        return Err(Error::Argument("bidegree bound must be positive".into()));
    }
    let unknowns = ((b + 1) * (b + 1)) as usize;
    if opts.orbit_len < unknowns {
        return Err(Error::Argument(format!(
            "orbit_len {} is below the {unknowns} unknowns of bidegree ({b}, {b})",
            opts.orbit_len
        )));
    }
    let field = p1.f.field().join(p2.f.field())?;
    let a = p1.a.in_field(field)?;
    let bb = p2.a.in_field(field)?;
    if opts.height_screen {
        if let Some(obstruction) = height_screen(p1, p2, opts)? {
            return Ok(Equivalence::HeightRatioObstruction { obstruction, bidegree: b });
        }
    }
    let f = PolynomialSystem::new(p1.f.coeffs().to_vec(), field)?;
    let g = PolynomialSystem::new(p2.f.coeffs().to_vec(), field)?;
    let like = f.zero();
    let mut xs = a.clone();
    let mut ys = bb.clone();
    for s in 0..=MAX_SHIFT {
        for total in 2..=2 * b {
            for dx in 1..=b.min(total - 1) {
                let dy = total - dx;
                if dy == 0 || dy > b {
                    continue;
                }
                let ncols = ((dx + 1) * (dy + 1)) as usize;
                let build = |red: Reduction| {
                    let ox = orbit_mod(&f, &a, red, s, opts.orbit_len)?;
                    let oy = orbit_mod(&g, &bb, red, s, opts.orbit_len)?;
                    Some(evaluation_rows(&ox, &oy, dx, dy, red.p))
                };
                let ModKernel::Basis(basis) = modular_kernel(build, ncols, field, MAX_PRIMES)? else {
                    continue;
                };
                for v in basis {
                    let curve = curve_from_vector(&v, dy);
                    if let Some(cert) = verify(&curve, &f, &g, &xs, &ys, &like, s, opts.orbit_len)? {
                        return Ok(Equivalence::Equivalent(cert));
                    }
                }
            }
        }
        xs = f.eval(&xs);
        ys = g.eval(&ys);
    }
    Ok(Equivalence::NotEquivalentUpToBound { bidegree: b, orbit_len: opts.orbit_len })
}

#[allow(clippy::too_many_arguments)]
fn verify(
    curve: &MPoly<FieldElement>,
    f: &PolynomialSystem,
    g: &PolynomialSystem,
    x0: &FieldElement,
    y0: &FieldElement,
    like: &FieldElement,
    start: usize,
    orbit_len: usize,
) -> Result<Option<EquivalenceCertificate>> {
    if !curve.eval(x0, y0).is_zero() {
        return Ok(None);
    }
    let image = curve.compose_univariate(f.poly(), g.poly(), like);
    let Some(cofactor) = image.div_exact(curve) else { return Ok(None) };
    if curve.deg_x().unwrap_or(0) == 0 || curve.deg_y().unwrap_or(0) == 0 {
        return Err(Error::Precondition("an orbit coordinate is finite (preperiodic point)".into()));
    }
    Ok(Some(EquivalenceCertificate { curve: curve.clone(), cofactor, start, orbit_len }))
}

/// ĥ_f(a)/ĥ_g(b) read off an equivalence certificate.
pub fn ratio(p1: &DynamicalPair, p2: &DynamicalPair, opts: &EquivOptions) -> Result<Option<Rational>> {
    Ok(equivalent(p1, p2, opts)?.certificate().map(|c| c.ratio()))
}

#[derive(Clone, Debug)]
pub struct WeakEquivalence {
    pub result: Equivalence,
    /// The certificate relates p1 to the Galois conjugate of p2.
    pub conjugated: bool,
}

impl WeakEquivalence {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.result.to_json();
        v["conjugated"] = serde_json::Value::Bool(self.conjugated);
        v
    }
}

/// Equivalence of p1 with p2 or, over a quadratic field, with its conjugate.
pub fn weakly_equivalent(p1: &DynamicalPair, p2: &DynamicalPair, opts: &EquivOptions) -> Result<WeakEquivalence> {
    let direct = equivalent(p1, p2, opts)?;
    let quadratic = matches!(p1.f.field().join(p2.f.field())?, FieldSpec::Quadratic(_));
    if direct.is_equivalent() || !quadratic {
        return Ok(WeakEquivalence { result: direct, conjugated: false });
    }
    let conj = equivalent(p1, &p2.conjugate(), opts)?;
    if conj.is_equivalent() {
        return Ok(WeakEquivalence { result: conj, conjugated: true });
    }
    Ok(WeakEquivalence { result: direct, conjugated: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(cs: &[i64], a: i64) -> DynamicalPair {
        DynamicalPair::new(PolynomialSystem::from_ints(cs).unwrap(), FieldElement::from_i64(a), 128, 64).unwrap()
    }

    fn screen_off() -> EquivOptions {
        EquivOptions { height_screen: false, ..EquivOptions::default() }
    }

    #[test]
    fn graph_of_f_is_found() {
        let r = equivalent(&pair(&[1, 0, 1], 1), &pair(&[1, 0, 1], 2), &EquivOptions::default()).unwrap();
        let c = r.certificate().expect("equivalent");
        assert_eq!(c.ratio(), Rational::from((1, 2)));
        // y − x² − 1 up to scaling
        let want = crate::algebra::mpoly::qmpoly(&[(0, 1, 1), (2, 0, -1), (0, 0, -1)]).map(|q| FieldElement::rational(q.clone()));
        assert!(c.curve == want || c.curve == want.scale(&FieldElement::from_i64(-1)));
        assert_eq!(c.transposed().ratio(), 2);
    }

    #[test]
    fn diagonal_for_equal_pairs() {
        let r = equivalent(&pair(&[1, 0, 1], 1), &pair(&[1, 0, 1], 1), &EquivOptions::default()).unwrap();
        let c = r.certificate().expect("equivalent");
        assert_eq!((c.deg_x(), c.deg_y()), (1, 1));
        assert_eq!(c.ratio(), 1);
    }

    #[test]
    fn different_maps_up_to_bound() {
        let p1 = pair(&[1, 0, 1], 1);
        let p2 = pair(&[2, 0, 1], 1);
        let small = EquivOptions { bidegree: 4, orbit_len: 40, ..screen_off() };
        assert!(matches!(
            equivalent(&p1, &p2, &small).unwrap(),
            Equivalence::NotEquivalentUpToBound { bidegree: 4, .. }
        ));
        // the screen alone already rules out every bidegree ≤ 4
        let screened = EquivOptions { bidegree: 4, orbit_len: 40, ..EquivOptions::default() };
        assert!(matches!(equivalent(&p1, &p2, &screened).unwrap(), Equivalence::HeightRatioObstruction { .. }));
    }

    #[test]
    fn orbit_too_short_is_rejected() {
        let p = pair(&[1, 0, 1], 1);
        let e = equivalent(&p, &p, &EquivOptions { orbit_len: 10, ..EquivOptions::default() }).unwrap_err();
        assert!(matches!(e, Error::Argument(_)));
    }

    #[test]
    fn second_iterate_graph() {
        // f(f(0)) = 2, so y = f(f(x)) along the orbit
        let c = equivalent(&pair(&[1, 0, 1], 0), &pair(&[1, 0, 1], 2), &screen_off()).unwrap();
        assert_eq!(c.certificate().expect("equivalent").ratio(), Rational::from((1, 4)));
    }

    #[test]
    fn curve_through_an_off_diagonal_start() {
        // −1 and 1 share f(±1) = 2: the orbits agree from index 1, and x² = y² holds throughout
        let c = equivalent(&pair(&[1, 0, 1], -1), &pair(&[1, 0, 1], 1), &screen_off()).unwrap();
        let c = c.certificate().expect("equivalent");
        assert_eq!(c.ratio(), 1);
        assert!(c.deg_x() <= 2);
    }

    #[test]
    fn finite_heights_not_proportional() {
        // heights 4 log 2 and c log 2 + c' log 3
        let f = PolynomialSystem::parse(&["0", "1/2", "1"], FieldSpec::Rational).unwrap();
        let g = PolynomialSystem::parse(&["0", "1/3", "1"], FieldSpec::Rational).unwrap();
        let p1 = DynamicalPair::new(f, FieldElement::frac(1, 16), 128, 64).unwrap();
        let p2 = DynamicalPair::new(g, FieldElement::frac(1, 16), 128, 64).unwrap();
        let r = equivalent(&p1, &p2, &EquivOptions::default()).unwrap();
        assert!(r.certified_inequivalent(), "{}", r.to_json());
    }

    #[test]
    fn conjugate_pairs_are_weakly_equivalent() {
        let k = FieldSpec::quadratic(2).unwrap();
        let f = PolynomialSystem::parse(&["0", "1/2", "1"], k).unwrap();
        let a = FieldElement::parse("3-2*sqrt(2)", k).unwrap();
        let p1 = DynamicalPair::new(f.clone(), a.clone(), 128, 64).unwrap();
        let p2 = DynamicalPair::new(f, a.conj(), 128, 64).unwrap();
        let opts = EquivOptions { bidegree: 3, orbit_len: 20, ..EquivOptions::default() };
        assert!(!equivalent(&p1, &p2, &opts).unwrap().is_equivalent());
        let w = weakly_equivalent(&p1, &p2, &opts).unwrap();
        assert!(w.conjugated && w.result.is_equivalent());
    }
}
