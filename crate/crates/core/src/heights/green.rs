//! Local Green functions g_{f,v}(a) = lim d^{−n} log max(1, |f^n(a)|_v).
//!
//! In the escape region |f(z)|_v relates to |z|_v by an exact formula at finite
//! places, so g_v(z) = log|z|_v + log|a_d|_v/(d−1) there and g_v(f^m(a)) = d^m g_v(a).

use crate::algebra::places::Place;
use crate::algebra::rational::bit_size;
use crate::algebra::roots::roots_in_field;
use crate::algebra::{CertifiedComplex, CertifiedReal, FieldElement, Poly, Ring};
use crate::bottcher::escape::{finite_log_radius, telescope, ArchData};
use crate::bottcher::PolynomialSystem;
use crate::error::{Error, Result};
use rug::{Integer, Rational};
use std::collections::HashSet;

/// Exact iteration stops once an iterate needs more bits than this.
pub(crate) const EXACT_BIT_CAP: u64 = 1 << 18;

#[derive(Clone, Debug)]
pub enum GreenStatus {
    /// g = c · log p.
    EscapedExact { p: Integer, c: Rational },
    EscapedCertified(CertifiedReal),
    BoundedCertified,
    UndecidedWithinBudget,
}

#[derive(Clone, Debug)]
pub struct GreenValue {
    pub place: Place,
    pub status: GreenStatus,
    /// First iterate index inside the escape region, when it escaped.
    pub escape_index: Option<usize>,
    /// How boundedness was certified, when it was.
    pub certificate: Option<String>,
}

impl GreenValue {
    fn new(place: &Place, status: GreenStatus) -> Self {
        GreenValue { place: place.clone(), status, escape_index: None, certificate: None }
    }

    pub fn is_decided(&self) -> bool {
        !matches!(self.status, GreenStatus::UndecidedWithinBudget)
    }

    pub fn escaped(&self) -> bool {
        matches!(self.status, GreenStatus::EscapedExact { .. } | GreenStatus::EscapedCertified(_))
    }

    /// The value as an enclosure; `None` when undecided.
    pub fn value(&self, prec: u32) -> Option<CertifiedReal> {
        match &self.status {
            GreenStatus::EscapedExact { p, c } => Some(CertifiedReal::ln_integer(p, prec).mul_rational(c)),
            GreenStatus::EscapedCertified(r) => Some(r.clone()),
            GreenStatus::BoundedCertified => Some(CertifiedReal::zero(prec)),
            GreenStatus::UndecidedWithinBudget => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut o = match &self.status {
            GreenStatus::EscapedExact { p, c } => serde_json::json!({
                "status": "EscapedExact", "p": p.to_string(), "c": c.to_string(),
            }),
            GreenStatus::EscapedCertified(r) => serde_json::json!({
                "status": "EscapedCertified", "value": r.to_json(),
            }),
            GreenStatus::BoundedCertified => serde_json::json!({ "status": "BoundedCertified" }),
            GreenStatus::UndecidedWithinBudget => serde_json::json!({ "status": "UndecidedWithinBudget" }),
        };
        o["place"] = self.place.name().into();
        if let Some(m) = self.escape_index {
            o["escape_index"] = m.into();
        }
        if let Some(c) = &self.certificate {
            o["certificate"] = c.clone().into();
        }
        o
    }
}

fn check_place(f: &PolynomialSystem, v: &Place) -> Result<()> {
    if v.field != f.field() {
        return Err(Error::Argument(format!("place {v} is over {}, system over {}", v.field, f.field())));
    }
    Ok(())
}

fn small(x: &FieldElement) -> bool {
    bit_size(x.a()) + bit_size(x.b()) <= EXACT_BIT_CAP
}

/// A closed disk {|z − c|_v ≤ p^ρ} with f(D) ⊆ D, where ρ is a log coefficient.
struct FiniteDisk {
    center: FieldElement,
    log_radius: Rational,
}

/// Largest invariant disk about c, if any: needs |f'(c)| ≤ 1 and
/// |f(c) − c| ≤ ρ with log ρ = min_{i≥2} −c(T_i)/(i−1), T_i the Taylor coefficients at c.
fn finite_invariant_disk(f: &PolynomialSystem, v: &Place, c: &FieldElement) -> Result<Option<FiniteDisk>> {
    let t = f.poly().shift(c);
    let zero = f.zero();
    let t1 = t.coeff_or_zero(1, &zero);
    if !t1.is_zero() && v.log_coefficient(&t1)? > 0 {
        return Ok(None);
    }
    let mut rho: Option<Rational> = None;
    for i in 2..=f.degree() {
        let ti = t.coeff_or_zero(i, &zero);
        if ti.is_zero() {
            continue;
        }
        let r = -v.log_coefficient(&ti)? / Rational::from(i as u64 - 1);
        rho = Some(match rho {
            Some(x) if x <= r => x,
            _ => r,
        });
    }
    let rho = rho.expect("a_d ≠ 0");
    let moved = &t.coeff_or_zero(0, &zero) - c;
    if !moved.is_zero() && v.log_coefficient(&moved)? > rho {
        return Ok(None);
    }
    Ok(Some(FiniteDisk { center: c.clone(), log_radius: rho }))
}

fn in_disk(v: &Place, disk: &FiniteDisk, x: &FieldElement) -> Result<bool> {
    let d = x - &disk.center;
    Ok(d.is_zero() || v.log_coefficient(&d)? <= disk.log_radius)
}

/// Critical points of f that lie in its field of definition.
pub(crate) fn field_critical_points(f: &PolynomialSystem) -> Vec<FieldElement> {
    let df = f.derivative();
    if df.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    roots_in_field(&df, f.field(), 128).unwrap_or_default()
}

pub fn green_nonarch(f: &PolynomialSystem, a: &FieldElement, v: &Place, budget: usize) -> Result<GreenValue> {
    check_place(f, v)?;
    let Some(p) = v.prime().cloned() else {
        return Err(Error::Argument(format!("{v} is not a finite place")));
    };
    let a = a.in_field(f.field())?;
    let d = f.degree() as u64;
    let log_b = finite_log_radius(f, v)?;
    let lead_c = v.log_coefficient(f.lead())? / Rational::from(d - 1);
    let mut disks = Vec::new();
    let mut centers = vec![f.zero()];
    centers.extend(field_critical_points(f));
    for c in &centers {
        if let Some(disk) = finite_invariant_disk(f, v, c)? {
            disks.push(disk);
        }
    }
    let mut seen = HashSet::new();
    let mut u = a.clone();
    for m in 0..=budget {
        if !u.is_zero() {
            let c = v.log_coefficient(&u)?;
            if c > log_b {
                let g = (c + &lead_c) / Rational::from(Integer::from(Integer::u_pow_u(d as u32, m as u32)));
                let mut out = GreenValue::new(v, GreenStatus::EscapedExact { p, c: g });
                out.escape_index = Some(m);
                return Ok(out);
            }
        }
        if !seen.insert(u.clone()) {
            let mut out = GreenValue::new(v, GreenStatus::BoundedCertified);
            out.certificate = Some(format!("exact orbit repetition at step {m}"));
            return Ok(out);
        }
        for disk in &disks {
            if in_disk(v, disk, &u)? {
                let mut out = GreenValue::new(v, GreenStatus::BoundedCertified);
                out.certificate = Some(format!(
                    "invariant disk |z - ({})| <= {}^({}) contains f^{m}(a)",
                    disk.center, p, disk.log_radius
                ));
                return Ok(out);
            }
        }
        // a disk centred on the iterate itself
        if let Some(disk) = finite_invariant_disk(f, v, &u)? {
            let mut out = GreenValue::new(v, GreenStatus::BoundedCertified);
            out.certificate = Some(format!("invariant disk of log radius {} about f^{m}(a)", disk.log_radius));
            return Ok(out);
        }
        if m == budget {
            break;
        }
        u = f.eval(&u);
        if !small(&u) {
            break;
        }
    }
    Ok(GreenValue::new(v, GreenStatus::UndecidedWithinBudget))
}

/// Numerical orbit u_0..u_n at an archimedean place, exact while iterates stay small.
pub(crate) fn arch_orbit(
    f: &PolynomialSystem,
    a: &FieldElement,
    v: &Place,
    data: &ArchData,
    n: usize,
) -> Result<(Vec<CertifiedComplex>, Option<(usize, usize)>)> {
    let mut out = Vec::with_capacity(n + 1);
    let mut exact = Some(a.clone());
    let mut seen: Vec<FieldElement> = Vec::new();
    let mut repeat = None;
    let mut z = v.embed(a, data.prec)?;
    for k in 0..=n {
        if let Some(x) = &exact {
            if repeat.is_none() {
                if let Some(j) = seen.iter().position(|y| y == x) {
                    repeat = Some((j, k - j));
                }
                seen.push(x.clone());
            }
            z = v.embed(x, data.prec)?;
        }
        out.push(z.clone());
        if k == n {
            break;
        }
        exact = exact.and_then(|x| {
            let y = f.eval(&x);
            small(&y).then_some(y)
        });
        if exact.is_none() {
            z = data.eval(&z);
        }
    }
    Ok((out, repeat))
}

/// Trapping disk D(c, ρ) for g = f^q: |g(c) − c| + Σ_{i≥1} |T_i(c)| ρ^i ≤ ρ.
fn is_trapping(taylor: &Poly<CertifiedComplex>, c: &CertifiedComplex, rho: &CertifiedReal) -> bool {
    let zero = c.zero_like();
    let mut total = taylor.coeff_or_zero(0, &zero).sub(c).abs();
    let mut r = rho.clone();
    for i in 1..taylor.coeffs().len() {
        total = total.add(&taylor.coeffs()[i].abs().mul(&r));
        r = r.mul(rho);
    }
    total.certainly_le(rho)
}

fn rational_point(z: &CertifiedComplex, prec: u32) -> CertifiedComplex {
    CertifiedComplex::new(
        CertifiedReal::from_rational(&z.re.mid_rational(), prec),
        CertifiedReal::from_rational(&z.im.mid_rational(), prec),
    )
}

/// Searches for a disk mapped into itself by some f^q (q ≤ 4) that contains an orbit point.
fn arch_trapping(
    f: &PolynomialSystem,
    v: &Place,
    orbit: &[CertifiedComplex],
    prec: u32,
) -> Result<Option<String>> {
    let mut iterates = Vec::new();
    let mut g = f.clone();
    for q in 1..=4usize {
        if q > 1 {
            g = f.compose(&g)?;
        }
        if g.degree() > 64 {
            break;
        }
        let emb: Vec<CertifiedComplex> = g.coeffs().iter().map(|c| v.embed(c, prec)).collect::<Result<_>>()?;
        iterates.push((q, Poly::new(emb)));
    }
    let mut centers: Vec<(String, CertifiedComplex)> = vec![("0".into(), CertifiedComplex::from_rational(&Rational::new(), prec))];
    for c in field_critical_points(f) {
        centers.push((format!("critical point {c}"), v.embed(&c, prec)?));
    }
    let checkpoints: Vec<usize> = (0..orbit.len()).filter(|k| k.is_power_of_two() || *k == 0 || *k + 1 == orbit.len()).collect();
    for &k in &checkpoints {
        if orbit[k].diameter() > 1e-6 {
            continue;
        }
        centers.push((format!("f^{k}(a)"), rational_point(&orbit[k], prec)));
        if k + 1 < orbit.len() {
            let mid = orbit[k].add(&orbit[k + 1]);
            let mid = CertifiedComplex::new(mid.re.div_2exp(1), mid.im.div_2exp(1));
            centers.push((format!("midpoint of f^{k}(a), f^{}(a)", k + 1), rational_point(&mid, prec)));
        }
    }
    for (name, c) in &centers {
        for (q, g) in &iterates {
            let t = g.shift(c);
            for e in -6i32..=40 {
                let rho = CertifiedReal::from_rational(&pow2q(-e), prec);
                if !is_trapping(&t, c, &rho) {
                    continue;
                }
                if let Some(k) = orbit.iter().position(|u| u.sub(c).abs().certainly_le(&rho)) {
                    return Ok(Some(format!("f^{q} maps |z - c| <= 2^({}) into itself, c = {name}, containing f^{k}(a)", -e)));
                }
            }
        }
    }
    Ok(None)
}

fn pow2q(e: i32) -> Rational {
    if e >= 0 {
        Rational::from(Integer::from(1) << e as u32)
    } else {
        Rational::from((Integer::from(1), Integer::from(1) << (-e) as u32))
    }
}

pub fn green_arch(f: &PolynomialSystem, a: &FieldElement, v: &Place, prec: u32, budget: usize) -> Result<GreenValue> {
    check_place(f, v)?;
    if !v.is_archimedean() {
        return Err(Error::Argument(format!("{v} is not an archimedean place")));
    }
    let a = a.in_field(f.field())?;
    let d = f.degree() as u64;
    if let Some(t) = telescope(f, &a, v, prec, budget)? {
        let wp = t.u_start.prec();
        let lead = v.embed(f.lead(), wp)?.log_abs().ok_or_else(|| Error::Precision("leading coefficient".into()))?;
        let lu = t.u_start.log_abs().ok_or_else(|| Error::Precision("escaped iterate".into()))?;
        let g = lu.add(&lead.div_u64(d - 1)).add(&t.log_sum.re);
        let scale = Rational::from((Integer::from(1), Integer::from(Integer::u_pow_u(d as u32, t.start as u32))));
        let mut out = GreenValue::new(v, GreenStatus::EscapedCertified(g.mul_rational(&scale).with_prec(prec)));
        out.escape_index = Some(t.start);
        return Ok(out);
    }
    let wp = prec + 64;
    let data = ArchData::new(f, v, wp)?;
    let (orbit, repeat) = arch_orbit(f, &a, v, &data, budget)?;
    if let Some((tail, period)) = repeat {
        let mut out = GreenValue::new(v, GreenStatus::BoundedCertified);
        out.certificate = Some(format!("exact orbit repetition: tail {tail}, period {period}"));
        return Ok(out);
    }
    if let Some(cert) = arch_trapping(f, v, &orbit, wp)? {
        let mut out = GreenValue::new(v, GreenStatus::BoundedCertified);
        out.certificate = Some(cert);
        return Ok(out);
    }
    Ok(GreenValue::new(v, GreenStatus::UndecidedWithinBudget))
}

/// Dispatches on the kind of place.
pub fn green(f: &PolynomialSystem, a: &FieldElement, v: &Place, prec: u32, budget: usize) -> Result<GreenValue> {
    if v.is_archimedean() {
        green_arch(f, a, v, prec, budget)
    } else {
        green_nonarch(f, a, v, budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;
    use proptest::prelude::*;

    fn sys(cs: &[&str]) -> PolynomialSystem {
        PolynomialSystem::parse(cs, FieldSpec::Rational).unwrap()
    }

    #[test]
    fn nonarch_examples() {
        let f = sys(&["0", "1/2", "1"]);
        let g = green_nonarch(&f, &FieldElement::frac(1, 16), &Place::rational_prime(2), 64).unwrap();
        assert!(matches!(g.status, GreenStatus::EscapedExact { ref c, .. } if *c == 4));
        let sq = sys(&["0", "0", "1"]);
        let g = green_nonarch(&sq, &FieldElement::frac(1, 5), &Place::rational_prime(5), 64).unwrap();
        assert!(matches!(g.status, GreenStatus::EscapedExact { ref c, .. } if *c == 1));
        let f1 = sys(&["1", "0", "1"]);
        let g = green_nonarch(&f1, &FieldElement::from_i64(1), &Place::rational_prime(3), 64).unwrap();
        assert!(matches!(g.status, GreenStatus::BoundedCertified));
    }

    #[test]
    fn arch_examples() {
        let sq = sys(&["0", "0", "1"]);
        let g = green_arch(&sq, &FieldElement::from_i64(2), &Place::infinity(), 128, 64).unwrap();
        let GreenStatus::EscapedCertified(r) = &g.status else { panic!("{g:?}") };
        assert!(r.contains(&CertifiedReal::ln2(128)) || r.intersects(&CertifiedReal::ln2(128)));
        assert!(r.width() < 1e-30);

        let f = sys(&["0", "1/2", "1"]);
        let g = green_arch(&f, &FieldElement::frac(1, 16), &Place::infinity(), 128, 64).unwrap();
        assert!(matches!(g.status, GreenStatus::BoundedCertified), "{g:?}");

        // orbit 1, 2, 5, 26, 677, …: g(1) = lim 2^{-n} log f^n(1) ≈ 0.40735
        let f = sys(&["1", "0", "1"]);
        let g = green_arch(&f, &FieldElement::from_i64(1), &Place::infinity(), 128, 64).unwrap();
        let GreenStatus::EscapedCertified(r) = &g.status else { panic!("{g:?}") };
        let mut u = 1f64;
        let mut est = 0.0;
        for n in 1..=8 {
            u = u * u + 1.0;
            est = u.ln() / 2f64.powi(n);
        }
        assert!((r.to_f64() - est).abs() < 1e-9, "{} vs {est}", r.to_f64());
        assert!(r.width() < 1e-30);
    }

    #[test]
    fn zero_budget_is_undecided() {
        let f = sys(&["1", "0", "1"]);
        let g = green_arch(&f, &FieldElement::from_i64(1), &Place::infinity(), 128, 0).unwrap();
        assert!(matches!(g.status, GreenStatus::UndecidedWithinBudget));
    }

    #[test]
    fn preperiodic_orbits_are_bounded() {
        let f = sys(&["-1", "0", "1"]);
        let g = green_arch(&f, &FieldElement::from_i64(0), &Place::infinity(), 128, 64).unwrap();
        assert!(matches!(g.status, GreenStatus::BoundedCertified));
    }

    #[test]
    fn quadratic_field_places() {
        let k = FieldSpec::quadratic(2).unwrap();
        let f = PolynomialSystem::parse(&["0", "1/2", "1"], k).unwrap();
        let a = FieldElement::parse("3-2*sqrt(2)", k).unwrap();
        let vs = Place::archimedean(k);
        let g0 = green_arch(&f, &a, &vs[0], 128, 64).unwrap();
        let g1 = green_arch(&f, &a, &vs[1], 128, 64).unwrap();
        // 3 − 2√2 ≈ 0.17 is attracted to 0; its conjugate 3 + 2√2 escapes
        assert!(matches!(g0.status, GreenStatus::BoundedCertified), "{g0:?}");
        assert!(g1.escaped(), "{g1:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn finite_scaling(c0 in -8i64..=8, c1 in -8i64..=8, den in 1i64..=8, num in -20i64..=20, pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let f = PolynomialSystem::new(
                vec![FieldElement::frac(c0, den), FieldElement::frac(c1, 1), FieldElement::from_i64(1)],
                FieldSpec::Rational,
            ).unwrap();
            let a = FieldElement::frac(num, (p * p) as i64);
            let v = Place::rational_prime(p);
            let g = green_nonarch(&f, &a, &v, 64).unwrap();
            let gf = green_nonarch(&f, &f.eval(&a), &v, 64).unwrap();
            if let (GreenStatus::EscapedExact { c, .. }, GreenStatus::EscapedExact { c: cf, .. }) = (&g.status, &gf.status) {
                prop_assert_eq!(Rational::from(c * 2u32), cf.clone());
            }
        }
    }
}
