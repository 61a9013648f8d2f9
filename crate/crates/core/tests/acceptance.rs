//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line; the
//! test fails if any criterion outside `KNOWN_FAILING` fails, or if a known
//! failure starts passing (so the list cannot go stale).

use arithdyn::algebra::mpoly::MPoly;
use arithdyn::algebra::places::Place;
use arithdyn::algebra::poly::Poly;
use arithdyn::algebra::roots::isolate_roots;
use arithdyn::algebra::{CertifiedComplex, FieldElement, FieldSpec, QPoly};
use arithdyn::bottcher::{classify_polynomial_type, compute_bottcher, BottcherCoeffs, MonomialForm, PolynomialSystem, PolynomialType};
use arithdyn::bottcher::series::functional_residual;
use arithdyn::heights::{canonical_height, green_arch, green_nonarch, GreenStatus};
use arithdyn::pairs::{equivalent, DynamicalPair, EquivOptions};
use arithdyn::plane::{
    fixed_point_count_diagnostic, germ_algebraicity_test, germ_at, homogeneity_detect, periodic_curve_census, Algebraicity,
    BoundaryMap, BoundaryPoint, Homogeneity, PlaneEndomorphism,
};
use arithdyn::transcendence::{bottcher_product_status, height_product_algebraic, is_root_of_unity, ProductStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};
use std::io::Write;
use std::time::Instant;

type Outcome = Result<(bool, String), String>;

/// Criterion 8 asserts NoCurveUpToDegree(2) for (x² − y² + 1, 2xy), but that map
/// preserves y = 0 (f(x, 0) = (x² + 1, 0)), so the germ is that line.
const KNOWN_FAILING: &[usize] = &[8];

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn q(s: &str) -> FieldElement {
    FieldElement::parse(s, FieldSpec::Rational).unwrap()
}

fn system(cs: &[&str]) -> PolynomialSystem {
    PolynomialSystem::parse(cs, FieldSpec::Rational).unwrap()
}

fn pair(cs: &[&str], a: &str) -> DynamicalPair {
    DynamicalPair::new(system(cs), q(a), 128, 64).unwrap()
}

fn ints(xs: &[i64]) -> Vec<Integer> {
    xs.iter().map(|&x| Integer::from(x)).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f = system(&["0", "1/2", "1"]);
    let g = system(&["0", "3/8", "1"]);
    let a = q("1/16");
    let hf = canonical_height(&f, &a, 128, 64).map_err(err)?;
    let hg = canonical_height(&g, &a, 128, 64).map_err(err)?;
    let expected: std::collections::BTreeMap<Integer, Rational> = [(Integer::from(2), Rational::from(4))].into();
    let ln16 = arithdyn::algebra::CertifiedReal::ln_integer(&Integer::from(2), 128).mul_rational(&Rational::from(4));
    let value = hf.value(128);
    let elapsed = start.elapsed().as_secs_f64();
    let ok = hf.finite == expected
        && hg.finite == hf.finite
        && hf.arch_is_zero()
        && hg.arch_is_zero()
        && value.intersects(&ln16)
        && (value.to_f64() - 2.772589).abs() < 1e-6
        && elapsed < 1.0;
    Ok((ok, format!("finite {:?}, h = {:.6}, {elapsed:.3}s", hf.finite, value.to_f64())))
}

fn random_rational(rng: &mut ChaCha8Rng, h: i64) -> Rational {
    Rational::from((rng.gen_range(-h..=h), rng.gen_range(1..=h)))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..50 {
        let d = rng.gen_range(2..=4);
        let mut cs: Vec<Rational> = (0..d).map(|_| random_rational(&mut rng, 10)).collect();
        cs.push(Rational::from(1));
        let f = PolynomialSystem::from_rationals(&cs).map_err(err)?;
        let s = compute_bottcher(&f, 20, 0).map_err(err)?;
        let BottcherCoeffs::Field(phi) = &s.coeffs else {
            return Ok((false, format!("sample {k}: monic map gave an adjoined leading root")));
        };
        if phi.valid_order() < 20 || !functional_residual(phi, f.poly()).map_err(err)?.all_zero() {
            return Ok((false, format!("sample {k}: residual nonzero for {f}")));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    Ok((elapsed < 30.0, format!("50 maps, residuals exactly zero, {elapsed:.2}s")))
}

fn criterion_3() -> Outcome {
    let f = system(&["1", "0", "1"]);
    let pi = f.clone();
    // g∘π = π∘f with g = f
    if f.compose(&pi).map_err(err)? != pi.compose(&f).map_err(err)? {
        return Ok((false, "π does not semiconjugate".into()));
    }
    let s = compute_bottcher(&f, 24, 0).map_err(err)?;
    let phi = s.field_series().ok_or("expected field coefficients")?;
    let lhs = phi.compose_poly(pi.poly()).map_err(err)?;
    let rhs = phi.pow(2);
    let top = lhs.top();
    if rhs.top() != top {
        return Ok((false, "leading exponents differ".into()));
    }
    let zeta = &lhs.coeff(top).unwrap() / &rhs.coeff(top).unwrap();
    let order = is_root_of_unity(&zeta);
    for e in (top - 15..=top).rev() {
        let (l, r) = match (lhs.coeff(e), rhs.coeff(e)) {
            (Some(l), Some(r)) => (l, r),
            _ => return Ok((false, format!("coefficient z^{e} outside the valid window"))),
        };
        if l != &zeta * &r {
            return Ok((false, format!("mismatch at z^{e}")));
        }
    }
    Ok((order.is_some(), format!("φ∘π = ζ·φ² on 16 coefficients with ζ = {zeta}")))
}

fn criterion_4() -> Outcome {
    let (p1, p2) = (pair(&["1", "0", "1"], "1"), pair(&["1", "0", "1"], "2"));
    let r = equivalent(&p1, &p2, &EquivOptions::default()).map_err(err)?;
    let cert = r.certificate().ok_or("pairs not certified equivalent")?;
    let expected: MPoly<FieldElement> = MPoly::from_terms([((0, 1), q("1")), ((2, 0), q("-1")), ((0, 0), q("-1"))]);
    let curve_ok = cert.curve == expected || cert.curve == expected.neg();
    let ratio_ok = cert.ratio() == (1, 2);
    let v = Place::infinity();
    let g1 = green_arch(&p1.f, &p1.a, &v, 128, 64).map_err(err)?.value(128).ok_or("green(1) undecided")?;
    let g2 = green_arch(&p2.f, &p2.a, &v, 128, 64).map_err(err)?.value(128).ok_or("green(2) undecided")?;
    let ratio = g1.div(&g2).ok_or("green(2) not separated from 0")?;
    let width = ratio.width().to_f64();
    let ok = curve_ok && ratio_ok && ratio.contains_rational(&Rational::from((1, 2))) && width < 1e-8;
    Ok((ok, format!("P = {}, ratio {}, height ratio {} (width {width:.2e})", cert.curve, cert.ratio(), ratio)))
}

fn criterion_5() -> Outcome {
    let opts = EquivOptions::default();
    let fam = [pair(&["1", "0", "1"], "1"), pair(&["1", "0", "1"], "2")];
    let v = Place::infinity();
    let unity = bottcher_product_status(&fam, &ints(&[2, -1]), &v, &opts).map_err(err)?;
    let one = CertifiedComplex::from_rational(&Rational::from(1), 128);
    let dist = unity.numeric.sub(&one).abs().to_f64();
    let trans = bottcher_product_status(&fam, &ints(&[1, 1]), &v, &opts).map_err(err)?;
    let sums: Vec<String> = trans.blocks.iter().map(|b| b.sum.to_string()).collect();
    let single = height_product_algebraic(&fam[..1], &ints(&[1]), &opts).map_err(err)?;
    let ex = [pair(&["0", "1/2", "1"], "1/16"), pair(&["0", "3/8", "1"], "1/16")];
    let alg = height_product_algebraic(&ex, &ints(&[1, -1]), &opts).map_err(err)?;
    let ok = unity.status_name() == "RootOfUnity"
        && dist < 1e-10
        && trans.status_name() == "TranscendentalCertified"
        && sums == ["3"]
        && single.status_name() == "NotAlgebraic"
        && alg.status == ProductStatus::Degenerate
        && alg.status_name() == "Algebraic";
    Ok((
        ok,
        format!(
            "(2,-1): {} |P-1| = {dist:.1e}; (1,1): {} sums {sums:?}; single: {}; example pair: {}",
            unity.status_name(),
            trans.status_name(),
            single.status_name(),
            alg.status_name()
        ),
    ))
}

/// p-adic number p^v·u with u a unit known modulo p^rel, or O(p^v) when rel = 0.
/// The exact zero is represented by `None`.
#[derive(Clone, Debug)]
struct Padic {
    v: Integer,
    u: Integer,
    rel: u32,
}

struct Qp {
    p: Integer,
    rel: u32,
}

impl Qp {
    fn pk(&self, k: u32) -> Integer {
        Integer::from(Integer::u_pow_u(self.p.to_u32().unwrap(), k))
    }

    fn from_rational(&self, x: &Rational) -> Option<Padic> {
        if *x == 0 {
            return None;
        }
        let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
        let mut v = Integer::new();
        while n.is_divisible(&self.p) {
            n /= &self.p;
            v += 1;
        }
        while d.is_divisible(&self.p) {
            d /= &self.p;
            v -= 1;
        }
        let m = self.pk(self.rel);
        let u = (n * d.invert(&m).unwrap()) % &m;
        Some(Padic { v, u: (u + &m) % m, rel: self.rel })
    }

    fn mul(&self, a: &Option<Padic>, b: &Option<Padic>) -> Option<Padic> {
        let (a, b) = (a.as_ref()?, b.as_ref()?);
        let rel = a.rel.min(b.rel);
        Some(Padic { v: Integer::from(&a.v + &b.v), u: Integer::from(&a.u * &b.u) % self.pk(rel), rel })
    }

    fn add(&self, a: &Option<Padic>, b: &Option<Padic>) -> Option<Padic> {
        let (a, b) = match (a, b) {
            (None, x) | (x, None) => return x.clone(),
            (Some(a), Some(b)) if a.v <= b.v => (a, b),
            (Some(a), Some(b)) => (b, a),
        };
        // absolute precision relative to p^{a.v}
        let shift = Integer::from(&b.v - &a.v);
        let span = match shift.to_u32() {
            Some(s) if s < a.rel => a.rel.min(s + b.rel),
            _ => return Some(a.clone()),
        };
        let s = shift.to_u32().unwrap();
        let m = self.pk(span);
        let mut sum = (&a.u + (&b.u * self.pk(s))) % &m;
        if sum == 0 {
            return Some(Padic { v: Integer::from(&a.v + span), u: Integer::new(), rel: 0 });
        }
        let mut k = 0;
        while sum.is_divisible(&self.p) {
            sum /= &self.p;
            k += 1;
        }
        Some(Padic { v: Integer::from(&a.v + k), u: sum, rel: span - k })
    }

    fn eval(&self, cs: &[Option<Padic>], z: &Option<Padic>) -> Option<Padic> {
        let mut acc: Option<Padic> = None;
        for c in cs.iter().rev() {
            acc = self.add(&self.mul(&acc, z), c);
        }
        acc
    }
}

fn val(x: &Rational, p: u64) -> i64 {
    arithdyn::algebra::rational::val_rat(x, &Integer::from(p))
}

/// (w_N − w*)/d^N with w = −v(f^N(a)), once the recurrence w ↦ d·w − v(c_d) has held
/// for the last 10 steps; `Ok(None)` when the orbit never left the escape threshold.
fn valuation_oracle(cs: &[Rational], a: &Rational, p: u64, steps: usize) -> Result<Option<Rational>, ()> {
    let qp = Qp { p: Integer::from(p), rel: 1500 };
    let d = cs.len() - 1;
    let pcs: Vec<Option<Padic>> = cs.iter().map(|c| qp.from_rational(c)).collect();
    let vd = val(&cs[d], p);
    let w_star = Rational::from((vd, d as i64 - 1));
    let mut thresh = w_star.clone();
    for (i, c) in cs.iter().enumerate().take(d) {
        if *c != 0 {
            let t = Rational::from((vd - val(c, p), (d - i) as i64));
            if t > thresh {
                thresh = t;
            }
        }
    }
    let mut z = qp.from_rational(a);
    // w_n = −v(f^n(a)) when known exactly; for O(p^V) only w_n ≤ −V is known
    let mut ws: Vec<Option<Integer>> = Vec::new();
    let mut bounded_by = Vec::new();
    for _ in 0..=steps {
        match &z {
            Some(x) if x.rel > 0 => ws.push(Some(Integer::from(-&x.v))),
            Some(x) => {
                ws.push(None);
                bounded_by.push(Integer::from(-&x.v));
            }
            None => ws.push(None),
        }
        z = qp.eval(&pcs, &z);
    }
    let escaped = ws.iter().any(|w| w.as_ref().is_some_and(|w| w.clone() > thresh));
    if !escaped {
        if bounded_by.iter().any(|m| m.clone() > thresh) {
            return Err(());
        }
        return Ok(None);
    }
    let tail = &ws[steps - 10..];
    for pair in tail.windows(2) {
        let (Some(a), Some(b)) = (&pair[0], &pair[1]) else { return Err(()) };
        if *b != Integer::from(a * d as u32) - vd {
            return Err(());
        }
    }
    let wn = Rational::from(ws[steps].clone().unwrap());
    Ok(Some((wn - w_star) / Rational::from(Integer::from(Integer::u_pow_u(d as u32, steps as u32)))))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut escaped, mut bounded, mut undecided, mut skipped) = (0, 0, 0, 0);
    for k in 0..100 {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let d = rng.gen_range(2..=3);
        let mut cs: Vec<Rational> = (0..d).map(|_| random_rational(&mut rng, 8)).collect();
        let mut lead = random_rational(&mut rng, 8);
        while lead == 0 {
            lead = random_rational(&mut rng, 8);
        }
        cs.push(lead);
        let a = random_rational(&mut rng, 8);
        let f = PolynomialSystem::from_rationals(&cs).map_err(err)?;
        let g = green_nonarch(&f, &FieldElement::rational(a.clone()), &Place::rational_prime(p), 64).map_err(err)?;
        match g.status {
            GreenStatus::EscapedExact { c, .. } => match valuation_oracle(&cs, &a, p, 30) {
                Ok(Some(o)) if o == c => escaped += 1,
                Ok(o) => return Ok((false, format!("sample {k}: library {c}, oracle {o:?} for {f} at {a}, p = {p}"))),
                Err(()) => skipped += 1,
            },
            GreenStatus::BoundedCertified => match valuation_oracle(&cs, &a, p, 200) {
                Ok(None) => bounded += 1,
                Ok(Some(o)) => return Ok((false, format!("sample {k}: library bounded, oracle escaped with {o}"))),
                Err(()) => skipped += 1,
            },
            // points of a Cantor-like filled Julia set need not admit a finite certificate
            GreenStatus::UndecidedWithinBudget => undecided += 1,
            other => return Ok((false, format!("sample {k}: unexpected {other:?} for {f} at {a}, p = {p}"))),
        }
    }
    Ok((skipped == 0, format!("{escaped} escaped exact, {bounded} bounded re-verified, {undecided} undecided, {skipped} lost precision")))
}

/// Fixed points of R^n for R = num/den by composing the rational function directly.
fn brute_force_fix_count(num: &QPoly, den: &QPoly, n: usize) -> usize {
    let d = num.degree().unwrap().max(den.degree().unwrap());
    let (mut nn, mut dn) = (num.clone(), den.clone());
    for _ in 1..n {
        // homogeneous substitution t ↦ nn/dn, cleared by dn^d
        let sub = |p: &QPoly| {
            let mut acc = Poly::zero();
            for (i, c) in p.coeffs().iter().enumerate() {
                acc = acc.add(&nn.pow(i as u32).mul(&dn.pow((d - i) as u32)).scale(c));
            }
            acc
        };
        let (a, b) = (sub(num), sub(den));
        nn = a;
        dn = b;
    }
    let eq = nn.sub(&Poly::x(&Rational::new()).mul(&dn));
    let g = eq.gcd(&eq.derivative());
    let sqf = eq.divrem(&g).unwrap().0;
    let finite = isolate_roots(&sqf, 128).unwrap().len();
    // ∞ is fixed by R^n iff deg nn > deg dn
    finite + usize::from(nn.degree() > dn.degree())
}

fn criterion_7() -> Outcome {
    let f = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1)], &[(1, 1, 2)]).map_err(err)?;
    let centre_ok = match homogeneity_detect(&f).map_err(err)? {
        Homogeneity::Homogeneous { o, .. } => o == (q("0"), q("0")),
        Homogeneity::NotHomogeneous => false,
    };
    let census = periodic_curve_census(&f, 2, 2, 12, false, 128).map_err(err)?;
    let y: MPoly<FieldElement> = MPoly::y(&q("0"));
    let line_ok = census.curves.iter().any(|c| c.curve == y && f.pullback(&y).div_exact(&y).is_some());
    let fbar = BoundaryMap::new(&f).map_err(err)?;
    let rows: Vec<(usize, usize)> = fixed_point_count_diagnostic(&fbar, 2).iter().map(|r| (r.n, r.count)).collect();
    let num: QPoly = Poly::new(vec![Rational::new(), Rational::from(2)]);
    let den: QPoly = Poly::new(vec![Rational::from(1), Rational::new(), Rational::from(-1)]);
    let brute: Vec<(usize, usize)> = (1..=2).map(|n| (n, brute_force_fix_count(&num, &den, n))).collect();
    let ok = centre_ok && line_ok && rows == vec![(1, 3), (2, 5)] && rows == brute;
    Ok((ok, format!("centre (0,0): {centre_ok}, census lines {:?}, counts {rows:?}, brute force {brute:?}",
        census.curves.iter().map(|c| c.curve.to_string()).collect::<Vec<_>>())))
}

fn criterion_8() -> Outcome {
    let pert = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1), (0, 0, 1)], &[(1, 1, 2)]).map_err(err)?;
    let base = PlaneEndomorphism::from_ints(&[(2, 0, 1), (0, 2, -1)], &[(1, 1, 2)]).map_err(err)?;
    let o = BoundaryPoint::Finite(q("0"));
    let gp = germ_at(&pert, &o, 1, 10).map_err(err)?;
    let gb = germ_at(&base, &o, 1, 10).map_err(err)?;
    let residue_zero = gp.residual().map_err(err)?.iter().all(|c| c.is_zero()) && gp.multiplier == q("2");
    let rp = germ_algebraicity_test(&gp, 2, 10, false).map_err(err)?;
    let rb = germ_algebraicity_test(&gb, 2, 10, false).map_err(err)?;
    let y: MPoly<FieldElement> = MPoly::y(&q("0"));
    let base_ok = matches!(&rb, Algebraicity::Curve { curve, .. } if *curve == y);
    let pert_ok = matches!(rp, Algebraicity::NoCurveUpToDegree { e_max: 2, .. });
    let found = match &rp {
        Algebraicity::Curve { curve, .. } => format!("Curve({curve})"),
        Algebraicity::NoCurveUpToDegree { .. } => "NoCurveUpToDegree(2)".into(),
    };
    Ok((residue_zero && base_ok && pert_ok, format!("residue zero: {residue_zero}; perturbed map gives {found}; unperturbed Curve(y): {base_ok}")))
}

fn criterion_9() -> Outcome {
    let cube = classify_polynomial_type(&system(&["0", "0", "0", "1"])).map_err(err)?;
    let cheb = classify_polynomial_type(&system(&["-2", "0", "1"])).map_err(err)?;
    let generic = classify_polynomial_type(&system(&["1", "0", "1"])).map_err(err)?;
    // f(z + 1/z) = z² + 1/z², cleared by z²: (z² + 1)² − 2z² = z⁴ + 1
    let qi = |xs: &[i64]| -> QPoly { Poly::new(xs.iter().map(|&x| Rational::from(x)).collect()) };
    let pi_num = qi(&[1, 0, 1]);
    let lhs = pi_num.pow(2).sub(&qi(&[0, 0, 2]));
    let semiconj = lhs == qi(&[1, 0, 0, 0, 1]);
    let ok = cube.is_monomial_type()
        && matches!(cube, PolynomialType::MonomialType { form: MonomialForm::Power, .. })
        && matches!(cheb, PolynomialType::MonomialType { form: MonomialForm::Chebyshev { .. }, .. })
        && semiconj
        && generic == PolynomialType::Nonexceptional;
    Ok((ok, format!("z³: {cube:?}; z²−2: {cheb:?} (π = z + 1/z verified: {semiconj}); z²+1: {generic:?}")))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(usize, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (id, run) in criteria {
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let known = KNOWN_FAILING.contains(&id);
        let note = if known && !pass { " (known failure)" } else { "" };
        // written past the test harness's capture so the summary shows in plain `cargo test`
        let line = format!("criterion {id}: {}{note}: {detail}\n", if pass { "PASS" } else { "FAIL" });
        std::io::stdout().lock().write_all(line.as_bytes()).expect("stdout");
        if pass == known {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
