//! Root isolation for rational polynomials and exact extraction of small factors.
//!
//! Approximations come from Aberth iteration in MPFR; isolation is certified
//! with the inclusion disks D(z_i, n·|p(z_i) / (lc·Π_{j≠i}(z_i − z_j))|),
//! whose connected components contain as many roots as disks. Exact factors
//! are guessed by rounding lc·e_k(S) for root subsets S and confirmed by
//! exact division.

use super::field::{FieldElement, FieldSpec};
use super::poly::{Poly, QPoly};
use super::rational::{is_squarefree, prime_factors, val_int};
use super::real::{CertifiedComplex, CertifiedReal};
use crate::error::{Error, Result};
use rug::float::Round;
use rug::{Float, Integer, Rational};

#[derive(Clone, Debug)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn new(prec: u32, re: f64, im: f64) -> Self {
        Cx { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }
    fn prec(&self) -> u32 {
        self.re.prec()
    }
    fn add(&self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
    fn sub(&self, o: &Cx) -> Cx {
        let p = self.prec();
        Cx { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
    fn mul(&self, o: &Cx) -> Cx {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Cx { re, im }
    }
    fn abs2(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square()) + Float::with_val(p, self.im.clone().square())
    }
    fn div(&self, o: &Cx) -> Cx {
        let p = self.prec();
        let n = o.abs2();
        let re = (Float::with_val(p, &self.re * &o.re) + Float::with_val(p, &self.im * &o.im)) / &n;
        let im = (Float::with_val(p, &self.im * &o.re) - Float::with_val(p, &self.re * &o.im)) / &n;
        Cx { re, im }
    }
    fn abs(&self) -> Float {
        self.abs2().sqrt()
    }
}

fn eval_with_derivative(cs: &[Float], z: &Cx) -> (Cx, Cx) {
    let p = z.prec();
    let mut v = Cx::new(p, 0.0, 0.0);
    let mut dv = Cx::new(p, 0.0, 0.0);
    for c in cs.iter().rev() {
        dv = dv.mul(z).add(&v);
        v = v.mul(z);
        v.re += c;
    }
    (v, dv)
}

/// Approximate roots of a squarefree polynomial (Aberth–Ehrlich).
fn aberth(p: &QPoly, prec: u32) -> Vec<Cx> {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let cs: Vec<Float> = p.coeffs().iter().map(|c| Float::with_val(prec, c)).collect();
    let lead = cs[n].clone().abs();
    // Cauchy bound.
    let mut r = 0f64;
    for c in &cs[..n] {
        r = r.max(Float::with_val(64, c / &lead).abs().to_f64());
    }
    let radius = (1.0 + r).min(1e300);
    let mut zs: Vec<Cx> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            let rr = radius * (0.5 + 0.5 * ((k * 7 + 3) % 11) as f64 / 11.0);
            Cx::new(prec, rr * ang.cos(), rr * ang.sin())
        })
        .collect();
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8));
    for _ in 0..2000 {
        let mut done = true;
        for k in 0..n {
            let (v, dv) = eval_with_derivative(&cs, &zs[k]);
            if v.abs2().is_zero() {
                continue;
            }
            if dv.abs2().is_zero() {
                zs[k] = zs[k].add(&Cx::new(prec, 1e-9, 1e-9));
                done = false;
                continue;
            }
            let ratio = v.div(&dv);
            let mut s = Cx::new(prec, 0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let diff = zs[k].sub(&zs[j]);
                    if diff.abs2().is_zero() {
                        continue;
                    }
                    s = s.add(&Cx::new(prec, 1.0, 0.0).div(&diff));
                }
            }
            let denom = Cx::new(prec, 1.0, 0.0).sub(&ratio.mul(&s));
            let w = if denom.abs2().is_zero() { ratio } else { ratio.div(&denom) };
            let scale = Float::with_val(prec, zs[k].abs() + 1u32);
            if Float::with_val(prec, w.abs() / &scale) > tol {
                done = false;
            }
            zs[k] = zs[k].sub(&w);
        }
        if done {
            break;
        }
    }
    zs
}

/// A certified disk: the box `enclosure` contains exactly one root.
#[derive(Clone, Debug)]
pub struct RootDisk {
    pub enclosure: CertifiedComplex,
    pub center_re: Float,
    pub center_im: Float,
    pub radius: Float,
}

impl RootDisk {
    pub fn is_real_capable(&self) -> bool {
        self.enclosure.im.contains_zero()
    }
}

fn to_certified(c: &Cx, prec: u32) -> CertifiedComplex {
    CertifiedComplex::new(CertifiedReal::point(Float::with_val(prec, &c.re)), CertifiedReal::point(Float::with_val(prec, &c.im)))
}

/// Certified isolation of all complex roots of a squarefree rational polynomial.
pub fn isolate_roots(p: &QPoly, prec: u32) -> Result<Vec<RootDisk>> {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if p.gcd(&p.derivative()).degree() != Some(0) {
        return Err(Error::Argument("root isolation needs a squarefree polynomial".into()));
    }
    let mut work = prec.max(64);
    for _ in 0..6 {
        let zs = aberth(p, work);
        if let Some(disks) = certify(p, &zs, work) {
            return Ok(disks);
        }
        work *= 2;
    }
    Err(Error::Precision(format!("could not isolate the roots of a degree-{n} polynomial; raise --precision-bits")))
}

fn certify(p: &QPoly, zs: &[Cx], prec: u32) -> Option<Vec<RootDisk>> {
    let n = zs.len();
    let cp: Vec<CertifiedComplex> = p.coeffs().iter().map(|c| CertifiedComplex::from_rational(c, prec)).collect();
    let pc = Poly::new(cp);
    let lead = CertifiedComplex::from_rational(p.lead().unwrap(), prec);
    let centers: Vec<CertifiedComplex> = zs.iter().map(|z| to_certified(z, prec)).collect();
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let v = pc.eval(&centers[i]);
        let mut den = lead.clone();
        for j in 0..n {
            if j != i {
                den = den.mul(&centers[i].sub(&centers[j]));
            }
        }
        let q = v.div(&den)?;
        let r = q.abs().mul(&CertifiedReal::from_i64(n as i64, prec));
        radii.push(r.hi().clone());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = centers[i].sub(&centers[j]).abs();
            let s = Float::with_val_round(prec, &radii[i] + &radii[j], Round::Up).0;
            if *d.lo() <= s {
                return None;
            }
        }
    }
    Some(
        zs.iter()
            .zip(radii)
            .map(|(z, r)| {
                let re = CertifiedReal::point(z.re.clone()).widen(&r);
                let im = CertifiedReal::point(z.im.clone()).widen(&r);
                RootDisk { enclosure: CertifiedComplex::new(re, im), center_re: z.re.clone(), center_im: z.im.clone(), radius: r }
            })
            .collect(),
    )
}

fn round_to_integer(f: &Float) -> Option<Integer> {
    f.to_integer_round(Round::Nearest).map(|(i, _)| i)
}

/// Exact irreducible factors of degree ≤ `max_deg`, found by rounding symmetric
/// functions of root subsets; returns (factors, remaining cofactor).
pub fn small_factors(p: &QPoly, max_deg: usize, prec: u32) -> Result<(Vec<QPoly>, QPoly)> {
    let mut rest = p.monic().ok_or_else(|| Error::Argument("zero polynomial".into()))?;
    let mut found: Vec<QPoly> = Vec::new();
    let sqf = rest.squarefree_part();
    let disks = isolate_roots(&sqf, prec)?;
    // Lead of the primitive integer model of the squarefree part.
    let prim = super::poly::primitive_integer(&sqf);
    let lc = prim.last().cloned().unwrap_or_else(|| Integer::from(1));
    let lc_q = Rational::from(lc.clone());
    let mut alive: Vec<bool> = vec![true; disks.len()];
    let wp = prec.max(64) * 2;
    for k in 1..=max_deg.min(disks.len()) {
        let idx: Vec<usize> = (0..disks.len()).collect();
        let mut subset = Vec::new();
        search_subsets(&idx, k, 0, &mut subset, &mut |s: &[usize]| {
            if s.iter().any(|&i| !alive[i]) {
                return;
            }
            // Elementary symmetric functions of the chosen roots.
            let mut e: Vec<Cx> = vec![Cx::new(wp, 1.0, 0.0)];
            for &i in s {
                let z = Cx { re: Float::with_val(wp, &disks[i].center_re), im: Float::with_val(wp, &disks[i].center_im) };
                let mut ne = vec![Cx::new(wp, 0.0, 0.0); e.len() + 1];
                for (j, ej) in e.iter().enumerate() {
                    ne[j] = ne[j].add(ej);
                    ne[j + 1] = ne[j + 1].sub(&ej.mul(&z));
                }
                e = ne;
            }
            let mut coeffs = vec![Rational::new(); k + 1];
            for (j, ej) in e.iter().enumerate() {
                let scaled = Float::with_val(wp, &ej.re * &lc);
                let im_scaled = Float::with_val(wp, &ej.im * &lc).abs();
                if im_scaled > 0.25 {
                    return;
                }
                let Some(v) = round_to_integer(&scaled) else { return };
                // coefficient of t^(k-j)
                coeffs[k - j] = Rational::from(v) / &lc_q;
            }
            let g = QPoly::new(coeffs);
            if g.degree() != Some(k) {
                return;
            }
            if let Some((q, r)) = rest.divrem(&g) {
                if r.is_zero() {
                    let mut q = q;
                    let mut r2 = q.divrem(&g).unwrap();
                    while r2.1.is_zero() {
                        q = r2.0;
                        found.push(g.clone());
                        r2 = q.divrem(&g).unwrap();
                    }
                    found.push(g.clone());
                    rest = q;
                    for &i in s {
                        alive[i] = false;
                    }
                }
            }
        });
    }
    found.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| cmp_coeffs(a, b)));
    Ok((found, rest))
}

fn cmp_coeffs(a: &QPoly, b: &QPoly) -> std::cmp::Ordering {
    for (x, y) in a.coeffs().iter().rev().zip(b.coeffs().iter().rev()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

fn search_subsets(idx: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..idx.len() {
        if idx.len() - i < k - cur.len() {
            break;
        }
        cur.push(idx[i]);
        search_subsets(idx, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Complete factorization into irreducibles when deg ≤ 2·max_small + 1 guarantees it.
pub fn factor(p: &QPoly, prec: u32) -> Result<Vec<QPoly>> {
    let n = p.degree().unwrap_or(0);
    let half = n / 2;
    let (mut fs, rest) = small_factors(p, half.max(1), prec)?;
    if rest.degree().unwrap_or(0) > 0 {
        fs.push(rest);
    }
    fs.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| cmp_coeffs(a, b)));
    Ok(fs)
}

/// Distinct rational roots, ascending.
pub fn rational_roots(p: &QPoly, prec: u32) -> Result<Vec<Rational>> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let (fs, _) = small_factors(&p.squarefree_part(), 1, prec)?;
    let mut out: Vec<Rational> = fs.iter().map(|g| Rational::from(-&g.coeffs()[0])).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Root of a monic quadratic t² + b t + c as an element of Q(√δ), δ squarefree.
pub fn quadratic_roots(g: &QPoly) -> Option<(FieldSpec, [FieldElement; 2])> {
    if g.degree() != Some(2) {
        return None;
    }
    let g = g.monic()?;
    let b = g.coeffs()[1].clone();
    let c = g.coeffs()[0].clone();
    let disc = Rational::from(&b * &b) - Rational::from(&c * 4u32);
    let (delta, s) = squarefree_decompose(&disc)?;
    if delta == 1 {
        return None;
    }
    let field = FieldSpec::quadratic(delta).ok()?;
    let half = Rational::from((1, 2));
    let a = Rational::from(-&b) * &half;
    let bb = s * &half;
    Some((
        field,
        [FieldElement::new(a.clone(), bb.clone(), field), FieldElement::new(a, -bb, field)],
    ))
}

/// q = s² · δ with δ a squarefree integer and s ≥ 0 rational.
pub fn squarefree_decompose(q: &Rational) -> Option<(i64, Rational)> {
    if q.cmp0() == std::cmp::Ordering::Equal {
        return None;
    }
    // q = n/d = n·d / d²
    let nd = Integer::from(q.numer() * q.denom());
    let mut delta = Integer::from(if nd < 0 { -1 } else { 1 });
    let mut sq = Integer::from(1);
    for p in prime_factors(&nd) {
        let v = val_int(&nd, &p);
        if v % 2 == 1 {
            delta *= &p;
        }
        sq *= Integer::from(rug::ops::Pow::pow(&p, v / 2));
    }
    let delta = delta.to_i64()?;
    debug_assert!(is_squarefree(delta));
    Some((delta, Rational::from((sq, q.denom().clone()))))
}

/// Roots of p lying in `field` (p with coefficients in that field).
pub fn roots_in_field(p: &Poly<FieldElement>, field: FieldSpec, prec: u32) -> Result<Vec<FieldElement>> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let rational = p.coeffs().iter().all(|c| c.is_rational());
    // Norm polynomial p·p̄ has rational coefficients.
    let np: QPoly = if rational {
        p.map(|c| c.a().clone())
    } else {
        let conj = p.map(|c| c.conj());
        let prod = p.mul(&conj);
        prod.map(|c| c.a().clone())
    };
    let sq = np.squarefree_part();
    let (fs, _) = small_factors(&sq, 2, prec)?;
    let mut cands: Vec<FieldElement> = Vec::new();
    for g in fs {
        match g.degree() {
            Some(1) => cands.push(FieldElement::rational(Rational::from(-&g.coeffs()[0])).in_field(field)?),
            Some(2) => {
                if let Some((k, rs)) = quadratic_roots(&g) {
                    if k == field {
                        cands.extend(rs);
                    }
                }
            }
            _ => {}
        }
    }
    let mut out: Vec<FieldElement> = cands.into_iter().filter(|r| p.eval(r).is_zero()).collect();
    out.sort_by(|a, b| a.a().cmp(b.a()).then_with(|| a.b().cmp(b.b())));
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::qpoly_from_ints;

    #[test]
    fn isolates_cyclotomic_roots() {
        // t^5 - 1
        let p = qpoly_from_ints(&[-1, 0, 0, 0, 0, 1]);
        let disks = isolate_roots(&p, 128).unwrap();
        assert_eq!(disks.len(), 5);
        assert_eq!(disks.iter().filter(|d| d.enclosure.im.contains_zero() && d.enclosure.re.contains_rational(&Rational::from(1))).count(), 1);
    }

    #[test]
    fn factors_products() {
        // (t - 1/2)(t^2 + 1)(t^2 - 3)
        let a = QPoly::new(vec![Rational::from((-1, 2)), Rational::from(1)]);
        let b = qpoly_from_ints(&[1, 0, 1]);
        let c = qpoly_from_ints(&[-3, 0, 1]);
        let p = a.mul(&b).mul(&c);
        let fs = factor(&p, 128).unwrap();
        assert_eq!(fs, vec![a, c, b]);
        assert_eq!(rational_roots(&p, 128).unwrap(), vec![Rational::from((1, 2))]);
    }

    #[test]
    fn roots_in_quadratic_field() {
        let k = FieldSpec::quadratic(2).unwrap();
        // t^2 - 2 over Q(√2)
        let p: Poly<FieldElement> = Poly::new(vec![FieldElement::from_i64(-2).in_field(k).unwrap(), FieldElement::zero().in_field(k).unwrap(), FieldElement::one().in_field(k).unwrap()]);
        let rs = roots_in_field(&p, k, 128).unwrap();
        assert_eq!(rs.len(), 2);
        // t - (1 + √2) has exactly that root
        let r = FieldElement::parse("1+sqrt(2)", k).unwrap();
        let lin = Poly::new(vec![-&r, FieldElement::one().in_field(k).unwrap()]);
        assert_eq!(roots_in_field(&lin, k, 128).unwrap(), vec![r]);
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_decompose(&Rational::from(-12)), Some((-3, Rational::from(2))));
        assert_eq!(squarefree_decompose(&Rational::from((3, 4))), Some((3, Rational::from((1, 2)))));
    }
}
