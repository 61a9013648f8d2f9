use crate::algebra::linalg::{nullspace, rref};
use crate::error::Result;
use crate::heights::{canonical_height, in_t_d, TdMembership};
use crate::pairs::{geometric_data, DynamicalPair, EquivOptions};
use rug::{Integer, Rational};
use std::collections::BTreeSet;

#[derive(Clone, Debug)]
pub struct HeightRelations {
    /// Integer vectors x with Σ x_i ĥ_i = 0, as a reduced basis.
    pub basis: Vec<Vec<Integer>>,
    pub membership: Vec<TdMembership>,
    /// Relations among pairs outside T_d are complete; across or inside T_d only
    /// those forced by equivalence are reported.
    pub t_set: Vec<usize>,
    pub undecided: Vec<usize>,
}

impl HeightRelations {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "basis": self.basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "membership": self.membership.iter().map(|m| m.name()).collect::<Vec<_>>(),
            "t_set": self.t_set,
            "undecided": self.undecided,
            "complete_outside_t": true,
        })
    }
}

/// Scales a rational vector to coprime integers with positive first nonzero entry.
fn primitive(v: &[Rational]) -> Vec<Integer> {
    let mut l = Integer::from(1);
    for x in v {
        l.lcm_mut(x.denom());
    }
    let ints: Vec<Integer> = v.iter().map(|x| x.numer() * Integer::from(&l / x.denom()) ).collect();
    let mut g = ints.iter().fold(Integer::new(), |g, x| g.gcd(x));
    if g == 0 {
        return ints;
    }
    if ints.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        g = -g;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Basis of the Q-linear relations among canonical heights that the theory certifies.
pub fn height_linear_relations(pairs: &[DynamicalPair], opts: &EquivOptions) -> Result<HeightRelations> {
    let n = pairs.len();
    let mut membership = Vec::with_capacity(n);
    let mut finite = Vec::with_capacity(n);
    for p in pairs {
        membership.push(in_t_d(&p.f, &p.a, opts.prec, opts.budget)?);
        finite.push(canonical_height(&p.f, &p.a, opts.prec, opts.budget)?.finite);
    }
    let t_set: Vec<usize> = (0..n).filter(|&i| matches!(membership[i], TdMembership::Yes { .. })).collect();
    let undecided: Vec<usize> = (0..n).filter(|&i| membership[i] == TdMembership::Undecided).collect();
    let non_t: Vec<usize> = (0..n).filter(|&i| membership[i] == TdMembership::NoCertified).collect();
    let mut rows: Vec<Vec<Rational>> = Vec::new();

    // outside T_d: ĥ_i = Σ_p c_p^{(i)} log p, and the log p are independent
    let primes: BTreeSet<Integer> = non_t.iter().flat_map(|&i| finite[i].keys().cloned()).collect();
    let m: Vec<Vec<Rational>> = primes
        .iter()
        .map(|p| non_t.iter().map(|&i| finite[i].get(p).cloned().unwrap_or_default()).collect())
        .collect();
    for k in nullspace(&m, non_t.len(), &Rational::new()) {
        let mut row = vec![Rational::new(); n];
        for (j, &i) in non_t.iter().enumerate() {
            row[i] = k[j].clone();
        }
        rows.push(row);
    }

    // inside T_d: ĥ_s/ĥ_t = d_s/d_t within a weak equivalence block
    if t_set.len() > 1 {
        let t_pairs: Vec<DynamicalPair> = t_set.iter().map(|&i| pairs[i].clone()).collect();
        let geo = geometric_data(&t_pairs, opts, true)?;
        for b in &geo.blocks {
            let (s0, d0) = (t_set[b.members[0]], &b.point[0]);
            for (&ms, ds) in b.members.iter().zip(&b.point).skip(1) {
                let mut row = vec![Rational::new(); n];
                row[s0] = Rational::from(ds);
                row[t_set[ms]] = Rational::from(-d0.clone());
                rows.push(row);
            }
        }
    }
    let pivots = rref(&mut rows, n);
    let basis = rows.iter().take(pivots.len()).map(|r| primitive(r)).collect();
    Ok(HeightRelations { basis, membership, t_set, undecided })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FieldElement, FieldSpec};
    use crate::bottcher::PolynomialSystem;

    fn pair(cs: &[&str], a: &str) -> DynamicalPair {
        let f = PolynomialSystem::parse(cs, FieldSpec::Rational).unwrap();
        DynamicalPair::new(f, FieldElement::parse(a, FieldSpec::Rational).unwrap(), 128, 64).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<Integer> {
        xs.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn equal_finite_heights() {
        let ps = [pair(&["0", "1/2", "1"], "1/16"), pair(&["0", "3/8", "1"], "1/16")];
        let r = height_linear_relations(&ps, &EquivOptions::default()).unwrap();
        assert_eq!(r.basis, vec![ints(&[1, -1])]);
    }

    #[test]
    fn graph_relation() {
        let ps = [pair(&["1", "0", "1"], "1"), pair(&["1", "0", "1"], "2")];
        let r = height_linear_relations(&ps, &EquivOptions::default()).unwrap();
        assert_eq!(r.basis, vec![ints(&[2, -1])]);
    }

    #[test]
    fn unrelated_maps() {
        let ps = [pair(&["1", "0", "1"], "1"), pair(&["2", "0", "1"], "1")];
        let r = height_linear_relations(&ps, &EquivOptions::default()).unwrap();
        assert!(r.basis.is_empty());
    }
}
