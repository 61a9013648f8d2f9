//! Partition of a list of pairs into equivalence blocks with their projective points.
//!
//! Within a block the ratios d(s/t) = ĥ_s/ĥ_t define a vector (d_s) up to scaling,
//! normalized here to coprime positive integers.

use super::equivalence::{equivalent, weakly_equivalent, EquivOptions, Equivalence};
use super::pair::DynamicalPair;
use crate::error::{Error, Result};
use rug::{Integer, Rational};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Block {
    pub members: Vec<usize>,
    /// d_s for each member, coprime positive integers.
    pub point: Vec<Integer>,
}

#[derive(Clone, Debug)]
pub struct GeometricData {
    pub blocks: Vec<Block>,
    /// Pairwise outcomes for s < t.
    pub tests: BTreeMap<(usize, usize), Equivalence>,
    /// Whether the partition used equivalence up to Galois conjugation.
    pub weak: bool,
}

impl GeometricData {
    pub fn block_of(&self, s: usize) -> usize {
        self.blocks.iter().position(|b| b.members.contains(&s)).expect("every index has a block")
    }

    /// d_s within its block.
    pub fn weight(&self, s: usize) -> &Integer {
        let b = &self.blocks[self.block_of(s)];
        &b.point[b.members.iter().position(|&m| m == s).expect("member")]
    }

    /// Two blocks might merge under a larger degree bound: some cross test was bound-limited.
    pub fn may_merge(&self, b1: usize, b2: usize) -> bool {
        let (m1, m2) = (&self.blocks[b1].members, &self.blocks[b2].members);
        m1.iter().any(|&s| {
            m2.iter().any(|&t| {
                let key = (s.min(t), s.max(t));
                self.tests.get(&key).is_some_and(|e| !e.is_equivalent() && !e.certified_inequivalent())
            })
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "weak": self.weak,
            "blocks": self.blocks.iter().map(|b| serde_json::json!({
                "members": b.members,
                "point": b.point.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "tests": self.tests.iter().map(|((s, t), e)| serde_json::json!({
                "pair": [s, t],
                "outcome": e.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Pairwise tests for s < t. `weak` compares up to Galois conjugation.
pub fn pairwise_tests(
    pairs: &[DynamicalPair],
    opts: &EquivOptions,
    weak: bool,
) -> Result<BTreeMap<(usize, usize), Equivalence>> {
    let mut tests = BTreeMap::new();
    for s in 0..pairs.len() {
        for t in s + 1..pairs.len() {
            if pairs[s].degree() != pairs[t].degree() {
                // only maps of equal degree are compared; no entry means inequivalent
                continue;
            }
            let e = if weak {
                weakly_equivalent(&pairs[s], &pairs[t], opts)?.result
            } else {
                equivalent(&pairs[s], &pairs[t], opts)?
            };
            tests.insert((s, t), e);
        }
    }
    Ok(tests)
}

/// Blocks from precomputed pairwise outcomes (see [`pairwise_tests`]).
pub fn assemble(n: usize, tests: BTreeMap<(usize, usize), Equivalence>, weak: bool) -> Result<GeometricData> {
    let mut weight: Vec<Option<Rational>> = vec![None; n];
    let mut blocks = Vec::new();
    for root in 0..n {
        if weight[root].is_some() {
            continue;
        }
        weight[root] = Some(Rational::from(1));
        let mut members = vec![root];
        let mut stack = vec![root];
        while let Some(s) = stack.pop() {
            let ds = weight[s].clone().expect("visited");
            for t in 0..n {
                if t == s {
                    continue;
                }
                let Some(c) = tests.get(&(s.min(t), s.max(t))).and_then(|e| e.certificate()) else {
                    continue;
                };
                // ratio(s, t) = d_s/d_t
                let r = if s < t { c.ratio() } else { c.transposed().ratio() };
                let dt = Rational::from(&ds / &r);
                match &weight[t] {
                    None => {
                        weight[t] = Some(dt);
                        members.push(t);
                        stack.push(t);
                    }
                    Some(old) if *old != dt => {
                        return Err(Error::Internal(format!("inconsistent ratios around pairs {s} and {t}")));
                    }
                    _ => {}
                }
            }
        }
        members.sort_unstable();
        let ws: Vec<Rational> = members.iter().map(|&m| weight[m].clone().expect("set")).collect();
        blocks.push(Block { members, point: primitive(&ws) });
    }
    Ok(GeometricData { blocks, tests, weak })
}

pub fn geometric_data(pairs: &[DynamicalPair], opts: &EquivOptions, weak: bool) -> Result<GeometricData> {
    assemble(pairs.len(), pairwise_tests(pairs, opts, weak)?, weak)
}

/// Clears denominators and common factors.
fn primitive(ws: &[Rational]) -> Vec<Integer> {
    let mut l = Integer::from(1);
    for w in ws {
        l.lcm_mut(w.denom());
    }
    let ints: Vec<Integer> = ws.iter().map(|w| w.numer() * Integer::from(&l / w.denom())).collect();
    let g = ints.iter().fold(Integer::new(), |g, x| g.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldElement;
    use crate::bottcher::PolynomialSystem;

    fn pair(cs: &[i64], a: i64) -> DynamicalPair {
        DynamicalPair::new(PolynomialSystem::from_ints(cs).unwrap(), FieldElement::from_i64(a), 128, 64).unwrap()
    }

    #[test]
    fn graph_block_has_point_one_two() {
        let ps = [pair(&[1, 0, 1], 1), pair(&[1, 0, 1], 2), pair(&[1, 0, 1], 5)];
        let g = geometric_data(&ps, &EquivOptions::default(), false).unwrap();
        assert_eq!(g.blocks.len(), 1);
        let want: Vec<Integer> = [1, 2, 4].iter().map(|&x| Integer::from(x)).collect();
        assert_eq!(g.blocks[0].point, want);
    }

    #[test]
    fn separate_blocks() {
        let ps = [pair(&[1, 0, 1], 1), pair(&[2, 0, 1], 1)];
        let opts = EquivOptions { bidegree: 3, orbit_len: 20, ..EquivOptions::default() };
        let g = geometric_data(&ps, &opts, false).unwrap();
        assert_eq!(g.blocks.len(), 2);
        assert!(g.may_merge(0, 1));
    }
}
