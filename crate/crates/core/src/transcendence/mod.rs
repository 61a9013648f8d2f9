//! Algebraic independence criteria for products of Böttcher coordinates and of
//! exponentiated canonical heights, linear relations among heights, and
//! roots-of-unity tests in small fields.
//!
//! Both product criteria reduce to one test per equivalence block: the block's
//! projective point (d_s) must lie on the hyperplane Σ n_s x_s = 0. A block whose
//! sum is nonzero keeps it under any merge with zero-sum blocks, so the verdict is
//! only ambiguous when two nonzero blocks might still merge under a larger bound.

pub mod product;
pub mod relations;
pub mod unity;

pub use product::{bottcher_product_status, height_product_algebraic, BottcherProduct, HeightProduct, ProductStatus};
pub use relations::{height_linear_relations, HeightRelations};
pub use unity::{is_root_of_unity, quotient_root_of_unity};

use crate::pairs::GeometricData;
use rug::Integer;

#[derive(Clone, Debug)]
pub struct BlockSum {
    /// Indices into the caller's pair list.
    pub members: Vec<usize>,
    pub point: Vec<Integer>,
    /// Σ n_s d_s over the block.
    pub sum: Integer,
}

impl BlockSum {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "members": self.members,
            "point": self.point.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "sum": self.sum.to_string(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BlockVerdict {
    AllZero,
    /// Some nonzero block cannot merge with any other nonzero block.
    IsolatedNonzero,
    Ambiguous,
}

/// Block sums for `geo` built on the sub-list `index` of the caller's pairs.
pub(crate) fn block_sums(geo: &GeometricData, exponents: &[Integer], index: &[usize]) -> (Vec<BlockSum>, BlockVerdict) {
    let sums: Vec<BlockSum> = geo
        .blocks
        .iter()
        .map(|b| {
            let members: Vec<usize> = b.members.iter().map(|&m| index[m]).collect();
            let sum = members.iter().zip(&b.point).fold(Integer::new(), |acc, (&s, d)| acc + Integer::from(&exponents[s] * d));
            BlockSum { members, point: b.point.clone(), sum }
        })
        .collect();
    let nonzero: Vec<usize> = (0..sums.len()).filter(|&k| sums[k].sum != 0).collect();
    if nonzero.is_empty() {
        return (sums, BlockVerdict::AllZero);
    }
    // components of the may-merge graph
    let n = sums.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for i in 0..n {
        for j in i + 1..n {
            if geo.may_merge(i, j) {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    let isolated = nonzero.iter().any(|&k| {
        let ck = find(&mut comp, k);
        nonzero.iter().filter(|&&j| find(&mut comp, j) == ck).count() == 1
    });
    (sums, if isolated { BlockVerdict::IsolatedNonzero } else { BlockVerdict::Ambiguous })
}
