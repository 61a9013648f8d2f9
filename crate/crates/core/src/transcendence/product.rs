use super::{block_sums, BlockSum, BlockVerdict};
use crate::algebra::places::Place;
use crate::algebra::{CertifiedComplex, CertifiedReal};
use crate::bottcher::evaluate_bottcher_arch;
use crate::error::{Error, Result};
use crate::heights::{canonical_height, in_t_d, TdMembership};
use crate::pairs::{geometric_data, DynamicalPair, EquivOptions, GeometricData};
use rug::{Integer, Rational};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductStatus {
    /// Root of unity (Böttcher) or algebraic (heights).
    Degenerate,
    Transcendental,
    /// Equivalence tests left two nonzero blocks possibly mergeable.
    BoundLimited,
}

fn check_lengths(pairs: &[DynamicalPair], exponents: &[Integer]) -> Result<()> {
    if pairs.is_empty() || pairs.len() != exponents.len() {
        return Err(Error::Argument(format!("{} pairs but {} exponents", pairs.len(), exponents.len())));
    }
    let field = pairs[0].f.field();
    if pairs.iter().any(|p| p.f.field() != field) {
        return Err(Error::Argument("all pairs must share one base field".into()));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct BottcherProduct {
    pub status: ProductStatus,
    pub blocks: Vec<BlockSum>,
    pub geometric: GeometricData,
    /// Π φ_i(a_i)^{n_i}, with φ_i(a_i) := φ_i(f_i^{m}(a_i))^{1/d^m} on principal branches.
    pub numeric: CertifiedComplex,
}

impl BottcherProduct {
    pub fn status_name(&self) -> &'static str {
        match self.status {
            ProductStatus::Degenerate => "RootOfUnity",
            ProductStatus::Transcendental => "TranscendentalCertified",
            ProductStatus::BoundLimited => "BoundLimited",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "status": self.status_name(),
            "blocks": self.blocks.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            "numeric": self.numeric.to_json(),
            "modulus": self.numeric.abs().to_json(),
        })
    }
}

/// Whether Π φ_{f_i}(a_i)^{n_i} is a root of unity, for pairs escaping at the archimedean place v.
pub fn bottcher_product_status(
    pairs: &[DynamicalPair],
    exponents: &[Integer],
    v: &Place,
    opts: &EquivOptions,
) -> Result<BottcherProduct> {
    check_lengths(pairs, exponents)?;
    if !v.is_archimedean() {
        return Err(Error::Argument(format!("{v} is not archimedean")));
    }
    let prec = opts.prec;
    let mut log_sum = CertifiedComplex::from_rational(&Rational::new(), prec);
    for (p, n) in pairs.iter().zip(exponents) {
        let val = match evaluate_bottcher_arch(&p.f, &p.a, v, prec, opts.budget, 0) {
            Err(Error::Undecided(m)) => return Err(Error::Precondition(format!("{p}: {m}"))),
            r => r?,
        };
        let l = val
            .value
            .ln()
            .ok_or_else(|| Error::Precision("Böttcher value not separated from 0".into()))?;
        let dm = Integer::from(Integer::u_pow_u(p.degree() as u32, val.start_index as u32));
        let scale = Rational::from((n.clone(), dm));
        log_sum = log_sum.add(&CertifiedComplex::new(l.re.mul_rational(&scale), l.im.mul_rational(&scale)));
    }
    let geo = geometric_data(pairs, opts, false)?;
    let index: Vec<usize> = (0..pairs.len()).collect();
    let (blocks, verdict) = block_sums(&geo, exponents, &index);
    let status = match verdict {
        BlockVerdict::AllZero => ProductStatus::Degenerate,
        BlockVerdict::IsolatedNonzero => ProductStatus::Transcendental,
        BlockVerdict::Ambiguous => ProductStatus::BoundLimited,
    };
    Ok(BottcherProduct { status, blocks, geometric: geo, numeric: log_sum.exp() })
}

#[derive(Clone, Debug)]
pub struct HeightProduct {
    pub status: ProductStatus,
    /// Membership in T_d, per pair.
    pub membership: Vec<TdMembership>,
    pub blocks: Vec<BlockSum>,
    /// Σ n_i ĥ_i over pairs outside T_d, as p ↦ exponent of p in the (rational) product.
    pub rational_part: BTreeMap<Integer, Rational>,
    /// Enclosure of Σ n_i ĥ_i over all pairs.
    pub log_product: Option<CertifiedReal>,
}

impl HeightProduct {
    pub fn status_name(&self) -> &'static str {
        match self.status {
            ProductStatus::Degenerate => "Algebraic",
            ProductStatus::Transcendental => "NotAlgebraic",
            ProductStatus::BoundLimited => "BoundLimited",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rational: serde_json::Map<String, serde_json::Value> =
            self.rational_part.iter().map(|(p, e)| (p.to_string(), serde_json::Value::String(e.to_string()))).collect();
        serde_json::json!({
            "status": self.status_name(),
            "membership": self.membership.iter().map(|m| m.name()).collect::<Vec<_>>(),
            "blocks": self.blocks.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            "rational_part": rational,
            "log_product": self.log_product.as_ref().map(|x| x.to_json()),
        })
    }
}

/// Whether Π Ĥ(a_i)^{n_i} with Ĥ = exp ĥ is algebraic.
pub fn height_product_algebraic(pairs: &[DynamicalPair], exponents: &[Integer], opts: &EquivOptions) -> Result<HeightProduct> {
    check_lengths(pairs, exponents)?;
    let prec = opts.prec;
    let mut membership = Vec::new();
    let mut rational_part: BTreeMap<Integer, Rational> = BTreeMap::new();
    let mut log_product = Some(CertifiedReal::zero(prec));
    for (p, n) in pairs.iter().zip(exponents) {
        let m = in_t_d(&p.f, &p.a, prec, opts.budget)?;
        let h = canonical_height(&p.f, &p.a, prec, opts.budget)?;
        if m == TdMembership::NoCertified {
            for (q, c) in &h.finite {
                let e = rational_part.entry(q.clone()).or_default();
                *e += Rational::from(c * n);
            }
        }
        log_product = match (log_product, h.is_complete()) {
            (Some(acc), true) => Some(acc.add(&h.value(prec).mul_rational(&Rational::from(n)))),
            _ => None,
        };
        membership.push(m);
    }
    rational_part.retain(|_, e| *e != 0);
    let blocks_of = |status| HeightProduct {
        status,
        membership: membership.clone(),
        blocks: Vec::new(),
        rational_part: rational_part.clone(),
        log_product: log_product.clone(),
    };
    if membership.contains(&TdMembership::Undecided) {
        return Ok(blocks_of(ProductStatus::BoundLimited));
    }
    let t_index: Vec<usize> = (0..pairs.len()).filter(|&i| matches!(membership[i], TdMembership::Yes { .. })).collect();
    if t_index.is_empty() {
        return Ok(blocks_of(ProductStatus::Degenerate));
    }
    let t_pairs: Vec<DynamicalPair> = t_index.iter().map(|&i| pairs[i].clone()).collect();
    let geo = geometric_data(&t_pairs, opts, true)?;
    let (blocks, verdict) = block_sums(&geo, exponents, &t_index);
    let status = match verdict {
        BlockVerdict::AllZero => ProductStatus::Degenerate,
        BlockVerdict::IsolatedNonzero => ProductStatus::Transcendental,
        BlockVerdict::Ambiguous => ProductStatus::BoundLimited,
    };
    Ok(HeightProduct { blocks, ..blocks_of(status) })
}
