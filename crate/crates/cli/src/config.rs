//! Job files. Every scalar stays a string so nothing is rounded on the way in;
//! `canonical` rewrites them in the library's own notation.

use arithdyn::algebra::{FieldElement, FieldSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// (i, j, c) for the term c·x^i·y^j.
pub type Term = (u32, u32, String);

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneSpec {
    pub f1: Vec<Term>,
    pub f2: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub system: String,
    pub point: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    /// Coefficients c_0, …, c_d of each named polynomial.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub systems: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub planes: BTreeMap<String, PlaneSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub places: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_choice: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iter_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidegree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emax: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jet_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assume_ns: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height_screen: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// JSON syntax and schema errors carry the position serde_json reports.
pub fn parse(text: &str) -> Result<JobConfig, String> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let msg = full.strip_suffix(&format!(" at line {} column {}", e.line(), e.column())).unwrap_or(&full);
        format!("line {}, column {}: {msg}", e.line(), e.column())
    })
}

impl JobConfig {
    pub fn field_spec(&self) -> Result<FieldSpec, String> {
        match &self.field {
            None => Ok(FieldSpec::Rational),
            Some(s) => FieldSpec::parse(s).map_err(|e| format!("field: {e}")),
        }
    }

    /// Same job with every field and scalar rewritten in canonical notation.
    pub fn canonical(&self) -> Result<JobConfig, String> {
        let k = self.field_spec()?;
        let scalar = |s: &str, k: FieldSpec, at: &str| {
            FieldElement::parse(s, k).map(|x| x.to_string()).map_err(|e| format!("{at}: {e}"))
        };
        let mut out = self.clone();
        out.field = Some(k.to_string());
        for (name, cs) in out.systems.iter_mut() {
            for (i, c) in cs.iter_mut().enumerate() {
                *c = scalar(c, k, &format!("systems.{name}[{i}]"))?;
            }
        }
        for (name, p) in out.planes.iter_mut() {
            let pk = match &p.field {
                Some(s) => FieldSpec::parse(s).map_err(|e| format!("planes.{name}.field: {e}"))?,
                None => k,
            };
            p.field = p.field.as_ref().map(|_| pk.to_string());
            for (label, terms) in [("f1", &mut p.f1), ("f2", &mut p.f2)] {
                for (i, t) in terms.iter_mut().enumerate() {
                    t.2 = scalar(&t.2, pk, &format!("planes.{name}.{label}[{i}]"))?;
                }
                terms.sort_by_key(|t| (t.0, t.1));
            }
        }
        for (i, p) in out.pairs.iter_mut().enumerate() {
            p.point = scalar(&p.point, k, &format!("pairs[{i}].point"))?;
        }
        if let Some(es) = out.exponents.as_mut() {
            for (i, e) in es.iter_mut().enumerate() {
                let n: arithdyn::Integer = e.trim().parse().map_err(|_| format!("exponents[{i}]: `{e}` is not an integer"))?;
                *e = n.to_string();
            }
        }
        Ok(out)
    }

    pub fn to_canonical_string(&self) -> Result<String, String> {
        serde_json::to_string_pretty(&self.canonical()?).map_err(|e| e.to_string())
    }
}
