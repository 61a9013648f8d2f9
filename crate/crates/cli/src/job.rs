//! A validated job: named objects resolved against the base field and the
//! effective parameters after flags, environment and config are merged.

use crate::config::JobConfig;
use arithdyn::algebra::{FieldElement, FieldSpec};
use arithdyn::bottcher::PolynomialSystem;
use arithdyn::pairs::EquivOptions;
use arithdyn::plane::PlaneEndomorphism;
use arithdyn::Integer;
use std::collections::BTreeMap;

/// Values given on the command line (or its environment mirrors) win over the config.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision_bits: Option<u32>,
    pub iter_budget: Option<usize>,
    pub bidegree: Option<u32>,
    pub orbit_len: Option<usize>,
    pub nmax: Option<usize>,
    pub jet_order: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Params {
    pub prec: u32,
    pub budget: usize,
    pub bidegree: u32,
    pub orbit_len: usize,
    pub nmax: usize,
    pub emax: u32,
    pub jet_order: usize,
    pub order: usize,
    pub root_choice: usize,
    pub assume_ns: bool,
    pub weak: bool,
    pub height_screen: bool,
}

impl Params {
    pub fn resolve(c: &JobConfig, o: &Overrides) -> Params {
        Params {
            prec: o.precision_bits.or(c.precision_bits).unwrap_or(128),
            budget: o.iter_budget.or(c.iter_budget).unwrap_or(64),
            bidegree: o.bidegree.or(c.bidegree).unwrap_or(6),
            orbit_len: o.orbit_len.or(c.orbit_len).unwrap_or(80),
            nmax: o.nmax.or(c.nmax).unwrap_or(6),
            emax: c.emax.unwrap_or(2),
            jet_order: o.jet_order.or(c.jet_order).unwrap_or(12),
            order: c.order.unwrap_or(16),
            root_choice: c.root_choice.unwrap_or(0),
            assume_ns: c.assume_ns.unwrap_or(false),
            weak: c.weak.unwrap_or(false),
            height_screen: c.height_screen.unwrap_or(true),
        }
    }

    pub fn equiv(&self) -> EquivOptions {
        EquivOptions {
            bidegree: self.bidegree,
            orbit_len: self.orbit_len,
            height_screen: self.height_screen,
            prec: self.prec,
            budget: self.budget,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "precision_bits": self.prec,
            "iter_budget": self.budget,
            "bidegree": self.bidegree,
            "orbit_len": self.orbit_len,
            "nmax": self.nmax,
            "emax": self.emax,
            "jet_order": self.jet_order,
            "order": self.order,
            "root_choice": self.root_choice,
            "assume_ns": self.assume_ns,
            "weak": self.weak,
            "height_screen": self.height_screen,
        })
    }
}

#[derive(Clone, Debug)]
pub struct PairInput {
    pub label: String,
    pub f: PolynomialSystem,
    pub a: FieldElement,
}

#[derive(Clone, Debug)]
pub struct Job {
    pub field: FieldSpec,
    pub systems: BTreeMap<String, PolynomialSystem>,
    pub planes: BTreeMap<String, PlaneEndomorphism>,
    pub pairs: Vec<PairInput>,
    pub exponents: Option<Vec<Integer>>,
    pub places: Option<Vec<String>>,
    pub params: Params,
}

impl Job {
    /// Expects a config already in canonical form.
    pub fn build(c: &JobConfig, o: &Overrides) -> Result<Job, String> {
        let field = c.field_spec()?;
        let mut systems = BTreeMap::new();
        for (name, cs) in &c.systems {
            let refs: Vec<&str> = cs.iter().map(String::as_str).collect();
            let f = PolynomialSystem::parse(&refs, field).map_err(|e| format!("systems.{name}: {e}"))?;
            systems.insert(name.clone(), f);
        }
        let mut planes = BTreeMap::new();
        for (name, p) in &c.planes {
            let k = match &p.field {
                Some(s) => FieldSpec::parse(s).map_err(|e| format!("planes.{name}.field: {e}"))?,
                None => field,
            };
            let terms = |ts: &[crate::config::Term]| serde_json::json!(ts);
            let f = PlaneEndomorphism::from_json_terms(&terms(&p.f1), &terms(&p.f2), k)
                .map_err(|e| format!("planes.{name}: {e}"))?;
            planes.insert(name.clone(), f);
        }
        let mut pairs = Vec::new();
        for (i, p) in c.pairs.iter().enumerate() {
            let f = systems
                .get(&p.system)
                .ok_or_else(|| format!("pairs[{i}]: no system named `{}`", p.system))?
                .clone();
            let a = FieldElement::parse(&p.point, field).map_err(|e| format!("pairs[{i}].point: {e}"))?;
            pairs.push(PairInput { label: format!("{}({})", p.system, p.point), f, a });
        }
        let exponents = c
            .exponents
            .as_ref()
            .map(|es| es.iter().map(|e| e.parse::<Integer>().map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        Ok(Job { field, systems, planes, pairs, exponents, places: c.places.clone(), params: Params::resolve(c, o) })
    }
}
