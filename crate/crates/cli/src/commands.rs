//! One function per command. Each returns its items in canonical order; items
//! are computed concurrently and collected in that order.

use crate::job::{Job, PairInput, Params};
use arithdyn::algebra::places::{relevant_places, Place};
use arithdyn::bottcher::{classify_polynomial_type, compute_bottcher, evaluate_bottcher_arch};
use arithdyn::heights::{canonical_height, green, liminf_diagnostic};
use arithdyn::pairs::{equivalent, geometric_data, weakly_equivalent, DynamicalPair};
use arithdyn::plane::{
    extends_to_p2, fixed_point_count_diagnostic, homogeneity_detect, invariant_germ, np_check, ns_check,
    periodic_curve_census, periodic_points_at_infinity, BoundaryMap, PlaneEndomorphism,
};
use arithdyn::transcendence::{bottcher_product_status, height_linear_relations, height_product_algebraic, ProductStatus};
use arithdyn::{Error, Result};
use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Bottcher,
    Green,
    Height,
    Classify,
    Equiv,
    Geomdata,
    TranscendBottcher,
    HeightAlgebraic,
    HeightRelations,
    PlaneAnalyze,
    PlaneGerms,
    PlaneCensus,
    PlaneHomogeneity,
    Diagnostics,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

/// Undecided also covers bound-limited verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Decided,
    Undecided,
    Failed,
}

#[derive(Clone, Debug)]
pub struct ItemResult {
    pub label: String,
    pub status: Status,
    pub value: Value,
    pub warnings: Vec<String>,
}

impl ItemResult {
    fn decided(label: String, value: Value) -> Self {
        ItemResult { label, status: Status::Decided, value, warnings: Vec::new() }
    }

    fn flagged(label: String, value: Value, undecided: bool) -> Self {
        let status = if undecided { Status::Undecided } else { Status::Decided };
        ItemResult { label, status, value, warnings: Vec::new() }
    }

    fn warn(mut self, w: impl IntoIterator<Item = String>) -> Self {
        self.warnings.extend(w);
        self
    }

    pub fn to_json(&self) -> Value {
        let status = match self.status {
            Status::Decided => "ok",
            Status::Undecided => "undecided",
            Status::Failed => "error",
        };
        let key = if self.status == Status::Failed { "error" } else { "result" };
        json!({ "item": self.label, "status": status, key: self.value })
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Argument(_) => "argument",
        Error::Parse(_) => "parse",
        Error::Domain(_) => "domain",
        Error::Precision(_) => "precision",
        Error::Unsupported(_) => "unsupported",
        Error::Undecided(_) => "undecided",
        Error::Precondition(_) => "precondition",
        Error::Internal(_) => "internal",
    }
}

type Task<'a> = Box<dyn Fn() -> Result<ItemResult> + Send + Sync + 'a>;

fn run_tasks(tasks: Vec<(String, Task<'_>)>) -> Vec<ItemResult> {
    tasks
        .par_iter()
        .map(|(label, t)| {
            t().unwrap_or_else(|e| ItemResult {
                label: label.clone(),
                status: Status::Failed,
                value: json!({ "kind": error_kind(&e), "message": e.to_string() }),
                warnings: Vec::new(),
            })
        })
        .collect()
}

pub fn run(cmd: Command, job: &Job) -> Vec<ItemResult> {
    let p = &job.params;
    let mut tasks: Vec<(String, Task<'_>)> = Vec::new();
    match cmd {
        Command::Bottcher => {
            for (name, f) in &job.systems {
                tasks.push((name.clone(), Box::new(move || {
                    let s = compute_bottcher(f, p.order, p.root_choice)?;
                    Ok(ItemResult::decided(name.clone(), json!({
                        "ring": s.ring_name(f.field()),
                        "series": s.to_json(f.field()),
                        "order": s.order(),
                    })))
                })));
            }
            for pair in &job.pairs {
                for v in Place::archimedean(job.field) {
                    let label = format!("{} at {}", pair.label, v.name());
                    tasks.push((label.clone(), Box::new(move || bottcher_value(pair, &v, p, label.clone()))));
                }
            }
        }
        Command::Green => {
            for pair in &job.pairs {
                let places = match &job.places {
                    Some(ps) => ps.iter().map(|s| Place::parse(s, job.field)).collect::<Result<Vec<_>>>(),
                    None => Ok(relevant_places(pair.f.coeffs(), std::slice::from_ref(&pair.a), job.field)),
                };
                match places {
                    Ok(places) => {
                        for v in places {
                            let label = format!("{} at {}", pair.label, v.name());
                            tasks.push((label.clone(), Box::new(move || {
                                let g = green(&pair.f, &pair.a, &v, p.prec, p.budget)?;
                                Ok(ItemResult::flagged(label.clone(), g.to_json(), !g.is_decided()))
                            })));
                        }
                    }
                    Err(e) => tasks.push((pair.label.clone(), Box::new(move || Err(e.clone())))),
                }
            }
        }
        Command::Height => {
            for pair in &job.pairs {
                tasks.push((pair.label.clone(), Box::new(move || {
                    let h = canonical_height(&pair.f, &pair.a, p.prec, p.budget)?;
                    let mut out = h.to_json();
                    out["value"] = h.value(p.prec).to_json();
                    let w = h.undecided_places.iter().map(|v| format!("{}: undecided at {}", pair.label, v.name()));
                    Ok(ItemResult::flagged(pair.label.clone(), out, !h.is_complete()).warn(w.collect::<Vec<_>>()))
                })));
            }
        }
        Command::Classify => {
            for (name, f) in &job.systems {
                tasks.push((name.clone(), Box::new(move || {
                    Ok(ItemResult::decided(name.clone(), classify_polynomial_type(f)?.to_json()))
                })));
            }
        }
        Command::Equiv => {
            for s in 0..job.pairs.len() {
                for t in s + 1..job.pairs.len() {
                    let label = format!("{} ~ {}", job.pairs[s].label, job.pairs[t].label);
                    tasks.push((label.clone(), Box::new(move || {
                        let (a, b) = (dynamical_pair(&job.pairs[s], p)?, dynamical_pair(&job.pairs[t], p)?);
                        let (e, conj) = if p.weak {
                            let w = weakly_equivalent(&a, &b, &p.equiv())?;
                            (w.result, Some(w.conjugated))
                        } else {
                            (equivalent(&a, &b, &p.equiv())?, None)
                        };
                        let mut out = e.to_json();
                        if let Some(c) = conj {
                            out["conjugated"] = json!(c);
                        }
                        let limited = !e.is_equivalent() && !e.certified_inequivalent();
                        let w = limited.then(|| format!("{label}: {} is bound-limited", e.name()));
                        Ok(ItemResult::flagged(label.clone(), out, limited).warn(w))
                    })));
                }
            }
        }
        Command::Geomdata => {
            tasks.push(("pairs".into(), Box::new(move || {
                let pairs = dynamical_pairs(job)?;
                let g = geometric_data(&pairs, &p.equiv(), p.weak)?;
                let n = g.blocks.len();
                let limited: Vec<String> = (0..n)
                    .flat_map(|b1| (b1 + 1..n).map(move |b2| (b1, b2)))
                    .filter(|&(b1, b2)| g.may_merge(b1, b2))
                    .map(|(b1, b2)| format!("blocks {b1} and {b2} may merge under a larger bidegree"))
                    .collect();
                Ok(ItemResult::flagged("pairs".into(), g.to_json(), !limited.is_empty()).warn(limited))
            })));
        }
        Command::TranscendBottcher => {
            tasks.push(("product".into(), Box::new(move || {
                let pairs = dynamical_pairs(job)?;
                let v = match job.places.as_ref().and_then(|ps| ps.first()) {
                    Some(s) => Place::parse(s, job.field)?,
                    None => Place::archimedean(job.field).remove(0),
                };
                let r = bottcher_product_status(&pairs, exponents(job)?, &v, &p.equiv())?;
                Ok(ItemResult::flagged("product".into(), r.to_json(), r.status == ProductStatus::BoundLimited))
            })));
        }
        Command::HeightAlgebraic => {
            tasks.push(("product".into(), Box::new(move || {
                let pairs = dynamical_pairs(job)?;
                let r = height_product_algebraic(&pairs, exponents(job)?, &p.equiv())?;
                Ok(ItemResult::flagged("product".into(), r.to_json(), r.status == ProductStatus::BoundLimited))
            })));
        }
        Command::HeightRelations => {
            tasks.push(("pairs".into(), Box::new(move || {
                let pairs = dynamical_pairs(job)?;
                let r = height_linear_relations(&pairs, &p.equiv())?;
                let w = r.undecided.iter().map(|i| format!("T_d membership undecided for {}", job.pairs[*i].label));
                Ok(ItemResult::flagged("pairs".into(), r.to_json(), !r.undecided.is_empty()).warn(w.collect::<Vec<_>>()))
            })));
        }
        Command::PlaneAnalyze => plane_tasks(job, &mut tasks, plane_analyze),
        Command::PlaneGerms => plane_tasks(job, &mut tasks, plane_germs),
        Command::PlaneCensus => plane_tasks(job, &mut tasks, |name, f, p| {
            let r = periodic_curve_census(f, p.nmax, p.emax, p.jet_order, p.assume_ns, p.prec)?;
            let uncertified = r.unmatched.iter().filter(|u| !u.certified).count();
            let mut w = Vec::new();
            if uncertified > 0 {
                w.push(format!("{name}: {uncertified} germs have no curve of degree ≤ {} (bound-limited)", p.emax));
            }
            if !r.unsupported.is_empty() {
                w.push(format!("{name}: {} boundary periodic points outside the base field were not searched", r.unsupported.len()));
            }
            Ok(ItemResult::flagged(name.to_string(), r.to_json(), uncertified > 0).warn(w))
        }),
        Command::PlaneHomogeneity => plane_tasks(job, &mut tasks, |name, f, _| {
            Ok(ItemResult::decided(name.to_string(), homogeneity_detect(f)?.to_json()))
        }),
        Command::Diagnostics => {
            plane_tasks(job, &mut tasks, |name, f, p| {
                let fbar = BoundaryMap::new(f)?;
                let rows: Vec<Value> = fixed_point_count_diagnostic(&fbar, p.nmax)
                    .iter()
                    .map(|r| json!({ "n": r.n, "count": r.count, "d_pow": r.d_pow.to_string(), "ratio": r.ratio }))
                    .collect();
                Ok(ItemResult::decided(name.to_string(), json!({ "fixed_point_counts": rows })))
            });
            for pair in &job.pairs {
                for v in Place::archimedean(job.field) {
                    let label = format!("{} at {}", pair.label, v.name());
                    tasks.push((label.clone(), Box::new(move || {
                        let rows: Vec<Value> = liminf_diagnostic(&pair.f, &pair.a, &v, p.nmax, p.prec)?
                            .iter()
                            .map(|e| json!({ "n": e.n, "ratio": e.ratio.as_ref().map(|r| r.to_json()) }))
                            .collect();
                        Ok(ItemResult::decided(label.clone(), json!({ "local_to_naive": rows })))
                    })));
                }
            }
        }
    }
    run_tasks(tasks)
}

fn plane_tasks<'a>(
    job: &'a Job,
    tasks: &mut Vec<(String, Task<'a>)>,
    op: fn(&str, &PlaneEndomorphism, &Params) -> Result<ItemResult>,
) {
    for (name, f) in &job.planes {
        tasks.push((name.clone(), Box::new(move || op(name, f, &job.params))));
    }
}

fn bottcher_value(pair: &PairInput, v: &Place, p: &Params, label: String) -> Result<ItemResult> {
    match evaluate_bottcher_arch(&pair.f, &pair.a, v, p.prec, p.budget, p.root_choice) {
        Ok(b) => Ok(ItemResult::decided(label, b.to_json())),
        Err(Error::Undecided(m)) => Ok(ItemResult::flagged(label, json!({ "undecided": m }), true)),
        Err(e) => Err(e),
    }
}

fn dynamical_pair(pair: &PairInput, p: &Params) -> Result<DynamicalPair> {
    DynamicalPair::new(pair.f.clone(), pair.a.clone(), p.prec, p.budget)
        .map_err(|e| with_context(e, &pair.label))
}

fn dynamical_pairs(job: &Job) -> Result<Vec<DynamicalPair>> {
    job.pairs.iter().map(|pair| dynamical_pair(pair, &job.params)).collect()
}

fn exponents(job: &Job) -> Result<&[arithdyn::Integer]> {
    job.exponents.as_deref().ok_or_else(|| Error::Argument("this command needs `exponents`".into()))
}

fn with_context(e: Error, label: &str) -> Error {
    let msg = |m: String| format!("{label}: {m}");
    match e {
        Error::Argument(m) => Error::Argument(msg(m)),
        Error::Parse(m) => Error::Parse(msg(m)),
        Error::Domain(m) => Error::Domain(msg(m)),
        Error::Precision(m) => Error::Precision(msg(m)),
        Error::Unsupported(m) => Error::Unsupported(msg(m)),
        Error::Undecided(m) => Error::Undecided(msg(m)),
        Error::Precondition(m) => Error::Precondition(msg(m)),
        Error::Internal(m) => Error::Internal(msg(m)),
    }
}

fn plane_analyze(name: &str, f: &PlaneEndomorphism, p: &Params) -> Result<ItemResult> {
    if !extends_to_p2(f) {
        return Ok(ItemResult::decided(name.to_string(), json!({ "extends_to_p2": false, "map": f.to_json() })));
    }
    let fbar = BoundaryMap::new(f)?;
    let points = periodic_points_at_infinity(&fbar, p.nmax, p.prec)?;
    let inexact = points.iter().filter(|q| q.exact_point().is_none()).count();
    let homogeneity = match homogeneity_detect(f) {
        Ok(h) => h.to_json(),
        Err(e) => json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } }),
    };
    let out = json!({
        "extends_to_p2": true,
        "map": f.to_json(),
        "boundary_map": fbar.to_json(),
        "ns": ns_check(&fbar, p.nmax)?.to_json(),
        "np": np_check(&fbar)?.to_json(),
        "periodic_points": points.iter().map(|q| q.to_json()).collect::<Vec<_>>(),
        "homogeneity": homogeneity,
    });
    let w = (inexact > 0).then(|| format!("{name}: {inexact} boundary periodic points only known numerically"));
    Ok(ItemResult::decided(name.to_string(), out).warn(w))
}

fn plane_germs(name: &str, f: &PlaneEndomorphism, p: &Params) -> Result<ItemResult> {
    let fbar = BoundaryMap::new(f)?;
    let mut germs = Vec::new();
    let mut superattracting = Vec::new();
    let mut skipped = 0;
    for q in periodic_points_at_infinity(&fbar, p.nmax, p.prec)? {
        match (q.exact_point(), q.exact_multiplier()) {
            (Some(pt), Some(m)) if m.is_zero() => superattracting.push(json!({ "point": pt.to_string(), "period": q.period })),
            (Some(_), Some(_)) => {
                let g = invariant_germ(f, &q, p.jet_order)?;
                let residual_zero = g.residual()?.iter().all(|c| c.is_zero());
                let mut j = g.to_json();
                j["residual_zero"] = json!(residual_zero);
                germs.push(j);
            }
            _ => skipped += 1,
        }
    }
    let out = json!({ "germs": germs, "superattracting_excluded": superattracting, "skipped_inexact": skipped });
    let w = (skipped > 0).then(|| format!("{name}: {skipped} boundary periodic points outside the base field have no exact germ"));
    Ok(ItemResult::decided(name.to_string(), out).warn(w))
}
