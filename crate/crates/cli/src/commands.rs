use arcscheme::arcgen::{arc_formula, directed_arc_system, ZariskiFormula};
use arcscheme::artin::{germ_jet_length, hilbert_data, GermPresentation, HilbertOutcome};
use arcscheme::classring::RationalSeries;
use arcscheme::oracle::{count_arc_points_with, verify_against_oracle, SearchLimits};
use arcscheme::rationalizer::{assemble_igusa, build_tree, NodeKind, ResolutionTree, TaggedTuple};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::job::{fail, Command, JobError, JobSpec, Root, Validated};

const DEFAULT_BUDGET: u64 = 10_000;

/// Exit status for stuck trees and series that could not be verified.
pub const UNVERIFIED: u8 = 2;

pub struct Outcome {
    pub result: Value,
    /// Human-facing rendering printed instead of the JSON envelope.
    pub text: Option<String>,
    pub dot: Option<String>,
    pub status: u8,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn json(result: Value) -> Self {
        Outcome { result, text: None, dot: None, status: 0, diagnostics: Vec::new() }
    }
}

pub fn run(job: &JobSpec, v: &Validated, parallel: bool) -> Result<Outcome, JobError> {
    match job.command {
        Command::Arc => arc(job, v),
        Command::Jet => jet(job, v),
        Command::Igusa => igusa(job, v),
        Command::Count => count(job, v, parallel),
        Command::Verify => verify(job, v),
        Command::Tree => tree(job, v),
    }
}

/// Exact integers as JSON numbers, however large.
fn big(c: &BigUint) -> Value {
    serde_json::from_str(&c.to_string()).expect("decimal digits parse as a number")
}

fn arc(job: &JobSpec, v: &Validated) -> Result<Outcome, JobError> {
    let phi = ZariskiFormula::untagged(v.names.clone(), v.field, v.polys.clone())?;
    let (formula, empty) = match (&v.algebra, &v.theta) {
        (Some(r), _) => (arc_formula(&phi, r)?, false),
        (None, Some(theta)) => {
            let sys = directed_arc_system(&v.polys, &v.names, theta, job.n.expect("validated"))?;
            (sys.formula, sys.empty)
        }
        (None, None) => unreachable!("validated"),
    };
    let names = formula.display_names();
    let equations: Vec<String> = formula.equations().iter().map(|f| f.to_text(&names)).collect();
    let mut text = equations.join("\n");
    text.push('\n');
    Ok(Outcome {
        result: json!({ "variables": names, "equations": equations, "empty": empty }),
        text: Some(text),
        ..Outcome::json(Value::Null)
    })
}

fn jet(job: &JobSpec, v: &Validated) -> Result<Outcome, JobError> {
    let n = job.n.expect("validated") as u64;
    let germ = GermPresentation::new(v.names.len(), v.polys.clone())?;
    let lengths: Vec<u64> = (0..n).map(|k| germ_jet_length(&germ, k)).collect();
    let mut out = Outcome::json(Value::Null);
    let hilbert = match hilbert_data(&germ, n) {
        HilbertOutcome::Linear(h) => json!({ "e": h.e, "b": h.b, "start": h.start }),
        HilbertOutcome::NotYetLinear { .. } => {
            out.diagnostics.push(format!("jet lengths are not yet linear up to n = {n}; raise n"));
            out.status = UNVERIFIED;
            Value::Null
        }
    };
    out.result = json!({ "lengths": lengths, "hilbert": hilbert });
    Ok(out)
}

fn root_tuple(v: &Validated) -> TaggedTuple {
    let m = v.names.len();
    match &v.root {
        Root::Zero => TaggedTuple::zero(m),
        Root::Ones => TaggedTuple::ones(m),
        Root::Custom(t) => t.clone(),
    }
}

fn make_tree(job: &JobSpec, v: &Validated) -> Result<ResolutionTree, JobError> {
    let budget = job.budget.unwrap_or(DEFAULT_BUDGET);
    Ok(build_tree(&v.polys[0], &v.names, &root_tuple(v), budget)?)
}

fn tree_summary(t: &ResolutionTree) -> Value {
    let leaves = t.leaves().count();
    let stuck: Vec<String> = t.stuck().iter().map(|&i| t.nodes[i].theta.to_string()).collect();
    json!({
        "leaves": leaves,
        "empty": t.count(|k| matches!(k, NodeKind::Empty)),
        "regular": t.count(|k| matches!(k, NodeKind::Regular { .. })),
        "recursive": t.count(|k| matches!(k, NodeKind::Recursive { .. })),
        "stuck": stuck,
        "nodes": t.to_json().nodes,
    })
}

fn stuck_diagnostic(t: &ResolutionTree) -> Option<String> {
    let stuck = t.stuck();
    if stuck.is_empty() {
        return None;
    }
    let list: Vec<String> = stuck.iter().map(|&i| format!("{} (tin {})", t.nodes[i].theta, t.nodes[i].tin.to_text())).collect();
    Some(format!("tree has {} stuck leaves: {}", stuck.len(), list.join(", ")))
}

fn tree(job: &JobSpec, v: &Validated) -> Result<Outcome, JobError> {
    let t = make_tree(job, v)?;
    let dot = t.to_dot();
    let mut out = Outcome { text: Some(dot.clone()), dot: Some(dot), ..Outcome::json(tree_summary(&t)) };
    if let Some(d) = stuck_diagnostic(&t) {
        out.diagnostics.push(d);
        out.status = UNVERIFIED;
    }
    Ok(out)
}

fn series_value(s: &RationalSeries) -> Value {
    let shown: Vec<String> = s.denominator.iter().map(|(a, b)| format!("(1-L^{a}*t^{b})")).collect();
    json!({
        "series": s.to_json(),
        "denominator_text": shown.join("*"),
        "generators": s.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    })
}

fn igusa_series(job: &JobSpec, v: &Validated, out: &mut Outcome) -> Result<Option<RationalSeries>, JobError> {
    let t = make_tree(job, v)?;
    out.dot = Some(t.to_dot());
    out.result = json!({ "tree": tree_summary(&t) });
    if let Some(d) = stuck_diagnostic(&t) {
        out.diagnostics.push(d);
        out.status = UNVERIFIED;
        return Ok(None);
    }
    match assemble_igusa(&t) {
        Ok(s) => Ok(Some(s)),
        Err(e) => {
            out.diagnostics.push(e.to_string());
            out.status = UNVERIFIED;
            Ok(None)
        }
    }
}

fn igusa(job: &JobSpec, v: &Validated) -> Result<Outcome, JobError> {
    let mut out = Outcome::json(Value::Null);
    if let Some(s) = igusa_series(job, v, &mut out)? {
        let tree = out.result["tree"].take();
        out.result = series_value(&s);
        out.result["tree"] = tree;
    }
    Ok(out)
}

fn count(job: &JobSpec, v: &Validated, parallel: bool) -> Result<Outcome, JobError> {
    let q = job.q.expect("validated");
    let limits = SearchLimits { node_budget: job.budget.unwrap_or(u64::MAX), parallel };
    let report = count_arc_points_with(&v.polys, v.theta.as_ref(), q, job.n.expect("validated"), limits)?;
    let mut out = Outcome::json(json!({
        "q": report.q,
        "n": report.n,
        "counts": report.counts.iter().map(big).collect::<Vec<_>>(),
        "nodes": report.nodes,
        "complete": report.complete,
    }));
    if !report.complete {
        out.diagnostics.push("node budget exhausted; counts are lower bounds".into());
    }
    Ok(out)
}

fn verify(job: &JobSpec, v: &Validated) -> Result<Outcome, JobError> {
    let q = job.q.expect("validated");
    let mut out = Outcome::json(Value::Null);
    let Some(s) = igusa_series(job, v, &mut out)? else {
        return Ok(out);
    };
    let from = job.from.unwrap_or(s.n0);
    let to = job.to.unwrap_or(from + 2);
    if from > to {
        return fail(format!("empty range {from}..={to}"));
    }
    let f = ZariskiFormula::untagged(v.names.clone(), v.field, v.polys.clone())?;
    let report = verify_against_oracle(&s, &f, q, from..=to)?;
    if !report.all_ok {
        let n = report.first_mismatch.expect("some row failed");
        out.diagnostics.push(format!("series and oracle disagree from n = {n}"));
        out.status = UNVERIFIED;
    }
    let tree = out.result["tree"].take();
    out.result = series_value(&s);
    out.result["tree"] = tree;
    out.result["q"] = json!(q);
    out.result["rows"] = serde_json::to_value(&report.rows).expect("rows serialize");
    out.result["all_ok"] = json!(report.all_ok);
    out.result["first_mismatch"] = json!(report.first_mismatch);
    Ok(out)
}
