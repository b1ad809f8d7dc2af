//! The built-in identity suite and the verification engine.

mod report;

use std::sync::OnceLock;

use glob::Pattern;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{assignments, evaluate, format_env, parse_identities, perturb_first_constant, Env, Identity};

pub use report::{Status, SuiteSummary};

pub const DEFAULT_ORDER: i64 = 60;

const SOURCES: [(&str, &str); 12] = [
    ("theta", include_str!("identities/theta.qid")),
    ("hecke", include_str!("identities/hecke.qid")),
    ("appell", include_str!("identities/appell.qid")),
    ("mock", include_str!("identities/mock.qid")),
    ("euler", include_str!("identities/euler.qid")),
    ("background", include_str!("identities/background.qid")),
    ("even", include_str!("identities/even.qid")),
    ("twothirds", include_str!("identities/twothirds.qid")),
    ("odd", include_str!("identities/odd.qid")),
    ("thetaids", include_str!("identities/thetaids.qid")),
    ("funceqn", include_str!("identities/funceqn.qid")),
    ("quasi", include_str!("identities/quasi.qid")),
];

/// Labels every one of which must be the anchor of at least one entry.
pub const MANIFEST: &str = include_str!("manifest.txt");

/// The parsed built-in suite, in file order.
pub fn catalog() -> &'static [Identity] {
    static CELL: OnceLock<Vec<Identity>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut all = Vec::new();
        for (file, text) in SOURCES {
            match parse_identities(text) {
                Ok(ids) => all.extend(ids),
                Err(e) => panic!("built-in identity file {file} is malformed: {e}"),
            }
        }
        all
    })
}

/// Anchors listed in the manifest, in order.
pub fn manifest_labels() -> Vec<&'static str> {
    MANIFEST.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect()
}

fn matches(id: &Identity, pattern: Option<&Pattern>) -> bool {
    match pattern {
        None => true,
        Some(p) => p.as_str() == "all" || p.matches(&id.name) || id.tags.iter().any(|t| p.matches(t)),
    }
}

fn compile(filter: Option<&str>) -> Result<Option<Pattern>> {
    filter
        .map(|f| Pattern::new(f).map_err(|e| Error::Eval(format!("bad pattern `{f}`: {e}"))))
        .transpose()
}

/// Entries whose name or one of whose tags matches the glob `filter`; `None` and `"all"` select everything.
pub fn list_identities(filter: Option<&str>) -> Result<Vec<&'static Identity>> {
    let pattern = compile(filter)?;
    Ok(catalog().iter().filter(|id| matches(id, pattern.as_ref())).collect())
}

/// Outcome of checking one identity under one assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub params: Env,
    /// Order actually compared to.
    pub order: i64,
    pub status: Status,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Order an entry is checked to when `requested` is asked for.
pub fn effective_order(id: &Identity, requested: i64) -> i64 {
    id.order.map_or(requested, |cap| cap.min(requested))
}

/// Evaluates both sides to `order` and compares on the common validity window.
pub fn verify(id: &Identity, env: &Env, order: i64) -> Result<Report> {
    let wrap = |e: Error| e.at(format!("{}[{}]", id.name, format_env(env)));
    let lhs = evaluate(&id.lhs, env, order).map_err(|e| wrap(e.at("lhs")))?;
    let rhs = evaluate(&id.rhs, env, order).map_err(|e| wrap(e.at("rhs")))?;
    let upto = order.min(lhs.order()).min(rhs.order());
    let status = match lhs.first_discrepancy(&rhs, upto).map_err(wrap)? {
        None => Status::Pass,
        Some((exponent, delta)) => Status::Fail { exponent, delta },
    };
    Ok(Report { name: id.name.clone(), params: env.clone(), order: upto, status })
}

/// Every (identity, assignment) instance of `ids`, in catalog then declaration order.
pub fn instances<'a>(ids: &[&'a Identity]) -> Result<Vec<(&'a Identity, Env)>> {
    let mut out = Vec::new();
    for id in ids {
        for env in assignments(id).map_err(|e| e.at(id.name.clone()))? {
            out.push((*id, env));
        }
    }
    Ok(out)
}

/// Runs every instance of `ids` on `jobs` worker threads.
///
/// Records come back in instance order no matter how the work was scheduled.
pub fn verify_instances(ids: &[&Identity], order: i64, jobs: usize) -> Result<SuiteSummary> {
    let work = instances(ids)?;
    let run = |(id, env): &(&Identity, Env)| {
        let o = effective_order(id, order);
        verify(id, env, o).unwrap_or_else(|e| Report {
            name: id.name.clone(),
            params: env.clone(),
            order: o,
            status: Status::Error(e.to_string()),
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Eval(format!("thread pool: {e}")))?;
    let records: Vec<Report> = pool.install(|| work.par_iter().map(run).collect());
    Ok(SuiteSummary::new(records))
}

/// Runs every catalog instance selected by `filter`.
pub fn verify_suite(filter: Option<&str>, order: i64, jobs: usize) -> Result<SuiteSummary> {
    verify_instances(&list_identities(filter)?, order, jobs)
}

/// The entry with the first rational constant of its right side bumped by one,
/// or `None` when the right side has no constant.
pub fn mutate(id: &Identity) -> Option<Identity> {
    let rhs = perturb_first_constant(&id.rhs)?;
    Some(Identity { name: format!("{}~mutant", id.name), rhs, ..id.clone() })
}

/// Exponent and delta of the first discrepancy of a mutated entry at `env`.
pub fn mutation_discrepancy(id: &Identity, env: &Env, order: i64) -> Result<Option<(i64, BigRational)>> {
    let Some(m) = mutate(id) else { return Ok(None) };
    Ok(match verify(&m, env, order)?.status {
        Status::Fail { exponent, delta } => Some((exponent, delta)),
        _ => None,
    })
}
