//! The fibering test: Property (M) per finite quotient, and a sweep over a
//! group catalog that either finds an obstruction or accumulates evidence.
//!
//! A pair `(N, phi)` that fibers has, for every epimorphism `alpha` onto a
//! finite group `G`, a monic `Delta_1` with
//! `span = |G| * ||phi||_T + (1 + b3) * div`. A quotient violating this
//! certifies that `phi` is not a fibered class. Failures of monicness and
//! vanishing do not depend on the supplied norm; a degree failure does.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fingrp::{FiniteGroup, Homomorphism};
use crate::laurent::LaurentPoly;
use crate::presentation::GroupPresentation;
use crate::twisted::{twisted_alexander, AlexanderResult, TwistedError};

#[derive(Debug, Error)]
pub enum CriterionError {
    #[error("no Thurston norm supplied for `{0}`")]
    MissingNorm(String),
    #[error("catalog is empty after filtering (max order {max_order}, solvable only: {solvable_only})")]
    EmptyCatalog { max_order: usize, solvable_only: bool },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("{group} with hom {hom}: {source}")]
    Twisted { group: String, hom: String, source: TwistedError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL_NONMONIC")]
    FailNonmonic,
    #[serde(rename = "FAIL_DEGREE")]
    FailDegree,
    #[serde(rename = "FAIL_VANISHING")]
    FailVanishing,
}

impl Status {
    pub fn is_fail(self) -> bool {
        self != Status::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::FailNonmonic => "FAIL_NONMONIC",
            Status::FailDegree => "FAIL_DEGREE",
            Status::FailVanishing => "FAIL_VANISHING",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `|G| * norm + (1 + b3) * div`.
pub fn expected_span(group_order: usize, norm: u64, b3: u64, div: u64) -> u64 {
    group_order as u64 * norm + (1 + b3) * div
}

/// Property (M) status of one quotient. Vanishing dominates, then monicness.
pub fn property_m(result: &AlexanderResult, norm: u64, b3: u64) -> Status {
    if result.delta1.is_zero() {
        return Status::FailVanishing;
    }
    if !result.monic {
        return Status::FailNonmonic;
    }
    let span = result.span.expect("nonzero polynomial has a span");
    if span == expected_span(result.group_order, norm, b3, result.div) {
        Status::Pass
    } else {
        Status::FailDegree
    }
}

/// Smallest integer norm compatible with the degree equality:
/// `ceil((span - (1 + b3) div) / |G|)`, clamped at 0.
pub fn norm_lower_bound(result: &AlexanderResult, b3: u64) -> Option<u64> {
    let span = result.span? as i64;
    let excess = span - ((1 + b3) * result.div) as i64;
    let order = result.group_order as i64;
    Some(if excess <= 0 { 0 } else { ((excess + order - 1) / order) as u64 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientReport {
    pub group: String,
    pub order: usize,
    /// Generator images, `a=(1 2),b=()`.
    pub hom: String,
    pub images: Vec<usize>,
    pub result: AlexanderResult,
    pub expected_span: Option<u64>,
    /// `None` in norm-free mode when `Delta_1` is monic (degree unchecked).
    pub status: Option<Status>,
    pub lower_bound: Option<u64>,
}

impl QuotientReport {
    pub fn delta1(&self) -> &LaurentPoly {
        &self.result.delta1
    }

    pub fn is_fail(&self) -> bool {
        self.status.is_some_and(Status::is_fail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    #[serde(rename = "NOT_FIBERED")]
    NotFibered,
    #[serde(rename = "CONSISTENT_WITH_FIBERED")]
    ConsistentWithFibered,
    /// Norm-free mode: no fibering verdict is drawn.
    #[serde(rename = "NO_VERDICT")]
    NoVerdict,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::NotFibered => "NOT_FIBERED",
            Outcome::ConsistentWithFibered => "CONSISTENT_WITH_FIBERED",
            Outcome::NoVerdict => "NO_VERDICT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Index into the report list of the first failing quotient.
    pub witness: Option<usize>,
    /// Largest group order swept.
    pub bound: usize,
    pub solvable_only: bool,
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub max_order: usize,
    pub solvable_only: bool,
    /// Keep going after the first failure.
    pub exhaustive: bool,
    /// Include non-surjective homs, each re-targeted onto its image.
    pub retarget_images: bool,
    pub workers: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { max_order: 24, solvable_only: false, exhaustive: false, retarget_images: false, workers: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub verdict: Verdict,
    pub reports: Vec<QuotientReport>,
    /// `(name, order, homs tested)` per group visited.
    pub groups: Vec<(String, usize, usize)>,
    pub caveats: Vec<String>,
}

pub const NORM_CAVEAT: &str =
    "FAIL_DEGREE conclusions assume the supplied Thurston norm is correct; FAIL_NONMONIC and FAIL_VANISHING do not depend on it.";
pub const SOLVABLE_CAVEAT: &str =
    "solvable-only mode: the fibering equivalence for solvable quotients needs the fundamental group to be residually finite solvable, which this tool does not check.";
pub const FREE_CAVEAT: &str =
    "presentation has no relators (free group of rank 1): this is outside the manifold-pair setting and the verdict has no topological meaning.";
pub const NORM_FREE_CAVEAT: &str =
    "no Thurston norm supplied: reporting monicness and norm lower bounds only, no fibering verdict.";

struct WorkItem {
    group: FiniteGroup,
    hom: Homomorphism,
}

fn work_items(pres: &GroupPresentation, group: &FiniteGroup, opts: &SweepOptions) -> Vec<WorkItem> {
    let homs = group.dedup_inner(group.enumerate_homs(pres, !opts.retarget_images));
    homs.into_iter()
        .map(|hom| {
            if hom.surjective {
                WorkItem { group: group.clone(), hom }
            } else {
                let (sub, h) = group.image_subgroup(&hom);
                WorkItem { group: sub, hom: h }
            }
        })
        .collect()
}

fn evaluate(pres: &GroupPresentation, item: &WorkItem) -> Result<QuotientReport, CriterionError> {
    let result = twisted_alexander(pres, &item.group, &item.hom).map_err(|source| CriterionError::Twisted {
        group: item.group.name.clone(),
        hom: item.hom.describe(&item.group),
        source,
    })?;
    let b3 = pres.b3();
    let (status, expected) = match pres.thurston_norm {
        Some(norm) => {
            (Some(property_m(&result, norm, b3)), Some(expected_span(result.group_order, norm, b3, result.div)))
        }
        None => {
            let status = if result.delta1.is_zero() {
                Some(Status::FailVanishing)
            } else if !result.monic {
                Some(Status::FailNonmonic)
            } else {
                None
            };
            (status, None)
        }
    };
    let lower_bound = if pres.thurston_norm.is_none() { norm_lower_bound(&result, b3) } else { None };
    Ok(QuotientReport {
        group: item.group.name.clone(),
        order: item.group.order(),
        hom: item.hom.describe(&item.group),
        images: item.hom.images.clone(),
        result,
        expected_span: expected,
        status,
        lower_bound,
    })
}

fn run(pres: &GroupPresentation, catalog: &[FiniteGroup], opts: &SweepOptions) -> Result<SweepOutcome, CriterionError> {
    let mut groups: Vec<&FiniteGroup> =
        catalog.iter().filter(|g| g.order() <= opts.max_order && (!opts.solvable_only || g.solvable)).collect();
    groups.sort_by(|a, b| (a.order(), &a.name).cmp(&(b.order(), &b.name)));
    if groups.is_empty() {
        return Err(CriterionError::EmptyCatalog { max_order: opts.max_order, solvable_only: opts.solvable_only });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| CriterionError::Pool(e.to_string()))?;
    let norm_free = pres.thurston_norm.is_none();

    let mut reports: Vec<QuotientReport> = Vec::new();
    let mut visited = Vec::new();
    let mut witness = None;
    let mut bound = 0;
    for group in groups {
        let items = work_items(pres, group, opts);
        let computed: Vec<QuotientReport> =
            pool.install(|| items.par_iter().map(|item| evaluate(pres, item)).collect::<Result<Vec<_>, _>>())?;
        visited.push((group.name.clone(), group.order(), computed.len()));
        bound = group.order();
        for report in computed {
            let fail = report.is_fail();
            reports.push(report);
            if fail && witness.is_none() {
                witness = Some(reports.len() - 1);
                if !opts.exhaustive && !norm_free {
                    break;
                }
            }
        }
        if witness.is_some() && !opts.exhaustive && !norm_free {
            break;
        }
    }

    let outcome = if norm_free {
        Outcome::NoVerdict
    } else if witness.is_some() {
        Outcome::NotFibered
    } else {
        Outcome::ConsistentWithFibered
    };
    let mut caveats = Vec::new();
    if norm_free {
        caveats.push(NORM_FREE_CAVEAT.to_string());
    } else {
        caveats.push(NORM_CAVEAT.to_string());
    }
    if opts.solvable_only {
        caveats.push(SOLVABLE_CAVEAT.to_string());
    }
    if pres.relators().is_empty() {
        caveats.push(FREE_CAVEAT.to_string());
    }
    Ok(SweepOutcome {
        verdict: Verdict {
            outcome,
            witness: if norm_free { None } else { witness },
            bound,
            solvable_only: opts.solvable_only,
        },
        reports,
        groups: visited,
        caveats,
    })
}

/// Runs the fibering test over `catalog`, ascending by `(order, name)`.
/// Stops at the first failing quotient unless `opts.exhaustive` is set.
pub fn sweep(
    pres: &GroupPresentation,
    catalog: &[FiniteGroup],
    opts: &SweepOptions,
) -> Result<SweepOutcome, CriterionError> {
    if pres.thurston_norm.is_none() {
        return Err(CriterionError::MissingNorm(pres.name.clone()));
    }
    run(pres, catalog, opts)
}

/// Norm-free variant of [`sweep`]: per-quotient monicness and norm lower
/// bounds, no verdict, never short-circuits.
pub fn survey(
    pres: &GroupPresentation,
    catalog: &[FiniteGroup],
    opts: &SweepOptions,
) -> Result<SweepOutcome, CriterionError> {
    let pres = pres.clone().with_norm(None);
    run(&pres, catalog, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_catalog, corpus_entry};

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn result(delta1: &str, order: usize, div: u64) -> AlexanderResult {
        let d = p(delta1);
        AlexanderResult {
            delta0: p("t - 1"),
            monic: d.is_monic(),
            span: d.span_degree().ok(),
            delta1: d,
            column_used: 0,
            group_order: order,
            div,
        }
    }

    #[test]
    fn property_m_examples() {
        assert_eq!(property_m(&result("t^2 - t + 1", 1, 1), 1, 0), Status::Pass);
        assert_eq!(property_m(&result("2t^2 - 3t + 2", 1, 1), 1, 0), Status::FailNonmonic);
        assert_eq!(property_m(&result("0", 2, 2), 1, 0), Status::FailVanishing);
        assert_eq!(property_m(&result("t^2 - t + 1", 1, 1), 2, 0), Status::FailDegree);
        assert_eq!(property_m(&result("t^2 - t + 1", 1, 1), 0, 1), Status::Pass);
        assert_eq!(expected_span(2, 1, 0, 2), 4);
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(norm_lower_bound(&result("t^2 - t + 1", 1, 1), 0), Some(1));
        assert_eq!(norm_lower_bound(&result("t^4 + t^2 + 1", 2, 2), 0), Some(1));
        assert_eq!(norm_lower_bound(&result("1", 2, 2), 0), Some(0));
        assert_eq!(norm_lower_bound(&result("0", 2, 2), 0), None);
    }

    #[test]
    fn knot_5_2_fails_at_trivial_quotient() {
        let pres = corpus_entry("5_2").unwrap();
        let out = sweep(&pres, &builtin_catalog(), &SweepOptions::default()).unwrap();
        assert_eq!(out.verdict.outcome, Outcome::NotFibered);
        let w = &out.reports[out.verdict.witness.unwrap()];
        assert_eq!((w.group.as_str(), w.status), ("trivial", Some(Status::FailNonmonic)));
        assert_eq!(w.result.delta1, p("2t^2 - 3t + 2"));
        assert_eq!(out.reports.len(), 1);
    }

    #[test]
    fn trefoil_small_sweep() {
        let pres = corpus_entry("trefoil").unwrap();
        let opts = SweepOptions { max_order: 6, ..Default::default() };
        let out = sweep(&pres, &builtin_catalog(), &opts).unwrap();
        assert_eq!(out.verdict.outcome, Outcome::ConsistentWithFibered);
        assert_eq!(out.verdict.bound, 6);
        assert!(out.reports.iter().all(|r| r.status == Some(Status::Pass)));
    }

    #[test]
    fn missing_norm_and_empty_catalog() {
        let pres = corpus_entry("trefoil").unwrap().with_norm(None);
        assert!(matches!(
            sweep(&pres, &builtin_catalog(), &SweepOptions::default()),
            Err(CriterionError::MissingNorm(_))
        ));
        let pres = corpus_entry("trefoil").unwrap();
        let opts = SweepOptions { max_order: 100, solvable_only: true, ..Default::default() };
        let only_a5: Vec<_> = builtin_catalog().into_iter().filter(|g| g.name == "A5").collect();
        assert!(matches!(sweep(&pres, &only_a5, &opts), Err(CriterionError::EmptyCatalog { .. })));
    }

    #[test]
    fn survey_reports_bounds() {
        let pres = corpus_entry("figure8").unwrap();
        let opts = SweepOptions { max_order: 5, ..Default::default() };
        let out = survey(&pres, &builtin_catalog(), &opts).unwrap();
        assert_eq!(out.verdict.outcome, Outcome::NoVerdict);
        assert!(out.reports.iter().all(|r| r.lower_bound == Some(1) && r.status.is_none()));
    }

    #[test]
    fn free_group_degenerate_case() {
        let pres = GroupPresentation::parse("gens a\nphi a 1\nnorm 0").unwrap();
        let opts = SweepOptions { max_order: 6, exhaustive: true, ..Default::default() };
        let out = sweep(&pres, &builtin_catalog(), &opts).unwrap();
        assert!(out.caveats.iter().any(|c| c == FREE_CAVEAT));
        for r in &out.reports {
            assert!(r.result.delta1.is_one());
            assert_eq!(r.result.span, Some(0));
            // expected span is div >= 1, so the degree test always fails here
            assert_eq!(r.expected_span, Some(r.result.div));
            assert_eq!(r.status, Some(Status::FailDegree));
        }
    }
}
