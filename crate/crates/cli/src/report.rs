//! Serializable results for each subcommand, with a plain-text rendering.
//!
//! Field order is fixed by declaration order and every list is sorted, so
//! the JSON form is stable enough for golden files.

use std::fmt::Write as _;

use coxring_core::cone::ExtremalityReport;
use coxring_core::verdict::{CheckOutcome, CrossCheck, Witness};
use coxring_core::{DivisorClass, Verdict};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub cross_check: CrossCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvesReport {
    /// `minus1` or `minus2`.
    pub curve_type: String,
    /// `configuration` for the curves of the surface, `all_classes` for the
    /// unfiltered enumeration preset.
    pub scope: String,
    pub degree_bound: Option<i64>,
    /// How the list was certified complete.
    pub completeness: String,
    pub count: usize,
    pub classes: Vec<DivisorClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsReport {
    pub span_rank: usize,
    pub count: usize,
    pub roots: Vec<DivisorClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    /// `eff` or `nef`.
    pub which: String,
    pub degenerate: bool,
    pub generators: Vec<DivisorClass>,
    pub extremal_rays: Vec<DivisorClass>,
    pub hilbert_basis: Option<Vec<DivisorClass>>,
    pub extremality: Option<ExtremalityReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub class: DivisorClass,
    pub limit: usize,
    pub count: usize,
    pub exceeded: bool,
    pub classes: Vec<DivisorClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub count: usize,
    pub classes: Vec<DivisorClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiReport {
    pub class: DivisorClass,
    pub square: i64,
    pub k_degree: i64,
    pub chi: i64,
    pub genus: i64,
    /// Absent when the effective cone of the surface is not available.
    pub h0_lower_bound: Option<i64>,
}

/// Any subcommand result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Report {
    Verdict(VerdictReport),
    Curves(CurvesReport),
    Roots(RootsReport),
    Cone(ConeReport),
    Orbit(OrbitReport),
    Witness(WitnessReport),
    Chi(ChiReport),
}

fn class_list(out: &mut String, title: &str, classes: &[DivisorClass]) {
    let _ = writeln!(out, "{title} ({})", classes.len());
    for c in classes {
        let _ = writeln!(out, "  {c}");
    }
}

fn outcome_name(o: CheckOutcome) -> &'static str {
    match o {
        CheckOutcome::Pass => "pass",
        CheckOutcome::Fail => "FAIL",
        CheckOutcome::Skipped => "skipped",
    }
}

fn json_name<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(v) => v.to_string(),
        Err(_) => "?".to_string(),
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Verdict(v) => {
                let verdict = &v.verdict;
                let tags: Vec<String> = verdict.tags.iter().map(json_name).collect();
                let _ = writeln!(out, "status    {}", json_name(&verdict.status));
                let _ = writeln!(
                    out,
                    "theorem   {}",
                    verdict.theorem.map_or("-".to_string(), |t| json_name(&t))
                );
                let _ = writeln!(out, "tags      {}", tags.join(", "));
                let _ = writeln!(out, "K^2       {}", verdict.k_squared);
                if let Some(rank) = verdict.root_span_rank {
                    let _ = writeln!(out, "rank      {rank}");
                }
                match &verdict.witness {
                    Witness::Generators(g) => class_list(&mut out, "generators", g),
                    Witness::InfiniteFamily(w) => class_list(&mut out, "infinite family", w),
                    Witness::Explanation(e) => {
                        let _ = writeln!(out, "reason    {e}");
                    }
                }
                for note in &verdict.notes {
                    let _ = writeln!(out, "note      {note}");
                }
                for check in &v.cross_check.checks {
                    let _ = writeln!(
                        out,
                        "check     {:<8} {}: {}",
                        outcome_name(check.outcome),
                        check.name,
                        check.detail
                    );
                }
            }
            Report::Curves(c) => {
                let _ = writeln!(out, "type      {}", c.curve_type);
                let _ = writeln!(out, "scope     {}", c.scope);
                let _ = writeln!(out, "complete  {}", c.completeness);
                class_list(&mut out, "classes", &c.classes);
            }
            Report::Roots(r) => {
                let _ = writeln!(out, "rank      {}", r.span_rank);
                class_list(&mut out, "roots", &r.roots);
            }
            Report::Cone(c) => {
                let _ = writeln!(out, "cone      {}", c.which);
                if c.degenerate {
                    let _ = writeln!(out, "warning   dual of the zero cone");
                }
                class_list(&mut out, "generators", &c.generators);
                class_list(&mut out, "extremal rays", &c.extremal_rays);
                if let Some(hb) = &c.hilbert_basis {
                    class_list(&mut out, "hilbert basis", hb);
                }
                if let Some(ext) = &c.extremality {
                    let _ = writeln!(out, "extremal  {}", json_name(&ext.outcome));
                }
            }
            Report::Orbit(o) => {
                let _ = writeln!(out, "class     {}", o.class);
                let _ = writeln!(out, "exceeded  {}", o.exceeded);
                class_list(&mut out, "orbit", &o.classes);
            }
            Report::Witness(w) => class_list(&mut out, "witness", &w.classes),
            Report::Chi(c) => {
                let _ = writeln!(out, "class     {}", c.class);
                let _ = writeln!(out, "D^2       {}", c.square);
                let _ = writeln!(out, "D.K       {}", c.k_degree);
                let _ = writeln!(out, "chi       {}", c.chi);
                let _ = writeln!(out, "genus     {}", c.genus);
                let h0 = c.h0_lower_bound.map_or("-".to_string(), |h| h.to_string());
                let _ = writeln!(out, "h0 >=     {h0}");
            }
        }
        out
    }

    /// Whether the report records a failed consistency check.
    pub fn has_failed_check(&self) -> bool {
        match self {
            Report::Verdict(v) => !v.cross_check.passed(),
            _ => false,
        }
    }
}
