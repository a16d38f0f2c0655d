//! Finite-generation verdicts for the Cox ring.
//!
//! The known criteria are equivalences rather than algorithms, so `decide`
//! tries them in a fixed order: the positive-`K^2` corollary, the elliptic
//! pencil case, the Nagata case, then the general anticanonical criterion.
//! Anything those do not cover is reported as `Unknown`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cone::{check_extremal, effective_cone, Extremality};
use crate::config::SurfaceConfig;
use crate::enumerate::{
    effective_roots, minus_one_curves_certified, minus_two_curves, passes_recognition, span_rank,
    Completeness, MinusOneCurves,
};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::weyl::{infinitude_witness, is_infinite_case};

/// Number of (-1)-classes sampled for a NotFG witness.
pub const WITNESS_SIZE: usize = 100;

/// Fewest classes a NotFG witness may contain.
pub const MIN_WITNESS_SIZE: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Anticanonical,
    #[serde(rename = "K2_positive")]
    K2Positive,
    #[serde(rename = "K2_zero")]
    K2Zero,
    #[serde(rename = "K2_negative")]
    K2Negative,
    DelPezzo,
    EllipticPencil,
}

pub fn classify(config: &SurfaceConfig) -> BTreeSet<Tag> {
    let mut tags = BTreeSet::new();
    if config.is_anticanonical() {
        tags.insert(Tag::Anticanonical);
    }
    let k2 = config.model().k_squared();
    tags.insert(match k2.cmp(&0) {
        std::cmp::Ordering::Greater => Tag::K2Positive,
        std::cmp::Ordering::Equal => Tag::K2Zero,
        std::cmp::Ordering::Less => Tag::K2Negative,
    });
    if config.general_position && config.r <= 8 {
        tags.insert(Tag::DelPezzo);
    }
    if config.cubic_pencil {
        tags.insert(Tag::EllipticPencil);
    }
    tags
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    FG,
    NotFG,
    Unknown,
}

/// The result a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Anticanonical surfaces: finitely many (-1)- and (-2)-curves.
    Main,
    /// `h0(-K) = 2`: finiteness of (-1)-curves on the elliptic fibration.
    Main2,
    /// Extremality of the nef monoid.
    Criterion,
    #[serde(rename = "corollary_K2_positive")]
    CorollaryK2Positive,
    #[serde(rename = "corollary_delpezzo")]
    CorollaryDelPezzo,
    CorollaryAnticanonicalIntegral,
    Nagata,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Witness {
    /// Generators of the effective monoid.
    Generators(Vec<DivisorClass>),
    /// Distinct (-1)-curve classes from an infinite family.
    InfiniteFamily(Vec<DivisorClass>),
    Explanation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub theorem: Option<Theorem>,
    pub tags: BTreeSet<Tag>,
    pub k_squared: i64,
    /// Rank of the span of the effective roots, when the decision used it.
    pub root_span_rank: Option<usize>,
    pub witness: Witness,
    pub notes: Vec<String>,
}

/// Operator overrides for cases that cannot be detected from the configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecideOptions {
    /// Treat an `r = 9` configuration as having an elliptic pencil `|-K|`
    /// even though `cubic_pencil` is not set.
    pub halphen: bool,
}

const RANK_NOTE: &str =
    "finiteness of (-1)-curves on the elliptic fibration is inferred from a root span of rank 8";
const RECOGNITION_NOTE: &str =
    "(-1)-curves are recognized as (-1)-classes meeting every (-2)-curve nonnegatively";

fn unknown(config: &SurfaceConfig, theorem: Option<Theorem>, why: String) -> Verdict {
    Verdict {
        status: Status::Unknown,
        theorem,
        tags: classify(config),
        k_squared: config.model().k_squared(),
        root_span_rank: None,
        witness: Witness::Explanation(why),
        notes: Vec::new(),
    }
}

pub fn decide(config: &SurfaceConfig) -> Result<Verdict> {
    decide_with(config, DecideOptions::default())
}

/// Runs the decision waterfall. Only invalid configurations are errors;
/// every other failure becomes an `Unknown` verdict with an explanation.
pub fn decide_with(config: &SurfaceConfig, opts: DecideOptions) -> Result<Verdict> {
    config.validate()?;
    let mut config = config.clone();
    let mut notes = Vec::new();
    if opts.halphen && config.r == 9 && !config.cubic_pencil && !config.general_position {
        config.cubic_pencil = true;
        notes
            .push("elliptic pencil declared by the operator, not by the configuration".to_string());
    }
    let config = &config;
    let model = config.model();
    let k2 = model.k_squared();
    let tags = classify(config);

    if k2 > 0 {
        return Ok(match effective_cone(config) {
            Ok(cone) => Verdict {
                status: Status::FG,
                theorem: Some(Theorem::CorollaryK2Positive),
                tags,
                k_squared: k2,
                root_span_rank: None,
                witness: Witness::Generators(cone.generators),
                notes,
            },
            Err(e) => unknown(
                config,
                Some(Theorem::CorollaryK2Positive),
                format!("effective cone failed: {e}"),
            ),
        });
    }

    if config.cubic_pencil {
        let rank = match effective_roots(config).and_then(|roots| span_rank(&roots)) {
            Ok(rank) => rank,
            Err(e) => {
                return Ok(unknown(
                    config,
                    Some(Theorem::Main2),
                    format!("root closure failed: {e}"),
                ))
            }
        };
        notes.push(RECOGNITION_NOTE.to_string());
        if rank == 8 {
            notes.push(RANK_NOTE.to_string());
            if let Ok(MinusOneCurves {
                completeness: Completeness::StableUpTo { bound },
                ..
            }) = minus_one_curves_certified(config)
            {
                notes.push(format!(
                    "FG (heuristic enumeration): the (-1)-curve list was stable across one doubling of the degree bound, up to |d0| <= {bound}"
                ));
            }
            return Ok(match effective_cone(config) {
                Ok(cone) => Verdict {
                    status: Status::FG,
                    theorem: Some(Theorem::Main2),
                    tags,
                    k_squared: k2,
                    root_span_rank: Some(rank),
                    witness: Witness::Generators(cone.generators),
                    notes,
                },
                Err(e) => unknown(
                    config,
                    Some(Theorem::Main2),
                    format!("effective cone failed: {e}"),
                ),
            });
        }
        return Ok(match infinitude_witness(config, WITNESS_SIZE) {
            Ok(w) => Verdict {
                status: Status::NotFG,
                theorem: Some(Theorem::Main2),
                tags,
                k_squared: k2,
                root_span_rank: Some(rank),
                witness: Witness::InfiniteFamily(w),
                notes,
            },
            Err(e) => unknown(
                config,
                Some(Theorem::Main2),
                format!("witness generation failed: {e}"),
            ),
        });
    }

    if config.general_position && config.r >= 9 {
        return Ok(match infinitude_witness(config, WITNESS_SIZE) {
            Ok(w) => Verdict {
                status: Status::NotFG,
                theorem: Some(Theorem::Nagata),
                tags,
                k_squared: k2,
                root_span_rank: None,
                witness: Witness::InfiniteFamily(w),
                notes,
            },
            Err(e) => unknown(
                config,
                Some(Theorem::Nagata),
                format!("witness generation failed: {e}"),
            ),
        });
    }

    if config.is_anticanonical() {
        match effective_cone(config) {
            Ok(cone) => {
                notes.push(RECOGNITION_NOTE.to_string());
                return Ok(Verdict {
                    status: Status::FG,
                    theorem: Some(Theorem::Main),
                    tags,
                    k_squared: k2,
                    root_span_rank: None,
                    witness: Witness::Generators(cone.generators),
                    notes,
                });
            }
            Err(e) => {
                if is_infinite_case(config).unwrap_or(false) {
                    if let Ok(w) = infinitude_witness(config, WITNESS_SIZE) {
                        return Ok(Verdict {
                            status: Status::NotFG,
                            theorem: Some(Theorem::Main),
                            tags,
                            k_squared: k2,
                            root_span_rank: None,
                            witness: Witness::InfiniteFamily(w),
                            notes,
                        });
                    }
                }
                return Ok(unknown(
                    config,
                    Some(Theorem::Main),
                    format!("anticanonical, but neither finiteness nor an infinite family could be established: {e}"),
                ));
            }
        }
    }

    Ok(unknown(
        config,
        None,
        format!("K^2 = {k2} and -K is not known to be effective; no available criterion applies"),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub outcome: CheckOutcome,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub checks: Vec<Check>,
}

impl CrossCheck {
    /// No check failed (skipped checks are fine).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != CheckOutcome::Fail)
    }

    fn push(&mut self, name: &str, outcome: CheckOutcome, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            outcome,
            detail: detail.into(),
        });
    }
}

/// Classes the effective monoid may be generated by: (-1)-classes, roots,
/// and the nonnegative-square classes of positive degree added at low rank.
fn is_admissible_generator(model: &SurfaceModel, g: &DivisorClass) -> Result<bool> {
    Ok(model.is_minus_one_class(g)? || model.is_root(g)? || (g.d0() > 0 && model.square(g)? >= 0))
}

fn pass_or_fail(ok: bool) -> CheckOutcome {
    if ok {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail
    }
}

/// Re-verifies a verdict on the fronts that can be computed: an FG verdict
/// needs a finite effective cone and a nef monoid that is not shown to be
/// non-extremal; a NotFG verdict needs a valid infinite family.
pub fn cross_check(config: &SurfaceConfig, verdict: &Verdict) -> Result<CrossCheck> {
    let mut report = CrossCheck::default();
    let model = config.model();
    match (&verdict.status, &verdict.witness) {
        (Status::Unknown, _) => {}
        (Status::FG, Witness::Generators(gens)) => {
            let mut ok = !gens.is_empty();
            for g in gens {
                ok &= is_admissible_generator(&model, g)?;
            }
            report.push(
                "witness_generators",
                pass_or_fail(ok),
                format!("{} generators", gens.len()),
            );
            let eff_config = cone_config(config, verdict);
            match effective_cone(&eff_config) {
                Ok(cone) => report.push(
                    "effective_cone_finite",
                    pass_or_fail(!cone.generators.is_empty() && cone.generators == *gens),
                    format!(
                        "{} generators, {} extremal rays",
                        cone.generators.len(),
                        cone.extremal_rays.len()
                    ),
                ),
                Err(e) => report.push("effective_cone_finite", CheckOutcome::Fail, e.to_string()),
            }
            match check_extremal(&eff_config) {
                Ok(ext) => {
                    let detail = format!(
                        "{:?} over {} nef Hilbert basis elements",
                        ext.outcome,
                        ext.generators.len()
                    );
                    report.push(
                        "extremality",
                        pass_or_fail(ext.outcome != Extremality::NotExtremal),
                        detail,
                    );
                }
                Err(e) if e.is_capacity_error() => {
                    report.push("extremality", CheckOutcome::Skipped, e.to_string())
                }
                Err(e) => report.push("extremality", CheckOutcome::Fail, e.to_string()),
            }
        }
        (Status::NotFG, Witness::InfiniteFamily(family)) => {
            let distinct: BTreeSet<_> = family.iter().collect();
            report.push(
                "witness_distinct",
                pass_or_fail(distinct.len() == family.len() && family.len() >= MIN_WITNESS_SIZE),
                format!("{} distinct classes", distinct.len()),
            );
            let minus_two = minus_two_curves(&cone_config(config, verdict))?;
            let mut ok = true;
            for c in family {
                ok &= passes_recognition(&model, c, &minus_two)?;
            }
            report.push(
                "witness_recognition",
                pass_or_fail(ok),
                format!("checked against {} (-2)-curves", minus_two.len()),
            );
            report.push(
                "effective_cone_finite",
                CheckOutcome::Skipped,
                "infinite case",
            );
            report.push("extremality", CheckOutcome::Skipped, "infinite case");
        }
        (status, _) => {
            return Err(Error::InvariantBreach(format!(
                "verdict status {status:?} carries the wrong kind of witness"
            )))
        }
    }
    Ok(report)
}

/// The configuration the verdict was computed on, including an operator-declared pencil.
fn cone_config(config: &SurfaceConfig, verdict: &Verdict) -> SurfaceConfig {
    let mut c = config.clone();
    if verdict.tags.contains(&Tag::EllipticPencil) {
        c.cubic_pencil = true;
    }
    c
}
