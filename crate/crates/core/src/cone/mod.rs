//! Effective and nef cones, their Hilbert bases, and the extremality check.
//!
//! Duality is taken with respect to the intersection form: the nef cone of
//! `cone(G)` is `{y : y . g >= 0 for all g in G}`. Internally cones are
//! handled as subsets of `Z^(r+1)` with the Euclidean product; the form
//! `diag(1, -1, ..., -1)` converts between the two.

pub mod dd;
pub mod hilbert;
pub mod wrap;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::config::SurfaceConfig;
use crate::enumerate::{minus_one_curves_certified, minus_two_curves};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::linalg;
use crate::weyl;

use dd::RayDescription;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    Effective,
    Nef,
    Other,
}

/// A finitely generated cone in `Pic`.
#[derive(Debug)]
pub struct ConeDesc {
    pub generators: Vec<DivisorClass>,
    pub kind: ConeKind,
    /// Primitive generators of the extremal rays, sorted.
    pub extremal_rays: Vec<DivisorClass>,
    pub hilbert_basis: Option<Vec<DivisorClass>>,
    /// Set when the cone was derived from degenerate input (the dual of the zero cone).
    pub degenerate: bool,
    r: usize,
    /// Euclidean dual of `cone(generators)`, computed on demand.
    dual: OnceLock<RayDescription>,
    /// Euclidean inequalities known to cut out the cone, possibly redundant.
    known_inequalities: Option<Vec<Vec<i64>>>,
}

impl Clone for ConeDesc {
    fn clone(&self) -> Self {
        let dual = OnceLock::new();
        if let Some(d) = self.dual.get() {
            let _ = dual.set(d.clone());
        }
        ConeDesc {
            generators: self.generators.clone(),
            kind: self.kind,
            extremal_rays: self.extremal_rays.clone(),
            hilbert_basis: self.hilbert_basis.clone(),
            degenerate: self.degenerate,
            r: self.r,
            dual,
            known_inequalities: self.known_inequalities.clone(),
        }
    }
}

/// Switches between a class and the Euclidean normal of `x -> x . class`.
fn flip(v: &[i64]) -> Vec<i64> {
    let mut out = v.to_vec();
    for x in out.iter_mut().skip(1) {
        *x = -*x;
    }
    out
}

fn to_class(v: &[i64]) -> DivisorClass {
    DivisorClass::from_coords(v).expect("nonempty coordinate vector")
}

/// Above this many generators the dual is found by gift wrapping when a
/// valid functional is known.
const WRAP_THRESHOLD: usize = 1000;

fn dot(a: &[i64], b: &[i64]) -> Result<i128> {
    let mut acc: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        acc += *x as i128 * *y as i128;
    }
    Ok(acc)
}

fn normalized(mut rays: Vec<DivisorClass>) -> Vec<DivisorClass> {
    rays = rays.into_iter().map(|c| c.primitive()).collect();
    rays.sort();
    rays.dedup();
    rays
}

impl ConeDesc {
    /// The cone spanned by `generators` in `Pic` of the `r`-point blow-up.
    pub fn from_generators(
        r: usize,
        generators: Vec<DivisorClass>,
        kind: ConeKind,
    ) -> Result<Self> {
        let model = SurfaceModel::new(r);
        for g in &generators {
            model.check(g)?;
        }
        let mut generators = generators;
        generators.sort();
        generators.dedup();
        let mut cone = ConeDesc {
            generators,
            kind,
            extremal_rays: Vec::new(),
            hilbert_basis: None,
            degenerate: false,
            r,
            dual: OnceLock::new(),
            known_inequalities: None,
        };
        cone.extremal_rays = cone.compute_extremal_rays()?;
        Ok(cone)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.r + 1
    }

    pub fn is_zero(&self) -> bool {
        self.generators.iter().all(DivisorClass::is_zero)
    }

    /// Euclidean dual of the generators' cone, by double description.
    pub fn euclidean_dual(&self) -> Result<&RayDescription> {
        if let Some(d) = self.dual.get() {
            return Ok(d);
        }
        let rows: Vec<Vec<i64>> = self.generators.iter().map(DivisorClass::coords).collect();
        let seed = self
            .known_inequalities
            .as_ref()
            .and_then(|k| k.iter().find(|a| a.iter().any(|&x| x != 0)));
        let d = match seed {
            Some(seed) if rows.len() > WRAP_THRESHOLD && linalg::rank(&rows)? == self.dim() => {
                wrap::dual_by_wrapping(&rows, self.dim(), seed)?
            }
            _ => dd::cone_from_inequalities(&rows, self.dim())?,
        };
        let _ = self.dual.set(d);
        Ok(self.dual.get().expect("just set"))
    }

    /// Euclidean normals `a` with `cone = {x : a . x >= 0}`.
    pub fn inequalities(&self) -> Result<Vec<Vec<i64>>> {
        if let Some(known) = &self.known_inequalities {
            return Ok(known.clone());
        }
        let d = self.euclidean_dual()?;
        let mut out = d.rays.clone();
        for l in &d.lineality {
            out.push(l.clone());
            out.push(l.iter().map(|x| -x).collect());
        }
        Ok(out)
    }

    pub fn contains(&self, x: &DivisorClass) -> Result<bool> {
        SurfaceModel::new(self.r).check(x)?;
        let v = x.coords();
        let nonnegative = |rows: &[Vec<i64>]| -> Result<bool> {
            for a in rows {
                if dot(a, &v)? < 0 {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        if let Some(known) = &self.known_inequalities {
            return nonnegative(known);
        }
        let d = self.euclidean_dual()?;
        if !nonnegative(&d.rays)? {
            return Ok(false);
        }
        for l in &d.lineality {
            if dot(l, &v)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn is_pointed(&self) -> Result<bool> {
        let d = self.euclidean_dual()?;
        let mut rows = d.rays.clone();
        rows.extend(d.lineality.iter().cloned());
        Ok(linalg::rank(&rows)? == self.dim())
    }

    fn compute_extremal_rays(&self) -> Result<Vec<DivisorClass>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let n = self.dim();
        if !self.is_pointed()? {
            let d = dd::cone_from_inequalities(&self.inequalities()?, n)?;
            let mut rays: Vec<DivisorClass> = d.rays.iter().map(|v| to_class(v)).collect();
            for l in &d.lineality {
                rays.push(to_class(l));
                rays.push(to_class(&l.iter().map(|x| -x).collect::<Vec<_>>()));
            }
            return Ok(normalized(rays));
        }
        let d = self.euclidean_dual()?;
        let mut rays = Vec::new();
        for g in normalized(self.generators.clone()) {
            if g.is_zero() {
                continue;
            }
            let v = g.coords();
            let mut tight: Vec<Vec<i64>> = d.lineality.clone();
            for u in &d.rays {
                if dot(u, &v)? == 0 {
                    tight.push(u.clone());
                }
            }
            if linalg::rank(&tight)? == n - 1 {
                rays.push(g);
            }
        }
        Ok(rays)
    }

    /// Computes and stores the Hilbert basis.
    pub fn with_hilbert_basis(mut self) -> Result<Self> {
        self.hilbert_basis = Some(hilbert_basis(&self)?);
        Ok(self)
    }
}

/// The cone of classes meeting every generator of `cone` nonnegatively.
pub fn nef_dual(cone: &ConeDesc) -> Result<ConeDesc> {
    let r = cone.r;
    let dim = cone.dim();
    let (rays, lineality, degenerate) = if cone.generators.is_empty() {
        let basis: Vec<Vec<i64>> = (0..dim)
            .map(|i| {
                let mut v = vec![0; dim];
                v[i] = 1;
                v
            })
            .collect();
        (Vec::new(), basis, true)
    } else {
        let d = cone.euclidean_dual()?;
        (d.rays.clone(), d.lineality.clone(), false)
    };
    let mut generators: Vec<DivisorClass> = rays.iter().map(|u| to_class(&flip(u))).collect();
    for l in &lineality {
        let c = to_class(&flip(l));
        generators.push(c.checked_neg()?);
        generators.push(c);
    }
    let generators = normalized(generators);
    let known: Vec<Vec<i64>> = cone.generators.iter().map(|g| flip(&g.coords())).collect();
    Ok(ConeDesc {
        extremal_rays: generators.clone(),
        generators,
        kind: ConeKind::Nef,
        hilbert_basis: None,
        degenerate,
        r,
        dual: OnceLock::new(),
        known_inequalities: Some(known),
    })
}

/// Minimal generating set of the monoid `cone ∩ Pic`, sorted.
pub fn hilbert_basis(cone: &ConeDesc) -> Result<Vec<DivisorClass>> {
    if cone.is_zero() {
        return Ok(Vec::new());
    }
    let basis = hilbert::hilbert_basis(&cone.inequalities()?, cone.dim())?;
    Ok(basis.iter().map(|v| to_class(v)).collect())
}

/// Extra generators needed on surfaces with too few negative curves:
/// `l` for `r <= 2` and `l - e1` for `r` in `{1, 2}`.
fn low_rank_generators(r: usize) -> Vec<DivisorClass> {
    let mut out = Vec::new();
    if r <= 2 {
        out.push(DivisorClass::line(r));
    }
    if (1..=2).contains(&r) {
        out.push(DivisorClass::line_through(r, &[1]));
    }
    out
}

/// The effective cone, generated by the (-1)- and (-2)-curves.
pub fn effective_cone(config: &SurfaceConfig) -> Result<ConeDesc> {
    let minus_one = match minus_one_curves_certified(config) {
        Ok(m) => m.curves,
        Err(Error::InfiniteOrUndecided(msg)) => {
            if weyl::is_infinite_case(config)? {
                return Err(Error::NotFinitelyGenerated(format!(
                    "{msg}; infinitely many (-1)-curves, see the witness generator"
                )));
            }
            return Err(Error::InfiniteOrUndecided(msg));
        }
        Err(e) => return Err(e),
    };
    let mut generators = minus_one;
    generators.extend(minus_two_curves(config)?);
    generators.extend(low_rank_generators(config.r));
    ConeDesc::from_generators(config.r, generators, ConeKind::Effective)
}

/// Which sufficient condition certified a nef class as semi-ample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredicateOutcome {
    /// `n . (-K) > 0`.
    AnticanonicalPositive,
    /// `n^2 > 0`.
    Big,
    /// `n` is a nonnegative multiple of `-K` and `K^2 = 0`.
    FiberMultiple,
    /// `n^2 < 0`: not even nef, so certainly not semi-ample.
    Fails,
    /// None of the sufficient conditions applies.
    Undecided,
}

impl PredicateOutcome {
    pub fn passes(self) -> bool {
        matches!(
            self,
            PredicateOutcome::AnticanonicalPositive
                | PredicateOutcome::Big
                | PredicateOutcome::FiberMultiple
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremality {
    Extremal,
    NotExtremal,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalityReport {
    pub outcome: Extremality,
    pub generators: Vec<(DivisorClass, PredicateOutcome)>,
}

/// Semi-ampleness predicate for a nef class.
pub fn semi_ample_predicate(model: &SurfaceModel, n: &DivisorClass) -> Result<PredicateOutcome> {
    let anti = model.anticanonical();
    let deg = model.intersect(n, &anti)?;
    let sq = model.square(n)?;
    if deg > 0 {
        return Ok(PredicateOutcome::AnticanonicalPositive);
    }
    if sq > 0 {
        return Ok(PredicateOutcome::Big);
    }
    if sq < 0 {
        return Ok(PredicateOutcome::Fails);
    }
    if model.k_squared() == 0 {
        let p = n.primitive();
        let multiple = n.is_zero() || p == anti.primitive() && n.d0() * anti.d0() >= 0;
        if multiple {
            return Ok(PredicateOutcome::FiberMultiple);
        }
    }
    Ok(PredicateOutcome::Undecided)
}

/// Applies the predicate to every generator: all pass means extremal, a
/// definite failure means not extremal, anything else is unknown.
pub fn extremality_of(
    model: &SurfaceModel,
    generators: &[DivisorClass],
) -> Result<ExtremalityReport> {
    let mut entries = Vec::with_capacity(generators.len());
    for n in generators {
        entries.push((n.clone(), semi_ample_predicate(model, n)?));
    }
    let outcome = if entries.iter().all(|(_, o)| o.passes()) {
        Extremality::Extremal
    } else if entries.iter().any(|(_, o)| *o == PredicateOutcome::Fails) {
        Extremality::NotExtremal
    } else {
        Extremality::Unknown
    };
    Ok(ExtremalityReport {
        outcome,
        generators: entries,
    })
}

/// Checks the Hilbert basis of the nef monoid against the semi-ampleness predicate.
pub fn check_extremal(config: &SurfaceConfig) -> Result<ExtremalityReport> {
    let eff = effective_cone(config)?;
    let nef = nef_dual(&eff)?;
    let hb = hilbert_basis(&nef)?;
    extremality_of(&config.model(), &hb)
}
