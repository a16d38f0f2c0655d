//! Exhaustive enumeration of (-1)-classes and roots, and the (-1)- and
//! (-2)-curves of a configuration.
//!
//! A (-1)-class is accepted as a curve iff it meets every (-2)-curve
//! nonnegatively. This recognition rule is the main modeling assumption of the
//! crate and every verdict built on it says so.

use std::collections::BTreeSet;

use crate::config::SurfaceConfig;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::linalg;

/// Default `|d0|` window for root closures over nine or more points.
pub const DEFAULT_DEGREE_WINDOW: i64 = 64;

/// Initial degree bound of the doubling search used for the rational elliptic
/// surface with a rank-8 root span.
const PENCIL_INITIAL_BOUND: i64 = 4;
const PENCIL_MAX_BOUND: i64 = 256;

/// Target `(D^2, D.K)` of an enumeration, with an optional cap on `|d0|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassQuery {
    pub self_int: i64,
    pub k_degree: i64,
    pub degree_bound: Option<i64>,
}

impl ClassQuery {
    pub fn minus_one() -> Self {
        ClassQuery {
            self_int: -1,
            k_degree: -1,
            degree_bound: None,
        }
    }

    pub fn roots() -> Self {
        ClassQuery {
            self_int: -2,
            k_degree: 0,
            degree_bound: None,
        }
    }

    pub fn with_degree_bound(self, bound: i64) -> Self {
        ClassQuery {
            degree_bound: Some(bound),
            ..self
        }
    }
}

/// Integer `d0` range allowed by Cauchy-Schwarz,
/// `(3*d0 + k)^2 <= r*(d0^2 - s)`, for `r <= 8`.
///
/// The quadratic `(9 - r)*d^2 + 6*k*d + k^2 + r*s <= 0` has a positive
/// leading coefficient, so its solution set is an interval.
pub fn cauchy_schwarz_range(r: usize, self_int: i64, k_degree: i64) -> Option<(i64, i64)> {
    assert!(r <= 8);
    let r = r as i64;
    let a = 9 - r;
    let b = 6 * k_degree;
    let c = k_degree * k_degree + r * self_int;
    let disc = b * b - 4 * a * c;
    if disc < 0 {
        return None;
    }
    let feasible = |d: i64| a * d * d + b * d + c <= 0 && d * d - self_int >= 0;
    let root = (disc as f64).sqrt();
    let lo_guess = ((-b as f64 - root) / (2 * a) as f64).floor() as i64 - 1;
    let hi_guess = ((-b as f64 + root) / (2 * a) as f64).ceil() as i64 + 1;
    let lo = (lo_guess..=hi_guess).find(|&d| feasible(d))?;
    let hi = (lo_guess..=hi_guess).rev().find(|&d| feasible(d))?;
    Some((lo, hi))
}

/// All integer vectors `m` of length `n` with `sum(m) = sum` and
/// `sum(m^2) = sq`, appended in lexicographic order.
fn vectors_with_sum_and_square(n: usize, sum: i64, sq: i64, out: &mut Vec<Vec<i64>>) {
    let mut cur = Vec::with_capacity(n);
    fill(n, sum, sq, &mut cur, out);
}

fn fill(n: usize, sum: i64, sq: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if n == 0 {
        if sum == 0 && sq == 0 {
            out.push(cur.clone());
        }
        return;
    }
    // Cauchy-Schwarz on the remaining coordinates and the parity m^2 = m (mod 2).
    if sq < 0 || sum * sum > n as i64 * sq || (sum - sq).rem_euclid(2) != 0 {
        return;
    }
    let limit = isqrt(sq);
    for x in -limit..=limit {
        let rest_sum = sum - x;
        let rest_sq = sq - x * x;
        if rest_sum * rest_sum > (n as i64 - 1) * rest_sq {
            continue;
        }
        cur.push(x);
        fill(n - 1, rest_sum, rest_sq, cur, out);
        cur.pop();
    }
}

pub(crate) fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Classes with `D^2 = self_int` and `D.K = k_degree`, sorted.
///
/// For `r <= 8` the search is complete without a bound. From nine points on
/// the solution set is infinite and `degree_bound` is mandatory.
pub fn enumerate_classes(r: usize, q: &ClassQuery) -> Result<Vec<DivisorClass>> {
    if !matches!((q.self_int, q.k_degree), (-1, -1) | (-2, 0)) {
        return Err(Error::UnsupportedQuery {
            self_int: q.self_int,
            k_degree: q.k_degree,
        });
    }
    let (lo, hi) = if r <= 8 {
        let Some((lo, hi)) = cauchy_schwarz_range(r, q.self_int, q.k_degree) else {
            return Ok(Vec::new());
        };
        match q.degree_bound {
            Some(b) => (lo.max(-b), hi.min(b)),
            None => (lo, hi),
        }
    } else {
        let b = q.degree_bound.ok_or(Error::UnboundedSearch { r })?;
        (-b, b)
    };
    let mut out = Vec::new();
    let mut ms = Vec::new();
    for d0 in lo..=hi {
        let sq = d0
            .checked_mul(d0)
            .and_then(|x| x.checked_sub(q.self_int))
            .ok_or(Error::Overflow("enumeration"))?;
        let sum = q.k_degree + 3 * d0;
        ms.clear();
        vectors_with_sum_and_square(r, sum, sq, &mut ms);
        out.extend(ms.drain(..).map(|m| DivisorClass::new(d0, m)));
    }
    Ok(out)
}

/// Closure of the declared roots under sums that are again roots.
///
/// Over nine or more points the closure can be infinite; it is cut off with
/// [`Error::WindowExceeded`] once a class leaves `|d0| <= window`.
pub fn effective_roots_with_window(
    config: &SurfaceConfig,
    window: i64,
) -> Result<BTreeSet<DivisorClass>> {
    let model = config.model();
    let declared = config.declared_roots()?;
    let mut set: BTreeSet<DivisorClass> = BTreeSet::new();
    let mut queue: Vec<DivisorClass> = Vec::new();
    for root in declared {
        if set.insert(root.clone()) {
            queue.push(root);
        }
    }
    let bounded = config.r >= 9;
    while let Some(x) = queue.pop() {
        if bounded && x.d0().abs() > window {
            return Err(Error::WindowExceeded {
                window,
                partial: set.into_iter().collect(),
            });
        }
        let snapshot: Vec<DivisorClass> = set.iter().cloned().collect();
        for y in snapshot {
            let s = x.checked_add(&y)?;
            if model.is_root(&s)? && set.insert(s.clone()) {
                queue.push(s);
            }
        }
    }
    Ok(set)
}

pub fn effective_roots(config: &SurfaceConfig) -> Result<BTreeSet<DivisorClass>> {
    effective_roots_with_window(config, DEFAULT_DEGREE_WINDOW)
}

/// Elements of `set` that are not the sum of two elements of `set`.
pub fn indecomposable(set: &BTreeSet<DivisorClass>) -> Result<BTreeSet<DivisorClass>> {
    let mut decomposable = BTreeSet::new();
    let items: Vec<&DivisorClass> = set.iter().collect();
    for (i, a) in items.iter().enumerate() {
        for b in &items[i..] {
            let s = a.checked_add(b)?;
            if set.contains(&s) {
                decomposable.insert(s);
            }
        }
    }
    Ok(set.difference(&decomposable).cloned().collect())
}

/// Integer rank of the span of a set of classes.
pub fn span_rank<'a>(classes: impl IntoIterator<Item = &'a DivisorClass>) -> Result<usize> {
    let rows: Vec<Vec<i64>> = classes.into_iter().map(DivisorClass::coords).collect();
    linalg::rank(&rows)
}

/// Connected components of the intersection graph (edges where `a . b != 0`).
fn components(model: &SurfaceModel, curves: &[DivisorClass]) -> Result<Vec<Vec<usize>>> {
    let n = curves.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut i = 0;
        while i < members.len() {
            let a = members[i];
            for b in 0..n {
                if comp[b] == usize::MAX && model.intersect(&curves[a], &curves[b])? != 0 {
                    comp[b] = id;
                    members.push(b);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    Ok(out)
}

/// Highest root of a finite-type connected set of simple roots, found by
/// adding simple roots one at a time. `None` when the generated set passes
/// the E8 height limit, which means the component is of affine type.
fn highest_root(model: &SurfaceModel, simple: &[DivisorClass]) -> Result<Option<DivisorClass>> {
    const MAX_FINITE_HEIGHT: usize = 29;
    let mut level: BTreeSet<DivisorClass> = simple.iter().cloned().collect();
    let mut height = 1;
    loop {
        let mut next = BTreeSet::new();
        for x in &level {
            for s in simple {
                let y = x.checked_add(s)?;
                if model.is_root(&y)? {
                    next.insert(y);
                }
            }
        }
        if next.is_empty() {
            return Ok(if level.len() == 1 {
                level.into_iter().next()
            } else {
                None
            });
        }
        height += 1;
        if height > MAX_FINITE_HEIGHT {
            return Ok(None);
        }
        level = next;
    }
}

/// The (-2)-curves of the configuration.
///
/// These are the indecomposable effective roots. For a cubic pencil every
/// (-2)-curve lies in a fiber, so each finite-type connected component with
/// highest root `t` is completed by the remaining fiber component `-K - t`.
pub fn minus_two_curves_with_window(
    config: &SurfaceConfig,
    window: i64,
) -> Result<BTreeSet<DivisorClass>> {
    let roots = effective_roots_with_window(config, window)?;
    let mut curves = indecomposable(&roots)?;
    if config.cubic_pencil && !curves.is_empty() {
        let model = config.model();
        let list: Vec<DivisorClass> = curves.iter().cloned().collect();
        let fiber = model.anticanonical();
        for comp in components(&model, &list)? {
            let simple: Vec<DivisorClass> = comp.iter().map(|&i| list[i].clone()).collect();
            if let Some(top) = highest_root(&model, &simple)? {
                curves.insert(fiber.checked_sub(&top)?);
            }
        }
    }
    Ok(curves)
}

pub fn minus_two_curves(config: &SurfaceConfig) -> Result<BTreeSet<DivisorClass>> {
    minus_two_curves_with_window(config, DEFAULT_DEGREE_WINDOW)
}

/// Whether a (-1)-class meets every (-2)-curve nonnegatively.
pub fn passes_recognition(
    model: &SurfaceModel,
    class: &DivisorClass,
    minus_two: &BTreeSet<DivisorClass>,
) -> Result<bool> {
    if !model.is_minus_one_class(class)? {
        return Ok(false);
    }
    for n in minus_two {
        if model.intersect(class, n)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How a set of (-1)-curves was certified complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completeness {
    /// Finite enumeration bounded by Cauchy-Schwarz.
    Exact,
    /// Degree-doubling search that was stable across one doubling.
    StableUpTo { bound: i64 },
}

/// The (-1)-curves together with the certificate of completeness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinusOneCurves {
    pub curves: Vec<DivisorClass>,
    pub completeness: Completeness,
}

/// Finite cases: `r <= 8`, or a cubic pencil whose effective roots span rank 8.
pub fn minus_one_curves_certified(config: &SurfaceConfig) -> Result<MinusOneCurves> {
    config.validate()?;
    let model = config.model();
    let r = config.r;
    if r <= 8 {
        let minus_two = minus_two_curves(config)?;
        let mut curves = Vec::new();
        for c in enumerate_classes(r, &ClassQuery::minus_one())? {
            if passes_recognition(&model, &c, &minus_two)? {
                curves.push(c);
            }
        }
        return Ok(MinusOneCurves {
            curves,
            completeness: Completeness::Exact,
        });
    }
    if r == 9 && config.cubic_pencil {
        let roots = effective_roots(config)?;
        let rank = span_rank(&roots)?;
        if rank == 8 {
            let minus_two = minus_two_curves(config)?;
            let filtered = |bound: i64| -> Result<Vec<DivisorClass>> {
                let q = ClassQuery::minus_one().with_degree_bound(bound);
                let mut out = Vec::new();
                for c in enumerate_classes(r, &q)? {
                    if passes_recognition(&model, &c, &minus_two)? {
                        out.push(c);
                    }
                }
                Ok(out)
            };
            let mut bound = PENCIL_INITIAL_BOUND;
            let mut prev = filtered(bound)?;
            while bound < PENCIL_MAX_BOUND {
                bound *= 2;
                let cur = filtered(bound)?;
                if cur == prev {
                    return Ok(MinusOneCurves {
                        curves: cur,
                        completeness: Completeness::StableUpTo { bound },
                    });
                }
                prev = cur;
            }
            return Err(Error::Capacity(format!(
                "(-1)-curve search did not stabilize below degree {PENCIL_MAX_BOUND}"
            )));
        }
        return Err(Error::InfiniteOrUndecided(format!(
            "cubic pencil with root span of rank {rank} < 8 has infinitely many (-1)-curves; use the witness generator"
        )));
    }
    Err(Error::InfiniteOrUndecided(format!(
        "no finite (-1)-curve enumeration is available for r = {r}; use the witness generator"
    )))
}

pub fn minus_one_curves(config: &SurfaceConfig) -> Result<Vec<DivisorClass>> {
    Ok(minus_one_curves_certified(config)?.curves)
}
