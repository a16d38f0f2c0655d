//! Reflections in roots, Weyl orbits, Cremona transformations and infinite
//! families of (-1)-classes.

use std::collections::BTreeSet;

use crate::config::SurfaceConfig;
use crate::enumerate::{
    effective_roots, enumerate_classes, minus_two_curves, passes_recognition, span_rank, ClassQuery,
};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::linalg;

/// `x + (x . R) R`, the reflection in the root `R`.
pub fn reflect(x: &DivisorClass, root: &DivisorClass) -> Result<DivisorClass> {
    let model = SurfaceModel::new(root.r());
    model.check(x)?;
    if !model.is_root(root)? {
        return Err(Error::InvalidRoot(root.clone()));
    }
    let t = model.intersect(x, root)?;
    x.checked_add_scaled(t, root)
}

/// `{ei - e(i+1) : 1 <= i < r}` followed by `l - e1 - e2 - e3` when `r >= 3`.
pub fn simple_roots(r: usize) -> Vec<DivisorClass> {
    let mut roots: Vec<DivisorClass> = (1..r)
        .map(|i| {
            let mut m = vec![0; r];
            m[i - 1] = -1;
            m[i] = 1;
            DivisorClass::new(0, m)
        })
        .collect();
    if r >= 3 {
        roots.push(cremona_root(r));
    }
    roots
}

/// `l - e1 - e2 - e3`; reflecting in it is the standard quadratic transformation.
pub fn cremona_root(r: usize) -> DivisorClass {
    DivisorClass::line_through(r, &[1, 2, 3])
}

/// Applies the quadratic transformation based at points `i, j, k` (0-based).
fn cremona_at(x: &DivisorClass, idx: [usize; 3]) -> Result<DivisorClass> {
    let root = DivisorClass::line_through(x.r(), &[idx[0] + 1, idx[1] + 1, idx[2] + 1]);
    reflect(x, &root)
}

/// Result of a truncated orbit computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub classes: BTreeSet<DivisorClass>,
    pub exceeded: bool,
}

/// Breadth-first closure of `{x}` under reflections in `roots`, stopping once
/// `limit` classes have been found. Each frontier is expanded in
/// lexicographic order so truncated orbits are reproducible.
pub fn orbit(x: &DivisorClass, roots: &[DivisorClass], limit: usize) -> Result<Orbit> {
    let model = SurfaceModel::new(x.r());
    for root in roots {
        model.check(root)?;
        if !model.is_root(root)? {
            return Err(Error::InvalidRoot(root.clone()));
        }
    }
    let square = model.square(x)?;
    let k_degree = model.k_degree(x)?;
    let mut seen = BTreeSet::new();
    seen.insert(x.clone());
    let mut frontier = vec![x.clone()];
    let mut exceeded = false;
    'bfs: while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for y in &frontier {
            for root in roots {
                let z = reflect(y, root)?;
                if seen.contains(&z) || next.contains(&z) {
                    continue;
                }
                if model.square(&z)? != square || model.k_degree(&z)? != k_degree {
                    return Err(Error::InvariantBreach(format!(
                        "reflection of {y:?} in {root:?} changed square or K-degree"
                    )));
                }
                if seen.len() + next.len() >= limit {
                    exceeded = true;
                    seen.extend(next);
                    break 'bfs;
                }
                next.insert(z);
            }
        }
        seen.extend(next.iter().cloned());
        frontier = next.into_iter().collect();
    }
    Ok(Orbit {
        classes: seen,
        exceeded,
    })
}

/// Whether the configuration is one of the cases known to carry infinitely
/// many (-1)-curves: nine or more points in general position, or a cubic
/// pencil whose effective roots span rank below 8.
pub fn is_infinite_case(config: &SurfaceConfig) -> Result<bool> {
    config.validate()?;
    if config.general_position && config.r >= 9 {
        return Ok(true);
    }
    if config.cubic_pencil {
        let roots = effective_roots(config)?;
        return Ok(span_rank(&roots)? < 8);
    }
    Ok(false)
}

/// `count` pairwise distinct (-1)-classes that pass the recognition rule.
///
/// Without (-2)-curves the sample is the start of the breadth-first Weyl orbit
/// of `er`, which is infinite (see [`cremona_ladder`]) and consists of
/// (-1)-curves since no curve can meet one of them negatively. A cubic
/// pencil with (-2)-curves instead uses the translations of its elliptic
/// fibration by a lattice vector orthogonal to `K` and to every root.
pub fn infinitude_witness(config: &SurfaceConfig, count: usize) -> Result<Vec<DivisorClass>> {
    if !is_infinite_case(config)? {
        return Err(Error::NotAnInfiniteCase(format!(
            "r = {} is neither general position with r >= 9 nor a cubic pencil with root rank < 8",
            config.r
        )));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let model = config.model();
    let minus_two = minus_two_curves(config)?;
    let witness = if minus_two.is_empty() {
        let o = orbit(
            &DivisorClass::exceptional(config.r, config.r),
            &simple_roots(config.r),
            count,
        )?;
        if !o.exceeded {
            return Err(Error::InvariantBreach(format!(
                "Weyl orbit of e{} closed after {} classes",
                config.r,
                o.classes.len()
            )));
        }
        o.classes.into_iter().collect()
    } else {
        translation_family(config, &minus_two, count)?
    };
    let distinct: BTreeSet<_> = witness.iter().collect();
    if distinct.len() != witness.len() {
        return Err(Error::InvariantBreach("witness classes repeat".into()));
    }
    for c in &witness {
        if !passes_recognition(&model, c, &minus_two)? {
            return Err(Error::InvariantBreach(format!(
                "witness class {c:?} fails the (-1)-curve recognition rule"
            )));
        }
    }
    Ok(witness)
}

/// `er` followed by `steps` quadratic transformations, each based at the three
/// points of smallest multiplicity. Over nine or more points every step
/// raises the degree, so the orbit of `er` is infinite.
pub fn cremona_ladder(r: usize, steps: usize) -> Result<Vec<DivisorClass>> {
    let count = steps + 1;
    let mut x = DivisorClass::exceptional(r, r);
    let mut out = Vec::with_capacity(count);
    out.push(x.clone());
    while out.len() < count {
        let mut idx: Vec<usize> = (0..r).collect();
        idx.sort_by_key(|&i| (x.m()[i], i));
        let y = cremona_at(&x, [idx[0], idx[1], idx[2]])?;
        if y.d0() <= x.d0() {
            return Err(Error::InvariantBreach(format!(
                "quadratic transformation did not raise the degree of {x:?}"
            )));
        }
        out.push(y.clone());
        x = y;
    }
    Ok(out)
}

/// Eichler transvection `x + (x.K) v - ((x.v) + (v^2/2)(x.K)) K` for `v` in `K^perp`.
fn transvection(model: &SurfaceModel, v: &DivisorClass, x: &DivisorClass) -> Result<DivisorClass> {
    let k = model.canonical();
    let xk = model.intersect(x, &k)?;
    let xv = model.intersect(x, v)?;
    let half_v2 = model.square(v)? / 2;
    let c = half_v2
        .checked_mul(xk)
        .and_then(|p| p.checked_add(xv))
        .ok_or(Error::Overflow("transvection"))?;
    x.checked_add_scaled(xk, v)?.checked_add_scaled(-c, &k)
}

fn translation_family(
    config: &SurfaceConfig,
    minus_two: &BTreeSet<DivisorClass>,
    count: usize,
) -> Result<Vec<DivisorClass>> {
    let model = config.model();
    let k = model.canonical();
    let roots = effective_roots(config)?;
    // Functionals x -> x.K and x -> x.R, written as Euclidean rows via the form diag(1, -1, ...).
    let as_functional = |c: &DivisorClass| {
        let mut v = c.coords();
        for x in v.iter_mut().skip(1) {
            *x = -*x;
        }
        v
    };
    let mut rows = vec![as_functional(&k)];
    rows.extend(roots.iter().map(as_functional));
    let kernel = linalg::kernel(&rows, model.rank())?;
    let k_row = k.coords();
    let v = kernel
        .into_iter()
        .find(|v| linalg::rank(&[v.clone(), k_row.clone()]).map_or(false, |rk| rk == 2))
        .and_then(|v| DivisorClass::from_coords(&v))
        .ok_or_else(|| {
            Error::InvariantBreach("no translation vector orthogonal to the roots".into())
        })?;

    let start = lowest_recognized_class(config, minus_two)?;
    let mut out = Vec::with_capacity(count);
    let mut x = start;
    while out.len() < count {
        out.push(x.clone());
        x = transvection(&model, &v, &x)?;
    }
    Ok(out)
}

fn lowest_recognized_class(
    config: &SurfaceConfig,
    minus_two: &BTreeSet<DivisorClass>,
) -> Result<DivisorClass> {
    let model = config.model();
    let mut bound = 1;
    while bound <= 64 {
        let q = ClassQuery::minus_one().with_degree_bound(bound);
        for c in enumerate_classes(config.r, &q)? {
            if passes_recognition(&model, &c, minus_two)? {
                return Ok(c);
            }
        }
        bound *= 2;
    }
    Err(Error::Capacity(
        "no recognized (-1)-class of degree <= 64".into(),
    ))
}
