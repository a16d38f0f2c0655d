//! Facets of a cone given by generators, by gift wrapping.
//!
//! Double description is fast when few inequalities produce many rays, but a
//! cone with thousands of generators and only a few hundred facets makes its
//! intermediate ray sets large. Gift wrapping walks the facet graph instead:
//! the ridges of each facet come from a small double description run on the
//! generators lying in it, and rotating the facet about a ridge gives the
//! neighbouring facet.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::{self, narrow};

use super::dd::{cone_from_inequalities, RayDescription};

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

/// `s * u - t * w`, reduced to a primitive vector.
fn combine(s: i128, u: &[i64], t: i128, w: &[i64]) -> Result<Vec<i64>> {
    let mut out: Vec<i128> = Vec::with_capacity(u.len());
    for (a, b) in u.iter().zip(w) {
        let x = s
            .checked_mul(*a as i128)
            .and_then(|p| t.checked_mul(*b as i128).and_then(|q| p.checked_sub(q)))
            .ok_or(Error::Overflow("facet rotation"))?;
        out.push(x);
    }
    let g = out.iter().fold(0, |g, &x| linalg::gcd_i128(g, x));
    if g > 1 {
        out.iter_mut().for_each(|x| *x /= g);
    }
    narrow(&out)
}

/// Generators orthogonal to `a`.
fn tight(generators: &[Vec<i64>], a: &[i64]) -> Vec<Vec<i64>> {
    generators
        .iter()
        .filter(|g| dot(a, g) == 0)
        .cloned()
        .collect()
}

/// Moves the valid functional `a` towards `c` (orthogonal to the current
/// tight set) until a new generator becomes tight.
fn rotate(generators: &[Vec<i64>], a: &[i64], c: &[i64]) -> Result<Option<Vec<i64>>> {
    // Minimize (a.g) / (-c.g) over generators with c.g < 0.
    let mut best: Option<(i128, i128)> = None;
    for g in generators {
        let cg = dot(c, g);
        if cg >= 0 {
            continue;
        }
        let (num, den) = (dot(a, g), -cg);
        let better = match best {
            None => true,
            Some((bn, bd)) => num * bd < bn * den,
        };
        if better {
            best = Some((num, den));
        }
    }
    match best {
        None => Ok(None),
        Some((num, den)) => Ok(Some(combine(den, a, -num, c)?)),
    }
}

/// Raises a valid functional to a facet normal.
fn raise_to_facet(generators: &[Vec<i64>], dim: usize, seed: &[i64]) -> Result<Vec<i64>> {
    let mut a = seed.to_vec();
    loop {
        let t = tight(generators, &a);
        if linalg::rank(&t)? == dim - 1 {
            return Ok(a);
        }
        let kernel = linalg::kernel(&t, dim)?;
        let c = kernel
            .into_iter()
            .find(|v| linalg::rank(&[a.clone(), v.clone()]).map_or(false, |r| r == 2))
            .ok_or_else(|| Error::InvariantBreach("no rotation direction for a facet".into()))?;
        let neg: Vec<i64> = c.iter().map(|x| -x).collect();
        a = match rotate(generators, &a, &c)? {
            Some(next) => next,
            None => rotate(generators, &a, &neg)?.ok_or_else(|| {
                Error::InvariantBreach("generators are not full-dimensional".into())
            })?,
        };
    }
}

/// Facet normals of `cone(generators)`, i.e. the extreme rays of its
/// Euclidean dual. `cone(generators)` must be full-dimensional and `seed`
/// must be a nonzero functional that is nonnegative on every generator.
pub fn dual_by_wrapping(
    generators: &[Vec<i64>],
    dim: usize,
    seed: &[i64],
) -> Result<RayDescription> {
    if linalg::rank(generators)? != dim {
        return Err(Error::InvariantBreach(
            "gift wrapping needs a full-dimensional cone".into(),
        ));
    }
    if seed.iter().all(|&x| x == 0) || generators.iter().any(|g| dot(seed, g) < 0) {
        return Err(Error::InvariantBreach(
            "gift wrapping seed is not a valid functional".into(),
        ));
    }
    let start = raise_to_facet(generators, dim, seed)?;
    let mut facets = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        let t = tight(generators, &a);
        let ridges = cone_from_inequalities(&t, dim)?;
        for b in &ridges.rays {
            // b + lambda a for the least lambda keeping every generator nonnegative.
            let mut best: Option<(i128, i128, &Vec<i64>)> = None;
            for g in generators {
                let ag = dot(&a, g);
                if ag == 0 {
                    continue;
                }
                let bg = dot(b, g);
                // lambda >= -bg / ag; keep the largest lower bound.
                let better = match best {
                    None => true,
                    Some((bb, ba, _)) => -bg * ba > -bb * ag,
                };
                if better {
                    best = Some((bg, ag, g));
                }
            }
            let (bg, ag, _) = best
                .ok_or_else(|| Error::InvariantBreach("facet contains every generator".into()))?;
            let next = combine(ag, b, bg, &a)?;
            if facets.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(RayDescription {
        rays: facets.into_iter().collect(),
        lineality: Vec::new(),
    })
}
