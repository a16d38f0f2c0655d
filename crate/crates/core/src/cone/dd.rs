//! Double description: extreme rays and lineality of `{x : a . x >= 0}`.
//!
//! The cone starts as the whole space (lineality = standard basis) and the
//! inequalities are added one at a time. While some lineality vector is not
//! orthogonal to the new inequality it is used as a pivot; afterwards the
//! classical ray-pairing step is applied. Two rays are adjacent when the
//! inequalities tight at both have rank `pointed dimension - 2`.

use crate::error::{Error, Result};
use crate::linalg::{gcd_i128, narrow};

/// Generators of a polyhedral cone: extreme rays of its pointed part and a
/// basis of its lineality space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayDescription {
    pub rays: Vec<Vec<i64>>,
    pub lineality: Vec<Vec<i64>>,
}

#[derive(Clone)]
struct Ray {
    v: Vec<i64>,
    zeros: Vec<u64>,
    count: u32,
}

fn dot(a: &[i64], b: &[i64]) -> Result<i128> {
    let mut acc: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        acc = acc
            .checked_add(*x as i128 * *y as i128)
            .ok_or(Error::Overflow("dot product"))?;
    }
    Ok(acc)
}

/// `s * u + t * w`, reduced to a primitive vector.
fn combine(s: i128, u: &[i64], t: i128, w: &[i64]) -> Result<Vec<i64>> {
    let mut out: Vec<i128> = Vec::with_capacity(u.len());
    for (a, b) in u.iter().zip(w) {
        let x = s
            .checked_mul(*a as i128)
            .and_then(|p| t.checked_mul(*b as i128).and_then(|q| p.checked_add(q)))
            .ok_or(Error::Overflow("ray combination"))?;
        out.push(x);
    }
    let g = out.iter().fold(0, |g, &x| gcd_i128(g, x));
    if g > 1 {
        for x in out.iter_mut() {
            *x /= g;
        }
    }
    narrow(&out)
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let b = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(w * 64 + b)
        })
    })
}

/// Whether the rows of `inequalities` indexed by `set` reach rank `target`.
/// Stops as soon as they do.
fn rank_reaches(inequalities: &[Vec<i64>], set: &[u64], target: usize) -> Result<bool> {
    if target == 0 {
        return Ok(true);
    }
    let mut basis: Vec<(usize, Vec<i128>)> = Vec::with_capacity(target);
    for i in bits(set) {
        let mut v: Vec<i128> = inequalities[i].iter().map(|&x| x as i128).collect();
        for (p, b) in &basis {
            let f = v[*p];
            if f != 0 {
                let bp = b[*p];
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x
                        .checked_mul(bp)
                        .and_then(|a| f.checked_mul(*y).and_then(|c| a.checked_sub(c)))
                        .ok_or(Error::Overflow("adjacency rank test"))?;
                }
                let g = v.iter().fold(0, |g, &x| gcd_i128(g, x));
                if g > 1 {
                    v.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            basis.push((p, v));
            if basis.len() >= target {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Soft cap on the number of intermediate rays.
pub const MAX_RAYS: usize = 400_000;

/// Computes the cone `{x in R^dim : a . x >= 0 for all a in inequalities}`.
pub fn cone_from_inequalities(inequalities: &[Vec<i64>], dim: usize) -> Result<RayDescription> {
    let words = inequalities.len().div_ceil(64).max(1);
    let mut lineality: Vec<Vec<i64>> = (0..dim)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, a) in inequalities.iter().enumerate() {
        if a.len() != dim {
            return Err(Error::RankMismatch {
                expected: dim,
                found: a.len(),
            });
        }
        if a.iter().all(|&x| x == 0) {
            for ray in rays.iter_mut() {
                set_bit(&mut ray.zeros, idx);
                ray.count += 1;
            }
            continue;
        }

        // Pivot on a lineality vector that the inequality sees.
        let mut pivot = None;
        for (i, l) in lineality.iter().enumerate() {
            if dot(a, l)? != 0 {
                pivot = Some(i);
                break;
            }
        }
        if let Some(pi) = pivot {
            let mut l = lineality.swap_remove(pi);
            let mut al = dot(a, &l)?;
            if al < 0 {
                l.iter_mut().for_each(|x| *x = -*x);
                al = -al;
            }
            for other in lineality.iter_mut() {
                let ao = dot(a, other)?;
                if ao != 0 {
                    *other = combine(al, other, -ao, &l)?;
                }
            }
            for ray in rays.iter_mut() {
                let ar = dot(a, &ray.v)?;
                if ar != 0 {
                    ray.v = combine(al, &ray.v, -ar, &l)?;
                }
                set_bit(&mut ray.zeros, idx);
                ray.count += 1;
            }
            // The pivot is tight on every earlier inequality.
            let mut zeros = vec![0u64; words];
            let mut count = 0;
            for j in 0..idx {
                if dot(&inequalities[j], &l)? == 0 {
                    set_bit(&mut zeros, j);
                    count += 1;
                }
            }
            rays.push(Ray { v: l, zeros, count });
            continue;
        }

        let values: Vec<i128> = rays.iter().map(|r| dot(a, &r.v)).collect::<Result<_>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i] < 0).collect();
        if neg.is_empty() {
            for (ray, &v) in rays.iter_mut().zip(&values) {
                if v == 0 {
                    set_bit(&mut ray.zeros, idx);
                    ray.count += 1;
                }
            }
            continue;
        }

        let pointed_dim = dim - lineality.len();
        let threshold = pointed_dim.saturating_sub(2) as u32;
        let mut new_rays: Vec<Ray> = Vec::new();
        let mut common = vec![0u64; words];
        for &p in &pos {
            for &n in &neg {
                let (rp, rn) = (&rays[p], &rays[n]);
                let mut cnt = 0u32;
                for ((c, x), y) in common.iter_mut().zip(&rp.zeros).zip(&rn.zeros) {
                    *c = x & y;
                    cnt += c.count_ones();
                }
                if cnt < threshold {
                    continue;
                }
                if !rank_reaches(inequalities, &common, threshold as usize)? {
                    continue;
                }
                let v = combine(values[p], &rn.v, -values[n], &rp.v)?;
                let mut zeros = common.clone();
                set_bit(&mut zeros, idx);
                new_rays.push(Ray {
                    v,
                    zeros,
                    count: cnt + 1,
                });
            }
        }

        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + new_rays.len());
        for (mut ray, v) in rays.into_iter().zip(values) {
            if v > 0 {
                kept.push(ray);
            } else if v == 0 {
                set_bit(&mut ray.zeros, idx);
                ray.count += 1;
                kept.push(ray);
            }
        }
        kept.extend(new_rays);
        if kept.len() > MAX_RAYS {
            return Err(Error::Capacity(format!(
                "double description exceeded {MAX_RAYS} intermediate rays"
            )));
        }
        rays = kept;
    }

    let mut rays: Vec<Vec<i64>> = rays.into_iter().map(|r| r.v).collect();
    rays.sort();
    lineality.sort();
    Ok(RayDescription { rays, lineality })
}
