//! Hilbert bases of pointed cones `{x : a . x >= 0}` by the dual algorithm.
//!
//! Starting from a simplicial cone cut out by `dim` independent inequalities,
//! the remaining inequalities are added one at a time. For each new form
//! `f`, positive and negative Hilbert basis elements are paired and their
//! sums kept when irreducible; sums are processed by increasing norm, so an
//! element that survives its reduction test is final. The norm is the sum of
//! the values of the inequalities processed so far, which is positive on the
//! pointed cone minus the origin.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::linalg;

/// Largest ambient dimension accepted.
pub const MAX_RANK: usize = 11;
/// Cap on the number of lattice points visited in the starting parallelepiped.
const MAX_PARALLELEPIPED: u128 = 5_000_000;
/// Cap on the number of elements kept at any stage.
pub const MAX_ELEMENTS: usize = 2_000_000;

#[derive(Clone)]
struct Element {
    x: Vec<i64>,
    /// Values of the processed inequalities, in processing order.
    vals: Vec<i64>,
    norm: i64,
    /// Sums of the settled values over residue classes of their index, a
    /// cheap necessary condition for domination.
    blocks: [i64; BLOCKS],
}

const BLOCKS: usize = 8;
const RECENT: usize = 32;

fn blocks_of(vals: &[i64]) -> [i64; BLOCKS] {
    let mut b = [0; BLOCKS];
    for (i, v) in vals.iter().enumerate() {
        b[i % BLOCKS] += v;
    }
    b
}

fn dot(a: &[i64], b: &[i64]) -> Result<i64> {
    let mut acc: i64 = 0;
    for (x, y) in a.iter().zip(b) {
        acc = x
            .checked_mul(*y)
            .and_then(|p| acc.checked_add(p))
            .ok_or(Error::Overflow("Hilbert basis evaluation"))?;
    }
    Ok(acc)
}

fn add(a: &Element, b: &Element) -> Result<Element> {
    let of = || Error::Overflow("Hilbert basis sum");
    Ok(Element {
        x: a.x
            .iter()
            .zip(&b.x)
            .map(|(p, q)| p.checked_add(*q).ok_or_else(of))
            .collect::<Result<_>>()?,
        vals: a
            .vals
            .iter()
            .zip(&b.vals)
            .map(|(p, q)| p.checked_add(*q).ok_or_else(of))
            .collect::<Result<_>>()?,
        norm: a.norm.checked_add(b.norm).ok_or_else(of)?,
        blocks: std::array::from_fn(|i| a.blocks[i] + b.blocks[i]),
    })
}

/// `v <= p + q` componentwise, in chunks the compiler can vectorize.
fn le_sum(v: &[i64], p: &[i64], q: &[i64]) -> bool {
    const CHUNK: usize = 16;
    let mut vc = v.chunks_exact(CHUNK);
    let mut pc = p.chunks_exact(CHUNK);
    let mut qc = q.chunks_exact(CHUNK);
    for ((a, b), c) in (&mut vc).zip(&mut pc).zip(&mut qc) {
        let mut ok = true;
        for i in 0..CHUNK {
            ok &= a[i] <= b[i] + c[i];
        }
        if !ok {
            return false;
        }
    }
    vc.remainder()
        .iter()
        .zip(pc.remainder().iter().zip(qc.remainder()))
        .all(|(a, (b, c))| *a <= b + c)
}

/// The candidate `p + q`, kept unmaterialized until it proves irreducible.
struct Sum<'a> {
    p: &'a Element,
    q: &'a Element,
    norm: i64,
    /// Value of the new form.
    f: i64,
    blocks: [i64; BLOCKS],
}

impl<'a> Sum<'a> {
    fn new(p: &'a Element, q: &'a Element) -> Self {
        let k = p.vals.len() - 1;
        Sum {
            p,
            q,
            norm: p.norm + q.norm,
            f: p.vals[k] + q.vals[k],
            blocks: std::array::from_fn(|i| p.blocks[i] + q.blocks[i]),
        }
    }

    /// `v <= p + q` in the order of the current cone: every settled value of
    /// `v` is at most that of the sum, and the value of the new form lies
    /// between 0 and that of the sum.
    fn dominated_by(&self, v: &Element) -> bool {
        let k = self.p.vals.len() - 1;
        let vf = v.vals[k];
        let compatible = match self.f.signum() {
            1 => 0 <= vf && vf <= self.f,
            -1 => self.f <= vf && vf <= 0,
            _ => vf == 0,
        };
        compatible
            && v.blocks.iter().zip(&self.blocks).all(|(a, b)| a <= b)
            && le_sum(&v.vals[..k], &self.p.vals[..k], &self.q.vals[..k])
    }
}

/// Hilbert basis of `{x in Z^dim : a . x >= 0 for all a}`, sorted.
///
/// The inequalities must have rank `dim` (the cone is pointed). Equations
/// can be passed as pairs `a, -a`.
pub fn hilbert_basis(inequalities: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i64>>> {
    if dim > MAX_RANK {
        return Err(Error::Capacity(format!(
            "Hilbert basis requested in rank {dim} > {MAX_RANK}"
        )));
    }
    if dim == 0 {
        return Ok(Vec::new());
    }
    let ineqs: Vec<&Vec<i64>> = inequalities
        .iter()
        .filter(|a| a.iter().any(|&x| x != 0))
        .collect();

    // Greedy choice of dim independent inequalities for the starting cone.
    let mut start: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (i, a) in ineqs.iter().enumerate() {
        rows.push((*a).clone());
        if linalg::rank(&rows)? == rows.len() {
            start.push(i);
            if start.len() == dim {
                break;
            }
        } else {
            rows.pop();
        }
    }
    if start.len() < dim {
        return Err(Error::NotPointed);
    }

    let mut elements = simplicial_basis(&rows)?;
    let rest: Vec<&Vec<i64>> = ineqs
        .iter()
        .enumerate()
        .filter(|(i, _)| !start.contains(i))
        .map(|(_, a)| *a)
        .collect();

    for form in rest {
        elements = cut(elements, form)?;
    }
    let mut out: Vec<Vec<i64>> = elements.into_iter().map(|e| e.x).collect();
    out.sort();
    Ok(out)
}

/// Hilbert basis of the simplicial cone `{x : B x >= 0}`.
fn simplicial_basis(b: &[Vec<i64>]) -> Result<Vec<Element>> {
    let n = b.len();
    let (inv, den) = linalg::inverse(b)?;
    // Smallest c_i with c_i * (column i of B^-1) integral.
    let scale: Vec<i128> = (0..n)
        .map(|i| {
            let g = (0..n).fold(den, |g, r| linalg::gcd_i128(g, inv[r][i]));
            den / g
        })
        .collect();
    let volume = scale
        .iter()
        .try_fold(1u128, |acc, &c| acc.checked_mul(c as u128))
        .unwrap_or(u128::MAX);
    if volume > MAX_PARALLELEPIPED {
        return Err(Error::Capacity(format!(
            "starting simplicial cone has a parallelepiped of {volume} points"
        )));
    }
    let preimage = |y: &[i128]| -> Result<Option<Vec<i64>>> {
        let mut x = Vec::with_capacity(n);
        for row in &inv {
            let num: i128 = row.iter().zip(y).map(|(a, b)| a * b).sum();
            if num % den != 0 {
                return Ok(None);
            }
            x.push(i64::try_from(num / den).map_err(|_| Error::Overflow("parallelepiped point"))?);
        }
        Ok(Some(x))
    };

    // Points y of the lattice B Z^n with 0 <= y_i < c_i, plus the rays c_i e_i.
    let mut ys: Vec<Vec<i128>> = Vec::new();
    let mut y = vec![0i128; n];
    loop {
        let mut i = 0;
        while i < n {
            y[i] += 1;
            if y[i] < scale[i] {
                break;
            }
            y[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        ys.push(y.clone());
    }
    for i in 0..n {
        let mut ray = vec![0i128; n];
        ray[i] = scale[i];
        ys.push(ray);
    }
    let mut points: Vec<Element> = Vec::new();
    for y in ys {
        if let Some(x) = preimage(&y)? {
            let vals: Vec<i64> = y.iter().map(|&v| v as i64).collect();
            let norm = vals.iter().sum();
            let blocks = blocks_of(&vals);
            points.push(Element {
                x,
                vals,
                norm,
                blocks,
            });
        }
    }
    points.sort_by_key(|e| e.norm);
    let mut basis: Vec<Element> = Vec::new();
    for p in points {
        let reducible = basis
            .iter()
            .any(|v| v.norm < p.norm && v.vals.iter().zip(&p.vals).all(|(a, b)| a <= b));
        if !reducible {
            basis.push(p);
        }
    }
    Ok(basis)
}

/// Hilbert basis of `C ∩ {form >= 0}` from the Hilbert basis of `C`.
fn cut(elements: Vec<Element>, form: &[i64]) -> Result<Vec<Element>> {
    // Positive side (form >= 0) and negative side (form <= 0); zeros are in both.
    let mut pos: Vec<Element> = Vec::new();
    let mut neg: Vec<Element> = Vec::new();
    let mut zero: Vec<Element> = Vec::new();
    for mut e in elements {
        let v = dot(form, &e.x)?;
        e.vals.push(v);
        match v.signum() {
            1 => pos.push(e),
            -1 => neg.push(e),
            _ => zero.push(e),
        }
    }
    if neg.is_empty() {
        pos.extend(zero);
        return finish(pos);
    }
    if pos.is_empty() {
        // Only the zero elements survive: the cone lies in form <= 0.
        return finish(zero);
    }

    let mut seen: HashSet<Vec<i64>> = pos
        .iter()
        .chain(&neg)
        .chain(&zero)
        .map(|e| e.x.clone())
        .collect();
    // Elements bucketed by norm; all norms below the current level are final.
    let key = |e: &Element| e.norm;
    pos.sort_by_key(key);
    neg.sort_by_key(key);
    zero.sort_by_key(key);

    // Reducers that succeeded lately; they tend to succeed again.
    let mut recent: VecDeque<Element> = VecDeque::with_capacity(RECENT);
    let mut xbuf: Vec<i64> = Vec::new();
    let mut pos_norms: BTreeSet<i64> = pos.iter().map(|e| e.norm).collect();
    let mut neg_norms: BTreeSet<i64> = neg.iter().map(|e| e.norm).collect();
    let mut level = pos[0].norm + neg[0].norm;
    loop {
        let mut fresh: Vec<Element> = Vec::new();
        let pairs: Vec<(std::ops::Range<usize>, std::ops::Range<usize>)> = pos_norms
            .range(..level)
            .filter(|&&a| neg_norms.contains(&(level - a)))
            .map(|&a| (norm_range(&pos, a), norm_range(&neg, level - a)))
            .collect();
        for (prange, qrange) in pairs {
            for p in &pos[prange] {
                for q in &neg[qrange.clone()] {
                    let sum = Sum::new(p, q);
                    let reducers: [&[Element]; 2] = match sum.f.signum() {
                        1 => [&pos, &zero],
                        -1 => [&neg, &zero],
                        _ => [&zero, &[]],
                    };
                    if let Some(i) = recent
                        .iter()
                        .position(|v| v.norm < sum.norm && sum.dominated_by(v))
                    {
                        if i > 0 {
                            let v = recent.remove(i).expect("index in range");
                            recent.push_front(v);
                        }
                        continue;
                    }
                    xbuf.clear();
                    xbuf.extend(p.x.iter().zip(&q.x).map(|(a, b)| a + b));
                    if seen.contains(&xbuf[..]) {
                        continue;
                    }
                    let reducer = reducers.iter().find_map(|set| {
                        set.iter()
                            .take_while(|v| v.norm < sum.norm)
                            .find(|v| sum.dominated_by(v))
                    });
                    if let Some(v) = reducer {
                        if recent.len() == RECENT {
                            recent.pop_back();
                        }
                        recent.push_front(v.clone());
                        continue;
                    }
                    let z = add(p, q)?;
                    seen.insert(z.x.clone());
                    fresh.push(z);
                }
            }
        }
        let (mut new_pos, mut new_neg, mut new_zero) = (Vec::new(), Vec::new(), Vec::new());
        for z in fresh {
            match z.vals[z.vals.len() - 1].signum() {
                1 => new_pos.push(z),
                -1 => new_neg.push(z),
                _ => new_zero.push(z),
            }
        }
        if !new_pos.is_empty() {
            pos_norms.insert(level);
        }
        if !new_neg.is_empty() {
            neg_norms.insert(level);
        }
        insert_at_level(&mut pos, level, new_pos);
        insert_at_level(&mut neg, level, new_neg);
        insert_at_level(&mut zero, level, new_zero);
        if pos.len() + neg.len() + zero.len() > MAX_ELEMENTS {
            return Err(Error::Capacity(format!(
                "Hilbert basis computation exceeded {MAX_ELEMENTS} elements"
            )));
        }
        // The next level at which some positive and negative norm add up.
        let next = pos_norms
            .iter()
            .filter_map(|&a| neg_norms.range(level - a + 1..).next().map(|&b| a + b))
            .min();
        match next {
            Some(n) => level = n,
            None => break,
        }
    }
    pos.extend(zero);
    finish(pos)
}

/// Inserts elements of norm `level` keeping `sorted` ordered by norm.
fn insert_at_level(sorted: &mut Vec<Element>, level: i64, items: Vec<Element>) {
    if items.is_empty() {
        return;
    }
    let at = sorted.partition_point(|e| e.norm <= level);
    sorted.splice(at..at, items);
}

/// Indices of the elements of norm `norm` in a norm-sorted slice.
fn norm_range(sorted: &[Element], norm: i64) -> std::ops::Range<usize> {
    sorted.partition_point(|e| e.norm < norm)..sorted.partition_point(|e| e.norm <= norm)
}

/// Folds the new form into the norm.
fn finish(mut elements: Vec<Element>) -> Result<Vec<Element>> {
    for e in elements.iter_mut() {
        let f = *e.vals.last().expect("form value present");
        e.blocks[(e.vals.len() - 1) % BLOCKS] += f;
        e.norm = e
            .norm
            .checked_add(f)
            .ok_or(Error::Overflow("Hilbert basis norm"))?;
    }
    Ok(elements)
}
