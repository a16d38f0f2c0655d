//! Exact integer linear algebra on small dense matrices.
//!
//! Row reduction is fraction-free over `i128` with gcd normalization of each
//! row, which keeps entries small for the matrices that occur here.

use crate::error::{Error, Result};
use crate::lattice::gcd;

pub(crate) fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

fn normalize_row(row: &mut [i128]) {
    let g = row.iter().fold(0, |g, &x| gcd_i128(g, x));
    if g > 1 {
        for x in row.iter_mut() {
            *x /= g;
        }
    }
}

/// Reduced row echelon form (each pivot row scaled to integers, pivots positive).
/// Returns the pivot columns.
fn echelon(rows: &mut Vec<Vec<i128>>, ncols: usize) -> Result<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        if rows[rank][col] < 0 {
            for x in rows[rank].iter_mut() {
                *x = -*x;
            }
        }
        normalize_row(&mut rows[rank]);
        let pivot_row = rows[rank].clone();
        let pv = pivot_row[col];
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = x
                    .checked_mul(pv)
                    .and_then(|a| f.checked_mul(y).and_then(|b| a.checked_sub(b)))
                    .ok_or(Error::Overflow("row reduction"))?;
            }
            normalize_row(row);
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    Ok(pivots)
}

fn widen(rows: &[Vec<i64>]) -> (Vec<Vec<i128>>, usize) {
    let ncols = rows.first().map_or(0, Vec::len);
    (
        rows.iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect(),
        ncols,
    )
}

/// Rank over the rationals of the matrix with the given rows.
pub fn rank(rows: &[Vec<i64>]) -> Result<usize> {
    let (mut m, ncols) = widen(rows);
    Ok(echelon(&mut m, ncols)?.len())
}

/// Integer vectors spanning the rational kernel `{x : row . x = 0}` (Euclidean product).
///
/// `ncols` is needed when `rows` is empty.
pub fn kernel(rows: &[Vec<i64>], ncols: usize) -> Result<Vec<Vec<i64>>> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let pivots = echelon(&mut m, ncols)?;
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        // x_free = L, x_pivot_i = -row_i[free] * L / row_i[pivot_i], L = lcm of pivots.
        let mut l: i128 = 1;
        for (i, &p) in pivots.iter().enumerate() {
            if m[i][free] != 0 {
                let pv = m[i][p];
                l = l / gcd_i128(l, pv) * pv;
            }
        }
        let mut v = vec![0i128; ncols];
        v[free] = l;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -m[i][free] * (l / m[i][p]);
        }
        normalize_row(&mut v);
        basis.push(narrow(&v)?);
    }
    Ok(basis)
}

pub(crate) fn narrow(v: &[i128]) -> Result<Vec<i64>> {
    v.iter()
        .map(|&x| i64::try_from(x).map_err(|_| Error::Overflow("vector narrowing")))
        .collect()
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &mut [i64]) {
    let g = v.iter().fold(0u64, |g, &x| gcd(g, x.unsigned_abs()));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g as i64;
        }
    }
}

/// Inverse of an invertible square matrix as `(numerators, denominator)`,
/// so that `inverse = numerators / denominator` with a positive denominator.
pub fn inverse(rows: &[Vec<i64>]) -> Result<(Vec<Vec<i128>>, i128)> {
    let n = rows.len();
    let mut aug: Vec<Vec<i128>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<i128> = r.iter().map(|&x| x as i128).collect();
            row.extend((0..n).map(|j| i128::from(i == j)));
            row
        })
        .collect();
    let pivots = echelon(&mut aug, 2 * n)?;
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::InvariantBreach("matrix is singular".into()));
    }
    let mut den: i128 = 1;
    for (i, row) in aug.iter().enumerate() {
        den = den / gcd_i128(den, row[i]) * row[i];
    }
    let inv = aug
        .iter()
        .enumerate()
        .map(|(i, row)| row[n..].iter().map(|&x| x * (den / row[i])).collect())
        .collect();
    Ok((inv, den))
}

/// Determinant of a square integer matrix (Bareiss).
pub fn determinant(rows: &[Vec<i64>]) -> Result<i128> {
    let n = rows.len();
    let (mut m, _) = widen(rows);
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Ok(0);
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j]
                    .checked_mul(m[k][k])
                    .and_then(|a| m[i][k].checked_mul(m[k][j]).and_then(|b| a.checked_sub(b)))
                    .ok_or(Error::Overflow("determinant"))?;
                m[i][j] = num / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// Solves `coeffs * basis = target` for rational coefficients, where `basis`
/// rows are linearly independent. Returns `(numerators, denominator)` with a
/// positive denominator, or `None` if `target` is outside the row span.
pub fn solve_in_span(basis: &[Vec<i64>], target: &[i64]) -> Result<Option<(Vec<i128>, i128)>> {
    let k = basis.len();
    let n = target.len();
    // Augmented system: columns are basis vectors, unknowns are coefficients.
    let mut rows: Vec<Vec<i128>> = (0..n)
        .map(|j| {
            let mut row: Vec<i128> = basis.iter().map(|b| b[j] as i128).collect();
            row.push(target[j] as i128);
            row
        })
        .collect();
    let pivots = echelon(&mut rows, k + 1)?;
    if pivots.contains(&k) {
        return Ok(None);
    }
    if pivots.len() < k {
        return Err(Error::InvariantBreach("basis rows are dependent".into()));
    }
    let mut den: i128 = 1;
    for (i, &p) in pivots.iter().enumerate() {
        let pv = rows[i][p];
        den = den / gcd_i128(den, pv) * pv;
    }
    let mut coeffs = vec![0i128; k];
    for (i, &p) in pivots.iter().enumerate() {
        coeffs[p] = rows[i][k] * (den / rows[i][p]);
    }
    Ok(Some((coeffs, den)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[]).unwrap(), 0);
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]).unwrap(), 1);
        assert_eq!(
            rank(&[vec![1, 2, 3], vec![0, 1, 1], vec![1, 3, 4]]).unwrap(),
            2
        );
        assert_eq!(rank(&[vec![2, 0], vec![0, 3]]).unwrap(), 2);
    }

    #[test]
    fn kernel_vectors_are_orthogonal() {
        let rows = vec![vec![1, 2, 3], vec![0, 2, 4]];
        let ker = kernel(&rows, 3).unwrap();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            for r in &rows {
                assert_eq!(r.iter().zip(v).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
        }
        assert_eq!(kernel(&[], 2).unwrap().len(), 2);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![2, 1], vec![1, 1]]).unwrap(), 1);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(
            determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).unwrap(),
            -3
        );
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]).unwrap(), 0);
    }

    #[test]
    fn solve_rational_coefficients() {
        let basis = vec![vec![2, 0], vec![0, 3]];
        let (c, den) = solve_in_span(&basis, &[1, 1]).unwrap().unwrap();
        assert_eq!((c[0] * 2) as f64 / den as f64, 1.0);
        assert_eq!((c[1] * 3) as f64 / den as f64, 1.0);
        assert!(solve_in_span(&[vec![1, 0]], &[0, 1]).unwrap().is_none());
    }
}
