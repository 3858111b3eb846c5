//! Integer lattices: echelon forms, kernels and indices.
//!
//! `Λ = Z[1/N]` is a localization of `Z`, so a `Λ`-lattice basis is obtained
//! from a `Z`-basis of the same span; these routines work over `Z`.


use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Unimodular row reduction restricted to the first `pivot_cols` columns.
/// Returns the rank; rows `rank..` are zero on the pivot columns.
fn echelon(rows: &mut [Vec<BigInt>], pivot_cols: usize) -> usize {
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let a = rows[r][c].clone();
            let b = rows[i][c].clone();
            let eg = a.extended_gcd(&b);
            let (ag, bg) = (&a / &eg.gcd, &b / &eg.gcd);
            let (top, bottom) = {
                let (head, tail) = rows.split_at(i);
                let rr = &head[r];
                let ri = &tail[0];
                let top: Vec<BigInt> = rr.iter().zip(ri).map(|(u, v)| &eg.x * u + &eg.y * v).collect();
                let bottom: Vec<BigInt> = rr.iter().zip(ri).map(|(u, v)| &ag * v - &bg * u).collect();
                (top, bottom)
            };
            rows[r] = top;
            rows[i] = bottom;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -core::mem::take(x);
            }
        }
        // reduce the entries above the pivot
        let pivot = rows[r][c].clone();
        for i in 0..r {
            let q = rows[i][c].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(r);
            for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    r
}

/// Hermite normal form of the lattice spanned by `vectors` in `Z^dim`:
/// the nonzero rows of the reduced echelon form.
pub fn hermite_rows(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    debug_assert!(rows.iter().all(|v| v.len() == dim));
    let rank = echelon(&mut rows, dim);
    rows.truncate(rank);
    rows
}

/// Index of the lattice spanned by `vectors` in `Z^dim` (the product of its
/// elementary divisors). Fails with the achieved rank when not full rank.
pub fn lattice_index(vectors: &[Vec<BigInt>], dim: usize) -> Result<BigInt> {
    let h = hermite_rows(vectors, dim);
    if h.len() < dim {
        return Err(Error::RankDeficient { achieved: h.len(), needed: dim });
    }
    let mut idx = BigInt::one();
    for (i, row) in h.iter().enumerate() {
        let lead = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
        debug_assert_eq!(lead, i);
        idx *= &row[lead];
    }
    Ok(idx)
}

/// A `Z`-basis of `{x in Z^cols : A x = 0}` for the row-major `rows x cols`
/// integer matrix `A`.
pub fn integer_kernel(rows: usize, cols: usize, a: &[BigInt]) -> Vec<Vec<BigInt>> {
    assert_eq!(a.len(), rows * cols);
    // rows of [A^T | I]
    let mut aug: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| {
            let mut v = Vec::with_capacity(rows + cols);
            v.extend((0..rows).map(|i| a[i * cols + j].clone()));
            v.extend((0..cols).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let rank = echelon(&mut aug, rows);
    let kernel: Vec<Vec<BigInt>> = aug[rank..].iter().map(|v| v[rows..].to_vec()).collect();
    hermite_rows(&kernel, cols)
}

/// Nonzero diagonal of the Smith normal form of a `rows x cols` integer
/// matrix, each entry positive and dividing the next.
pub fn smith_diagonal(rows: usize, cols: usize, a: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(a.len(), rows * cols);
    let mut m: Vec<Vec<BigInt>> = (0..rows).map(|i| a[i * cols..(i + 1) * cols].to_vec()).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        let pivot = m[t][t].clone();
        for i in t + 1..rows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = m[i][t].div_floor(&pivot);
            let pr = m[t].clone();
            for (x, y) in m[i].iter_mut().zip(&pr) {
                *x -= &q * y;
            }
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..cols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = m[t][j].div_floor(&pivot);
            for row in m.iter_mut() {
                let v = &q * &row[t];
                row[j] -= v;
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest; otherwise fold an offending row in
        let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&pivot)));
        if let Some(i) = offender {
            let (head, tail) = m.split_at_mut(i);
            for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                *x += y;
            }
            continue;
        }
        diag.push(pivot.abs());
        t += 1;
    }
    diag
}

/// Convenience: integer matrix from `i64` rows.
#[cfg(test)]
pub(crate) fn int_rows(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}
