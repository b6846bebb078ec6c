//! Bounded enumeration of integer vectors and of rational subspaces.
//!
//! A subspace of `Q^n` is represented by its canonical basis: the reduced
//! row echelon basis with each row scaled to a primitive integer vector with
//! a positive pivot. Its height is the largest absolute entry.

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;

use crate::matrix::Matrix;
use crate::scalar::{gcd_slice, primitive_integer_row};

pub fn height(rows: &[Vec<i64>]) -> i64 {
    rows.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
}

fn is_lex_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Nonzero vectors with entries in `[-h, h]` whose first nonzero entry is
/// positive, ordered by height then lexicographically.
pub fn signed_vectors(n: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = boxes(n, h).into_iter().filter(|v| is_lex_positive(v)).collect();
    out.sort_by(|a, b| height(&[a.clone()]).cmp(&height(&[b.clone()])).then_with(|| a.cmp(b)));
    out
}

/// As [`signed_vectors`], restricted to primitive vectors.
pub fn primitive_vectors(n: usize, h: i64) -> Vec<Vec<i64>> {
    signed_vectors(n, h).into_iter().filter(|v| gcd_slice(v) == 1).collect()
}

/// Canonical basis of the row space of `rows`; empty for the zero space.
pub fn canonical_basis(ncols: usize, rows: &[Vec<BigRational>]) -> Vec<Vec<i64>> {
    let m = Matrix::from_rows(ncols, rows.to_vec());
    let (r, pivots) = m.rref();
    (0..pivots.len())
        .map(|i| primitive_integer_row(r.row(i)).expect("nonzero pivot row"))
        .collect()
}

pub fn canonical_basis_int(ncols: usize, rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let q: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    canonical_basis(ncols, &q)
}

/// All `k`-dimensional subspaces of `Q^n` whose canonical basis has height
/// at most `h`, each given by its canonical basis. Ordered by height, then
/// by the basis rows.
pub fn canonical_subspaces(n: usize, k: usize, h: i64) -> Vec<Vec<Vec<i64>>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n || h < 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for pivots in (0..n).combinations(k) {
        let row_choices: Vec<Vec<Vec<i64>>> = pivots
            .iter()
            .map(|&p| {
                let free: Vec<usize> = (p + 1..n).filter(|c| !pivots.contains(c)).collect();
                let mut rows = Vec::new();
                for lead in 1..=h {
                    for vals in boxes(free.len(), h) {
                        let mut row = vec![0i64; n];
                        row[p] = lead;
                        for (&c, &v) in free.iter().zip(&vals) {
                            row[c] = v;
                        }
                        if gcd_slice(&row) == 1 {
                            rows.push(row);
                        }
                    }
                }
                rows
            })
            .collect();
        for combo in row_choices.iter().map(|c| c.iter()).multi_cartesian_product() {
            out.push(combo.into_iter().cloned().collect::<Vec<_>>());
        }
    }
    out.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)));
    out
}

/// All vectors of length `len` with entries in `[-h, h]`.
fn boxes(len: usize, h: i64) -> Vec<Vec<i64>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|v| (-h..=h).map(move |x| {
                let mut w = v.clone();
                w.push(x);
                w
            }))
            .collect()
    })
}

/// Rank of a set of rational rows.
pub fn rank(ncols: usize, rows: &[Vec<BigRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(ncols, rows.to_vec()).rank()
}

pub fn to_rational_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

pub fn is_zero_row(row: &[BigRational]) -> bool {
    row.iter().all(|x| x.is_zero())
}
