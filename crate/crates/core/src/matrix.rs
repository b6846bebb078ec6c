//! Dense matrices over exact rings: Hermite and Smith forms for integer
//! matrices, row reduction for matrices over a field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive};

use crate::scalar::{Field, IntScalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    nrows: usize,
    ncols: usize,
    data: Vec<Vec<T>>,
}

impl<T: Clone + Num> Matrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix { nrows, ncols, data: vec![vec![T::zero(); ncols]; nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = T::one();
        }
        m
    }

    /// Builds a matrix from rows; `ncols` fixes the width of an empty list.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<T>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix { nrows: rows.len(), ncols, data: rows }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.ncols).map(|j| self.column(j)).collect();
        Matrix { nrows: self.ncols, ncols: self.nrows, data }
    }

    pub fn mul(&self, other: &Matrix<T>) -> Self {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch");
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let p = self.data[i][k].clone() * other.data[k][j].clone();
                    out.data[i][j] = out.data[i][j].clone() + p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.ncols, v.len());
        self.data
            .iter()
            .map(|r| r.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        let mut result = Self::identity(self.nrows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    pub fn add(&self, other: &Matrix<T>) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
            .collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn map<U: Clone + Num>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &Matrix<T>) -> Self {
        assert_eq!(self.ncols, other.ncols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { nrows: self.nrows + other.nrows, ncols: self.ncols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.ncols {
            let v = self.data[src][j].clone() * c.clone();
            self.data[dst][j] = self.data[dst][j].clone() + v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for r in &mut self.data {
            let v = r[src].clone() * c.clone();
            r[dst] = r[dst].clone() + v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = T::zero() - x.clone();
        }
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", x)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Result of the Smith normal form: `u * m * v == s`.
#[derive(Debug, Clone)]
pub struct Smith<T> {
    pub s: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: IntScalar> Matrix<T> {
    /// Row-style Hermite normal form: returns `(h, u)` with `u * self == h`,
    /// `u` unimodular, `h` in row echelon form with positive pivots and the
    /// entries above each pivot reduced into `[0, pivot)`.
    pub fn hermite(&self) -> (Matrix<T>, Matrix<T>) {
        let mut h = self.clone();
        let mut u = Matrix::identity(self.nrows);
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            loop {
                let pick = (r..self.nrows)
                    .filter(|&i| !h.data[i][c].is_zero())
                    .min_by(|&a, &b| h.data[a][c].abs().cmp(&h.data[b][c].abs()).then(a.cmp(&b)));
                let Some(p) = pick else { break };
                h.swap_rows(r, p);
                u.swap_rows(r, p);
                let mut done = true;
                for i in r + 1..self.nrows {
                    if h.data[i][c].is_zero() {
                        continue;
                    }
                    let q = h.data[i][c].div_floor(&h.data[r][c]);
                    let nq = T::zero() - q;
                    h.add_row(i, r, &nq);
                    u.add_row(i, r, &nq);
                    if !h.data[i][c].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h.data[r][c].is_zero() {
                continue;
            }
            if h.data[r][c].is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            for i in 0..r {
                let q = h.data[i][c].div_floor(&h.data[r][c]);
                let nq = T::zero() - q;
                h.add_row(i, r, &nq);
                u.add_row(i, r, &nq);
            }
            r += 1;
        }
        (h, u)
    }

    /// Smith normal form with `u * self * v == s`, nonnegative diagonal
    /// entries that divide successively.
    pub fn smith(&self) -> Smith<T> {
        let (m, n) = (self.nrows, self.ncols);
        let mut s = self.clone();
        let mut u = Matrix::identity(m);
        let mut v = Matrix::identity(n);
        for t in 0..m.min(n) {
            loop {
                let pick = (t..m)
                    .flat_map(|i| (t..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| !s.data[i][j].is_zero())
                    .min_by(|&a, &b| s.data[a.0][a.1].abs().cmp(&s.data[b.0][b.1].abs()).then(a.cmp(&b)));
                let Some((pi, pj)) = pick else {
                    return finish_smith(s, u, v);
                };
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
                s.swap_cols(t, pj);
                v.swap_cols(t, pj);
                let mut clean = true;
                for i in t + 1..m {
                    let q = s.data[i][t].div_floor(&s.data[t][t]);
                    let nq = T::zero() - q;
                    s.add_row(i, t, &nq);
                    u.add_row(i, t, &nq);
                    if !s.data[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..n {
                    let q = s.data[t][j].div_floor(&s.data[t][t]);
                    let nq = T::zero() - q;
                    s.add_col(j, t, &nq);
                    v.add_col(j, t, &nq);
                    if !s.data[t][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // divisibility of the remaining block
                let bad = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !s.data[i][j].is_multiple_of(&s.data[t][t]));
                match bad {
                    Some((i, _)) => {
                        let one = T::one();
                        s.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                    }
                    None => break,
                }
            }
            if s.data[t][t].is_negative() {
                s.negate_row(t);
                u.negate_row(t);
            }
        }
        finish_smith(s, u, v)
    }

    pub fn to_rational(&self) -> Matrix<BigRational> {
        self.map(|x| BigRational::from_integer(x.to_big()))
    }

    pub fn integer_determinant(&self) -> BigInt {
        self.to_rational().determinant().to_integer()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.integer_determinant().abs().is_one()
    }

    /// Basis (as rows) of the integer lattice `{ v : self * v == 0 }`.
    pub fn integer_kernel(&self) -> Matrix<T> {
        let (h, u) = self.transpose().hermite();
        let rows = (0..h.nrows)
            .filter(|&i| h.data[i].iter().all(|x| x.is_zero()))
            .map(|i| u.data[i].clone())
            .collect();
        Matrix::from_rows(self.ncols, rows)
    }

    /// The lattice `Q-rowspan(self) ∩ Z^n`, as a Hermite basis.
    pub fn saturate_rows(&self) -> Matrix<T> {
        let k = self.integer_kernel();
        let sat = if k.nrows == 0 {
            Matrix::identity(self.ncols)
        } else {
            k.integer_kernel()
        };
        sat.row_basis()
    }

    /// Nonzero rows of the Hermite form.
    pub fn row_basis(&self) -> Matrix<T> {
        let (h, _) = self.hermite();
        let rows = h.data.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        Matrix::from_rows(self.ncols, rows)
    }

    /// Extends a saturated full-rank row matrix to a unimodular square
    /// matrix whose first rows are `self`. `None` if not saturated or not of
    /// full row rank.
    pub fn unimodular_completion(&self) -> Option<Matrix<T>> {
        let k = self.nrows;
        let sm = self.smith();
        if (0..k).any(|i| i >= self.ncols || !sm.s.data[i][i].is_one()) {
            return None;
        }
        let vinv = sm.v.to_rational().inverse()?;
        let mut rows = self.data.clone();
        for i in k..self.ncols {
            let r: Option<Vec<T>> = vinv.data[i]
                .iter()
                .map(|q| q.is_integer().then(|| q.to_integer()).and_then(|z| z.to_i64()).map(T::from_i64))
                .collect();
            rows.push(r?);
        }
        Some(Matrix::from_rows(self.ncols, rows))
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Option<Matrix<T>> {
        if !self.is_unimodular() {
            return None;
        }
        let inv = self.to_rational().inverse()?;
        let rows: Option<Vec<Vec<T>>> = inv
            .data
            .iter()
            .map(|r| r.iter().map(|q| q.to_integer().to_i64().map(T::from_i64)).collect())
            .collect();
        Some(Matrix::from_rows(self.ncols, rows?))
    }

    pub fn integer_rank(&self) -> usize {
        self.row_basis().nrows
    }
}

fn finish_smith<T: IntScalar>(mut s: Matrix<T>, mut u: Matrix<T>, v: Matrix<T>) -> Smith<T> {
    for t in 0..s.nrows.min(s.ncols) {
        if s.data[t][t].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { s, u, v }
}

impl<F: Field> Matrix<F> {
    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(p) = (r..self.nrows).find(|&i| !a.data[i][c].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = F::one() / a.data[r][c].clone();
            for x in &mut a.data[r] {
                *x = x.clone() * inv.clone();
            }
            for i in 0..self.nrows {
                if i != r && !a.data[i][c].is_zero() {
                    let f = F::zero() - a.data[i][c].clone();
                    a.add_row(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows) of the right kernel `{ v : self * v == 0 }`.
    pub fn nullspace(&self) -> Matrix<F> {
        let (a, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        let rows = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.ncols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = F::zero() - a.data[i][f].clone();
                }
                v
            })
            .collect();
        Matrix::from_rows(self.ncols, rows)
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if !self.is_square() {
            return None;
        }
        let n = self.nrows;
        let aug = Matrix::from_rows(
            2 * n,
            (0..n)
                .map(|i| {
                    let mut r = self.data[i].clone();
                    r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
                    r
                })
                .collect(),
        );
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_rows(n, red.data.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    pub fn determinant(&self) -> F {
        assert!(self.is_square());
        let mut a = self.clone();
        let n = self.nrows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a.data[i][c].is_zero()) else {
                return F::zero();
            };
            if p != c {
                a.swap_rows(c, p);
                det = F::zero() - det;
            }
            det = det * a.data[c][c].clone();
            for i in c + 1..n {
                if !a.data[i][c].is_zero() {
                    let f = F::zero() - a.data[i][c].clone() / a.data[c][c].clone();
                    a.add_row(i, c, &f);
                }
            }
        }
        det
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &[F]) -> bool {
        let ext = self.stack(&Matrix::from_rows(self.ncols, vec![v.to_vec()]));
        ext.rank() == self.rank()
    }
}

/// Extended gcd: `(g, u, v)` with `u*a + v*b == g == gcd(a, b) >= 0`.
/// Among all solutions `u` is the one of least absolute value (ties go
/// to the positive choice).
pub fn bezout(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    let (g, mut u, mut v) = (r0, s0, t0);
    if g != 0 && b != 0 {
        // shift along (b/g, -a/g) to minimise |u|
        let step_u = (b as i128 / g).abs();
        let sign = if b as i128 / g > 0 { 1 } else { -1 };
        let step_v = -(a as i128 / g) * sign;
        let k = (u as f64 / step_u as f64).round() as i128;
        u -= k * step_u;
        v -= k * step_v;
        if 2 * u < -step_u || (2 * u == -step_u) {
            u += step_u;
            v += step_v;
        } else if 2 * u > step_u {
            u -= step_u;
            v -= step_v;
        }
    }
    if a == 0 && b != 0 {
        u = 0;
        v = if b > 0 { 1 } else { -1 };
    }
    let out = (g as i64, u as i64, v as i64);
    debug_assert_eq!(out.1 as i128 * a as i128 + out.2 as i128 * b as i128, out.0 as i128);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(rows: &[&[i64]]) -> Matrix<i64> {
        let c = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(c, rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn hermite_examples() {
        let (h, u) = Matrix::<i64>::identity(3).hermite();
        assert_eq!(h, Matrix::identity(3));
        assert_eq!(u, Matrix::identity(3));

        let m = zm(&[&[0, 1], &[1, 0]]);
        let (h, u) = m.hermite();
        assert_eq!(h, Matrix::identity(2));
        assert_eq!(u, m);

        let m = zm(&[&[2, 4, 1], &[3, 6, 5], &[1, 1, 1]]);
        let (h, u) = m.hermite();
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());
    }

    #[test]
    fn smith_examples() {
        let m = zm(&[&[2, 4], &[3, 6]]);
        let sm = m.smith();
        assert_eq!(sm.s, zm(&[&[1, 0], &[0, 0]]));
        assert_eq!(sm.u.mul(&m).mul(&sm.v), sm.s);

        let m = zm(&[&[2, 0], &[0, 3]]);
        let sm = m.smith();
        assert_eq!(sm.s, zm(&[&[1, 0], &[0, 6]]));
        assert_eq!(sm.u.mul(&m).mul(&sm.v), sm.s);
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(bezout(2, 3), (1, -1, 1));
        assert_eq!(bezout(0, 5), (5, 0, 1));
        assert_eq!(bezout(4, 6), (2, -1, 1));
        for (a, b) in [(-4, 6), (7, -3), (0, 0), (5, 0), (-5, 0), (12, 18)] {
            let (g, u, v) = bezout(a, b);
            assert!(g >= 0);
            assert_eq!(u * a + v * b, g);
        }
    }

    #[test]
    fn kernels_and_completion() {
        let m = zm(&[&[1, 1, 0]]);
        let k = m.integer_kernel();
        assert_eq!(k.nrows(), 2);
        for r in k.rows() {
            assert_eq!(m.mul_vec(r), vec![0]);
        }
        let sat = zm(&[&[2, 4]]).saturate_rows();
        assert_eq!(sat, zm(&[&[1, 2]]));
        let w = zm(&[&[1, 2]]).unimodular_completion().unwrap();
        assert_eq!(w.row(0), &[1, 2]);
        assert!(w.is_unimodular());
        assert!(zm(&[&[2, 4]]).unimodular_completion().is_none());
    }

    #[test]
    fn field_operations() {
        let q = zm(&[&[1, 2], &[3, 4]]).to_rational();
        let inv = q.inverse().unwrap();
        assert_eq!(q.mul(&inv), Matrix::identity(2));
        assert_eq!(q.determinant(), crate::scalar::rat_int(-2));
        let s = zm(&[&[1, 1, 1]]).to_rational();
        assert_eq!(s.nullspace().nrows(), 2);
        assert!(s.row_space_contains(&vec![crate::scalar::rat_int(2); 3]));
    }
}
