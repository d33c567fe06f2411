//! Dense integer matrices, Smith normal form and row-style Hermite normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_dst += factor * row_src
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * factor;
            self.data[dst * self.cols + c] += v;
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * factor;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + c]);
            self.data[i * self.cols + c] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal, `d1 | d2 | ...`, `di >= 0`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (u, s, v) = smith_impl(a, true);
    SmithForm { u: u.expect("row transform tracked"), s, v }
}

/// Smith form without the row transform, for tall relation matrices.
pub fn smith_diagonal_with_cols(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (_, s, v) = smith_impl(a, false);
    (s, v)
}

fn smith_impl(a: &IntMatrix, track_rows: bool) -> (Option<IntMatrix>, IntMatrix, IntMatrix) {
    let mut s = a.clone();
    let mut u = track_rows.then(|| IntMatrix::identity(a.rows));
    let mut v = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..s.rows {
                for j in t..s.cols {
                    let x = &s[(i, j)];
                    if !x.is_zero()
                        && best.is_none_or(|(bi, bj)| x.magnitude() < s[(bi, bj)].magnitude())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (u, s, v);
            };
            s.swap_rows(t, pi);
            if let Some(u) = u.as_mut() {
                u.swap_rows(t, pi);
            }
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..s.rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, t, &q);
                }
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..s.cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let pivot = s[(t, t)].clone();
            let offending = (t + 1..s.rows)
                .find(|&i| (t + 1..s.cols).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::one());
                    if let Some(u) = u.as_mut() {
                        u.add_row_multiple(t, i, &BigInt::one());
                    }
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
    }
    (u, s, v)
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`:
/// returns a basis in upper-triangular echelon form with positive pivots
/// and entries above each pivot reduced into `[0, pivot)`. Zero rows dropped.
pub fn hermite_rows(vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(dim) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<BigInt>> = vectors.to_vec();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut col = 0;
    while col < dim && !rows.is_empty() {
        // gcd-combine every row's entry at `col` into a single pivot row
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for r in rows.drain(..) {
            if r[col].is_zero() {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let eg = p[col].extended_gcd(&r[col]);
                    let (g, x, y) = (eg.gcd, eg.x, eg.y);
                    let new_p: Vec<BigInt> = p.iter().zip(&r).map(|(a, b)| &x * a + &y * b).collect();
                    let pa = &p[col] / &g;
                    let ra = &r[col] / &g;
                    let new_r: Vec<BigInt> = p.iter().zip(&r).map(|(a, b)| &pa * b - &ra * a).collect();
                    debug_assert!(new_r[col].is_zero());
                    if new_r.iter().any(|x| !x.is_zero()) {
                        rest.push(new_r);
                    }
                    pivot = Some(new_p);
                }
            }
        }
        if let Some(mut p) = pivot {
            if p[col].is_negative() {
                p.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            basis.push(p);
        }
        rows = rest;
        col += 1;
    }
    // reduce entries above pivots
    for i in (0..basis.len()).rev() {
        let pc = basis[i].iter().position(|x| !x.is_zero()).unwrap();
        let pv = basis[i][pc].clone();
        for k in 0..i {
            let q = basis[k][pc].div_floor(&pv);
            if !q.is_zero() {
                let sub: Vec<BigInt> = basis[i].iter().map(|x| x * &q).collect();
                for (a, b) in basis[k].iter_mut().zip(sub) {
                    *a -= b;
                }
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn check_smith(a: &IntMatrix) -> Vec<BigInt> {
        let SmithForm { u, s, v } = smith_normal_form(a);
        assert_eq!(u.mul(a).unwrap().mul(&v).unwrap(), s);
        assert!(s.is_diagonal());
        assert!(u.determinant().unwrap().abs().is_one());
        assert!(v.determinant().unwrap().abs().is_one());
        let d = s.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "{d:?}");
            }
        }
        d
    }

    #[test]
    fn examples() {
        assert_eq!(check_smith(&mat(&[&[1, 0], &[0, 1]])), vec![1.into(), 1.into()]);
        assert_eq!(check_smith(&mat(&[&[2, 0], &[0, 3]])), vec![1.into(), 6.into()]);
        let d = check_smith(&mat(&[&[4, 6]]));
        assert_eq!(d, vec![BigInt::from(2)]);
        assert_eq!(smith_normal_form(&mat(&[&[4, 6]])).s, mat(&[&[2, 0]]));
    }

    #[test]
    fn zero_and_degenerate() {
        assert_eq!(check_smith(&mat(&[&[0, 0], &[0, 0]])), vec![0.into(), 0.into()]);
        assert_eq!(check_smith(&mat(&[&[2, 4], &[4, 8]])), vec![2.into(), 0.into()]);
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).determinant().unwrap(), BigInt::from(6));
        assert_eq!(mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]).determinant().unwrap(), BigInt::from(0));
        assert_eq!(mat(&[&[0, 1], &[1, 0]]).determinant().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn hermite_basis() {
        let v = |x: &[i64]| x.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>();
        let h = hermite_rows(&[v(&[4, 6]), v(&[6, 9]), v(&[0, 3])]);
        assert_eq!(h, vec![v(&[2, 0]), v(&[0, 3])]);
    }

    proptest! {
        #[test]
        fn smith_invariants(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-20i64..20, 25)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * 5..i * 5 + cols].to_vec()).collect();
            let a = IntMatrix::from_rows(&data).unwrap();
            check_smith(&a);
        }
    }
}
