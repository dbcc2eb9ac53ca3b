use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::zmatrix::smith_normal_form;

/// Dense row-major matrix over arbitrary-precision integers.
///
/// Entries are unbounded on purpose: divisor products and transform entries
/// overflow fixed-width integers quickly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, Error> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != nc {
                return Err(Error::DimensionMismatch {
                    detail: format!("ragged rows: expected {} columns, got {}", nc, r.len()),
                });
            }
        }
        Ok(IntMatrix {
            rows: nr,
            cols: nc,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_fn(nr, nc, |r, c| BigInt::from(rows[r][c]))
    }

    pub fn diagonal(diag: &[BigInt]) -> Self {
        let n = diag.len();
        let mut m = IntMatrix::zero(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Column vector from a slice.
    pub fn column_vector(v: &[BigInt]) -> Self {
        IntMatrix::from_fn(v.len(), 1, |r, _| v[r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        IntMatrix::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] + &other[(r, c)])
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] - &other[(r, c)])
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |r, c| -&self[(r, c)])
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "inner dimensions must agree: {} vs {}",
            self.cols, other.rows
        );
        IntMatrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += &self[(r, k)] * &other[(k, c)];
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += &self[(r, k)] * &v[k];
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] * s)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant requires a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&r| !a[(r, k)].is_zero());
                match swap {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs() == BigInt::one()
    }

    /// Inverse of a unimodular matrix, exactly, via its Smith normal form:
    /// `U M V = I` gives `M^{-1} = V U`.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                detail: format!("cannot invert a {}x{} matrix", self.rows, self.cols),
            });
        }
        let snf = smith_normal_form(self);
        if snf.d != IntMatrix::identity(self.rows) {
            return Err(Error::NotUnimodular);
        }
        Ok(snf.v.mul(&snf.u))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let t = &self[(src, c)] * q;
            self[(dst, c)] += t;
        }
    }

    /// col[dst] += q * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = &self[(r, src)] * q;
            self[(r, dst)] += t;
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self[(r, c)].clone();
            self[(r, c)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.determinant(), BigInt::from(-2));
        let m = IntMatrix::from_i64_rows(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 7]]);
        assert_eq!(m.determinant(), BigInt::from(42));
        let m = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
        assert_eq!(IntMatrix::zero(3, 3).determinant(), BigInt::zero());
    }

    #[test]
    fn inverse_of_unimodular() {
        let m = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(2));
        assert_eq!(inv.mul(&m), IntMatrix::identity(2));

        let m = IntMatrix::from_i64_rows(&[&[1, 5, -3], &[0, 1, 7], &[0, 0, -1]]);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(3));
    }

    #[test]
    fn inverse_rejects_non_unimodular() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
        assert_eq!(m.inverse_unimodular(), Err(Error::NotUnimodular));
    }

    #[test]
    fn mul_and_transpose() {
        let a = IntMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        let b = a.transpose();
        let ab = a.mul(&b);
        assert_eq!(ab[(0, 0)], BigInt::from(14));
        assert_eq!(ab[(1, 1)], BigInt::from(77));
        assert_eq!(ab[(0, 1)], ab[(1, 0)]);
    }
}
