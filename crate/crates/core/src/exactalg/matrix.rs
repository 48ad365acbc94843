//! Dense exact matrices over a coefficient ring.

use num::rational::BigRational;
use num::{One, Zero};

use super::ring::Ring;
use crate::error::Error;

/// A `rows x cols` matrix with entries in `ring`, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.ring.tag())?;
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_entries(
        ring: Ring,
        rows: usize,
        cols: usize,
        entries: Vec<BigRational>,
    ) -> Result<Self, Error> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        let entries = entries
            .into_iter()
            .map(|e| ring.normalize(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix { ring, rows, cols, entries })
    }

    pub fn from_i64(ring: Ring, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Matrix::zero(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, ring.from_i64(*v));
            }
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.cols + j] = self.ring.reduce(v);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        let entries = self.entries.iter().map(|a| self.ring.neg(a)).collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: &BigRational) -> Matrix {
        let entries = self.entries.iter().map(|a| self.ring.mul(a, c)).collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in multiplication");
        let mut out = Matrix::zero(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = self.ring.add(out.get(i, j), &self.ring.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = Matrix::zero(self.ring, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut out = Matrix::zero(self.ring, self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out.set(self.rows + i, j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out =
            Matrix::zero(self.ring, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Matrix {
        let mut out = Matrix::zero(self.ring, self.rows, 1);
        for i in 0..self.rows {
            out.set(i, 0, self.get(i, j).clone());
        }
        out
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Matrix::zero(self.ring, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn top_rows(&self, n: usize) -> Matrix {
        self.submatrix(0, n, 0, self.cols)
    }

    /// Collects a list of column matrices into one matrix.
    pub fn from_columns(ring: Ring, rows: usize, cols: &[Matrix]) -> Matrix {
        let mut out = Matrix::zero(ring, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.rows, rows);
            assert_eq!(col.cols, 1);
            for i in 0..rows {
                out.set(i, j, col.get(i, 0).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free Gaussian elimination.
    pub fn determinant(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut det = BigRational::one();
        for k in 0..n {
            let pivot = (k..n).find(|&i| !a[i][k].is_zero());
            let Some(p) = pivot else { return BigRational::zero() };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det *= a[k][k].clone();
            let inv = a[k][k].clone().recip();
            for i in k + 1..n {
                let f = &a[i][k] * &inv;
                for j in k..n {
                    let v = &a[i][j] - &f * &a[k][j];
                    a[i][j] = v;
                }
            }
        }
        det
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_and_stacking() {
        let z = Ring::integers();
        let a = Matrix::from_i64(z, &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64(z, &[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_i64(z, &[&[2, 1], &[4, 3]]));
        assert_eq!(a.hstack(&b).cols(), 4);
        assert_eq!(a.vstack(&b).rows(), 4);
    }

    #[test]
    fn determinant_of_singular_matrix_is_zero() {
        let z = Ring::integers();
        let a = Matrix::from_i64(z, &[&[1, 2], &[2, 4]]);
        assert!(a.determinant().is_zero());
        let b = Matrix::from_i64(z, &[&[2, 1], &[1, 1]]);
        assert_eq!(b.determinant(), z.one());
    }

    #[test]
    fn empty_shapes_multiply() {
        let z = Ring::integers();
        let a = Matrix::zero(z, 0, 3);
        let b = Matrix::zero(z, 3, 2);
        assert_eq!(a.mul(&b).rows(), 0);
        let c = Matrix::zero(z, 2, 0);
        let d = Matrix::zero(z, 0, 4);
        assert_eq!(c.mul(&d), Matrix::zero(z, 2, 4));
    }
}
