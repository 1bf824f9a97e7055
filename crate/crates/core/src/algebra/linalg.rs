//! Dense exact linear algebra over the rationals.
//!
//! Everything here is Gaussian elimination with exact pivots; there is no
//! pivoting heuristic beyond taking the first nonzero entry, which is
//! always valid over an exact field.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::rat::Rat;
use crate::error::{Error, Result};

/// A dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Mat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.at(k, j);
                    let cur = out.at(i, j) + &add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    acc += &(self.at(i, j) * &v[j]);
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot column of each
    /// eliminated row, in order.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data
                        .swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = self.at(row, col).inv().expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.at(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.at(r, col).is_zero() {
                    continue;
                }
                let f = self.at(r, col).clone();
                for c in col..self.cols {
                    let v = self.at(r, c) - &(&f * self.at(row, c));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return Rat::zero();
            };
            if p != col {
                for c in 0..n {
                    m.data.swap(p * n + c, col * n + c);
                }
                det = -det;
            }
            let pivot = m.at(col, col).clone();
            det *= &pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let f = m.at(r, col) * &inv;
                for c in col..n {
                    let v = m.at(r, c) - &(&f * m.at(col, c));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn invert(&self) -> Result<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, n + r, Rat::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::SingularMatrix("matrix is not invertible".into()));
        }
        let mut out = Mat::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.at(r, n + c).clone());
            }
        }
        Ok(out)
    }

    fn solve_impl(&self, b: &[Rat]) -> Result<(Vec<Rat>, Vec<Vec<Rat>>)> {
        assert_eq!(self.rows, b.len(), "right-hand side length mismatch");
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::UnsolvableSystem("inconsistent linear system".into()));
        }
        let mut particular = vec![Rat::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            particular[col] = aug.at(row, self.cols).clone();
        }
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        let mut null = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = -aug.at(row, free).clone();
            }
            null.push(v);
        }
        Ok((particular, null))
    }

    /// Solves `A x = b`, requiring exactly one solution. Errors on an
    /// inconsistent or underdetermined system.
    pub fn solve_unique(&self, b: &[Rat]) -> Result<Vec<Rat>> {
        let (x, null) = self.solve_impl(b)?;
        if !null.is_empty() {
            return Err(Error::UnsolvableSystem(alloc::format!(
                "underdetermined linear system ({} free directions)",
                null.len()
            )));
        }
        Ok(x)
    }

    /// Solves `A x = b`, returning one particular solution (free variables
    /// set to zero) and a basis of the nullspace. Errors when inconsistent.
    pub fn solve_full(&self, b: &[Rat]) -> Result<(Vec<Rat>, Vec<Vec<Rat>>)> {
        self.solve_impl(b)
    }

    /// A basis of `ker A`.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let zero = vec![Rat::zero(); self.rows];
        self.solve_impl(&zero).expect("homogeneous system is consistent").1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    #[test]
    fn solve_and_invert() {
        let a = Mat::from_rows(vec![
            vec![r(2, 1), r(1, 1)],
            vec![r(1, 1), r(3, 1)],
        ]);
        let x = a.solve_unique(&[r(5, 1), r(10, 1)]).unwrap();
        assert_eq!(x, vec![r(1, 1), r(3, 1)]);
        let inv = a.invert().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert_eq!(a.det(), r(5, 1));
    }

    #[test]
    fn detects_degeneracy() {
        let a = Mat::from_rows(vec![
            vec![r(1, 1), r(2, 1)],
            vec![r(2, 1), r(4, 1)],
        ]);
        assert!(a.solve_unique(&[r(1, 1), r(2, 1)]).is_err());
        assert!(matches!(
            a.solve_unique(&[r(1, 1), r(3, 1)]),
            Err(Error::UnsolvableSystem(_))
        ));
        assert_eq!(a.det(), Rat::zero());
        assert_eq!(a.rank(), 1);
        let null = a.nullspace();
        assert_eq!(null.len(), 1);
        assert_eq!(a.mul_vec(&null[0]), vec![Rat::zero(), Rat::zero()]);
    }

    #[test]
    fn nullspace_of_wide_system() {
        let a = Mat::from_rows(vec![vec![r(1, 1), r(1, 1), r(1, 1)]]);
        let (x, null) = a.solve_full(&[r(3, 1)]).unwrap();
        assert_eq!(x, vec![r(3, 1), Rat::zero(), Rat::zero()]);
        assert_eq!(null.len(), 2);
    }
}
