//! Dense Gaussian elimination over an exact field.
//!
//! Pivots are the first nonzero entry in a column, which is only sound when
//! `T` has exact equality (rationals). Nothing here is tuned for floats.

use num_traits::Num;

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution<T> {
    Unique(Vec<T>),
    /// Consistent with free variables; free variables are set to zero.
    Underdetermined(Vec<T>),
    Inconsistent,
}

impl<T> Solution<T> {
    pub fn into_vec(self) -> Option<Vec<T>> {
        match self {
            Solution::Unique(v) | Solution::Underdetermined(v) => Some(v),
            Solution::Inconsistent => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Num> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduces in place to row echelon form; returns the pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let pivot = self.get(row, col).clone();
            for j in col..self.cols {
                let v = self.get(row, j).clone() / pivot.clone();
                self.data[row * self.cols + j] = v;
            }
            for i in 0..self.rows {
                if i == row {
                    continue;
                }
                let f = self.get(i, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..self.cols {
                    let v = self.get(i, j).clone() - f.clone() * self.get(row, j).clone();
                    self.data[i * self.cols + j] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// Solves `self · x = b` exactly.
    pub fn solve(&self, b: &[T]) -> Solution<T> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let n = self.cols;
        let mut aug = Matrix {
            rows: self.rows,
            cols: n + 1,
            data: Vec::with_capacity(self.rows * (n + 1)),
        };
        for (i, rhs) in b.iter().enumerate() {
            aug.data.extend_from_slice(&self.data[i * n..(i + 1) * n]);
            aug.data.push(rhs.clone());
        }
        let pivots = aug.echelon();
        if pivots.last() == Some(&n) {
            return Solution::Inconsistent;
        }
        let mut x = vec![T::zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, n).clone();
        }
        if pivots.len() == n {
            Solution::Unique(x)
        } else {
            Solution::Underdetermined(x)
        }
    }
}
