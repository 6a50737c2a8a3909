//! Minimal dense row-major matrix.

use alloc::vec::Vec;

use crate::real::Real;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
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

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn as_row_major(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, order: &[usize]) -> Self {
        Matrix::from_fn(order.len(), self.cols, |i, j| self.get(order[i], j).clone())
    }
}

impl<T: Real> Matrix<T> {
    pub fn identity(n: usize, ctx: T::Ctx) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                T::one(ctx)
            } else {
                T::zero(ctx)
            }
        })
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                found: other.rows,
            });
        }
        let other_t = other.transpose();
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            T::dot(self.row(i), other_t.row(j))
        }))
    }

    /// `selfᵀ · v`.
    pub fn transpose_mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                found: v.len(),
            });
        }
        Ok((0..self.cols).map(|j| T::dot(&self.column(j), v)).collect())
    }

    pub fn frobenius_sq(&self) -> T {
        T::dot(&self.data, &self.data)
    }

    pub fn max_abs(&self) -> T {
        let ctx = self.data[0].context();
        self.data
            .iter()
            .fold(T::zero(ctx), |acc, x| T::max_of(acc, x.abs()))
    }
}

impl<T: Real> Matrix<T> {
    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Real::to_f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn matmul_and_transpose() {
        let a = Matrix::from_row_major(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let at = a.transpose();
        let g = at.matmul(&a).unwrap();
        assert_eq!(g.rows(), 3);
        assert_eq!(*g.get(0, 0), 17.0);
        assert_eq!(*g.get(1, 2), 2.0 * 3.0 + 5.0 * 6.0);
        assert_eq!(a.frobenius_sq(), 91.0);
        assert_eq!(a.transpose_mul_vec(&[1.0, -1.0]).unwrap(), vec![-3.0, -3.0, -3.0]);
        assert!(Matrix::from_row_major(2, 2, vec![1.0]).is_err());
    }
}
