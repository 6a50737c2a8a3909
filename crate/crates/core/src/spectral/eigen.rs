//! Cyclic Jacobi eigenvalues of a symmetric matrix.

use alloc::vec::Vec;

use crate::error::ensure;
use crate::matrix::Matrix;
use crate::real::Real;
use crate::{Error, Result};

use super::jacobi::JacobiOptions;

/// Eigenvalues of symmetric `s`, descending.
///
/// Rotations use a relative threshold `|a_pq| > tol·√|a_pp a_qq|`, which
/// keeps small eigenvalues of graded positive definite matrices accurate.
pub fn symmetric_eigenvalues<T: Real>(s: &Matrix<T>, opts: JacobiOptions) -> Result<Vec<T>> {
    let n = s.rows();
    ensure!(n == s.cols(), "eigenvalues need a square matrix, got {}x{}", n, s.cols());
    if n == 0 {
        return Ok(Vec::new());
    }
    let ctx = s.get(0, 0).context();
    let one = T::one(ctx);
    let zero = T::zero(ctx);
    let tol = T::from_f64(opts.tol, ctx);
    let mut a: Vec<Vec<T>> = (0..n).map(|i| s.row(i).to_vec()).collect();
    let floor = tol.clone() * tol.clone() * s.max_abs();
    let mut residual = 0.0;
    for _ in 0..opts.max_sweeps {
        let mut rotated = false;
        residual = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q].clone();
                if apq.is_zero() {
                    continue;
                }
                let diag = (a[p][p].clone() * a[q][q].clone()).abs().sqrt();
                let mag = apq.abs();
                if !diag.is_zero() {
                    residual = residual.max((mag.clone() / diag.clone()).to_f64());
                }
                if mag <= tol.clone() * diag + floor.clone() {
                    continue;
                }
                rotated = true;
                let theta = (a[q][q].clone() - a[p][p].clone()) / (apq.clone() + apq.clone());
                let root = (one.clone() + theta.clone() * theta.clone()).sqrt();
                let t = if theta < zero {
                    -(one.clone() / (theta.abs() + root))
                } else {
                    one.clone() / (theta + root)
                };
                let c = one.clone() / (one.clone() + t.clone() * t.clone()).sqrt();
                let sn = c.clone() * t.clone();
                for row in a.iter_mut() {
                    let (x, y) = (row[p].clone(), row[q].clone());
                    row[p] = c.clone() * x.clone() - sn.clone() * y.clone();
                    row[q] = sn.clone() * x + c.clone() * y;
                }
                let (left, right) = a.split_at_mut(q);
                T::rotate(&mut left[p], &mut right[0], &c, &sn);
                a[p][q] = zero.clone();
                a[q][p] = zero.clone();
            }
        }
        if !rotated {
            let mut values: Vec<T> = (0..n).map(|i| a[i][i].clone()).collect();
            values.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
            return Ok(values);
        }
    }
    Err(Error::NonConvergence {
        sweeps: opts.max_sweeps,
        residual,
    })
}
