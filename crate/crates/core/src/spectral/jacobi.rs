//! One-sided (Hestenes) Jacobi SVD.

use alloc::vec::Vec;

use crate::matrix::Matrix;
use crate::real::Real;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiOptions {
    /// A column pair is rotated while `|a_p·a_q| > tol·‖a_p‖‖a_q‖`.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl JacobiOptions {
    /// Tolerance `10^{-(digits-5)}` with the default sweep limit.
    pub fn for_digits(digits: u32) -> Self {
        JacobiOptions {
            tol: num_traits::Float::powi(10f64, -(digits as i32 - 5)),
            max_sweeps: 60,
        }
    }
}

impl Default for JacobiOptions {
    fn default() -> Self {
        JacobiOptions {
            tol: 1e-14,
            max_sweeps: 60,
        }
    }
}

/// Descending singular values and, optionally, the matching left vectors.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub values: Vec<T>,
    /// `rows × min(rows, cols)`, columns ordered like `values`.
    pub u: Option<Matrix<T>>,
}

/// Orthogonalises `cols` in place; returns the accumulated right rotations
/// when `track` is set.
fn orthogonalize<T: Real>(
    cols: &mut [Vec<T>],
    track: bool,
    opts: JacobiOptions,
) -> Result<Option<Vec<Vec<T>>>> {
    let n = cols.len();
    let ctx = cols[0][0].context();
    let tol = T::from_f64(opts.tol, ctx);
    let one = T::one(ctx);
    let zero = T::zero(ctx);
    let mut v: Option<Vec<Vec<T>>> = track.then(|| {
        (0..n)
            .map(|j| (0..n).map(|i| if i == j { one.clone() } else { zero.clone() }).collect())
            .collect()
    });
    let mut residual = 0.0;
    for _ in 0..opts.max_sweeps {
        let mut rotated = false;
        residual = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = T::dot(&cols[p], &cols[p]);
                let beta = T::dot(&cols[q], &cols[q]);
                if alpha.is_zero() || beta.is_zero() {
                    continue;
                }
                let gamma = T::dot(&cols[p], &cols[q]);
                let scale = (alpha.clone() * beta.clone()).sqrt();
                let ratio = gamma.abs() / scale;
                residual = residual.max(ratio.to_f64());
                if ratio <= tol {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma.clone() + gamma);
                let root = (one.clone() + zeta.clone() * zeta.clone()).sqrt();
                let t = if zeta < zero {
                    -(one.clone() / (zeta.abs() + root))
                } else {
                    one.clone() / (zeta + root)
                };
                let c = one.clone() / (one.clone() + t.clone() * t.clone()).sqrt();
                let s = c.clone() * t;
                let (left, right) = cols.split_at_mut(q);
                T::rotate(&mut left[p], &mut right[0], &c, &s);
                if let Some(v) = v.as_mut() {
                    let (left, right) = v.split_at_mut(q);
                    T::rotate(&mut left[p], &mut right[0], &c, &s);
                }
            }
        }
        if !rotated {
            return Ok(v);
        }
    }
    Err(Error::NonConvergence {
        sweeps: opts.max_sweeps,
        residual,
    })
}

/// Singular values of `a` (and left singular vectors if `want_u`).
pub fn svd<T: Real>(a: &Matrix<T>, want_u: bool, opts: JacobiOptions) -> Result<Svd<T>> {
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || n == 0 {
        return Ok(Svd {
            values: Vec::new(),
            u: want_u.then(|| Matrix::from_fn(m, 0, |_, _| unreachable!())),
        });
    }
    let ctx = a.get(0, 0).context();
    let tall = m >= n;
    // the columns that get orthogonalised; for wide matrices use rows
    let mut cols: Vec<Vec<T>> = if tall {
        (0..n).map(|j| a.column(j)).collect()
    } else {
        (0..m).map(|i| a.row(i).to_vec()).collect()
    };
    let v = orthogonalize(&mut cols, want_u && !tall, opts)?;
    let norms: Vec<T> = cols.iter().map(|c| T::dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&i, &j| {
        norms[j]
            .partial_cmp(&norms[i])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let values: Vec<T> = order.iter().map(|&i| norms[i].clone()).collect();
    if !want_u {
        return Ok(Svd { values, u: None });
    }
    let k = m.min(n);
    let mut basis: Vec<Vec<T>> = if tall {
        order
            .iter()
            .map(|&i| {
                if norms[i].is_zero() {
                    alloc::vec![T::zero(ctx); m]
                } else {
                    cols[i].iter().map(|x| x.clone() / norms[i].clone()).collect()
                }
            })
            .collect()
    } else {
        // aᵀ = W Σ Vᵀ, so the left vectors of a are the columns of V
        let v = v.expect("tracked rotations");
        order.iter().map(|&i| v[i].clone()).collect()
    };
    complete_null_columns(&mut basis, &values, ctx);
    let u = Matrix::from_fn(m, k, |i, j| basis[j][i].clone());
    Ok(Svd {
        values,
        u: Some(u),
    })
}

/// Replaces columns belonging to exactly-zero singular values with an
/// orthonormal completion (Gram–Schmidt on unit vectors).
fn complete_null_columns<T: Real>(basis: &mut [Vec<T>], values: &[T], ctx: T::Ctx) {
    let m = basis.first().map_or(0, |b| b.len());
    let mut candidate = 0;
    for j in 0..basis.len() {
        if !values[j].is_zero() {
            continue;
        }
        while candidate < m {
            let mut w: Vec<T> = (0..m)
                .map(|i| if i == candidate { T::one(ctx) } else { T::zero(ctx) })
                .collect();
            candidate += 1;
            for _ in 0..2 {
                for (k, b) in basis.iter().enumerate() {
                    if k == j || (values[k].is_zero() && k > j) {
                        continue;
                    }
                    let proj = T::dot(b, &w);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi = wi.clone() - proj.clone() * bi.clone();
                    }
                }
            }
            let norm = T::dot(&w, &w).sqrt();
            if norm.to_f64() > 1e-3 {
                basis[j] = w.into_iter().map(|x| x / norm.clone()).collect();
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{ExtReal, Precision};
    use alloc::vec;

    fn sv(rows: usize, cols: usize, data: Vec<f64>) -> Vec<f64> {
        let a = Matrix::from_row_major(rows, cols, data).unwrap();
        svd(&a, false, JacobiOptions::default()).unwrap().values
    }

    #[test]
    fn small_examples() {
        assert_eq!(sv(2, 2, vec![3.0, 0.0, 0.0, 2.0]), vec![3.0, 2.0]);
        let v = sv(2, 2, vec![2.0, 0.0, 0.0, 3.0]);
        assert_eq!(v, vec![3.0, 2.0]);
        let v = sv(2, 2, vec![1.0, 1.0, 1.0, 1.0]);
        assert!((v[0] - 2.0).abs() < 1e-15 && v[1].abs() < 1e-15);
        let v = sv(2, 2, vec![1.0, -0.5, 1.0, 0.5]);
        assert!((v[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((v[1] - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn wide_matches_tall() {
        let a = Matrix::from_fn(3, 5, |i, j| ((i * 7 + j * 3) % 5) as f64 - 1.5);
        let tall = svd(&a.transpose(), true, JacobiOptions::default()).unwrap();
        let wide = svd(&a, true, JacobiOptions::default()).unwrap();
        for (x, y) in tall.values.iter().zip(&wide.values) {
            assert!((x - y).abs() < 1e-13);
        }
        let u = wide.u.unwrap();
        assert_eq!((u.rows(), u.cols()), (3, 3));
        let g = u.transpose().matmul(&u).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.get(i, j) - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn rank_deficient_basis_is_completed() {
        let a = Matrix::from_row_major(3, 2, vec![1.0, 1.0, 1.0, 1.0, 0.0, 0.0]).unwrap();
        let out = svd(&a, true, JacobiOptions::default()).unwrap();
        assert_eq!(out.values[1], 0.0);
        let u = out.u.unwrap();
        let g = u.transpose().matmul(&u).unwrap();
        assert!((g.get(0, 1)).abs() < 1e-15);
        assert!((g.get(1, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extended_precision_graded_values() {
        // diag(1, 1e-30, 1e-50) hidden behind an orthogonal rotation
        let p = Precision::digits(60);
        let c = ExtReal::new(0.6, p);
        let s = ExtReal::new(0.8, p);
        let d = [1e0, 1e-30, 1e-50].map(|x| ExtReal::new(x, p));
        let a = Matrix::from_fn(3, 3, |i, j| {
            let q = match (i, j) {
                (0, 0) => c.clone(),
                (0, 1) => -s.clone(),
                (1, 0) => s.clone(),
                (1, 1) => c.clone(),
                (2, 2) => ExtReal::new(1.0, p),
                _ => ExtReal::new(0.0, p),
            };
            q * d[j].clone()
        });
        let out = svd(&a, false, JacobiOptions::for_digits(60)).unwrap();
        let got: Vec<f64> = out.values.iter().map(Real::to_f64).collect();
        for (g, w) in got.iter().zip([1e0, 1e-30, 1e-50]) {
            assert!(((g - w) / w).abs() < 1e-14, "{g} vs {w}");
        }
    }

    #[test]
    fn sweep_limit_reports_nonconvergence() {
        let a = Matrix::from_fn(4, 4, |i, j| 1.0 / (1 + i + j) as f64);
        let opts = JacobiOptions {
            tol: 1e-14,
            max_sweeps: 1,
        };
        assert!(matches!(svd(&a, false, opts), Err(Error::NonConvergence { .. })));
    }
}
