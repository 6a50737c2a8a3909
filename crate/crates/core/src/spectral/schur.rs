//! Eigenvalue decay of `ESE` for diagonal `E = diag(1, ε, ε², …)`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::ensure;
use crate::matrix::Matrix;
use crate::real::Real;
use crate::{Error, Result};

/// `ε^{2m}/(1−ε²) · max|S_jk|`, an upper bound on `λ_{m+1}(ESE)`.
pub fn graded_eigen_bound(s: &Matrix<f64>, eps: f64, m: usize) -> Result<f64> {
    ensure!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1), got {eps}");
    let n = s.rows();
    ensure!(n == s.cols(), "S must be square");
    ensure!(m >= 1 && m < n, "m must lie in [1, {}], got {m}", n.saturating_sub(1));
    Ok(eps.powi(2 * m as i32) / (1.0 - eps * eps) * s.max_abs())
}

/// `E S E` with `E_ii = ε^{i}` (0-based).
pub fn graded<T: Real>(s: &Matrix<T>, eps: &T) -> Matrix<T> {
    let ctx = eps.context();
    let mut powers = Vec::with_capacity(s.rows());
    let mut cur = T::one(ctx);
    for _ in 0..s.rows().max(s.cols()) {
        powers.push(cur.clone());
        cur = cur * eps.clone();
    }
    Matrix::from_fn(s.rows(), s.cols(), |i, j| {
        s.get(i, j).clone() * powers[i].clone() * powers[j].clone()
    })
}

/// The rank-`m` matrix `S(:,1:m) S(1:m,1:m)^{-1} S(1:m,:)`.
///
/// `S − S_m` vanishes on the leading `m × m` block and equals the Schur
/// complement of that block on the trailing one.
pub fn schur_lowrank<T: Real>(s: &Matrix<T>, m: usize) -> Result<Matrix<T>> {
    let n = s.rows();
    ensure!(n == s.cols(), "S must be square");
    ensure!(m >= 1 && m <= n, "m must lie in [1, {n}], got {m}");
    let ctx = s.get(0, 0).context();
    // Cholesky of the leading block, L Lᵀ = S11
    let mut l: Vec<Vec<T>> = alloc::vec![alloc::vec![T::zero(ctx); m]; m];
    for i in 0..m {
        for j in 0..=i {
            let partial = T::dot(&l[i][..j], &l[j][..j]);
            let v = s.get(i, j).clone() - partial;
            if i == j {
                if v <= T::zero(ctx) {
                    return Err(Error::Singular(format!(
                        "leading {}x{} minor is not positive definite",
                        i + 1,
                        i + 1
                    )));
                }
                l[i][i] = v.sqrt();
            } else {
                l[i][j] = v / l[j][j].clone();
            }
        }
    }
    // W = L^{-1} S(1:m, :), then S_m = Wᵀ W
    let mut w: Vec<Vec<T>> = Vec::with_capacity(m);
    for i in 0..m {
        let row: Vec<T> = (0..n)
            .map(|c| {
                let mut acc = s.get(i, c).clone();
                for (k, wk) in w.iter().enumerate() {
                    acc = acc - l[i][k].clone() * wk[c].clone();
                }
                acc / l[i][i].clone()
            })
            .collect();
        w.push(row);
    }
    Ok(Matrix::from_fn(n, n, |i, j| {
        let mut acc = T::zero(ctx);
        for wk in &w {
            acc = acc + wk[i].clone() * wk[j].clone();
        }
        acc
    }))
}
