//! Sample grids and column-scaled design matrices.
//!
//! A [`DesignMatrix`] keeps the recipe (basis, column scale, grid) rather
//! than just numbers, so it can be rebuilt at any working precision with
//! [`DesignMatrix::materialize`]. Rounding the entries to `f64` first would
//! bury the small singular values under a `1e-16` perturbation.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::ensure;
use crate::matrix::Matrix;
use crate::real::Real;
use crate::Result;

/// Strictly increasing sample points in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    points: Vec<f64>,
}

impl Grid1D {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        ensure!(!points.is_empty(), "a grid needs at least one point");
        for (i, &t) in points.iter().enumerate() {
            ensure!((-1.0..=1.0).contains(&t), "grid point {t} lies outside [-1, 1]");
            if i > 0 {
                ensure!(points[i - 1] < t, "grid points must be strictly increasing");
            }
        }
        Ok(Grid1D { points })
    }

    /// `n` equally spaced points including both endpoints (`{0}` when `n = 1`).
    pub fn equispaced(n: usize) -> Result<Self> {
        ensure!(n >= 1, "a grid needs at least one point");
        Self::new(equispaced_points(n))
    }

    /// Chebyshev points of the second kind, in increasing order.
    pub fn chebyshev(n: usize) -> Result<Self> {
        ensure!(n >= 1, "a grid needs at least one point");
        if n == 1 {
            return Self::new(alloc::vec![0.0]);
        }
        let m = (n - 1) as f64;
        let pts = (0..n)
            .map(|k| {
                // sin form is symmetric and exact at the centre
                let x = core::f64::consts::PI * (2.0 * k as f64 - m) / (2.0 * m);
                x.sin()
            })
            .collect();
        Self::new(pts)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn equispaced_points(n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![0.0];
    }
    let step = 2.0 / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { 1.0 } else { -1.0 + step * i as f64 })
        .collect()
}

/// Distinct nodes in `[-1, 1]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    nodes: Vec<(f64, f64)>,
}

impl Grid2D {
    pub fn new(nodes: Vec<(f64, f64)>) -> Result<Self> {
        ensure!(!nodes.is_empty(), "a grid needs at least one node");
        for (i, &(t, s)) in nodes.iter().enumerate() {
            ensure!(
                (-1.0..=1.0).contains(&t) && (-1.0..=1.0).contains(&s),
                "node ({t}, {s}) lies outside [-1, 1]^2"
            );
            ensure!(
                !nodes[..i].contains(&(t, s)),
                "duplicate node ({t}, {s})"
            );
        }
        Ok(Grid2D { nodes })
    }

    /// `k × k` equispaced tensor grid, `t` varying slowest.
    pub fn tensor(k: usize) -> Result<Self> {
        ensure!(k >= 1, "a grid needs at least one point per axis");
        let axis = equispaced_points(k);
        let mut nodes = Vec::with_capacity(k * k);
        for &t in &axis {
            for &s in &axis {
                nodes.push((t, s));
            }
        }
        Ok(Grid2D { nodes })
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignKind {
    ChebRho,
    TaylorR,
    NonAnalytic { nu: u32 },
    Cheb2D,
    Taylor2D,
}

impl DesignKind {
    pub fn name(&self) -> &'static str {
        match self {
            DesignKind::ChebRho => "cheb",
            DesignKind::TaylorR => "taylor",
            DesignKind::NonAnalytic { .. } => "nonanalytic",
            DesignKind::Cheb2D => "cheb2d",
            DesignKind::Taylor2D => "taylor2d",
        }
    }

    pub fn is_2d(&self) -> bool {
        matches!(self, DesignKind::Cheb2D | DesignKind::Taylor2D)
    }
}

/// Number of basis terms of total degree below `n` in two variables.
pub fn triangular(n: usize) -> usize {
    n * (n + 1) / 2
}

/// A basis-times-scaling matrix over a sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    kind: DesignKind,
    scale: f64,
    order: usize,
    nodes: Vec<(f64, f64)>,
    entries: Matrix<f64>,
}

/// `T_0(x), …, T_{n-1}(x)` or `1, x, …, x^{n-1}`.
fn basis_row<T: Real>(x: &T, n: usize, chebyshev: bool) -> Vec<T> {
    let ctx = x.context();
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(T::one(ctx));
    if n == 1 {
        return out;
    }
    out.push(x.clone());
    let two_x = x.clone() + x.clone();
    for j in 2..n {
        let next = if chebyshev {
            two_x.clone() * out[j - 1].clone() - out[j - 2].clone()
        } else {
            x.clone() * out[j - 1].clone()
        };
        out.push(next);
    }
    out
}

/// `scale^{-j}` for `j < n`.
fn inverse_powers<T: Real>(scale: f64, n: usize, ctx: T::Ctx) -> Vec<T> {
    let inv = T::one(ctx) / T::from_f64(scale, ctx);
    let mut out = Vec::with_capacity(n);
    let mut cur = T::one(ctx);
    for _ in 0..n {
        out.push(cur.clone());
        cur = cur * inv.clone();
    }
    out
}

impl DesignMatrix {
    fn build(kind: DesignKind, scale: f64, order: usize, nodes: Vec<(f64, f64)>) -> Self {
        let mut design = DesignMatrix {
            kind,
            scale,
            order,
            nodes,
            entries: Matrix::from_fn(0, 0, |_, _| 0.0),
        };
        design.entries = design.materialize::<f64>(());
        design
    }

    /// `T_{j}(t_i) ρ^{-j}`.
    pub fn cheb(grid: &Grid1D, rho: f64, n: usize) -> Result<Self> {
        ensure!(rho > 1.0 && rho.is_finite(), "rho must exceed 1, got {rho}");
        ensure!(n >= 1, "need at least one basis term");
        Ok(Self::build(DesignKind::ChebRho, rho, n, nodes_1d(grid)))
    }

    /// `t_i^{j} R^{-j}`.
    pub fn vandermonde(grid: &Grid1D, r: f64, n: usize) -> Result<Self> {
        ensure!(r > 1.0 && r.is_finite(), "R must exceed 1, got {r}");
        ensure!(n >= 1, "need at least one basis term");
        Ok(Self::build(DesignKind::TaylorR, r, n, nodes_1d(grid)))
    }

    /// `T_{j}(t_i) d_j` with algebraic column scaling.
    pub fn nonanalytic(grid: &Grid1D, nu: u32, n: usize) -> Result<Self> {
        ensure!(nu >= 1, "the smoothness order must be at least 1");
        ensure!(n >= 1, "need at least one basis term");
        Ok(Self::build(DesignKind::NonAnalytic { nu }, 1.0, n, nodes_1d(grid)))
    }

    /// Products `T_m(t) T_{j-m}(s) ρ^{-j}` in blocks of equal total degree.
    pub fn cheb_2d(grid: &Grid2D, rho: f64, n: usize) -> Result<Self> {
        ensure!(rho > 1.0 && rho.is_finite(), "rho must exceed 1, got {rho}");
        ensure!(n >= 1, "need at least one basis term");
        Ok(Self::build(DesignKind::Cheb2D, rho, n, grid.nodes().to_vec()))
    }

    /// Monomials `t^m s^{j-m} R^{-j}` in blocks of equal total degree.
    pub fn taylor_2d(grid: &Grid2D, r: f64, n: usize) -> Result<Self> {
        ensure!(r > 1.0 && r.is_finite(), "R must exceed 1, got {r}");
        ensure!(n >= 1, "need at least one basis term");
        Ok(Self::build(DesignKind::Taylor2D, r, n, grid.nodes().to_vec()))
    }

    pub fn kind(&self) -> DesignKind {
        self.kind
    }

    /// `ρ` or `R`; 1 for the algebraically scaled design.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The expansion order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.nodes.len()
    }

    pub fn cols(&self) -> usize {
        if self.kind.is_2d() {
            triangular(self.order)
        } else {
            self.order
        }
    }

    /// Grid nodes; 1D designs store `(t, 0)`.
    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    /// Entries rounded to double precision.
    pub fn entries(&self) -> &Matrix<f64> {
        &self.entries
    }

    /// Scale factor applied to column `j` (0-based).
    pub fn column_scale(&self, j: usize) -> f64 {
        match self.kind {
            DesignKind::ChebRho | DesignKind::TaylorR => self.scale.powi(-(j as i32)),
            DesignKind::NonAnalytic { nu } => {
                let nu = nu as usize;
                if j <= nu {
                    1.0
                } else {
                    ((j - nu) as f64).powi(-((nu + 1) as i32))
                }
            }
            DesignKind::Cheb2D | DesignKind::Taylor2D => {
                self.scale.powi(-(block_of(j) as i32))
            }
        }
    }

    /// Entries computed in `T` arithmetic from the exact grid nodes.
    pub fn materialize<T: Real>(&self, ctx: T::Ctx) -> Matrix<T> {
        let n = self.order;
        let rows = self.rows();
        let cols = self.cols();
        let mut data = Vec::with_capacity(rows * cols);
        match self.kind {
            DesignKind::ChebRho | DesignKind::TaylorR | DesignKind::NonAnalytic { .. } => {
                let chebyshev = self.kind != DesignKind::TaylorR;
                let scales = self.scales_1d::<T>(ctx);
                for &(t, _) in &self.nodes {
                    let basis = basis_row(&T::from_f64(t, ctx), n, chebyshev);
                    data.extend(basis.into_iter().zip(&scales).map(|(b, d)| b * d.clone()));
                }
            }
            DesignKind::Cheb2D | DesignKind::Taylor2D => {
                let chebyshev = self.kind == DesignKind::Cheb2D;
                let scales = inverse_powers::<T>(self.scale, n, ctx);
                for &(t, s) in &self.nodes {
                    let bt = basis_row(&T::from_f64(t, ctx), n, chebyshev);
                    let bs = basis_row(&T::from_f64(s, ctx), n, chebyshev);
                    for (j, scale) in scales.iter().enumerate() {
                        for m in 0..=j {
                            data.push(bt[m].clone() * bs[j - m].clone() * scale.clone());
                        }
                    }
                }
            }
        }
        Matrix::from_row_major(rows, cols, data).expect("design shape")
    }

    fn scales_1d<T: Real>(&self, ctx: T::Ctx) -> Vec<T> {
        match self.kind {
            DesignKind::NonAnalytic { nu } => {
                let nu = nu as usize;
                (0..self.order)
                    .map(|j| {
                        if j <= nu {
                            T::one(ctx)
                        } else {
                            T::one(ctx) / T::from_i64((j - nu) as i64, ctx).powi(nu as u32 + 1)
                        }
                    })
                    .collect()
            }
            _ => inverse_powers(self.scale, self.order, ctx),
        }
    }
}

fn nodes_1d(grid: &Grid1D) -> Vec<(f64, f64)> {
    grid.points().iter().map(|&t| (t, 0.0)).collect()
}

/// Total-degree block containing 2D column `col` (0-based).
pub fn block_of(col: usize) -> usize {
    let mut j = 0;
    while triangular(j + 1) <= col {
        j += 1;
    }
    j
}
