//! The derivative budget `Σ_k (R^k a_k)² < C²N`, checked on a grid.

use alloc::vec::Vec;

use num_traits::Float;

use super::{Activation2D, Model};
use crate::bounds::TaylorBudget;
use crate::error::ensure;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintOptions {
    /// Equispaced points on `[−1, 1]`.
    pub grid: usize,
    /// Further points to check, typically the sample nodes.
    pub extra_nodes: Vec<f64>,
    /// Also sum the `k = N` term.
    pub include_order_n: bool,
}

impl Default for ConstraintOptions {
    fn default() -> Self {
        ConstraintOptions {
            grid: 201,
            extra_nodes: Vec::new(),
            include_order_n: false,
        }
    }
}

/// Outcome of a budget check. A failed check stops at the first violating
/// point, so `max_ratio` and `worst` then describe that point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    pub passed: bool,
    /// Largest `LHS / (C²N)` seen.
    pub max_ratio: f64,
    /// `(t, s)` where it occurred (`s = 0` in one dimension).
    pub worst: (f64, f64),
    /// Points evaluated.
    pub checked: usize,
}

/// Sorted, deduplicated union of `grid` equispaced points and `extra`.
pub fn check_points(grid: usize, extra: &[f64]) -> Result<Vec<f64>> {
    ensure!(grid >= 2, "check grid needs at least 2 points, got {grid}");
    ensure!(
        extra.iter().all(|t| (-1.0..=1.0).contains(t)),
        "check points must lie in [-1, 1]"
    );
    let mut pts: Vec<f64> = (0..grid)
        .map(|k| -1.0 + 2.0 * k as f64 / (grid - 1) as f64)
        .chain(extra.iter().copied())
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    Ok(pts)
}

/// Endpoints first: most violations show up there.
fn visit_order(mut pts: Vec<f64>) -> Vec<f64> {
    if pts.len() > 2 {
        let last = pts.pop().expect("nonempty");
        pts.insert(1, last);
    }
    pts
}

pub fn constraint_check(
    model: &Model,
    budget: &TaylorBudget,
    opts: &ConstraintOptions,
) -> Result<ConstraintReport> {
    let pts = visit_order(check_points(opts.grid, &opts.extra_nodes)?);
    let order = budget.n() - 1 + usize::from(opts.include_order_n);
    let cap = budget.c() * budget.c() * budget.n() as f64;
    let r = budget.r();
    let mut report = ConstraintReport {
        passed: true,
        max_ratio: 0.0,
        worst: (pts[0], 0.0),
        checked: 0,
    };
    model.visit_jets(&pts, order, |idx, a| {
        let mut pow = 1.0;
        let mut lhs = 0.0;
        for c in a {
            lhs += (pow * c).powi(2);
            pow *= r;
        }
        report.checked += 1;
        let ratio = lhs / cap;
        if ratio > report.max_ratio || report.checked == 1 {
            report.max_ratio = ratio;
            report.worst = (pts[idx], 0.0);
        }
        if lhs >= cap {
            report.passed = false;
        }
        report.passed
    })?;
    Ok(report)
}

/// `Σ_{j+k≤N−1} (R^{j+k} a_jk)² < C²n`, `n = N(N+1)/2`, on a `grid × grid`
/// tensor grid plus `extra` nodes.
pub fn constraint_check_2d(
    ext: &Activation2D,
    budget: &TaylorBudget,
    grid: usize,
    extra: &[(f64, f64)],
) -> Result<ConstraintReport> {
    let axis = visit_order(check_points(grid, &[])?);
    ensure!(
        extra.iter().all(|(t, s)| (-1.0..=1.0).contains(t) && (-1.0..=1.0).contains(s)),
        "check points must lie in [-1, 1]^2"
    );
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(axis.len() * axis.len() + extra.len());
    for &s in &axis {
        for &t in &axis {
            nodes.push((t, s));
        }
    }
    nodes.extend_from_slice(extra);
    let n = budget.n();
    let cap = budget.c() * budget.c() * (n * (n + 1) / 2) as f64;
    let r = budget.r();
    // The pure-t terms a_j0 are the jet of the model frozen at s; they are
    // part of the sum and much cheaper than the mixed jets. The margin keeps
    // rounding differences between the two paths from deciding a case.
    let screen = cap * (1.0 + 1e-9);
    for &s in &axis {
        let frozen = ext.at(s)?;
        let mut over = None;
        frozen.visit_jets(&axis, n - 1, |idx, a| {
            let mut pow = 1.0;
            let mut lhs = 0.0;
            for c in a {
                lhs += (pow * c).powi(2);
                pow *= r;
            }
            if lhs >= screen {
                over = Some((idx, lhs));
            }
            over.is_none()
        })?;
        if let Some((idx, lhs)) = over {
            return Ok(ConstraintReport {
                passed: false,
                max_ratio: lhs / cap,
                worst: (axis[idx], s),
                checked: 1,
            });
        }
    }
    let mut report = ConstraintReport {
        passed: true,
        max_ratio: 0.0,
        worst: nodes[0],
        checked: 0,
    };
    ext.visit_jets(&nodes, n - 1, |idx, a| {
        let mut lhs = 0.0;
        for (j, row) in a.iter().enumerate() {
            for (k, c) in row.iter().enumerate().take(n - j) {
                lhs += (r.powi((j + k) as i32) * c).powi(2);
            }
        }
        report.checked += 1;
        let ratio = lhs / cap;
        if ratio > report.max_ratio || report.checked == 1 {
            report.max_ratio = ratio;
            report.worst = nodes[idx];
        }
        if lhs >= cap {
            report.passed = false;
        }
        report.passed
    })?;
    Ok(report)
}
