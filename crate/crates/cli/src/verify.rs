//! Seeded property suites with a pass/fail record per property.

use hyperribbon_core::bounds::{cheb_sv_bound, TaylorBudget, WidthReport};
use hyperribbon_core::chebkit::{bernstein_point, cheb_truncation, sup_error, AnalyticBudget};
use hyperribbon_core::design::{DesignMatrix, Grid1D};
use hyperribbon_core::manifold::{
    default_prior, ellipsoid_check, empirical_widths, enclosure_check, project_cloud, project_with_basis,
    polynomial_cloud, ModelSpec, SamplerConfig,
};
use hyperribbon_core::models::{constraint_check, constraint_check_2d, ConstraintOptions, InputMap, ModelKind};
use hyperribbon_core::real::Precision;
use hyperribbon_core::spectral::{
    graded, graded_eigen_bound, left_singular_basis, schur_lowrank, singular_values, symmetric_eigenvalues,
    JacobiOptions,
};
use hyperribbon_core::{Error, ExtReal, Matrix, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::run_sampler;
use crate::config::Config;
use crate::modelfile::{LoadedModel, ModelFile};
use crate::output::Output;
use crate::CliError;

/// Relative slack for rounding in bound comparisons.
const SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub violations: usize,
    /// Largest `measured/bound` (or the property's own margin).
    pub worst_ratio: f64,
    pub detail: serde_json::Value,
}

impl PropertyResult {
    fn new(name: &str) -> Self {
        PropertyResult {
            name: name.into(),
            passed: true,
            checks: 0,
            violations: 0,
            worst_ratio: 0.0,
            detail: serde_json::Value::Null,
        }
    }

    /// Records `value ≤ bound` with relative slack.
    fn check(&mut self, value: f64, bound: f64) {
        self.checks += 1;
        if bound > 0.0 {
            self.worst_ratio = self.worst_ratio.max(value / bound);
        }
        if !(value <= bound * (1.0 + SLACK)) {
            self.violations += 1;
            self.passed = false;
        }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `B Bᵀ + δI` with `B` uniform on `[−1, 1]` and `δ ∈ [0.01, 1]`.
pub fn random_spd(n: usize, rng: &mut impl Rng) -> Matrix<f64> {
    let b: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
    let delta = 0.01 + rng.random::<f64>() * 0.99;
    Matrix::from_fn(n, n, |i, j| {
        let dot: f64 = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum();
        dot + if i == j { delta } else { 0.0 }
    })
}

/// Eigenvalue bound and the Schur-complement chain for random SPD
/// matrices, with an extended-precision cross-check of the first few.
pub fn graded_eigen_suite(trials: usize, eps: &[f64], seed: u64) -> Result<(PropertyResult, PropertyResult), Error> {
    let probe = Matrix::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 0.0 });
    for &e in eps {
        graded_eigen_bound(&probe, e, 1)?;
    }
    let mut bound = PropertyResult::new("graded_eigen_bound");
    let mut chain = PropertyResult::new("schur_chain");
    let mut cross_worst = 0.0f64;
    let mut cross_checked = 0usize;
    for trial in 0..trials {
        let mut g = rng(seed, trial as u64);
        let n = g.random_range(2..=12usize);
        let s = random_spd(n, &mut g);
        let lowrank: Vec<Matrix<f64>> = (1..n).map(|m| schur_lowrank(&s, m)).collect::<Result<_, _>>()?;
        for &e in eps {
            let lam = symmetric_eigenvalues(&graded(&s, &e), JacobiOptions::default())?;
            for m in 1..n {
                bound.check(lam[m], graded_eigen_bound(&s, e, m)?);
                let diff = Matrix::from_fn(n, n, |i, j| s.get(i, j) - lowrank[m - 1].get(i, j));
                chain.check(lam[m], graded(&diff, &e).frobenius_sq().sqrt());
            }
            if trial < 8 {
                let p = Precision::digits(40);
                let ext = graded(&s.map(|&v| ExtReal::new(v, p)), &ExtReal::new(e, p));
                let lam_ext = symmetric_eigenvalues(&ext, JacobiOptions::for_digits(40))?;
                for (a, b) in lam.iter().zip(&lam_ext) {
                    let b = b.to_f64();
                    cross_worst = cross_worst.max((a - b).abs() / b.abs());
                }
                cross_checked += 1;
            }
        }
    }
    bound.detail = serde_json::json!({ "matrices": trials, "eps": eps });
    chain.detail = serde_json::json!({
        "matrices": trials,
        "extended_cross_check": { "spectra": cross_checked, "max_relative_difference": cross_worst },
    });
    if cross_worst > 1e-8 {
        bound.passed = false;
    }
    Ok((bound, chain))
}

/// Largest `|f|` on a dense parameterization of `E_ρ` for `f = 1/(p − z)`.
pub fn pole_bound(p: f64, rho: f64) -> f64 {
    (0..4096)
        .map(|k| {
            let (x, y) = bernstein_point(rho, k as f64 * std::f64::consts::TAU / 4096.0);
            1.0 / (p - x).hypot(y)
        })
        .fold(0.0, f64::max)
}

/// Chebyshev truncation error of single-pole rationals against the
/// Bernstein-ellipse bound, `N ∈ [2, 30]`. Poles lie in `(1.05, 1.5)`: farther
/// out, the bound at `N = 30` drops below what a double-precision error
/// measurement resolves.
pub fn cheb_truncation_suite(functions: usize, seed: u64) -> Result<PropertyResult, Error> {
    let mut res = PropertyResult::new("cheb_truncation");
    let mut g = rng(seed, 1 << 32);
    for _ in 0..functions {
        let p = 1.05 + g.random::<f64>() * 0.45;
        let rho = 0.99 * (p + (p * p - 1.0).sqrt());
        let budget = AnalyticBudget::new(pole_bound(p, rho), rho)?;
        let f = move |t: f64| 1.0 / (p - t);
        for n in 2..=30 {
            let series = cheb_truncation(f, n)?;
            res.check(sup_error(f, &series, 2001)?, budget.truncation_error_bound(n)?);
        }
    }
    res.detail = serde_json::json!({ "functions": functions, "orders": [2, 30] });
    Ok(res)
}

/// Taylor truncation error of series `Σ C u_k (t/R)^k`, `|u_k| ≤ 1`, which
/// satisfy the budget at every order, for `N ∈ [3, 15]`.
pub fn taylor_truncation_suite(functions: usize, c: f64, r: f64, seed: u64) -> Result<PropertyResult, Error> {
    let mut res = PropertyResult::new("taylor_truncation");
    let mut g = rng(seed, 2 << 32);
    let terms = 400;
    for f in 0..functions {
        // the first function is the extremal all-ones series
        let u: Vec<f64> = (0..terms)
            .map(|_| if f == 0 { 1.0 } else { g.random::<f64>() * 2.0 - 1.0 })
            .collect();
        for n in 3..=15 {
            let budget = TaylorBudget::new(c, r, n)?;
            let err = (0..=2000)
                .map(|i| {
                    let t = -1.0 + i as f64 / 1000.0;
                    let x = t / r;
                    let mut tail = 0.0;
                    let mut pow = x.powi(n as i32);
                    for uk in &u[n..] {
                        tail += c * uk * pow;
                        pow *= x;
                    }
                    tail.abs()
                })
                .fold(0.0, f64::max);
            res.check(err, budget.error_bound());
        }
    }
    res.detail = serde_json::json!({ "functions": functions, "orders": [3, 15], "C": c, "R": r });
    Ok(res)
}

/// `σ_j(JD) ≤ √N ρ^{−j+2}/√(ρ²−1)` and `2C√N σ_j(VD) ≤ 2CN R^{−j+2}/√(R²−1)`.
pub fn dominance_suite(digits: u32, c: f64) -> Result<PropertyResult, Error> {
    let mut res = PropertyResult::new("width_dominance");
    for n in [5usize, 11, 30] {
        let grid = Grid1D::equispaced(n)?;
        for rate in [1.5, 2.0, 4.236] {
            let jd = singular_values(&DesignMatrix::cheb(&grid, rate, n)?, digits)?.to_f64();
            let vd = singular_values(&DesignMatrix::vandermonde(&grid, rate, n)?, digits)?.to_f64();
            let budget = TaylorBudget::new(c, rate, n)?;
            for j in 2..=n {
                res.check(jd[j - 1], cheb_sv_bound(n, rate, j)?);
                res.check(2.0 * budget.radius() * vd[j - 1], budget.width_bound(j)?);
            }
        }
    }
    res.detail = serde_json::json!({ "N": [5, 11, 30], "rates": [1.5, 2.0, 4.236] });
    Ok(res)
}

/// Exact polynomial images stay in the ellipsoid; a sampled ExpSum cloud
/// stays in `H_Y`.
pub fn enclosure_suite(cfg: &Config) -> Result<PropertyResult, Error> {
    let mut res = PropertyResult::new("enclosure");
    let budget = TaylorBudget::new(cfg.c, cfg.r, 11)?;
    let grid = Grid1D::equispaced(11)?;
    let x = DesignMatrix::vandermonde(&grid, cfg.r, 11)?;
    let (spec, u) = left_singular_basis(&x, cfg.precision)?;
    let preds = polynomial_cloud(&x, budget.radius(), cfg.trials.max(100), cfg.seed);
    let proj = project_with_basis(&preds, &u.map(Real::to_f64))?;
    let sigma = spec.to_f64();
    // rounding in Z_j is relative to ‖Y‖, so it grows like σ_1/σ_min
    let tol = 64.0 * f64::EPSILON * sigma[0] / sigma[sigma.len() - 1];
    let ell = ellipsoid_check(&proj, &sigma, budget.radius(), tol);
    res.checks += preds.len();
    res.worst_ratio = ell.max_value;
    if !ell.passed {
        res.passed = false;
        res.violations += 1;
    }

    let nodes: Vec<(f64, f64)> = grid.points().iter().map(|&t| (t, 0.0)).collect();
    let sc = SamplerConfig::new(
        ModelSpec::One {
            kind: ModelKind::ExpSum,
            map: InputMap::UNIT_INTERVAL,
        },
        default_prior(ModelKind::ExpSum, 11, false)?,
        budget,
        nodes,
        cfg.trials.max(100),
        cfg.seed,
    );
    let cloud = run_sampler(&sc)?;
    let proj = project_cloud(&cloud, &x, cfg.precision)?;
    let report = WidthReport::from_spectrum(&spec, budget.radius())?.with_truncation_error(budget.error_bound())?;
    let rec = enclosure_check(&proj, &report);
    res.checks += cloud.len();
    if !rec.passed {
        res.passed = false;
        res.violations += rec.violations;
    }
    res.detail = serde_json::json!({
        "polynomial_cloud": { "samples": preds.len(), "max_ellipsoid_value": ell.max_value, "tolerance": tol },
        "expsum_cloud": {
            "samples": cloud.len(), "violations": rec.violations, "worst_margin": rec.worst_margin,
            "max_residual": rec.max_residual, "widths": empirical_widths(&proj)?,
        },
    });
    Ok(res)
}

/// The derivative budget for a model parameter file.
pub fn model_budget(cfg: &Config, file: &ModelFile) -> Result<PropertyResult, CliError> {
    let mut res = PropertyResult::new("model_budget");
    let budget = TaylorBudget::new(cfg.c, cfg.r, cfg.n)?;
    let report = match file.build()? {
        LoadedModel::One(m) => {
            let opts = ConstraintOptions {
                grid: cfg.check_grid,
                extra_nodes: Vec::new(),
                include_order_n: cfg.include_order_n,
            };
            constraint_check(&m, &budget, &opts)?
        }
        LoadedModel::Two(a) => constraint_check_2d(&a, &budget, cfg.check_grid, &[])?,
    };
    res.checks = report.checked;
    res.worst_ratio = report.max_ratio;
    if !report.passed {
        res.passed = false;
        res.violations = 1;
    }
    res.detail = serde_json::json!({ "kind": file.kind().name(), "worst_point": report.worst });
    Ok(res)
}

pub fn run(cfg: &Config, out: &mut Output) -> Result<Vec<String>, CliError> {
    let functions = (cfg.trials / 25).max(20);
    let suites = || -> Result<Vec<PropertyResult>, CliError> {
        let (bound, chain) = graded_eigen_suite(cfg.trials, &cfg.eps, cfg.seed)?;
        let mut all = vec![
            bound,
            chain,
            cheb_truncation_suite(functions, cfg.seed)?,
            taylor_truncation_suite(functions, cfg.c, cfg.r, cfg.seed)?,
            dominance_suite(cfg.precision, cfg.c)?,
            enclosure_suite(cfg)?,
        ];
        if let Some(path) = &cfg.model_file {
            all.push(model_budget(cfg, &ModelFile::read(path)?)?);
        }
        Ok(all)
    };
    let results = match suites() {
        Ok(r) => r,
        Err(e) => {
            out.json("verify.json", &serde_json::json!({ "passed": false, "error": e.to_string() }))?;
            return Err(e);
        }
    };
    let passed = results.iter().all(|r| r.passed);
    out.json(
        "verify.json",
        &serde_json::json!({ "passed": passed, "seed": cfg.seed, "trials": cfg.trials, "properties": results }),
    )?;
    let lines: Vec<String> = results
        .iter()
        .map(|r| {
            serde_json::json!({
                "property": r.name, "passed": r.passed, "checks": r.checks,
                "violations": r.violations, "worst_ratio": r.worst_ratio,
            })
            .to_string()
        })
        .collect();
    if !passed {
        let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
        for l in &lines {
            eprintln!("{l}");
        }
        return Err(CliError::Property(format!("failed: {}", failed.join(", "))));
    }
    Ok(lines)
}
