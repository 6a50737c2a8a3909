//! The experiment subcommands.

use hyperribbon_core::bounds::{
    bound_2d_error, bound_2d_sv, cheb_radius, cheb_sv_bound, hy_cheb_bound, kink_split, radius_2d, rho_max,
    width_2d_alt, TaylorBudget, WidthReport,
};
use hyperribbon_core::chebkit::AnalyticBudget;
use hyperribbon_core::design::{DesignMatrix, Grid1D, Grid2D};
use hyperribbon_core::manifold::{
    empirical_widths, enclosure_check, project_cloud, sample_cloud_batched, ModelSpec, SampleCloud, SamplerConfig,
};
use hyperribbon_core::models::InputMap;
use hyperribbon_core::spectral::{singular_values, slope_fit, svd, DecayMode, JacobiOptions, SingularSpectrum};
use hyperribbon_core::{Real, Result as CoreResult};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cloudio::{read_cloud, CloudMeta};
use crate::config::{Config, ModelArg};
use crate::output::Output;
use crate::svg::{Plot, Series, Style};
use crate::CliError;

type Lines = Result<Vec<String>, CliError>;

fn indexed(values: &[f64]) -> Vec<(f64, f64)> {
    values.iter().enumerate().map(|(i, &v)| ((i + 1) as f64, v)).collect()
}

fn log_plot(title: &str, y_label: &str, series: Vec<Series>) -> Plot {
    Plot {
        title: title.into(),
        x_label: "j".into(),
        y_label: y_label.into(),
        log_x: false,
        log_y: true,
        series,
    }
}

fn optional_points(report: &WidthReport, f: impl Fn(&hyperribbon_core::bounds::WidthRecord) -> Option<f64>) -> Vec<(f64, f64)> {
    report.records().iter().filter_map(|r| f(r).map(|v| (r.j as f64, v))).collect()
}

/// Axes where `column` lies below `ell_P`.
fn violations(report: &WidthReport, column: impl Fn(&hyperribbon_core::bounds::WidthRecord) -> Option<f64>) -> Vec<usize> {
    report
        .records()
        .iter()
        .filter(|r| column(r).is_some_and(|b| b < r.ell_p.to_f64()))
        .map(|r| r.j)
        .collect()
}

pub fn bounds1d(cfg: &Config, out: &mut Output) -> Lines {
    let grid = Grid1D::equispaced(cfg.grid)?;
    let budget = TaylorBudget::new(cfg.c, cfg.r, cfg.n)?;
    let analytic = AnalyticBudget::new(cfg.m, cfg.rho)?;

    let vd = DesignMatrix::vandermonde(&grid, cfg.r, cfg.n)?;
    let taylor = WidthReport::from_spectrum(&singular_values(&vd, cfg.precision)?, budget.radius())?
        .with_truncation_error(budget.error_bound())?
        .with_taylor_bound(|j| budget.width_bound(j).ok())
        .with_cheb_bound(|j| hy_cheb_bound(&analytic, cfg.n, j).ok());
    out.csv("widths.csv", &taylor.to_csv(false))?;

    let jd = DesignMatrix::cheb(&grid, cfg.rho, cfg.n)?;
    let cheb = WidthReport::from_spectrum(&singular_values(&jd, cfg.precision)?, cheb_radius(cfg.m, cfg.n))?
        .with_truncation_error(analytic.truncation_error_bound(cfg.n)?)?
        .with_cheb_bound(|j| hy_cheb_bound(&analytic, cfg.n, j).ok());
    out.csv("widths_cheb.csv", &cheb.to_csv(false))?;

    // Chebyshev-rate guide line through the second Taylor width
    let ell = taylor.ell_p_f64();
    let guide: Vec<(f64, f64)> = match ell.get(1) {
        Some(&anchor) => (2..=ell.len()).map(|j| (j as f64, anchor * cfg.rho.powi(2 - j as i32))).collect(),
        None => Vec::new(),
    };
    let taylor_viol = violations(&taylor, |r| r.bound_taylor);
    let cheb_viol = violations(&cheb, |r| r.bound_cheb);
    out.json(
        "bounds1d.json",
        &json!({
            "C": cfg.c, "R": cfg.r, "M": cfg.m, "rho": cfg.rho, "N": cfg.n, "grid": cfg.grid,
            "taylor": { "radius": taylor.radius(), "err": taylor.err(), "ell_p": ell,
                        "ell_y": taylor.ell_y_f64(), "bound_violations": taylor_viol },
            "cheb": { "radius": cheb.radius(), "err": cheb.err(), "ell_p": cheb.ell_p_f64(),
                      "ell_y": cheb.ell_y_f64(), "bound_violations": cheb_viol },
            "guide_rate": cfg.rho,
        }),
    )?;
    let plot = log_plot(
        "Hyperellipsoid widths",
        "width",
        vec![
            Series::new("Taylor ell_P", indexed(&ell), Style::Points),
            Series::new("Taylor ell_Y", indexed(&taylor.ell_y_f64()), Style::Line),
            Series::new("Taylor bound", optional_points(&taylor, |r| r.bound_taylor), Style::Line),
            Series::new("Chebyshev ell_P", indexed(&cheb.ell_p_f64()), Style::Points),
            Series::new(&format!("rate rho = {:.3}", cfg.rho), guide, Style::Dashed),
        ],
    );
    out.svg("widths.svg", &plot)?;
    Ok(vec![
        format!("bounds1d: N={} grid={} C={} R={} rho={}", cfg.n, cfg.grid, cfg.c, cfg.r, cfg.rho),
        format!("  Taylor ell_P(1)={:.6e} ell_P(N)={:.6e} err={:.6e}", ell[0], ell[ell.len() - 1], taylor.err()),
        format!("  Taylor bound violations: {}", taylor_viol.len()),
        format!("  Chebyshev bound violations: {}", cheb_viol.len()),
    ])
}

pub fn bounds2d(cfg: &Config, out: &mut Output) -> Lines {
    let grid = Grid2D::tensor(cfg.grid)?;
    let budget = TaylorBudget::new(cfg.c, cfg.r, cfg.n)?;
    let analytic = AnalyticBudget::new(cfg.m, cfg.rho)?;

    let td = DesignMatrix::taylor_2d(&grid, cfg.r, cfg.n)?;
    let taylor = WidthReport::from_spectrum(&singular_values(&td, cfg.precision)?, budget.radius_2d())?
        .with_truncation_error(budget.error_bound_2d())?;
    out.csv("widths_2d.csv", &taylor.to_csv(false))?;

    let cd = DesignMatrix::cheb_2d(&grid, cfg.rho, cfg.n)?;
    let spectrum = singular_values(&cd, cfg.precision)?;
    let r = radius_2d(cfg.m, cfg.n);
    let cheb = WidthReport::from_spectrum(&spectrum, r)?
        .with_truncation_error(bound_2d_error(&analytic, cfg.n)?)?
        .with_cheb_bound(|j| bound_2d_sv(cfg.n, cfg.rho, j).ok().map(|b| 2.0 * r * b));
    out.csv("widths_2d_cheb.csv", &cheb.to_csv(false))?;

    let sigma = spectrum.to_f64();
    let mut sv_violations = Vec::new();
    let mut rows = Vec::new();
    for (i, &s) in sigma.iter().enumerate() {
        let j = i + 1;
        let bound = bound_2d_sv(cfg.n, cfg.rho, j).ok();
        if bound.is_some_and(|b| s > b) {
            sv_violations.push(j);
        }
        rows.push(json!({ "j": j, "sigma": s, "bound_2d_sv": bound,
                          "width_main": bound.map(|b| 2.0 * r * b),
                          "width_alt": width_2d_alt(cfg.n, cfg.rho, j).ok() }));
    }
    out.json(
        "bounds2d.json",
        &json!({
            "C": cfg.c, "R": cfg.r, "M": cfg.m, "rho": cfg.rho, "N": cfg.n, "grid": cfg.grid,
            "taylor": { "radius": taylor.radius(), "err": taylor.err(), "ell_p": taylor.ell_p_f64() },
            "cheb": { "radius": r, "err": cheb.err(), "ell_p": cheb.ell_p_f64() },
            "singular_values": rows,
            "sv_bound_violations": sv_violations,
        }),
    )?;
    let bound: Vec<(f64, f64)> = (2..=sigma.len())
        .filter_map(|j| bound_2d_sv(cfg.n, cfg.rho, j).ok().map(|b| (j as f64, b)))
        .collect();
    let plot = log_plot(
        "Bivariate singular values",
        "sigma",
        vec![
            Series::new("Chebyshev sigma", indexed(&sigma), Style::Points),
            Series::new("staircase bound", bound, Style::Line),
            Series::new("Taylor sigma", indexed(&taylor.records().iter().map(|r| r.sigma.to_f64()).collect::<Vec<_>>()), Style::Points),
        ],
    );
    out.svg("widths_2d.svg", &plot)?;
    Ok(vec![
        format!("bounds2d: N={} grid={}x{} rho={}", cfg.n, cfg.grid, cfg.grid, cfg.rho),
        format!("  singular value bound violations: {}", sv_violations.len()),
    ])
}

/// `[round(a·N), round(b·N)]` clamped to `[1, N]`.
fn window(n: usize, a: f64, b: f64) -> Option<(usize, usize)> {
    let lo = ((a * n as f64).round() as usize).max(1);
    let hi = ((b * n as f64).round() as usize).min(n);
    (lo < hi).then_some((lo, hi))
}

fn slope(spectrum: &SingularSpectrum, w: Option<(usize, usize)>, mode: DecayMode) -> Option<f64> {
    w.and_then(|(lo, hi)| slope_fit(spectrum, lo, hi, mode).ok())
}

pub fn kink(cfg: &Config, out: &mut Output) -> Lines {
    let n = cfg.n;
    let grid = Grid1D::equispaced(n)?;
    let rho = rho_max(cfg.r)?;
    let vd = DesignMatrix::vandermonde(&grid, cfg.r, n)?;
    let jd = DesignMatrix::cheb(&grid, rho, n)?;
    let taylor = singular_values(&vd, cfg.precision)?;
    let cheb = singular_values(&jd, cfg.precision)?;
    let double = svd(&vd.materialize::<f64>(()), false, JacobiOptions::default())?;
    let double = SingularSpectrum::new(
        double.values.iter().map(|&v| hyperribbon_core::ExtReal::new(v, hyperribbon_core::real::Precision::digits(17))).collect(),
        17,
        None,
    );

    let mut csv = String::from("j,sigma_taylor,sigma_cheb,bound_taylor,bound_cheb\n");
    let (ts, cs) = (taylor.values(), cheb.values());
    let nf = (n as f64).sqrt();
    let r = cfg.r;
    for j in 1..=ts.len() {
        let bt = (j >= 2).then(|| nf * r.powi(2 - j as i32) / (r * r - 1.0).sqrt());
        let bc = cheb_sv_bound(n, rho, j).ok();
        let f = |x: Option<f64>| x.map(hyperribbon_core::bounds::format_f64).unwrap_or_default();
        csv.push_str(&format!(
            "{j},{},{},{},{}\n",
            ts[j - 1].to_scientific(17),
            cs.get(j - 1).map(|v| v.to_scientific(17)).unwrap_or_default(),
            f(bt),
            f(bc)
        ));
    }
    out.csv("kink.csv", &csv)?;

    let split = kink_split(&taylor);
    let lo_w = window(n, 0.05, 0.35);
    let hi_w = window(n, 0.55, 0.90);
    let slope_lo = slope(&taylor, lo_w, DecayMode::Geometric);
    let slope_hi = slope(&taylor, hi_w, DecayMode::Geometric);
    let f64_split = kink_split(&double).ok();
    out.json(
        "kink.json",
        &json!({
            "N": n, "R": r, "rho_max": rho, "precision": cfg.precision,
            "kink_split": split.as_ref().ok().map(|s| json!({
                "j_kink": s.j_kink, "slope_lo": s.slope_lo, "slope_hi": s.slope_hi, "sse": s.sse })),
            "kink_split_error": split.as_ref().err().map(|e| e.to_string()),
            "window_lo": lo_w, "slope_window_lo": slope_lo,
            "window_hi": hi_w, "slope_window_hi": slope_hi,
            "reference_slopes": { "cheb_rate": -rho.log10(), "taylor_rate": -r.log10() },
            "double_precision": {
                "slope_window_lo": slope(&double, lo_w, DecayMode::Geometric),
                "slope_window_hi": slope(&double, hi_w, DecayMode::Geometric),
                "j_kink": f64_split.map(|s| s.j_kink),
            },
        }),
    )?;
    let plot = log_plot(
        "Taylor and Chebyshev spectra",
        "sigma",
        vec![
            Series::new("sigma(VD)", indexed(&taylor.to_f64()), Style::Points),
            Series::new("sigma(JD), rho_max", indexed(&cheb.to_f64()), Style::Points),
            Series::new("sigma(VD), double", indexed(&double.to_f64()), Style::Line),
        ],
    );
    out.svg("kink.svg", &plot)?;
    let fmt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.4}"));
    let mut lines = vec![format!("kink: N={n} R={r} precision={}", cfg.precision)];
    match &split {
        Ok(s) => lines.push(format!("  j_kink={} slopes {:.4} / {:.4}", s.j_kink, s.slope_lo, s.slope_hi)),
        Err(e) => lines.push(format!("  no split: {e}")),
    }
    lines.push(format!(
        "  window slopes {} / {} (rates {:.4} / {:.4})",
        fmt(slope_lo),
        fmt(slope_hi),
        -rho.log10(),
        -r.log10()
    ));
    Ok(lines)
}

pub fn nonanalytic(cfg: &Config, out: &mut Output) -> Lines {
    let grid = Grid1D::chebyshev(cfg.grid)?;
    let mut spectra = Vec::new();
    for &nu in &cfg.nu {
        let x = DesignMatrix::nonanalytic(&grid, nu, cfg.n)?;
        spectra.push((nu, singular_values(&x, cfg.precision)?));
    }
    let len = spectra.iter().map(|(_, s)| s.len()).min().unwrap_or(0);
    let mut csv = String::from("j");
    for (nu, _) in &spectra {
        csv.push_str(&format!(",sigma_nu{nu}"));
    }
    csv.push('\n');
    for j in 0..len {
        csv.push_str(&(j + 1).to_string());
        for (_, s) in &spectra {
            csv.push(',');
            csv.push_str(&s.values()[j].to_scientific(17));
        }
        csv.push('\n');
    }
    out.csv("nonanalytic.csv", &csv)?;
    let w = window(len, 0.25, 0.75);
    let fits: Vec<Value> = spectra
        .iter()
        .map(|(nu, s)| json!({ "nu": nu, "slope": slope(s, w, DecayMode::Algebraic) }))
        .collect();
    out.json(
        "nonanalytic.json",
        &json!({ "N": cfg.n, "grid": cfg.grid, "precision": cfg.precision, "window": w, "fits": fits }),
    )?;
    let plot = Plot {
        title: "Finitely smooth designs".into(),
        x_label: "j".into(),
        y_label: "sigma".into(),
        log_x: true,
        log_y: true,
        series: spectra
            .iter()
            .map(|(nu, s)| Series::new(&format!("nu = {nu}"), indexed(&s.to_f64()), Style::Points))
            .collect(),
    };
    out.svg("nonanalytic.svg", &plot)?;
    let mut lines = vec![format!("nonanalytic: N={} grid={} window={w:?}", cfg.n, cfg.grid)];
    for (nu, s) in &spectra {
        match slope(s, w, DecayMode::Algebraic) {
            Some(v) => lines.push(format!("  nu={nu} slope={v:.4}")),
            None => lines.push(format!("  nu={nu} slope=n/a")),
        }
    }
    Ok(lines)
}

/// Prediction nodes: equispaced `t` in one variable, a tensor grid in two.
pub fn sample_nodes(grid: usize, two: bool) -> CoreResult<Vec<(f64, f64)>> {
    Ok(if two {
        Grid2D::tensor(grid)?.nodes().to_vec()
    } else {
        Grid1D::equispaced(grid)?.points().iter().map(|&t| (t, 0.0)).collect()
    })
}

/// The sampler set-up a config describes.
pub fn sampler_config(cfg: &Config) -> Result<SamplerConfig, CliError> {
    let kind = cfg.model.kind();
    let map = InputMap::UNIT_INTERVAL;
    let spec = if cfg.two_d() {
        ModelSpec::Two {
            kind,
            map,
            s_map: InputMap::IDENTITY,
        }
    } else {
        ModelSpec::One { kind, map }
    };
    let budget = TaylorBudget::new(cfg.c, cfg.r, cfg.n)?;
    let mut sc = SamplerConfig::new(
        spec,
        cfg.param_prior()?,
        budget,
        sample_nodes(cfg.grid, cfg.two_d())?,
        cfg.samples,
        cfg.seed,
    );
    sc.check_grid = cfg.check_grid;
    sc.include_order_n = cfg.include_order_n;
    Ok(sc)
}

/// Parallel sampling; the result does not depend on the thread count.
pub fn run_sampler(sc: &SamplerConfig) -> CoreResult<SampleCloud> {
    sample_cloud_batched(sc, |range| range.into_par_iter().map(|i| sc.attempt(i)).collect())
}

pub fn sample(cfg: &Config, out: &mut Output) -> Lines {
    let sc = sampler_config(cfg)?;
    let cloud = run_sampler(&sc)?;
    let meta = CloudMeta::new(cfg.model, &sc, &cloud);
    out.csv("cloud.csv", &cloud.to_csv())?;
    out.json("cloud.json", &meta)?;
    let mut lines = vec![format!(
        "sample: model={} dims={} accepted={} attempted={} rate={:.4}",
        cfg.model.kind().name(),
        cfg.dims,
        cloud.accepted,
        cloud.attempted,
        cloud.acceptance_rate()
    )];
    lines.extend(analyze(cfg, out, &sc, &cloud)?);
    Ok(lines)
}

pub fn project(cfg: &Config, out: &mut Output) -> Lines {
    let dir = cfg.cloud.clone().unwrap_or_else(|| cfg.out.clone());
    let (meta, cloud) = read_cloud(&dir)?;
    let sc = config_from_meta(&meta)?;
    let mut lines = vec![format!(
        "project: {} samples of {} from {}",
        cloud.len(),
        meta.model.kind().name(),
        dir.display()
    )];
    lines.extend(analyze(cfg, out, &sc, &cloud)?);
    Ok(lines)
}

fn config_from_meta(meta: &CloudMeta) -> Result<SamplerConfig, CliError> {
    let laws = meta.prior.iter().map(|p| p.to_prior()).collect::<Result<Vec<_>, _>>()?;
    let map = meta.map.to_map()?;
    let kind = meta.model.kind();
    let spec = match meta.s_map {
        Some(s) => ModelSpec::Two {
            kind,
            map,
            s_map: s.to_map()?,
        },
        None => ModelSpec::One { kind, map },
    };
    let budget = TaylorBudget::new(meta.budget.c, meta.budget.r, meta.budget.n)?;
    let prior = hyperribbon_core::manifold::ParamPrior::new(laws)?;
    let mut sc = SamplerConfig::new(spec, prior, budget, meta.nodes.clone(), meta.target, meta.seed);
    sc.check_grid = meta.check_grid;
    sc.include_order_n = meta.include_order_n;
    Ok(sc)
}

/// Design whose left singular vectors span the Taylor hyperellipsoid
/// axes at the cloud's nodes, with its radius and truncation error.
fn taylor_report(sc: &SamplerConfig, nodes: &[(f64, f64)], digits: u32) -> Result<(DesignMatrix, WidthReport), CliError> {
    let b = sc.budget;
    let (x, radius, err) = if sc.model.is_2d() {
        let g = Grid2D::new(nodes.to_vec())?;
        (DesignMatrix::taylor_2d(&g, b.r(), b.n())?, b.radius_2d(), b.error_bound_2d())
    } else {
        let g = Grid1D::new(nodes.iter().map(|n| n.0).collect())?;
        (DesignMatrix::vandermonde(&g, b.r(), b.n())?, b.radius(), b.error_bound())
    };
    let report = WidthReport::from_spectrum(&singular_values(&x, digits)?, radius)?.with_truncation_error(err)?;
    Ok((x, report))
}

/// Projection, widths, enclosure and the budget re-check shared by
/// `sample` and `project`.
fn analyze(cfg: &Config, out: &mut Output, sc: &SamplerConfig, cloud: &SampleCloud) -> Lines {
    let (x, report) = taylor_report(sc, &cloud.nodes, cfg.precision)?;
    let proj = project_cloud(cloud, &x, cfg.precision)?;
    out.csv("projection.csv", &proj.to_csv())?;
    let widths = empirical_widths(&proj)?;
    let report = if sc.model.is_2d() {
        report
    } else {
        let b = sc.budget;
        report.with_taylor_bound(|j| b.width_bound(j).ok())
    }
    .with_empirical(&widths);
    out.csv("widths.csv", &report.to_csv(false))?;

    let rec = enclosure_check(&proj, &report);
    let recheck_failures: usize = cloud
        .samples
        .par_iter()
        .map(|s| match sc.evaluate(&s.params) {
            Ok(Some(p)) => usize::from(
                p.iter().zip(&s.predictions).any(|(a, b)| (a - b).abs() > 1e-12 * a.abs().max(1.0)),
            ),
            _ => 1,
        })
        .sum();
    let min_prediction = cloud
        .samples
        .iter()
        .flat_map(|s| s.predictions.iter().copied())
        .fold(f64::INFINITY, f64::min);
    let max_width = widths.iter().copied().fold(0.0, f64::max);
    // C·N in one variable, C·n with n = N(N+1)/2 in two
    let (scale_name, terms) = if sc.model.is_2d() {
        ("Cn", hyperribbon_core::design::triangular(sc.budget.n()))
    } else {
        ("CN", sc.budget.n())
    };
    let cn = sc.budget.c() * terms as f64;
    out.json(
        "enclosure.json",
        &json!({
            "model": ModelArg::from_kind(sc.model.kind()),
            "dims": if sc.model.is_2d() { 2 } else { 1 },
            "samples": cloud.len(),
            "passed": rec.passed && recheck_failures == 0,
            "enclosure": {
                "passed": rec.passed, "violations": rec.violations, "worst_margin": rec.worst_margin,
                "worst_sample": rec.worst_sample, "worst_axis": rec.worst_axis,
                "max_residual": rec.max_residual, "residual_limit": rec.residual_limit,
            },
            "recheck_failures": recheck_failures,
            "radius": report.radius(), "err": report.err(),
            "ell_p": report.ell_p_f64(), "ell_y": report.ell_y_f64(),
            "empirical_widths": widths,
            "max_empirical_width": max_width, "width_scale": { "name": scale_name, "value": cn },
            "min_prediction": min_prediction,
        }),
    )?;
    let pts: Vec<(f64, f64)> = proj
        .coords
        .iter()
        .filter(|z| z.len() >= 2)
        .map(|z| (z[0], z[1]))
        .collect();
    let half = report.ell_y_f64().iter().map(|w| w / 2.0).collect::<Vec<_>>();
    let mut series = vec![Series::new("samples", pts, Style::Points)];
    if half.len() >= 2 {
        let (a, b) = (half[0], half[1]);
        let ring = (0..=72)
            .map(|k| {
                let th = k as f64 * std::f64::consts::PI / 36.0;
                (a * th.cos(), b * th.sin())
            })
            .collect();
        series.push(Series::new("H_Y section", ring, Style::Line));
    }
    out.svg(
        "manifold.svg",
        &Plot {
            title: format!("{} manifold, first two axes", sc.model.kind().name()),
            x_label: "z_1".into(),
            y_label: "z_2".into(),
            log_x: false,
            log_y: false,
            series,
        },
    )?;
    let lines = vec![
        format!(
            "  enclosure: {} ({} violations, worst margin {:.3e})",
            if rec.passed { "pass" } else { "FAIL" },
            rec.violations,
            rec.worst_margin
        ),
        format!("  budget re-check failures: {recheck_failures}"),
        format!("  max empirical width {max_width:.4} ({scale_name} = {cn}), min prediction {min_prediction:.3e}"),
    ];
    if !rec.passed {
        return Err(CliError::Property(format!(
            "{} samples fall outside the hyperellipsoid (worst margin {:.3e} on axis {})",
            rec.violations, rec.worst_margin, rec.worst_axis
        )));
    }
    if recheck_failures > 0 {
        return Err(CliError::Property(format!("{recheck_failures} samples fail the budget re-check")));
    }
    Ok(lines)
}
