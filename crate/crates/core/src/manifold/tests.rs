use super::*;
use crate::bounds::{TaylorBudget, WidthReport};
use crate::design::{DesignMatrix, Grid1D};
use crate::matrix::Matrix;
use crate::models::{InputMap, Model, ModelKind};
use crate::spectral::{singular_values, svd, JacobiOptions};
use crate::Error;
use alloc::vec;
use alloc::vec::Vec;
use proptest::prelude::*;
use rand::SeedableRng;

fn nodes(n: usize) -> Vec<(f64, f64)> {
    Grid1D::equispaced(n).unwrap().points().iter().map(|&t| (t, 0.0)).collect()
}

fn config(kind: ModelKind, target: usize, seed: u64) -> SamplerConfig {
    let mut cfg = SamplerConfig::new(
        ModelSpec::One {
            kind,
            map: InputMap::UNIT_INTERVAL,
        },
        default_prior(kind, 3, false).unwrap(),
        TaylorBudget::new(1.0, 2.0, 6).unwrap(),
        nodes(6),
        target,
        seed,
    );
    cfg.check_grid = 41;
    cfg
}

#[test]
fn prior_validation() {
    assert!(Prior::uniform(1.0, 1.0).is_err());
    assert!(Prior::log_uniform(0.0, 1.0).is_err());
    assert!(Prior::log_uniform(2.0, 1.0).is_err());
    assert!(Prior::fixed(f64::NAN).is_err());
    assert!(ParamPrior::new(vec![]).is_err());
    let mut p = default_prior(ModelKind::Sir, 1, true).unwrap();
    assert_eq!(p.len(), 7);
    assert!(p.set(9, Prior::Fixed(1.0)).is_err());
    assert_eq!(default_prior(ModelKind::ExpSum, 11, false).unwrap().len(), 22);
    assert_eq!(default_prior(ModelKind::ExpSum, 11, true).unwrap().len(), 33);
}

#[test]
fn sampling_is_deterministic_and_order_free() {
    for kind in [ModelKind::ExpSum, ModelKind::Reaction, ModelKind::Sir] {
        let cfg = config(kind, 40, 9);
        let a = sample_cloud(&cfg).unwrap();
        let b = sample_cloud(&cfg).unwrap();
        assert_eq!(a, b);
        // evaluate each batch back to front, as an unordered pool would
        let c = sample_cloud_batched(&cfg, |r| {
            let mut out: Vec<_> = r.rev().map(|i| cfg.attempt(i)).collect();
            out.reverse();
            out
        })
        .unwrap();
        assert_eq!(a.to_csv(), c.to_csv());
        assert_eq!(a.len(), 40);
        assert!(a.attempted >= 40);
        let other = sample_cloud(&config(kind, 40, 10)).unwrap();
        assert_ne!(a.samples, other.samples);
    }
}

#[test]
fn accepted_samples_pass_again_and_stay_bounded() {
    let cfg = config(ModelKind::ExpSum, 60, 3);
    let cloud = sample_cloud(&cfg).unwrap();
    let b = &cfg.budget;
    for s in &cloud.samples {
        assert_eq!(cfg.evaluate(&s.params).unwrap().as_ref(), Some(&s.predictions));
        let norm = s.predictions.iter().map(|y| y * y).sum::<f64>().sqrt();
        assert!(norm <= b.c() * b.n() as f64);
        assert!(s.predictions.iter().all(|&y| y >= 0.0));
    }
}

#[test]
fn point_prior_gives_zero_widths() {
    let mut cfg = config(ModelKind::Reaction, 5, 1);
    cfg.prior = ParamPrior::new(vec![Prior::Fixed(1.0), Prior::Fixed(0.5), Prior::Fixed(1.0), Prior::Fixed(2.0)]).unwrap();
    let cloud = sample_cloud(&cfg).unwrap();
    assert_eq!(cloud.attempted, 5);
    let x = DesignMatrix::vandermonde(&Grid1D::equispaced(6).unwrap(), 2.0, 6).unwrap();
    let w = empirical_widths(&project_cloud(&cloud, &x, 30).unwrap()).unwrap();
    assert!(w.iter().all(|&v| v == 0.0));
}

#[test]
fn hopeless_prior_times_out() {
    let mut cfg = config(ModelKind::ExpSum, 5, 1);
    cfg.prior = ParamPrior::new(vec![Prior::Fixed(100.0), Prior::Fixed(1.0)]).unwrap();
    cfg.timeout_window = 500;
    assert!(matches!(
        sample_cloud(&cfg),
        Err(Error::SamplerTimeout {
            accepted: 0,
            attempted: 500
        })
    ));
    cfg.prior = default_prior(ModelKind::Sir, 1, false).unwrap();
    assert!(sample_cloud(&cfg).is_err());
    cfg.target = 0;
    assert!(sample_cloud(&cfg).is_err());
}

#[test]
fn diagonal_basis_permutes_coordinates() {
    let x = Matrix::from_fn(3, 3, |i, j| if i == j { [1.0, 3.0, 2.0][i] } else { 0.0 });
    let u = svd(&x, true, JacobiOptions::default()).unwrap().u.unwrap();
    let preds = vec![vec![1.0, 2.0, 3.0], vec![-4.0, 0.5, 0.0]];
    let p = project_with_basis(&preds, &u).unwrap();
    for (y, z) in preds.iter().zip(&p.coords) {
        let want = [y[1], y[2], y[0]];
        for (a, b) in z.iter().zip(want) {
            assert!((a.abs() - b.abs()).abs() < 1e-15);
        }
    }
    assert!(p.residuals.iter().all(|r| *r < 1e-15));
    assert!(project_with_basis(&[vec![1.0]], &u).is_err());
}

#[test]
fn width_examples() {
    let p = Projection {
        coords: vec![vec![0.0, 0.0], vec![3.0, 0.0]],
        residuals: vec![0.0; 2],
        dim: 2,
    };
    assert_eq!(empirical_widths(&p).unwrap(), vec![3.0, 0.0]);
    let mut q = p.clone();
    q.coords.push(vec![1.0, 0.0]);
    assert_eq!(empirical_widths(&q).unwrap(), vec![3.0, 0.0]);
    q.coords.truncate(1);
    assert!(empirical_widths(&q).is_err());
}

fn taylor_report(n: usize, budget: &TaylorBudget) -> (DesignMatrix, WidthReport) {
    let x = DesignMatrix::vandermonde(&Grid1D::equispaced(n).unwrap(), budget.r(), n).unwrap();
    let spec = singular_values(&x, 40).unwrap();
    let rep = WidthReport::from_spectrum(&spec, budget.radius())
        .unwrap()
        .with_truncation_error(budget.error_bound())
        .unwrap();
    (x, rep)
}

#[test]
fn clouds_are_enclosed_and_outliers_caught() {
    let cfg = config(ModelKind::Sir, 200, 4);
    let mut cloud = sample_cloud(&cfg).unwrap();
    let (x, rep) = taylor_report(6, &cfg.budget);
    let proj = project_cloud(&cloud, &x, 40).unwrap();
    let rec = enclosure_check(&proj, &rep);
    assert!(rec.passed, "{rec:?}");
    let widths = empirical_widths(&proj).unwrap();
    for (w, l) in widths.iter().zip(rep.ell_y_f64()) {
        assert!(*w <= l);
    }
    let bad = Model::expsum(vec![100.0], vec![1.0]).unwrap().with_map(InputMap::UNIT_INTERVAL);
    let ts: Vec<f64> = cfg.nodes.iter().map(|n| n.0).collect();
    cloud.samples.push(Sample {
        attempt: u64::MAX,
        params: vec![0.0; 5],
        predictions: bad.predict(&ts).unwrap(),
    });
    let rec = enclosure_check(&project_cloud(&cloud, &x, 40).unwrap(), &rep);
    assert!(!rec.passed && rec.worst_margin > 0.0);
    assert_eq!(rec.worst_sample, 200);
    assert!(project_cloud(&cloud, &DesignMatrix::vandermonde(&Grid1D::equispaced(5).unwrap(), 2.0, 5).unwrap(), 30).is_err());
}

#[test]
fn polynomial_clouds_fill_the_ellipsoid() {
    let budget = TaylorBudget::new(1.0, 2.0, 8).unwrap();
    let (x, _) = taylor_report(8, &budget);
    let spec = singular_values(&x, 40).unwrap();
    let preds = polynomial_cloud(&x, 2.5, 400, 7);
    let (_, u) = crate::spectral::left_singular_basis(&x, 40).unwrap();
    let proj = project_with_basis(&preds, &u.map(crate::real::Real::to_f64)).unwrap();
    let rec = ellipsoid_check(&proj, &spec.to_f64(), 2.5, 1e-10);
    assert!(rec.passed);
    assert!(rec.max_value > 1.0 - 1e-10);
    let tight = ellipsoid_check(&proj, &spec.to_f64(), 2.4, 1e-10);
    assert!(!tight.passed);
}

#[test]
fn csv_layout() {
    let cloud = sample_cloud(&config(ModelKind::Reaction, 2, 1)).unwrap();
    let csv = cloud.to_csv();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sample_id,param_1,param_2,param_3,param_4,y_0,y_1,y_2,y_3,y_4,y_5"
    );
    assert!(lines.next().unwrap().starts_with("0,"));
    let p = Projection {
        coords: vec![vec![1.0, -0.5]],
        residuals: vec![0.0],
        dim: 2,
    };
    assert_eq!(p.to_csv(), "sample_id,z_1,z_2\n0,1.0000000000000000e0,-5.0000000000000000e-1\n");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn draws_stay_in_support(seed in any::<u64>(), lo in 1e-4f64..1.0, span in 1e-3f64..10.0) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let u = Prior::uniform(-lo, lo + span).unwrap();
        let l = Prior::log_uniform(lo, lo + span).unwrap();
        for _ in 0..20 {
            let a = u.draw(&mut rng);
            prop_assert!(a >= -lo && a <= lo + span);
            let b = l.draw(&mut rng);
            prop_assert!(b >= lo * (1.0 - 1e-12) && b <= (lo + span) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn two_variable_sampling() {
    let grid = crate::design::Grid2D::tensor(3).unwrap();
    let mut cfg = SamplerConfig::new(
        ModelSpec::Two {
            kind: ModelKind::ExpSum,
            map: InputMap::UNIT_INTERVAL,
            s_map: InputMap::IDENTITY,
        },
        default_prior(ModelKind::ExpSum, 2, true).unwrap(),
        TaylorBudget::new(1.0, 2.0, 3).unwrap(),
        grid.nodes().to_vec(),
        20,
        2,
    );
    cfg.check_grid = 5;
    let cloud = sample_cloud(&cfg).unwrap();
    assert_eq!(cloud.param_names.len(), 6);
    assert_eq!(cloud.param_names[4], "E_0");
    assert!(cloud.samples.iter().all(|s| s.predictions.len() == 9));
}
