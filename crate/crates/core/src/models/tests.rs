use super::*;
use crate::bounds::TaylorBudget;
use proptest::prelude::*;

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn expsum_values_and_jets() {
    let flat = Model::expsum(vec![1.0], vec![0.0]).unwrap();
    for t in [-1.0, 0.0, 0.3, 1.0] {
        assert_eq!(flat.value(t).unwrap(), 1.0);
    }
    let e = Model::expsum(vec![1.0], vec![1.0]).unwrap();
    let jet = e.jet(0.0, 12).unwrap();
    for (k, a) in jet.coeffs().iter().enumerate() {
        let want = (-1f64).powi(k as i32) / factorial(k);
        assert!(close(*a, want, 1e-15));
    }
    assert!(Model::expsum(vec![1.0, 2.0], vec![1.0]).is_err());
    assert!(Model::expsum(vec![], vec![]).is_err());
}

#[test]
fn expsum_jets_match_termwise_derivatives() {
    let amps = vec![0.3, 1.2, 0.05];
    let rates = vec![0.1, 2.5, -0.7];
    let map = InputMap::new(0.25, 0.75).unwrap();
    let m = Model::expsum(amps.clone(), rates.clone()).unwrap().with_map(map);
    for t0 in [-1.0, -0.2, 0.6] {
        let jet = m.jet(t0, 10).unwrap();
        for k in 0..=10 {
            // d^k/dt^k A e^{-λ(a + b t)} = A (−λb)^k e^{−λ(a+bt)}
            let want: f64 = amps
                .iter()
                .zip(&rates)
                .map(|(a, l)| a * (-l * 0.75).powi(k as i32) * (-l * map.apply(t0)).exp())
                .sum::<f64>()
                / factorial(k);
            assert!(close(jet.coeffs()[k], want, 1e-13), "k={k}");
        }
    }
}

#[test]
fn reaction_examples() {
    let m = Model::reaction([1.0, 0.0, 0.0, 1.0]).unwrap();
    assert_eq!(m.value(1.0).unwrap(), 0.5);
    let jet = m.jet(0.0, 8).unwrap();
    let want = [0.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0];
    for (a, w) in jet.coeffs().iter().zip(want) {
        assert!((a - w).abs() < 1e-15);
    }
    let pole = Model::reaction([1.0, 0.0, 0.0, 0.0]).unwrap();
    assert!(matches!(pole.value(0.0), Err(Error::Evaluation(_))));
    assert!(matches!(pole.jet(0.0, 3), Err(Error::Evaluation(_))));
}

/// Quotient of shifted polynomials via `1/(d0(1+u)) = Σ (−u)^n / d0`.
fn reaction_oracle(th: [f64; 4], x0: f64, sigma: f64, k_max: usize) -> Vec<f64> {
    let k = k_max + 1;
    let mul = |a: &[f64], b: &[f64]| {
        let mut out = vec![0.0; k];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < k {
                    out[i + j] += x * y;
                }
            }
        }
        out
    };
    // p(x0 + σh) by binomial expansion of each monomial
    let shift = |c: [f64; 3]| {
        let mut out = vec![0.0; k.max(3)];
        for (p, cp) in c.iter().enumerate() {
            for q in 0..=p {
                let binom = [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 2.0, 1.0]][p][q];
                out[q] += cp * binom * x0.powi((p - q) as i32) * sigma.powi(q as i32);
            }
        }
        out.truncate(k);
        out
    };
    let num = shift([0.0, th[1], th[0]]);
    let den = shift([th[3], th[2], 1.0]);
    let d0 = den[0];
    let u: Vec<f64> = den.iter().enumerate().map(|(i, d)| if i == 0 { 0.0 } else { -d / d0 }).collect();
    let mut inv = vec![0.0; k];
    let mut pow = vec![0.0; k];
    pow[0] = 1.0;
    for _ in 0..k {
        for (a, p) in inv.iter_mut().zip(&pow) {
            *a += p / d0;
        }
        pow = mul(&pow, &u);
    }
    mul(&num, &inv)
}

#[test]
fn reaction_jets_match_oracle() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let th = [
            rng.random_range(0.0..4.0),
            rng.random_range(0.0..4.0),
            rng.random_range(0.0..4.0),
            rng.random_range(0.5..5.0),
        ];
        let m = Model::reaction(th).unwrap().with_map(InputMap::UNIT_INTERVAL);
        let t0 = rng.random_range(-1.0..1.0);
        let kmax = rng.random_range(0..=12usize);
        let jet = m.jet(t0, kmax).unwrap();
        let want = reaction_oracle(th, InputMap::UNIT_INTERVAL.apply(t0), 0.5, kmax);
        let scale = want.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for (a, w) in jet.coeffs().iter().zip(&want) {
            assert!((a - w).abs() <= 1e-12 * scale, "{a} vs {w}");
        }
    }
}

#[test]
fn sir_closed_forms() {
    let m = Model::sir(0.0, 1.0, 10.0, 1.0, 0.0).unwrap();
    assert!(close(m.value(1.0).unwrap(), (-1f64).exp(), 1e-13));
    assert!(close(m.value(-1.0).unwrap(), 1f64.exp(), 1e-13));
    let Family::Sir(s) = m.family() else { unreachable!() };
    for gamma_zero in [Sir::new(2.0, 0.0, 10.0, 1.0, 0.5).unwrap()] {
        for (_, _, r) in gamma_zero.integrate(&[0.5, 1.0, 0.0, -1.0]).unwrap() {
            assert_eq!(r, 0.5);
        }
    }
    assert!(s.integrate(&[]).unwrap().is_empty());
    assert!(Sir::new(1.0, 1.0, 0.0, 0.0, 0.0).is_err());
    assert!(Sir::new(1.0, 1.0, 1.0, 0.8, 0.5).is_err());
    assert!(Sir::new(1.0, 1.0, 1.0, -0.1, 0.0).is_err());
}

fn rk4(beta: f64, gamma: f64, n: f64, i0: f64, r0: f64, t_end: f64, steps: usize) -> [f64; 3] {
    let f = |y: [f64; 3]| {
        let inf = beta * y[0] * y[1] / n;
        [-inf, inf - gamma * y[1], gamma * y[1]]
    };
    let h = t_end / steps as f64;
    let mut y = [n - i0 - r0, i0, r0];
    let add = |y: [f64; 3], k: [f64; 3], c: f64| [y[0] + c * k[0], y[1] + c * k[1], y[2] + c * k[2]];
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f(add(y, k1, h / 2.0));
        let k3 = f(add(y, k2, h / 2.0));
        let k4 = f(add(y, k3, h));
        for c in 0..3 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
    }
    y
}

#[test]
fn sir_matches_rk4() {
    for (beta, gamma, n, i0, r0) in [(3.0, 1.0, 10.0, 0.5, 0.0), (8.0, 0.4, 100.0, 1.0, 5.0), (0.5, 2.5, 1.0, 0.9, 0.0)] {
        let sir = Sir::new(beta, gamma, n, i0, r0).unwrap();
        let got = sir.integrate(&[1.0]).unwrap()[0];
        let want = rk4(beta, gamma, n, i0, r0, 1.0, 100_000);
        assert!(close(got.0, want[0], 1e-9));
        assert!(close(got.1, want[1], 1e-9));
        assert!(close(got.2, want[2], 1e-9));
        assert!((got.0 + got.1 + got.2 - n).abs() <= 1e-10 * n);
    }
}

#[test]
fn sir_jets_match_richardson_differences() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let n = 10.0;
        let m = Model::sir(
            rng.random_range(0.5..6.0),
            rng.random_range(0.1..3.0),
            n,
            rng.random_range(0.1..3.0),
            0.0,
        )
        .unwrap();
        let t0 = rng.random_range(-0.5..0.5);
        let jet = m.jet(t0, 4).unwrap();
        let stencil = |h: f64| -> [f64; 5] {
            let y: Vec<f64> = m.predict(&[-2.0, -1.0, 0.0, 1.0, 2.0].map(|c| t0 + c * h)).unwrap();
            [
                y[2],
                (y[3] - y[1]) / (2.0 * h),
                (y[3] - 2.0 * y[2] + y[1]) / (h * h),
                (y[4] - 2.0 * y[3] + 2.0 * y[1] - y[0]) / (2.0 * h.powi(3)),
                (y[4] - 4.0 * y[3] + 6.0 * y[2] - 4.0 * y[1] + y[0]) / h.powi(4),
            ]
        };
        let (d1, d2, d3) = (stencil(0.08), stencil(0.04), stencil(0.02));
        let scale = jet.coeffs().iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for k in 0..=4 {
            let r1 = (4.0 * d2[k] - d1[k]) / 3.0;
            let r2 = (4.0 * d3[k] - d2[k]) / 3.0;
            let deriv = (16.0 * r2 - r1) / 15.0;
            let got = jet.coeffs()[k] * factorial(k);
            assert!(
                (got - deriv).abs() <= 1e-6 * got.abs().max(scale * factorial(k)),
                "k={k}: {got} vs {deriv}"
            );
        }
    }
}

#[test]
fn jets_reproduce_nearby_values() {
    let models = [
        Model::expsum(vec![0.4, 0.6], vec![0.5, 2.0]).unwrap(),
        Model::reaction([2.0, 1.0, 1.5, 2.0]).unwrap().with_map(InputMap::UNIT_INTERVAL),
        Model::sir(3.0, 1.0, 10.0, 1.0, 0.0).unwrap().with_map(InputMap::UNIT_INTERVAL),
    ];
    let r_est = 2.0;
    for m in &models {
        for t0 in [-0.9, 0.0, 0.7] {
            let jet = m.jet(t0, 10).unwrap();
            for h in [1e-3, -1e-2, 2e-2] {
                let err = (jet.eval(t0 + h) - m.value(t0 + h).unwrap()).abs();
                assert!(err <= 2.0 * (h.abs() * r_est).powi(11) + 1e-14, "{:?} {t0} {h} {err}", m.kind());
            }
        }
    }
}

#[test]
fn params_round_trip() {
    let models = [
        Model::expsum(vec![0.4, 0.6], vec![0.5, 2.0]).unwrap(),
        Model::reaction([2.0, 1.0, 1.5, 2.0]).unwrap(),
        Model::sir(3.0, 1.0, 10.0, 1.0, 0.0).unwrap(),
    ];
    for m in &models {
        let p = m.params();
        assert_eq!(p.len(), m.param_names().len());
        let back = Model::from_params(m.kind(), &p, InputMap::UNIT_INTERVAL).unwrap();
        assert_eq!(back.params(), p);
        assert_eq!(ModelKind::parse(m.kind().name()).unwrap(), m.kind());
    }
    assert!(ModelKind::parse("lorenz").is_err());
    assert!(Model::from_params(ModelKind::Reaction, &[1.0], InputMap::IDENTITY).is_err());
    // SIR from parameters starts at the left end of the interval
    let sir = Model::from_params(ModelKind::Sir, &[0.0, 1.0, 10.0, 1.0, 0.0], InputMap::UNIT_INTERVAL).unwrap();
    assert!(close(sir.value(1.0).unwrap(), (-1f64).exp(), 1e-13));
}

#[test]
fn constant_model_budget() {
    let b = TaylorBudget::new(1.0, 2.0, 11).unwrap();
    let opts = ConstraintOptions::default();
    let pass = constraint_check(&Model::expsum(vec![3.3], vec![0.0]).unwrap(), &b, &opts).unwrap();
    assert!(pass.passed);
    assert!(close(pass.max_ratio, 3.3 * 3.3 / 11.0, 1e-14));
    assert_eq!(pass.checked, 201);
    let fail = constraint_check(&Model::expsum(vec![3.32], vec![0.0]).unwrap(), &b, &opts).unwrap();
    assert!(!fail.passed && fail.max_ratio >= 1.0);
    let big = constraint_check(&Model::expsum(vec![100.0], vec![1.0]).unwrap(), &b, &opts).unwrap();
    assert!(!big.passed);
    assert_eq!(big.worst.0, -1.0);
    assert_eq!(big.checked, 1);
    assert!(check_points(1, &[]).is_err());
    assert!(check_points(3, &[2.0]).is_err());
    assert_eq!(check_points(3, &[0.5, 0.0]).unwrap(), vec![-1.0, 0.0, 0.5, 1.0]);
}

#[test]
fn order_n_flag_adds_a_term() {
    let b = TaylorBudget::new(1.0, 2.0, 3).unwrap();
    let m = Model::expsum(vec![0.5], vec![1.0]).unwrap();
    let mut opts = ConstraintOptions {
        grid: 2,
        ..Default::default()
    };
    let without = constraint_check(&m, &b, &opts).unwrap().max_ratio;
    opts.include_order_n = true;
    let with = constraint_check(&m, &b, &opts).unwrap().max_ratio;
    // at t = −1: a_k = 0.5 e (−1)^k / k!
    let a = |k: i32| 0.5 * 1f64.exp() / factorial(k as usize) * 2f64.powi(k);
    assert!(close(with - without, a(3).powi(2) / 3.0, 1e-13));
}

#[test]
fn activation_examples() {
    let base = Model::expsum(vec![1.0], vec![1.0]).unwrap();
    let ext = Activation2D::new(base.clone(), vec![1.0]).unwrap();
    assert!(close(ext.value(1.0, 1.0).unwrap(), (-(-1f64).exp()).exp(), 1e-15));
    assert!((ext.value(1.0, 1.0).unwrap() - 0.692_200_627_555_346).abs() < 1e-14);
    assert_eq!(ext.value(0.4, 0.0).unwrap(), base.value(0.4).unwrap());
    let flat = Activation2D::new(base.clone(), vec![0.0]).unwrap();
    for s in [-1.0, 0.3, 1.0] {
        assert_eq!(flat.value(0.2, s).unwrap(), base.value(0.2).unwrap());
    }
    assert!(Activation2D::new(base, vec![1.0, 2.0]).is_err());
    let sir = Model::sir(3.0, 1.0, 10.0, 1.0, 0.0).unwrap();
    let ext = Activation2D::new(sir, vec![0.5, -0.2]).unwrap();
    let p = ext.params();
    assert_eq!(p.len(), 7);
    assert_eq!(ext.param_names()[5], "E_beta");
    let back = Activation2D::from_params(ModelKind::Sir, &p, InputMap::IDENTITY, InputMap::IDENTITY).unwrap();
    assert_eq!(back.energies(), ext.energies());
}

#[test]
fn mixed_jets_match_closed_form_and_differences() {
    // y = A exp(−λ e^{−E s} t): ∂_s y = y · λ E e^{−E s} t
    let ext = Activation2D::new(Model::expsum(vec![1.5], vec![0.8]).unwrap(), vec![0.6]).unwrap();
    let (t, s) = (0.4, -0.3);
    let mut a = Vec::new();
    ext.visit_jets(&[(t, s)], 4, |_, jet| {
        a = jet.to_vec();
        true
    })
    .unwrap();
    let y = ext.value(t, s).unwrap();
    assert!(close(a[0][0], y, 1e-15));
    let ds = y * 0.8 * 0.6 * (-0.6 * s).exp() * t;
    assert!(close(a[0][1], ds, 1e-13));
    let one_d = ext.at(s).unwrap().jet(t, 4).unwrap();
    for j in 0..=4 {
        assert!(close(a[j][0], one_d.coeffs()[j], 1e-13));
    }

    let models = [
        Activation2D::new(Model::reaction([2.0, 1.0, 1.5, 2.0]).unwrap().with_map(InputMap::UNIT_INTERVAL), vec![0.3, -0.2, 0.5, 0.1]).unwrap(),
        Activation2D::new(Model::sir(3.0, 1.0, 10.0, 1.0, 0.0).unwrap().with_map(InputMap::UNIT_INTERVAL), vec![0.4, -0.3]).unwrap(),
    ];
    for ext in &models {
        let nodes = [(-0.5, 0.2), (0.6, 0.2), (0.1, -0.7)];
        let mut jets = vec![Vec::new(); 3];
        ext.visit_jets(&nodes, 3, |k, a| {
            jets[k] = a.to_vec();
            true
        })
        .unwrap();
        for (k, &(t, s)) in nodes.iter().enumerate() {
            let h = 1e-4;
            let dy_ds = (ext.value(t, s + h).unwrap() - ext.value(t, s - h).unwrap()) / (2.0 * h);
            let dy_dt = (ext.value(t + h, s).unwrap() - ext.value(t - h, s).unwrap()) / (2.0 * h);
            let cross = (ext.value(t + h, s + h).unwrap() - ext.value(t + h, s - h).unwrap()
                - ext.value(t - h, s + h).unwrap()
                + ext.value(t - h, s - h).unwrap())
                / (4.0 * h * h);
            assert!(close(jets[k][0][0], ext.value(t, s).unwrap(), 1e-12));
            assert!((jets[k][0][1] - dy_ds).abs() < 1e-7 * dy_ds.abs().max(1.0));
            assert!((jets[k][1][0] - dy_dt).abs() < 1e-7 * dy_dt.abs().max(1.0));
            assert!((jets[k][1][1] - cross).abs() < 1e-5 * cross.abs().max(1.0));
        }
    }
}

#[test]
fn budget_2d_examples() {
    let b = TaylorBudget::new(1.0, 2.0, 6).unwrap();
    // n = 21, √21 ≈ 4.583
    let pass = Activation2D::new(Model::expsum(vec![4.5], vec![0.0]).unwrap(), vec![1.0]).unwrap();
    assert!(constraint_check_2d(&pass, &b, 5, &[]).unwrap().passed);
    let fail = Activation2D::new(Model::expsum(vec![4.6], vec![0.0]).unwrap(), vec![1.0]).unwrap();
    assert!(!constraint_check_2d(&fail, &b, 5, &[]).unwrap().passed);

    let base = Model::expsum(vec![0.3, 0.2], vec![0.4, 1.1]).unwrap();
    let flat = Activation2D::new(base.clone(), vec![0.0, 0.0]).unwrap();
    let r2 = constraint_check_2d(&flat, &b, 21, &[]).unwrap();
    let opts = ConstraintOptions {
        grid: 21,
        ..Default::default()
    };
    let r1 = constraint_check(&base, &b, &opts).unwrap();
    assert!(close(r2.max_ratio * 21.0, r1.max_ratio * 6.0, 1e-13));
    assert!(constraint_check_2d(&flat, &b, 1, &[]).is_err());
}

/// Full bivariate budget sum at every tensor node, no early exits.
fn budget_2d_oracle(ext: &Activation2D, b: &TaylorBudget, grid: usize) -> bool {
    let axis = check_points(grid, &[]).unwrap();
    let nodes: Vec<(f64, f64)> = axis.iter().flat_map(|&s| axis.iter().map(move |&t| (t, s))).collect();
    let n = b.n();
    let cap = b.c() * b.c() * (n * (n + 1) / 2) as f64;
    let mut ok = true;
    ext.visit_jets(&nodes, n - 1, |_, a| {
        let mut lhs = 0.0;
        for (j, row) in a.iter().enumerate() {
            for (k, c) in row.iter().enumerate().take(n - j) {
                lhs += (b.r().powi((j + k) as i32) * c).powi(2);
            }
        }
        ok &= lhs < cap;
        true
    })
    .unwrap();
    ok
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn budget_monotone(a in 0.0f64..2.0, l in 0.0f64..2.0, dc in 0.0f64..1.0, dr in 0.0f64..1.0) {
        let m = Model::expsum(vec![a, 0.5 * a], vec![l, 0.3]).unwrap();
        let opts = ConstraintOptions { grid: 41, ..Default::default() };
        let base = constraint_check(&m, &TaylorBudget::new(1.0, 2.0, 11).unwrap(), &opts).unwrap();
        if base.passed {
            let looser = TaylorBudget::new(1.0 + dc, 2.0 - dr, 11).unwrap();
            prop_assert!(constraint_check(&m, &looser, &opts).unwrap().passed);
        }
    }

    #[test]
    fn sir_conserves(beta in 0.0f64..8.0, gamma in 0.0f64..4.0, i0 in 0.0f64..5.0) {
        let sir = Sir::new(beta, gamma, 10.0, i0, 1.0).unwrap();
        let ts: Vec<f64> = (0..11).map(|k| -1.0 + 0.2 * k as f64).collect();
        for (s, i, r) in sir.integrate(&ts).unwrap() {
            prop_assert!((s + i + r - 10.0).abs() <= 1e-10 * 10.0);
            prop_assert!(i >= 0.0);
        }
    }

    #[test]
    fn screened_2d_check_matches_full_sum(
        beta in 0.0f64..30.0, gamma in 0.0f64..3.0, i0 in 0.0f64..3.0,
        eb in -1.0f64..1.0, eg in -1.0f64..1.0,
    ) {
        let base = Model::from_params(ModelKind::Sir, &[beta, gamma, 10.0, i0, 0.0], InputMap::UNIT_INTERVAL).unwrap();
        let ext = Activation2D::new(base, vec![eb, eg]).unwrap();
        let b = TaylorBudget::new(1.0, 2.0, 6).unwrap();
        prop_assert_eq!(constraint_check_2d(&ext, &b, 9, &[]).unwrap().passed, budget_2d_oracle(&ext, &b, 9));
    }
}
