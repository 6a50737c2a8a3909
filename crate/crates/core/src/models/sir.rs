use alloc::vec::Vec;

use num_traits::Float;

use super::series::{convolve_at, Ring};
use crate::error::ensure;
use crate::{Error, Result};

/// Taylor order of the integrator.
pub const STEP_ORDER: usize = 15;
const STEP_TOL: f64 = 1e-14;
const MIN_STEP: f64 = 1e-12;

/// Susceptible–infected–recovered dynamics; predictions are `I(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sir {
    beta: f64,
    gamma: f64,
    n_tot: f64,
    i0: f64,
    r0: f64,
    x_init: f64,
}

impl Sir {
    /// Initial state `(N − I0 − R0, I0, R0)` at `x = 0`.
    pub fn new(beta: f64, gamma: f64, n_tot: f64, i0: f64, r0: f64) -> Result<Self> {
        ensure!(n_tot > 0.0 && n_tot.is_finite(), "population must be positive, got {n_tot}");
        ensure!(beta >= 0.0 && beta.is_finite(), "infection rate must be nonnegative, got {beta}");
        ensure!(gamma >= 0.0 && gamma.is_finite(), "recovery rate must be nonnegative, got {gamma}");
        ensure!(i0 >= 0.0 && r0 >= 0.0, "initial populations must be nonnegative");
        ensure!(i0 + r0 <= n_tot, "I0 + R0 = {} exceeds the population {n_tot}", i0 + r0);
        Ok(Sir {
            beta,
            gamma,
            n_tot,
            i0,
            r0,
            x_init: 0.0,
        })
    }

    pub fn with_initial_time(mut self, x: f64) -> Self {
        self.x_init = x;
        self
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn n_tot(&self) -> f64 {
        self.n_tot
    }
    pub fn i0(&self) -> f64 {
        self.i0
    }
    pub fn r0(&self) -> f64 {
        self.r0
    }
    pub fn initial_time(&self) -> f64 {
        self.x_init
    }

    pub(crate) fn initial_state(&self) -> SirState<f64> {
        SirState {
            s: self.n_tot - self.i0 - self.r0,
            i: self.i0,
            r: self.r0,
        }
    }

    /// `(S, I, R)` at each requested time (any order).
    pub fn integrate(&self, times: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
        let states = trajectory(
            self.initial_state(),
            self.x_init,
            &(self.beta / self.n_tot),
            &self.gamma,
            self.n_tot,
            times,
        )?;
        Ok(states.into_iter().map(|st| (st.s, st.i, st.r)).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SirState<R> {
    pub s: R,
    pub i: R,
    pub r: R,
}

impl<R: Ring> SirState<R> {
    fn norm(&self) -> f64 {
        self.s.norm().max(self.i.norm()).max(self.r.norm())
    }

    fn is_finite(&self) -> bool {
        self.s.is_finite() && self.i.is_finite() && self.r.is_finite()
    }
}

/// Taylor coefficients (in `x`) of `S`, `I`, `R` at a state, to `order`.
pub(crate) fn sir_coeffs<R: Ring>(
    state: &SirState<R>,
    b: &R,
    g: &R,
    order: usize,
) -> [Vec<R>; 3] {
    let mut s = Vec::with_capacity(order + 1);
    let mut i = Vec::with_capacity(order + 1);
    let mut r = Vec::with_capacity(order + 1);
    s.push(state.s.clone());
    i.push(state.i.clone());
    r.push(state.r.clone());
    for k in 0..order {
        let inflow = b.clone() * convolve_at(&i, &s, k);
        let div = 1.0 / (k + 1) as f64;
        let recover = g.clone() * i[k].clone();
        s.push((-inflow.clone()).scale(div));
        i.push((inflow - recover.clone()).scale(div));
        r.push(recover.scale(div));
    }
    [s, i, r]
}

fn horner<R: Ring>(c: &[R], h: f64) -> R {
    let mut acc = c[c.len() - 1].clone();
    for ck in c[..c.len() - 1].iter().rev() {
        acc = acc.scale(h) + ck.clone();
    }
    acc
}

/// Integrates from `x_from` to `x_to` (either direction).
pub(crate) fn advance<R: Ring>(
    mut state: SirState<R>,
    b: &R,
    g: &R,
    x_from: f64,
    x_to: f64,
) -> Result<SirState<R>> {
    let mut x = x_from;
    while x != x_to {
        let remaining = x_to - x;
        let [cs, ci, cr] = sir_coeffs(&state, b, g, STEP_ORDER);
        let scale = state.norm().max(f64::MIN_POSITIVE);
        let mut h = remaining.abs();
        for k in [STEP_ORDER - 1, STEP_ORDER] {
            let ck = cs[k].norm().max(ci[k].norm()).max(cr[k].norm());
            if ck > 0.0 {
                h = h.min((STEP_TOL * scale / ck).powf(1.0 / k as f64));
            }
        }
        loop {
            if h < MIN_STEP && h < remaining.abs() {
                return Err(Error::StepUnderflow { t: x, h });
            }
            let signed = h.copysign(remaining);
            let next = SirState {
                s: horner(&cs, signed),
                i: horner(&ci, signed),
                r: horner(&cr, signed),
            };
            let last = cs[STEP_ORDER].norm().max(ci[STEP_ORDER].norm()).max(cr[STEP_ORDER].norm());
            if next.is_finite() && last * h.powi(STEP_ORDER as i32) <= STEP_TOL * scale * (1.0 + 1e-9) {
                state = next;
                x = if h >= remaining.abs() { x_to } else { x + signed };
                break;
            }
            h *= 0.5;
        }
    }
    Ok(state)
}

/// States at each of `xs` (returned in input order), starting from
/// `state0` at `x0` and sweeping outwards in both directions.
pub(crate) fn trajectory<R: Ring>(
    state0: SirState<R>,
    x0: f64,
    b: &R,
    g: &R,
    n_tot: f64,
    xs: &[f64],
) -> Result<Vec<SirState<R>>> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &c| xs[a].total_cmp(&xs[c]));
    let mut out: Vec<Option<SirState<R>>> = (0..xs.len()).map(|_| None).collect();
    let forward: Vec<usize> = order.iter().copied().filter(|&k| xs[k] >= x0).collect();
    let backward: Vec<usize> = order.iter().rev().copied().filter(|&k| xs[k] < x0).collect();
    for sweep in [forward, backward] {
        let mut state = state0.clone();
        let mut x = x0;
        for k in sweep {
            state = advance(state, b, g, x, xs[k])?;
            x = xs[k];
            let total = state.s.lead() + state.i.lead() + state.r.lead();
            if (total - n_tot).abs() > 1e-10 * n_tot {
                return Err(Error::Evaluation(alloc::format!(
                    "population not conserved at x = {x}: S + I + R = {total}"
                )));
            }
            out[k] = Some(state.clone());
        }
    }
    Ok(out.into_iter().map(|s| s.expect("every time visited")).collect())
}
