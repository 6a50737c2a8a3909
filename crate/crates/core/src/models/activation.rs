use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use super::series::{Ring, Series};
use super::{expsum, reaction, sir, Family, InputMap, Model, ModelKind};
use crate::error::ensure;
use crate::{Error, Result};

/// A base model whose rates carry Arrhenius factors `exp(−E·s)` in a
/// second variable `s` (exponentials: each λ; reaction: each θ; SIR: β
/// and γ).
#[derive(Debug, Clone, PartialEq)]
pub struct Activation2D {
    base: Model,
    energies: Vec<f64>,
    s_map: InputMap,
}

fn energy_count(base: &Model) -> usize {
    match base.family() {
        Family::ExpSum(m) => m.terms(),
        Family::Reaction(_) => 4,
        Family::Sir(_) => 2,
    }
}

impl Activation2D {
    pub fn new(base: Model, energies: Vec<f64>) -> Result<Self> {
        let want = energy_count(&base);
        if energies.len() != want {
            return Err(Error::Dimension {
                expected: want,
                found: energies.len(),
            });
        }
        ensure!(energies.iter().all(|e| e.is_finite()), "activation energies must be finite");
        Ok(Activation2D {
            base,
            energies,
            s_map: InputMap::IDENTITY,
        })
    }

    pub fn with_s_map(mut self, map: InputMap) -> Self {
        self.s_map = map;
        self
    }

    pub fn base(&self) -> &Model {
        &self.base
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn s_map(&self) -> InputMap {
        self.s_map
    }

    /// Base parameters followed by the energies.
    pub fn params(&self) -> Vec<f64> {
        let mut p = self.base.params();
        p.extend_from_slice(&self.energies);
        p
    }

    pub fn param_names(&self) -> Vec<String> {
        let mut names = self.base.param_names();
        match self.base.kind() {
            ModelKind::ExpSum => names.extend((0..self.energies.len()).map(|a| format!("E_{a}"))),
            ModelKind::Reaction => names.extend((1..=4).map(|a| format!("E_{a}"))),
            ModelKind::Sir => names.extend([String::from("E_beta"), String::from("E_gamma")]),
        }
        names
    }

    /// Inverse of [`Activation2D::params`].
    pub fn from_params(kind: ModelKind, p: &[f64], map: InputMap, s_map: InputMap) -> Result<Self> {
        let n_energy = match kind {
            ModelKind::ExpSum => {
                ensure!(p.len() % 3 == 0 && !p.is_empty(), "expsum 2D needs 3 values per term");
                p.len() / 3
            }
            ModelKind::Reaction => 4,
            ModelKind::Sir => 2,
        };
        ensure!(p.len() > n_energy, "too few parameters for {}", kind.name());
        let (base, energies) = p.split_at(p.len() - n_energy);
        let base = Model::from_params(kind, base, map)?;
        Ok(Activation2D::new(base, energies.to_vec())?.with_s_map(s_map))
    }

    /// The one-dimensional model at fixed `s`.
    pub fn at(&self, s: f64) -> Result<Model> {
        let sp = self.s_map.apply(s);
        let factor = |e: f64| (-e * sp).exp();
        let family = match self.base.family() {
            Family::ExpSum(m) => {
                let rates = m.rates().iter().zip(&self.energies).map(|(l, &e)| l * factor(e)).collect();
                Family::ExpSum(expsum::ExpSum::new(m.amps().to_vec(), rates)?)
            }
            Family::Reaction(m) => {
                let mut theta = m.theta();
                for (th, &e) in theta.iter_mut().zip(&self.energies) {
                    *th *= factor(e);
                }
                Family::Reaction(reaction::Reaction::new(theta)?)
            }
            Family::Sir(m) => Family::Sir(
                sir::Sir::new(
                    m.beta() * factor(self.energies[0]),
                    m.gamma() * factor(self.energies[1]),
                    m.n_tot(),
                    m.i0(),
                    m.r0(),
                )?
                .with_initial_time(m.initial_time()),
            ),
        };
        Ok(Model::new(family).with_map(self.base.map()))
    }

    pub fn value(&self, t: f64, s: f64) -> Result<f64> {
        self.at(s)?.value(t)
    }

    /// Predictions at `(t, s)` nodes.
    pub fn predict(&self, nodes: &[(f64, f64)]) -> Result<Vec<f64>> {
        let mut out = alloc::vec![0.0; nodes.len()];
        for (s, idx) in group_by_s(nodes) {
            let ts: Vec<f64> = idx.iter().map(|&k| nodes[k].0).collect();
            for (k, y) in idx.iter().zip(self.at(s)?.predict(&ts)?) {
                out[*k] = y;
            }
        }
        Ok(out)
    }

    /// Calls `f(index, a)` with `a[j][k] = ∂_t^j ∂_s^k y/(j! k!)` at each
    /// node, `j, k ≤ order`; stops when `f` returns false. Nodes sharing
    /// an `s` value are visited together.
    pub fn visit_jets(
        &self,
        nodes: &[(f64, f64)],
        order: usize,
        mut f: impl FnMut(usize, &[Vec<f64>]) -> bool,
    ) -> Result<()> {
        let map = self.base.map();
        let sigma = map.scale;
        for (s, idx) in group_by_s(nodes) {
            let sp = self.s_map.apply(s);
            let rate = |c: f64, e: f64| Series::linear(-e * sp, -e * self.s_map.scale, order).exp().scale(c);
            let unpack = |jet: Vec<Series>, t: f64| -> Result<Vec<Vec<f64>>> {
                let a: Vec<Vec<f64>> = jet.into_iter().map(|c| c.coeffs().to_vec()).collect();
                if a.iter().flatten().all(|c| c.is_finite()) {
                    Ok(a)
                } else {
                    Err(Error::Evaluation(format!("non-finite jet at (t, s) = ({t}, {s})")))
                }
            };
            match self.base.family() {
                Family::ExpSum(m) => {
                    let rates: Vec<Series> =
                        m.rates().iter().zip(&self.energies).map(|(&l, &e)| rate(l, e)).collect();
                    for &k in &idx {
                        let t = nodes[k].0;
                        let jet = expsum::expsum_jet(m.amps(), &rates, map.apply(t), sigma, order);
                        if !f(k, &unpack(jet, t)?) {
                            return Ok(());
                        }
                    }
                }
                Family::Reaction(m) => {
                    let th = m.theta();
                    let e = &self.energies;
                    let theta = [rate(th[0], e[0]), rate(th[1], e[1]), rate(th[2], e[2]), rate(th[3], e[3])];
                    for &k in &idx {
                        let t = nodes[k].0;
                        let jet = reaction::reaction_jet(&theta, map.apply(t), sigma, order)?;
                        if !f(k, &unpack(jet, t)?) {
                            return Ok(());
                        }
                    }
                }
                Family::Sir(m) => {
                    let b = rate(m.beta() / m.n_tot(), self.energies[0]);
                    let g = rate(m.gamma(), self.energies[1]);
                    let st = m.initial_state();
                    let state0 = sir::SirState {
                        s: Series::constant_of_order(st.s, order),
                        i: Series::constant_of_order(st.i, order),
                        r: Series::constant_of_order(st.r, order),
                    };
                    let xs: Vec<f64> = idx.iter().map(|&k| map.apply(nodes[k].0)).collect();
                    let states = sir::trajectory(state0, m.initial_time(), &b, &g, m.n_tot(), &xs)?;
                    for (&k, state) in idx.iter().zip(&states) {
                        let [_, i, _] = sir::sir_coeffs(state, &b, &g, order);
                        let mut pow = 1.0;
                        let jet: Vec<Series> = i
                            .into_iter()
                            .map(|c| {
                                let v = c.scale(pow);
                                pow *= sigma;
                                v
                            })
                            .collect();
                        if !f(k, &unpack(jet, nodes[k].0)?) {
                            return Ok(());
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Node indices grouped by `s`, groups in order of first appearance.
fn group_by_s(nodes: &[(f64, f64)]) -> Vec<(f64, Vec<usize>)> {
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (k, &(_, s)) in nodes.iter().enumerate() {
        match groups.iter_mut().find(|g| g.0.to_bits() == s.to_bits()) {
            Some(g) => g.1.push(k),
            None => groups.push((s, alloc::vec![k])),
        }
    }
    groups
}

