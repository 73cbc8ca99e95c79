//! Continuous Hopfield network descending the Ising energy.
//!
//! Integrates `dx_i/dt = Σ_j J_ij S(x_j)`. Compared with the usual
//! `dx_i/dt = −Σ_j J'_ij S(x_j)` form this fixes `J' = −J`, so that
//! `−Σ_{i<j} J_ij S_i S_j` is a Lyapunov function for any increasing `S`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::machine::{run, Machine};
use super::readout::binary_readout;
use super::{OscillatorState, RunResult};
use crate::error::{Error, Result};
use crate::hamiltonians::{ising_energy_unchecked, Configuration, IsingProblem};
use crate::integrator::{Ramp, RngStream, SolverSchedule, VectorField};

pub const HOPFIELD_RAMPS: &[&str] = &["gain"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    /// `tanh(g·x)`.
    Tanh,
    /// Bipolar logistic `2/(1 + e^{−g·x}) − 1`, odd and valued in `(−1, 1)`.
    Sigmoid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HopfieldParams {
    pub activation: Activation,
    pub gain: f64,
    /// Standard deviation of the Gaussian initial inputs.
    pub initial_scale: f64,
}

impl Default for HopfieldParams {
    fn default() -> Self {
        HopfieldParams { activation: Activation::Tanh, gain: 1.0, initial_scale: 1.0 }
    }
}

impl Activation {
    pub fn apply(self, gain: f64, x: f64) -> f64 {
        match self {
            Activation::Tanh => (gain * x).tanh(),
            Activation::Sigmoid => 2.0 / (1.0 + (-gain * x).exp()) - 1.0,
        }
    }
}

struct Hopfield<'a> {
    problem: &'a IsingProblem,
    params: &'a HopfieldParams,
    gain: Option<Ramp>,
    dt: f64,
    max_steps: usize,
}

impl Hopfield<'_> {
    fn gain_at(&self, t: f64) -> f64 {
        match &self.gain {
            Some(r) => r.value_at(t / self.dt, self.max_steps),
            None => self.params.gain,
        }
    }
}

impl VectorField for Hopfield<'_> {
    fn dim(&self) -> usize {
        self.problem.n()
    }

    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let g = self.gain_at(t);
        let act = self.params.activation;
        let j = self.problem.couplings();
        for (i, d) in dy.iter_mut().enumerate() {
            *d = j.neighbors(i).iter().map(|&(k, w)| w * act.apply(g, y[k])).sum();
        }
    }
}

impl Machine for Hopfield<'_> {
    fn name(&self) -> &'static str {
        "hopfield"
    }

    fn readout(&self, y: &[f64]) -> Configuration {
        // S is odd and increasing, so sign(S(x)) = sign(x)
        Configuration::Binary(binary_readout(y.iter().copied()))
    }

    fn energy(&self, config: &Configuration) -> f64 {
        ising_energy_unchecked(self.problem, config.as_binary().expect("binary readout").spins())
    }

    fn state(&self, y: &[f64], t: f64) -> OscillatorState {
        let g = self.gain_at(t);
        OscillatorState {
            amplitudes: y.iter().map(|&x| Complex64::new(self.params.activation.apply(g, x), 0.0)).collect(),
            pumps: Vec::new(),
            reservoirs: None,
            time: t,
        }
    }
}

pub fn solve_hopfield(problem: &IsingProblem, params: &HopfieldParams, schedule: &SolverSchedule, seed: u64) -> Result<RunResult> {
    solve_hopfield_with(problem, params, schedule, &mut RngStream::new(seed, 0))
}

pub fn solve_hopfield_with(
    problem: &IsingProblem,
    params: &HopfieldParams,
    schedule: &SolverSchedule,
    rng: &mut RngStream,
) -> Result<RunResult> {
    let init = (0..problem.n()).map(|_| params.initial_scale * rng.gaussian()).collect();
    solve_hopfield_from(problem, params, schedule, init, rng)
}

/// Integrates from the given neuron inputs.
pub fn solve_hopfield_from(
    problem: &IsingProblem,
    params: &HopfieldParams,
    schedule: &SolverSchedule,
    initial: Vec<f64>,
    rng: &mut RngStream,
) -> Result<RunResult> {
    schedule.validate(HOPFIELD_RAMPS)?;
    if !(params.gain > 0.0 && params.gain.is_finite()) {
        return Err(Error::invalid("gain must be positive and finite"));
    }
    if problem.has_field() {
        return Err(Error::invalid("external field must be absorbed before solving"));
    }
    crate::error::check_len(problem.n(), initial.len())?;
    let machine = Hopfield {
        problem,
        params,
        gain: schedule.ramp("gain").cloned(),
        dt: schedule.dt,
        max_steps: schedule.max_steps,
    };
    run(&machine, initial, schedule, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::CouplingMatrix;

    #[test]
    fn ferromagnetic_pair_aligns() {
        let p = IsingProblem::without_field(CouplingMatrix::new(2, [(0, 1, 1.0)]).unwrap());
        let s = SolverSchedule { max_steps: 2_000, ..Default::default() };
        for seed in 0..10 {
            let r = solve_hopfield(&p, &HopfieldParams::default(), &s, seed).unwrap();
            assert_eq!(r.final_energy, -1.0, "seed {seed}");
            let a = &r.final_state.amplitudes;
            assert!(a[0].re * a[1].re > 0.9);
        }
    }

    #[test]
    fn no_coupling_keeps_state() {
        let p = IsingProblem::without_field(CouplingMatrix::empty(3).unwrap());
        let init = vec![0.3, -0.2, 1.5];
        let s = SolverSchedule { max_steps: 500, ..Default::default() };
        let r = solve_hopfield_from(&p, &HopfieldParams::default(), &s, init.clone(), &mut RngStream::new(0, 0)).unwrap();
        for (a, x) in r.final_state.amplitudes.iter().zip(&init) {
            assert_eq!(a.re, x.tanh());
        }
        assert!(r.converged);
    }

    #[test]
    fn sigmoid_is_odd() {
        for x in [-2.0, -0.1, 0.0, 0.7, 3.0] {
            let a = Activation::Sigmoid.apply(1.5, x);
            let b = Activation::Sigmoid.apply(1.5, -x);
            assert!((a + b).abs() < 1e-15);
            assert!(a.abs() < 1.0);
        }
    }
}
