//! Phase-only oscillator network `dθ_i/dt = Ω_i − (1/τ_p) Σ_j J_ij sin(θ_i − θ_j)`.
//!
//! With symmetric `J` and zero detuning this is gradient flow on the XY
//! energy, so the energy never increases along a trajectory. A uniform
//! detuning `Ω_i = −Uρ_th` gives the phase dynamics of a locked
//! gain-dissipative network in the lab frame.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::machine::{run, Machine};
use super::readout::phase_readout;
use super::{OscillatorState, RunResult};
use crate::error::{Error, Result};
use crate::hamiltonians::{xy_energy_raw, Configuration, XYProblem};
use crate::integrator::{Ramp, RngStream, SolverSchedule, VectorField};

pub const KURAMOTO_RAMPS: &[&str] = &["noise"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KuramotoParams {
    /// `Ω_i`; empty means zero detuning.
    pub detuning: Vec<f64>,
    /// `τ_p > 0`.
    pub timescale: f64,
    pub noise_amplitude: f64,
}

impl Default for KuramotoParams {
    fn default() -> Self {
        KuramotoParams { detuning: Vec::new(), timescale: 1.0, noise_amplitude: 0.0 }
    }
}

struct Kuramoto<'a> {
    problem: &'a XYProblem,
    detuning: Vec<f64>,
    inv_tau: f64,
    noise_amplitude: f64,
    noise: Option<Ramp>,
    dt: f64,
    max_steps: usize,
}

impl VectorField for Kuramoto<'_> {
    fn dim(&self) -> usize {
        self.problem.n()
    }

    fn eval(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let j = self.problem.couplings();
        for (i, d) in dy.iter_mut().enumerate() {
            let pull: f64 = j.neighbors(i).iter().map(|&(k, w)| w * (y[i] - y[k]).sin()).sum();
            *d = self.detuning[i] - self.inv_tau * pull;
        }
    }
}

impl Machine for Kuramoto<'_> {
    fn name(&self) -> &'static str {
        "kuramoto"
    }

    fn noisy_dims(&self) -> usize {
        self.problem.n()
    }

    fn noise(&self, t: f64) -> f64 {
        match &self.noise {
            Some(r) => r.value_at(t / self.dt, self.max_steps).max(0.0),
            None => self.noise_amplitude,
        }
    }

    /// Phase-velocity norm after removing the common drift.
    fn residual(&self, _y: &[f64], slope: &[f64]) -> f64 {
        let mean = slope.iter().sum::<f64>() / slope.len() as f64;
        slope.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt()
    }

    fn readout(&self, y: &[f64]) -> Configuration {
        Configuration::Phase(phase_readout(&amplitudes(y)))
    }

    fn energy(&self, config: &Configuration) -> f64 {
        xy_energy_raw(self.problem.couplings().edges(), config.as_phase().expect("phase readout").phases())
    }

    fn state(&self, y: &[f64], t: f64) -> OscillatorState {
        OscillatorState { amplitudes: amplitudes(y), pumps: Vec::new(), reservoirs: None, time: t }
    }
}

fn amplitudes(theta: &[f64]) -> Vec<Complex64> {
    theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect()
}

pub fn solve_kuramoto(problem: &XYProblem, params: &KuramotoParams, schedule: &SolverSchedule, seed: u64) -> Result<RunResult> {
    solve_kuramoto_with(problem, params, schedule, &mut RngStream::new(seed, 0))
}

/// Integrates from uniformly random phases drawn from `rng`.
pub fn solve_kuramoto_with(
    problem: &XYProblem,
    params: &KuramotoParams,
    schedule: &SolverSchedule,
    rng: &mut RngStream,
) -> Result<RunResult> {
    let n = problem.n();
    let init: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.0, std::f64::consts::TAU)).collect();
    solve_kuramoto_from(problem, params, schedule, init, rng)
}

/// Integrates from the given phases.
pub fn solve_kuramoto_from(
    problem: &XYProblem,
    params: &KuramotoParams,
    schedule: &SolverSchedule,
    initial: Vec<f64>,
    rng: &mut RngStream,
) -> Result<RunResult> {
    schedule.validate(KURAMOTO_RAMPS)?;
    let n = problem.n();
    if !(params.timescale > 0.0) {
        return Err(Error::invalid("timescale must be positive"));
    }
    if !(params.noise_amplitude >= 0.0) {
        return Err(Error::invalid("noise_amplitude must be non-negative"));
    }
    crate::error::check_len(n, initial.len())?;
    let detuning = if params.detuning.is_empty() {
        vec![0.0; n]
    } else {
        crate::error::check_len(n, params.detuning.len())?;
        params.detuning.clone()
    };
    let machine = Kuramoto {
        problem,
        detuning,
        inv_tau: 1.0 / params.timescale,
        noise_amplitude: params.noise_amplitude,
        noise: schedule.ramp("noise").cloned(),
        dt: schedule.dt,
        max_steps: schedule.max_steps,
    };
    run(&machine, initial, schedule, rng)
}

/// `∂E/∂θ_i = Σ_j J_ij sin(θ_i − θ_j)` for the XY energy.
pub fn xy_gradient(problem: &XYProblem, theta: &[f64]) -> Vec<f64> {
    let j = problem.couplings();
    (0..problem.n())
        .map(|i| j.neighbors(i).iter().map(|&(k, w)| w * (theta[i] - theta[k]).sin()).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{PI, TAU};

    use super::*;
    use crate::hamiltonians::CouplingMatrix;

    fn phase_gap(r: &RunResult) -> f64 {
        let p = r.final_config.as_phase().unwrap().phases();
        let d = (p[0] - p[1]).rem_euclid(TAU);
        d.min(TAU - d)
    }

    #[test]
    fn ferromagnetic_pair_locks_in_phase() {
        let p = XYProblem::new(CouplingMatrix::new(2, [(0, 1, 1.0)]).unwrap());
        let r = solve_kuramoto(&p, &KuramotoParams::default(), &SolverSchedule::default(), 3).unwrap();
        assert!(r.converged);
        assert!(phase_gap(&r) < 1e-6);
        assert!((r.final_energy + 1.0).abs() < 1e-6);
    }

    #[test]
    fn antiferromagnetic_pair_locks_in_antiphase() {
        let p = XYProblem::new(CouplingMatrix::new(2, [(0, 1, -1.0)]).unwrap());
        let r = solve_kuramoto(&p, &KuramotoParams::default(), &SolverSchedule::default(), 8).unwrap();
        assert!((phase_gap(&r) - PI).abs() < 1e-6);
    }

    #[test]
    fn uniform_detuning_still_converges() {
        let p = XYProblem::new(CouplingMatrix::new(2, [(0, 1, 1.0)]).unwrap());
        let params = KuramotoParams { detuning: vec![-0.7, -0.7], ..Default::default() };
        let r = solve_kuramoto(&p, &params, &SolverSchedule::default(), 3).unwrap();
        assert!(r.converged);
        assert!(phase_gap(&r) < 1e-6);
    }

    #[test]
    fn validates_inputs() {
        let p = XYProblem::new(CouplingMatrix::new(2, [(0, 1, 1.0)]).unwrap());
        let s = SolverSchedule::default();
        let bad_tau = KuramotoParams { timescale: 0.0, ..Default::default() };
        assert!(solve_kuramoto(&p, &bad_tau, &s, 0).is_err());
        let bad_len = KuramotoParams { detuning: vec![0.0], ..Default::default() };
        assert!(solve_kuramoto(&p, &bad_len, &s, 0).is_err());
    }
}
