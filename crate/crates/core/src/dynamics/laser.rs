//! Coupled class-B laser network minimising the XY energy.
//!
//! The amplitude/phase rate equations
//!
//! ```text
//! dA_i/dt = (G_i − α_i) A_i/τ_p + Σ_j J_ij (A_j/τ_p) cos(θ_i − θ_j)
//! dθ_i/dt = Ω_i − Σ_j J_ij A_j/(τ_p A_i) sin(θ_i − θ_j)
//! dG_i/dt = [P_i − G_i(1 + A_i²)]/τ_c
//! ```
//!
//! are integrated in the equivalent Cartesian form for `E_i = A_i e^{iθ_i}`,
//! `dE_i/dt = ((G_i − α_i)/τ_p + iΩ_i) E_i + (1/τ_p) Σ_j J_ij E_j`, which
//! has no singularity as `A_i → 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::machine::{corotating_residual, run, seed_amplitudes, Machine};
use super::readout::phase_readout;
use super::{OscillatorState, RunResult};
use crate::error::{check_len, Error, Result};
use crate::hamiltonians::{xy_energy_raw, Configuration, XYProblem};
use crate::integrator::{Ramp, RngStream, SolverSchedule, VectorField};

pub const LASER_RAMPS: &[&str] = &["noise"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LaserNetworkParams {
    /// `P_i > 0`.
    pub pump: Vec<f64>,
    /// `α_i > 0`.
    pub loss: Vec<f64>,
    /// `Ω_i`; empty means zero.
    pub detuning: Vec<f64>,
    pub cavity_time: f64,
    pub carrier_time: f64,
    pub noise_amplitude: f64,
    pub initial_amplitude: f64,
}

impl Default for LaserNetworkParams {
    fn default() -> Self {
        LaserNetworkParams {
            pump: Vec::new(),
            loss: Vec::new(),
            detuning: Vec::new(),
            cavity_time: 1.0,
            carrier_time: 1.0,
            noise_amplitude: 0.0,
            initial_amplitude: 1e-3,
        }
    }
}

impl LaserNetworkParams {
    /// Identical lasers with pump `p` and loss `alpha`.
    pub fn uniform(n: usize, pump: f64, loss: f64) -> Self {
        LaserNetworkParams { pump: vec![pump; n], loss: vec![loss; n], ..Self::default() }
    }

    fn validate(&self, n: usize) -> Result<()> {
        check_len(n, self.pump.len())?;
        check_len(n, self.loss.len())?;
        if !self.detuning.is_empty() {
            check_len(n, self.detuning.len())?;
        }
        if self.pump.iter().chain(&self.loss).any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::invalid("pump and loss must be positive and finite"));
        }
        if !(self.cavity_time > 0.0 && self.carrier_time > 0.0) {
            return Err(Error::invalid("cavity_time and carrier_time must be positive"));
        }
        if !(self.noise_amplitude >= 0.0) {
            return Err(Error::invalid("noise_amplitude must be non-negative"));
        }
        Ok(())
    }
}

struct Laser<'a> {
    problem: &'a XYProblem,
    params: &'a LaserNetworkParams,
    detuning: Vec<f64>,
    noise: Option<Ramp>,
    dt: f64,
    max_steps: usize,
}

impl Laser<'_> {
    fn amplitudes(&self, y: &[f64]) -> Vec<Complex64> {
        (0..self.problem.n()).map(|i| Complex64::new(y[2 * i], y[2 * i + 1])).collect()
    }
}

impl VectorField for Laser<'_> {
    fn dim(&self) -> usize {
        3 * self.problem.n()
    }

    fn eval(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let n = self.problem.n();
        let inv_tp = 1.0 / self.params.cavity_time;
        let inv_tc = 1.0 / self.params.carrier_time;
        let j = self.problem.couplings();
        for i in 0..n {
            let e = Complex64::new(y[2 * i], y[2 * i + 1]);
            let gain = y[2 * n + i];
            let mut inject = Complex64::new(0.0, 0.0);
            for &(k, w) in j.neighbors(i) {
                inject += w * Complex64::new(y[2 * k], y[2 * k + 1]);
            }
            let d = Complex64::new((gain - self.params.loss[i]) * inv_tp, self.detuning[i]) * e + inject * inv_tp;
            dy[2 * i] = d.re;
            dy[2 * i + 1] = d.im;
            dy[2 * n + i] = inv_tc * (self.params.pump[i] - gain * (1.0 + e.norm_sqr()));
        }
    }
}

impl Machine for Laser<'_> {
    fn name(&self) -> &'static str {
        "laser"
    }

    fn noisy_dims(&self) -> usize {
        2 * self.problem.n()
    }

    fn noise(&self, t: f64) -> f64 {
        match &self.noise {
            Some(r) => r.value_at(t / self.dt, self.max_steps).max(0.0),
            None => self.params.noise_amplitude,
        }
    }

    fn residual(&self, y: &[f64], slope: &[f64]) -> f64 {
        corotating_residual(y, slope, self.problem.n())
    }

    fn readout(&self, y: &[f64]) -> Configuration {
        Configuration::Phase(phase_readout(&self.amplitudes(y)))
    }

    fn energy(&self, config: &Configuration) -> f64 {
        xy_energy_raw(self.problem.couplings().edges(), config.as_phase().expect("phase readout").phases())
    }

    fn state(&self, y: &[f64], t: f64) -> OscillatorState {
        let n = self.problem.n();
        OscillatorState { amplitudes: self.amplitudes(y), pumps: y[2 * n..].to_vec(), reservoirs: None, time: t }
    }
}

pub fn solve_laser_network(
    problem: &XYProblem,
    params: &LaserNetworkParams,
    schedule: &SolverSchedule,
    seed: u64,
) -> Result<RunResult> {
    solve_laser_network_with(problem, params, schedule, &mut RngStream::new(seed, 0))
}

/// Starts from weak random fields and zero gain.
pub fn solve_laser_network_with(
    problem: &XYProblem,
    params: &LaserNetworkParams,
    schedule: &SolverSchedule,
    rng: &mut RngStream,
) -> Result<RunResult> {
    schedule.validate(LASER_RAMPS)?;
    let n = problem.n();
    params.validate(n)?;
    let detuning = if params.detuning.is_empty() { vec![0.0; n] } else { params.detuning.clone() };
    let machine = Laser {
        problem,
        params,
        detuning,
        noise: schedule.ramp("noise").cloned(),
        dt: schedule.dt,
        max_steps: schedule.max_steps,
    };
    let mut y = vec![0.0; 3 * n];
    seed_amplitudes(&mut y, n, params.initial_amplitude, rng);
    run(&machine, y, schedule, rng)
}
