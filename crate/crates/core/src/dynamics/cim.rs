//! Coherent Ising machine rate equations.
//!
//! Three formulations share one parameter set:
//!
//! - complex amplitude: `da_i/dt = p·conj(a_i) − a_i − |a_i|²a_i + κ Σ_j J_ij a_j`
//! - quadrature pair, the same flow split into in-phase `c_i` and
//!   quadrature `s_i` components
//! - bistable potential: `dx_j/dt = (p − 1)x_j − x_j³ + κ e_j Σ_i J_ij x_i`
//!   with amplitude-correcting error variables
//!   `de_j/dt = β(ρ_th − x_j²)e_j`
//!
//! Spins are the signs of the in-phase components.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::machine::{run, Machine};
use super::readout::binary_readout;
use super::{OscillatorState, RunResult};
use crate::error::{Error, Result};
use crate::hamiltonians::{ising_energy_unchecked, Configuration, IsingProblem};
use crate::integrator::{Ramp, RngStream, SolverSchedule, VectorField};

pub const CIM_RAMPS: &[&str] = &["pump", "noise"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CimMode {
    ComplexAmplitude,
    QuadraturePair,
    BistablePotential,
}

/// Linear pump ramp reaching `end` after `steps` steps, then holding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpRamp {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CimParams {
    /// Pump `p` used when no ramp is configured.
    pub pump: f64,
    pub pump_ramp: Option<PumpRamp>,
    /// `β > 0`, rate of the error variables.
    pub error_rate: f64,
    /// `ρ_th > 0`, target squared amplitude.
    pub target: f64,
    /// Scale `κ` applied to `J` in every mode.
    pub coupling_strength: f64,
    pub noise_amplitude: f64,
    pub mode: CimMode,
    /// Error-variable feedback in the bistable mode; when off `e_j ≡ 1`.
    pub error_feedback: bool,
    pub initial_amplitude: f64,
}

impl Default for CimParams {
    fn default() -> Self {
        CimParams {
            pump: 1.1,
            pump_ramp: None,
            error_rate: 0.1,
            target: 1.0,
            coupling_strength: 1.0,
            noise_amplitude: 0.0,
            mode: CimMode::QuadraturePair,
            error_feedback: true,
            initial_amplitude: 1e-3,
        }
    }
}

impl CimParams {
    fn validate(&self) -> Result<()> {
        if !(self.error_rate > 0.0) || !(self.target > 0.0) {
            return Err(Error::invalid("error_rate and target must be positive"));
        }
        if !(self.noise_amplitude >= 0.0) {
            return Err(Error::invalid("noise_amplitude must be non-negative"));
        }
        if !self.pump.is_finite() || !self.coupling_strength.is_finite() {
            return Err(Error::invalid("pump and coupling_strength must be finite"));
        }
        if let Some(r) = &self.pump_ramp {
            if r.steps == 0 || !r.start.is_finite() || !r.end.is_finite() {
                return Err(Error::invalid("pump ramp needs finite endpoints and positive length"));
            }
        }
        Ok(())
    }
}

struct Cim<'a> {
    problem: &'a IsingProblem,
    n: usize,
    params: &'a CimParams,
    pump: Option<Ramp>,
    noise: Option<Ramp>,
    dt: f64,
    max_steps: usize,
}

impl Cim<'_> {
    fn pump_at(&self, t: f64) -> f64 {
        let step = t / self.dt;
        if let Some(r) = &self.pump {
            return r.value_at(step, self.max_steps);
        }
        match &self.params.pump_ramp {
            Some(r) => r.start + (r.end - r.start) * (step / r.steps as f64).clamp(0.0, 1.0),
            None => self.params.pump,
        }
    }

    fn bistable(&self) -> bool {
        self.params.mode == CimMode::BistablePotential
    }

    fn in_phase<'y>(&self, y: &'y [f64]) -> impl Iterator<Item = f64> + Clone + 'y {
        let stride = if self.bistable() { 1 } else { 2 };
        (0..self.n).map(move |i| y[stride * i])
    }
}

impl VectorField for Cim<'_> {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let n = self.n;
        let p = self.pump_at(t);
        let kappa = self.params.coupling_strength;
        let j = self.problem.couplings();
        match self.params.mode {
            CimMode::ComplexAmplitude => {
                for i in 0..n {
                    let a = Complex64::new(y[2 * i], y[2 * i + 1]);
                    let mut coupled = Complex64::new(0.0, 0.0);
                    for &(k, w) in j.neighbors(i) {
                        coupled += w * Complex64::new(y[2 * k], y[2 * k + 1]);
                    }
                    let f = p * a.conj() - a - a.norm_sqr() * a + kappa * coupled;
                    dy[2 * i] = f.re;
                    dy[2 * i + 1] = f.im;
                }
            }
            CimMode::QuadraturePair => {
                for i in 0..n {
                    let (c, s) = (y[2 * i], y[2 * i + 1]);
                    let r2 = c * c + s * s;
                    let (mut jc, mut js) = (0.0, 0.0);
                    for &(k, w) in j.neighbors(i) {
                        jc += w * y[2 * k];
                        js += w * y[2 * k + 1];
                    }
                    dy[2 * i] = (p - 1.0 - r2) * c + kappa * jc;
                    dy[2 * i + 1] = (-p - 1.0 - r2) * s + kappa * js;
                }
            }
            CimMode::BistablePotential => {
                let alpha = p - 1.0;
                let p = self.params;
                for i in 0..n {
                    let x = y[i];
                    let e = y[n + i];
                    let mut local = 0.0;
                    for &(k, w) in j.neighbors(i) {
                        local += w * y[k];
                    }
                    dy[i] = alpha * x - x * x * x + kappa * e * local;
                    dy[n + i] = if p.error_feedback { p.error_rate * (p.target - x * x) * e } else { 0.0 };
                }
            }
        }
    }
}

impl Machine for Cim<'_> {
    fn name(&self) -> &'static str {
        match self.params.mode {
            CimMode::ComplexAmplitude => "cim_complex",
            CimMode::QuadraturePair => "cim_quadrature",
            CimMode::BistablePotential => "cim_bistable",
        }
    }

    fn noisy_dims(&self) -> usize {
        if self.bistable() {
            self.n
        } else {
            2 * self.n
        }
    }

    fn noise(&self, t: f64) -> f64 {
        match &self.noise {
            Some(r) => r.value_at(t / self.dt, self.max_steps).max(0.0),
            None => self.params.noise_amplitude,
        }
    }

    fn readout(&self, y: &[f64]) -> Configuration {
        Configuration::Binary(binary_readout(self.in_phase(y)))
    }

    fn energy(&self, config: &Configuration) -> f64 {
        ising_energy_unchecked(self.problem, config.as_binary().expect("binary readout").spins())
    }

    fn state(&self, y: &[f64], t: f64) -> OscillatorState {
        let n = self.n;
        if self.bistable() {
            OscillatorState {
                amplitudes: y[..n].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
                pumps: y[n..].to_vec(),
                reservoirs: None,
                time: t,
            }
        } else {
            OscillatorState {
                amplitudes: (0..n).map(|i| Complex64::new(y[2 * i], y[2 * i + 1])).collect(),
                pumps: vec![self.pump_at(t); n],
                reservoirs: None,
                time: t,
            }
        }
    }
}

pub fn solve_cim(problem: &IsingProblem, params: &CimParams, schedule: &SolverSchedule, seed: u64) -> Result<RunResult> {
    solve_cim_with(problem, params, schedule, &mut RngStream::new(seed, 0))
}

/// Runs the CIM with an explicit random stream. A mirrored stream negates
/// all initial amplitudes and noise, which flips every readout spin.
pub fn solve_cim_with(
    problem: &IsingProblem,
    params: &CimParams,
    schedule: &SolverSchedule,
    rng: &mut RngStream,
) -> Result<RunResult> {
    params.validate()?;
    schedule.validate(CIM_RAMPS)?;
    if problem.has_field() {
        return Err(Error::invalid("external field must be absorbed before solving"));
    }
    let n = problem.n();
    let machine = Cim {
        problem,
        n,
        params,
        pump: schedule.ramp("pump").cloned(),
        noise: schedule.ramp("noise").cloned(),
        dt: schedule.dt,
        max_steps: schedule.max_steps,
    };
    let mut y = vec![0.0; 2 * n];
    let scale = params.initial_amplitude;
    if machine.bistable() {
        for v in y.iter_mut().take(n) {
            *v = scale * rng.gaussian();
        }
        y[n..].fill(1.0);
    } else {
        for v in y.iter_mut() {
            *v = scale * rng.gaussian();
        }
    }
    run(&machine, y, schedule, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::CouplingMatrix;

    fn single() -> IsingProblem {
        IsingProblem::without_field(CouplingMatrix::empty(1).unwrap())
    }

    #[test]
    fn single_oscillator_above_threshold() {
        let params = CimParams { pump: 2.0, mode: CimMode::QuadraturePair, initial_amplitude: 0.1, ..Default::default() };
        let s = SolverSchedule { max_steps: 50_000, convergence_tolerance: 1e-10, ..Default::default() };
        let r = solve_cim(&single(), &params, &s, 1).unwrap();
        assert!(r.converged);
        let a = r.final_state.amplitudes[0];
        assert!((a.re * a.re - 1.0).abs() < 1e-6);
        assert!(a.im.abs() < 1e-6);
    }

    #[test]
    fn below_threshold_decays() {
        for mode in [CimMode::ComplexAmplitude, CimMode::QuadraturePair] {
            let j = CouplingMatrix::empty(3).unwrap();
            let p = IsingProblem::without_field(j);
            let params = CimParams { pump: 0.5, mode, initial_amplitude: 0.1, ..Default::default() };
            let s = SolverSchedule { max_steps: 5_000, ..Default::default() };
            let r = solve_cim(&p, &params, &s, 2).unwrap();
            assert!(r.final_state.amplitudes.iter().all(|a| a.norm() < 1e-6));
        }
    }

    #[test]
    fn complex_and_quadrature_agree() {
        let j = CouplingMatrix::new(3, [(0, 1, 0.3), (1, 2, -0.2), (0, 2, 0.1)]).unwrap();
        let p = IsingProblem::without_field(j);
        let s = SolverSchedule { max_steps: 3_000, ..Default::default() };
        let a = CimParams { pump: 1.3, mode: CimMode::ComplexAmplitude, initial_amplitude: 0.1, ..Default::default() };
        let b = CimParams { mode: CimMode::QuadraturePair, ..a.clone() };
        let ra = solve_cim(&p, &a, &s, 4).unwrap();
        let rb = solve_cim(&p, &b, &s, 4).unwrap();
        for (x, y) in ra.final_state.amplitudes.iter().zip(&rb.final_state.amplitudes) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn field_rejected() {
        let p = IsingProblem::new(CouplingMatrix::empty(1).unwrap(), vec![1.0]).unwrap();
        let s = SolverSchedule { max_steps: 10, ..Default::default() };
        assert!(solve_cim(&p, &CimParams::default(), &s, 0).is_err());
    }
}
