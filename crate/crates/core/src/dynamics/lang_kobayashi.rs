//! Condensate network with slow reservoirs.
//!
//! ```text
//! dΨ_i/dt = −iU|Ψ_i|²Ψ_i + (R_i − γ_c)Ψ_i + Σ_{j≠i} J_ij Ψ_j
//! dR_i/dt = Γ_i − γ_R R_i − R_i|Ψ_i|²
//! dΓ_i/dt = ε(ρ_th − |Ψ_i|²)
//! ```
//!
//! With `ε = 0` the injection rates `Γ_i` stay at their initial values.
//! With `ε > 0` each `Γ_i` rises until the site holds `ρ_th`, and the total
//! injection at the fixed point is lowest for XY-minimising phases.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::machine::{corotating_residual, run, seed_amplitudes, Machine};
use super::readout::phase_readout;
use super::{OscillatorState, RunResult};
use crate::error::{check_len, Error, Result};
use crate::hamiltonians::{xy_energy_raw, Configuration, XYProblem};
use crate::integrator::{Ramp, RngStream, SolverSchedule, VectorField};

pub const LANG_KOBAYASHI_RAMPS: &[&str] = &["noise"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LangKobayashiParams {
    /// Initial injection rates `Γ_i ≥ 0`; fixed when `feedback_rate = 0`.
    pub reservoir_pump: Vec<f64>,
    pub reservoir_loss: f64,
    pub condensate_loss: f64,
    pub self_interaction: f64,
    pub feedback_rate: f64,
    pub threshold: f64,
    pub noise_amplitude: f64,
    pub initial_amplitude: f64,
}

impl Default for LangKobayashiParams {
    fn default() -> Self {
        LangKobayashiParams {
            reservoir_pump: Vec::new(),
            reservoir_loss: 1.0,
            condensate_loss: 1.0,
            self_interaction: 0.0,
            feedback_rate: 1e-2,
            threshold: 1.0,
            noise_amplitude: 0.0,
            initial_amplitude: 1e-3,
        }
    }
}

impl LangKobayashiParams {
    /// Every site starts with injection `gamma`.
    pub fn uniform(n: usize, gamma: f64) -> Self {
        LangKobayashiParams { reservoir_pump: vec![gamma; n], ..Self::default() }
    }

    fn validate(&self, n: usize) -> Result<()> {
        check_len(n, self.reservoir_pump.len())?;
        if self.reservoir_pump.iter().any(|g| !(*g >= 0.0 && g.is_finite())) {
            return Err(Error::invalid("reservoir_pump must be non-negative and finite"));
        }
        if !(self.reservoir_loss > 0.0 && self.condensate_loss > 0.0 && self.threshold > 0.0) {
            return Err(Error::invalid("reservoir_loss, condensate_loss and threshold must be positive"));
        }
        if !(self.self_interaction >= 0.0 && self.feedback_rate >= 0.0 && self.noise_amplitude >= 0.0) {
            return Err(Error::invalid("self_interaction, feedback_rate and noise_amplitude must be non-negative"));
        }
        Ok(())
    }
}

struct LangKobayashi<'a> {
    problem: &'a XYProblem,
    params: &'a LangKobayashiParams,
    noise: Option<Ramp>,
    dt: f64,
    max_steps: usize,
}

impl LangKobayashi<'_> {
    fn amplitudes(&self, y: &[f64]) -> Vec<Complex64> {
        (0..self.problem.n()).map(|i| Complex64::new(y[2 * i], y[2 * i + 1])).collect()
    }
}

impl VectorField for LangKobayashi<'_> {
    fn dim(&self) -> usize {
        4 * self.problem.n()
    }

    fn eval(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let n = self.problem.n();
        let p = self.params;
        let j = self.problem.couplings();
        for i in 0..n {
            let psi = Complex64::new(y[2 * i], y[2 * i + 1]);
            let rho = psi.norm_sqr();
            let r = y[2 * n + i];
            let gamma = y[3 * n + i];
            let mut d = Complex64::new(r - p.condensate_loss, -p.self_interaction * rho) * psi;
            for &(k, w) in j.neighbors(i) {
                d += w * Complex64::new(y[2 * k], y[2 * k + 1]);
            }
            dy[2 * i] = d.re;
            dy[2 * i + 1] = d.im;
            dy[2 * n + i] = gamma - p.reservoir_loss * r - r * rho;
            dy[3 * n + i] = p.feedback_rate * (p.threshold - rho);
        }
    }
}

impl Machine for LangKobayashi<'_> {
    fn name(&self) -> &'static str {
        "lang_kobayashi"
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

    fn project(&self, y: &mut [f64]) {
        let n = self.problem.n();
        for v in &mut y[2 * n..] {
            *v = v.max(0.0);
        }
    }

    fn readout(&self, y: &[f64]) -> Configuration {
        Configuration::Phase(phase_readout(&self.amplitudes(y)))
    }

    fn energy(&self, config: &Configuration) -> f64 {
        xy_energy_raw(self.problem.couplings().edges(), config.as_phase().expect("phase readout").phases())
    }

    fn state(&self, y: &[f64], t: f64) -> OscillatorState {
        let n = self.problem.n();
        OscillatorState {
            amplitudes: self.amplitudes(y),
            pumps: y[3 * n..].to_vec(),
            reservoirs: Some(y[2 * n..3 * n].to_vec()),
            time: t,
        }
    }
}

pub fn solve_lang_kobayashi(
    problem: &XYProblem,
    params: &LangKobayashiParams,
    schedule: &SolverSchedule,
    seed: u64,
) -> Result<RunResult> {
    solve_lang_kobayashi_with(problem, params, schedule, &mut RngStream::new(seed, 0))
}

/// Starts from weak random condensates and empty reservoirs.
pub fn solve_lang_kobayashi_with(
    problem: &XYProblem,
    params: &LangKobayashiParams,
    schedule: &SolverSchedule,
    rng: &mut RngStream,
) -> Result<RunResult> {
    schedule.validate(LANG_KOBAYASHI_RAMPS)?;
    let n = problem.n();
    params.validate(n)?;
    let machine = LangKobayashi {
        problem,
        params,
        noise: schedule.ramp("noise").cloned(),
        dt: schedule.dt,
        max_steps: schedule.max_steps,
    };
    let mut y = vec![0.0; 4 * n];
    seed_amplitudes(&mut y, n, params.initial_amplitude * params.threshold.sqrt(), rng);
    y[3 * n..].copy_from_slice(&params.reservoir_pump);
    run(&machine, y, schedule, rng)
}
