//! Gain-dissipative oscillator network with per-site pump feedback.
//!
//! ```text
//! dΨ_i/dt = −iU|Ψ_i|²Ψ_i + (γ_i − |Ψ_i|²)Ψ_i + Σ_{j≠i} (J_ij + iG_ij) Ψ_j + h(t)·conj(Ψ_i)^{n−1}
//! dγ_i/dt = ε(ρ_th − |Ψ_i|²)
//! ```
//!
//! Pumps start below threshold and rise through feedback until every site
//! holds occupation `ρ_th`. At that fixed point the total injection is
//! lowest for phase configurations that minimise the XY energy. A resonant
//! drive of order `n` adds a penalty to phases away from the `n`-th roots
//! of unity, which turns the network into an Ising (`n = 2`) or Potts
//! minimiser.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::machine::{corotating_residual, run, seed_amplitudes, Machine};
use super::readout::{binary_readout, phase_readout};
use super::{OscillatorState, RunResult, Target};
use crate::error::{Error, Result};
use crate::hamiltonians::{ising_energy_unchecked, potts_project, xy_energy_raw, Configuration, CouplingMatrix};
use crate::integrator::{RngStream, SolverSchedule, VectorField};

pub const GAIN_DISSIPATIVE_RAMPS: &[&str] = &["drive", "noise"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GainDissipativeParams {
    /// `U ≥ 0`.
    pub self_interaction: f64,
    /// `ρ_th > 0`.
    pub threshold: f64,
    /// `ε > 0`.
    pub feedback_rate: f64,
    /// Order of the resonant drive; `0` disables it.
    pub resonant_order: usize,
    /// Ceiling `H` reached by the drive ramp.
    pub drive_ceiling: f64,
    /// Josephson part `G_ij` of the complex coupling.
    pub complex_coupling_imag: Option<CouplingMatrix>,
    pub noise_amplitude: f64,
    /// Starting pump `γ_i(0)`; defaults to `−max_i Σ_j |J_ij|`.
    pub initial_pump: Option<f64>,
    /// Initial amplitude scale relative to `√ρ_th`.
    pub initial_amplitude: f64,
}

impl Default for GainDissipativeParams {
    fn default() -> Self {
        GainDissipativeParams {
            self_interaction: 0.0,
            threshold: 1.0,
            feedback_rate: 1e-2,
            resonant_order: 0,
            drive_ceiling: 0.0,
            complex_coupling_imag: None,
            noise_amplitude: 0.0,
            initial_pump: None,
            initial_amplitude: 1e-3,
        }
    }
}

impl GainDissipativeParams {
    /// Defaults with a resonant drive of order `order` and ceiling
    /// `margin · max_i Σ_j |J_ij|` (plus a small constant so an empty
    /// coupling matrix still gets a positive ceiling).
    pub fn with_drive(couplings: &CouplingMatrix, order: usize, margin: f64) -> Self {
        GainDissipativeParams {
            resonant_order: order,
            drive_ceiling: margin * couplings.max_abs_row_sum() + 1e-3,
            ..Self::default()
        }
    }

    /// Parameters for a Potts (`order ≥ 3`) drive that stay stable while
    /// locking phases tightly to the `order`-th roots of unity.
    ///
    /// Linearising the amplitude equation at `|Ψ|² = ρ_th` gives a growth
    /// rate `−2ρ_th + (n−2)·H·ρ_th^{(n−2)/2}`, so a strong drive
    /// destabilises the feedback fixed point. In units where `ρ_th = 1` the
    /// drive is set to `0.8·2/(n−2)`, and `ρ_th = 40·(n−2)·max_i Σ_j |J_ij|`
    /// makes the couplings weak enough for the phases to settle within
    /// about `1e-2` of the lattice. The feedback rate is `0.1·ρ_th`.
    ///
    /// The natural time unit shrinks by `ρ_th`; integrate with
    /// [`natural_dt`](Self::natural_dt).
    pub fn potts(couplings: &CouplingMatrix, order: usize) -> Self {
        let order = order.max(3);
        let k = (order - 2) as f64;
        let rho = (40.0 * k * couplings.max_abs_row_sum()).max(1.0);
        let h = 1.6 / k;
        GainDissipativeParams {
            resonant_order: order,
            threshold: rho,
            feedback_rate: 0.1 * rho,
            drive_ceiling: h * rho.powf((4.0 - order as f64) / 2.0),
            ..Self::default()
        }
    }

    /// A step of `dt_unit` in units where `ρ_th = 1`.
    pub fn natural_dt(&self, dt_unit: f64) -> f64 {
        dt_unit / self.threshold
    }

    /// `H·ρ_th^{(n−2)/2}`, the drive force at the target occupation in the
    /// units of the coupling force `Σ_j |J_ij|`.
    fn effective_drive(&self) -> f64 {
        self.drive_ceiling * self.threshold.powf((self.resonant_order as f64 - 2.0) / 2.0)
    }

    fn validate(&self, couplings: &CouplingMatrix) -> Result<()> {
        if !(self.self_interaction >= 0.0) {
            return Err(Error::invalid("self_interaction must be non-negative"));
        }
        if !(self.threshold > 0.0) || !(self.feedback_rate > 0.0) {
            return Err(Error::invalid("threshold and feedback_rate must be positive"));
        }
        if !(self.noise_amplitude >= 0.0) || !(self.drive_ceiling >= 0.0) {
            return Err(Error::invalid("noise_amplitude and drive_ceiling must be non-negative"));
        }
        if self.resonant_order >= 2 && self.effective_drive() <= couplings.max_abs_row_sum() {
            return Err(Error::invalid(format!(
                "drive H·ρ_th^((n−2)/2) = {} must exceed max_i Σ_j |J_ij| = {}",
                self.effective_drive(),
                couplings.max_abs_row_sum()
            )));
        }
        if let Some(g) = &self.complex_coupling_imag {
            if g.n() != couplings.n() {
                return Err(Error::DimensionMismatch { expected: couplings.n(), got: g.n() });
            }
        }
        Ok(())
    }
}

struct GainDissipative<'a> {
    target: Target<'a>,
    n: usize,
    params: &'a GainDissipativeParams,
    drive: Option<crate::integrator::Ramp>,
    noise: Option<crate::integrator::Ramp>,
    max_steps: usize,
    dt: f64,
}

impl GainDissipative<'_> {
    fn drive_at(&self, t: f64) -> f64 {
        if self.params.resonant_order == 0 {
            return 0.0;
        }
        let step = t / self.dt;
        match &self.drive {
            Some(r) => r.value_at(step, self.max_steps),
            None => self.params.drive_ceiling * (step / self.max_steps as f64).clamp(0.0, 1.0),
        }
    }

    fn amplitudes(&self, y: &[f64]) -> Vec<Complex64> {
        (0..self.n).map(|i| Complex64::new(y[2 * i], y[2 * i + 1])).collect()
    }
}

impl VectorField for GainDissipative<'_> {
    fn dim(&self) -> usize {
        3 * self.n
    }

    fn eval(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let n = self.n;
        let p = self.params;
        let u = p.self_interaction;
        let h = self.drive_at(t);
        let order = p.resonant_order;
        let j = self.target.couplings();
        let g = p.complex_coupling_imag.as_ref();
        for i in 0..n {
            let (x, v) = (y[2 * i], y[2 * i + 1]);
            let rho = x * x + v * v;
            let gain = y[2 * n + i] - rho;
            let mut fx = gain * x + u * rho * v;
            let mut fv = gain * v - u * rho * x;
            for &(k, w) in j.neighbors(i) {
                fx += w * y[2 * k];
                fv += w * y[2 * k + 1];
            }
            if let Some(g) = g {
                for &(k, w) in g.neighbors(i) {
                    fx -= w * y[2 * k + 1];
                    fv += w * y[2 * k];
                }
            }
            if order > 0 && h != 0.0 {
                let d = match order {
                    1 => Complex64::new(1.0, 0.0),
                    2 => Complex64::new(x, -v),
                    _ => Complex64::new(x, -v).powu(order as u32 - 1),
                };
                fx += h * d.re;
                fv += h * d.im;
            }
            dy[2 * i] = fx;
            dy[2 * i + 1] = fv;
            dy[2 * n + i] = p.feedback_rate * (p.threshold - rho);
        }
    }
}

impl Machine for GainDissipative<'_> {
    fn name(&self) -> &'static str {
        "gain_dissipative"
    }

    fn noisy_dims(&self) -> usize {
        2 * self.n
    }

    fn noise(&self, t: f64) -> f64 {
        match &self.noise {
            Some(r) => r.value_at(t / self.dt, self.max_steps).max(0.0),
            None => self.params.noise_amplitude,
        }
    }

    fn residual(&self, y: &[f64], slope: &[f64]) -> f64 {
        if self.params.resonant_order == 0 {
            corotating_residual(y, slope, self.n)
        } else {
            super::machine::l2(slope)
        }
    }

    fn readout(&self, y: &[f64]) -> Configuration {
        match self.target {
            Target::Ising(_) => Configuration::Binary(binary_readout((0..self.n).map(|i| y[2 * i]))),
            Target::XY(_) => Configuration::Phase(phase_readout(&self.amplitudes(y))),
            Target::Potts(p) => Configuration::Phase(
                potts_project(&phase_readout(&self.amplitudes(y)), p.n_states()).expect("n_states ≥ 2"),
            ),
        }
    }

    fn energy(&self, config: &Configuration) -> f64 {
        match (self.target, config) {
            (Target::Ising(p), Configuration::Binary(c)) => ising_energy_unchecked(p, c.spins()),
            (_, Configuration::Phase(c)) => xy_energy_raw(self.target.couplings().edges(), c.phases()),
            _ => unreachable!("readout kind matches target"),
        }
    }

    fn state(&self, y: &[f64], t: f64) -> OscillatorState {
        OscillatorState {
            amplitudes: self.amplitudes(y),
            pumps: y[2 * self.n..].to_vec(),
            reservoirs: None,
            time: t,
        }
    }
}

/// Runs the gain-dissipative solver with RNG stream 0 of `seed`.
pub fn solve_gain_dissipative<'a>(
    problem: impl Into<Target<'a>>,
    params: &GainDissipativeParams,
    schedule: &SolverSchedule,
    seed: u64,
) -> Result<RunResult> {
    solve_gain_dissipative_with(problem, params, schedule, &mut RngStream::new(seed, 0))
}

pub fn solve_gain_dissipative_with<'a>(
    problem: impl Into<Target<'a>>,
    params: &GainDissipativeParams,
    schedule: &SolverSchedule,
    rng: &mut RngStream,
) -> Result<RunResult> {
    let target = problem.into();
    let couplings = target.couplings();
    params.validate(couplings)?;
    schedule.validate(GAIN_DISSIPATIVE_RAMPS)?;
    match target {
        Target::Ising(p) => {
            if params.resonant_order != 2 {
                return Err(Error::invalid("Ising targets need resonant_order = 2"));
            }
            if p.has_field() {
                return Err(Error::invalid("external field must be absorbed before solving"));
            }
        }
        Target::Potts(p) => {
            if params.resonant_order != p.n_states() {
                return Err(Error::invalid("Potts targets need resonant_order = n_states"));
            }
        }
        Target::XY(_) => {
            if params.resonant_order != 0 {
                return Err(Error::invalid("XY targets need resonant_order = 0"));
            }
        }
    }
    if params.complex_coupling_imag.as_ref().is_some_and(|g| g.num_edges() > 0) {
        log::warn!("non-zero Josephson coupling G_ij: fixed points are only reached when J_ij ≫ G_ij");
    }

    let n = target.n();
    let machine = GainDissipative {
        target,
        n,
        params,
        drive: schedule.ramp("drive").cloned(),
        noise: schedule.ramp("noise").cloned(),
        max_steps: schedule.max_steps,
        dt: schedule.dt,
    };
    let mut y = vec![0.0; 3 * n];
    seed_amplitudes(&mut y, n, params.initial_amplitude * params.threshold.sqrt(), rng);
    let gamma0 = params.initial_pump.unwrap_or(-couplings.max_abs_row_sum());
    y[2 * n..].fill(gamma0);
    run(&machine, y, schedule, rng)
}
