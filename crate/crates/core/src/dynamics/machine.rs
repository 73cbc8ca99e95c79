use std::time::Instant;

use super::{OscillatorState, RunResult, Sample};
use crate::error::{Error, Result};
use crate::hamiltonians::Configuration;
use crate::integrator::{ConvergenceDetector, EulerMaruyama, Rk4, RngStream, SolverSchedule, VectorField};

/// A vector field plus everything the run driver needs to turn its
/// trajectory into a [`RunResult`].
pub(crate) trait Machine: VectorField {
    fn name(&self) -> &'static str;

    /// Leading state components that receive additive noise.
    fn noisy_dims(&self) -> usize {
        0
    }

    /// Noise amplitude at time `t`.
    fn noise(&self, _t: f64) -> f64 {
        0.0
    }

    /// Stationarity residual of state `y` with slope `f(t, y)`.
    fn residual(&self, _y: &[f64], slope: &[f64]) -> f64 {
        l2(slope)
    }

    /// Enforces hard constraints (e.g. non-negative reservoirs) after a step.
    fn project(&self, _y: &mut [f64]) {}

    fn readout(&self, y: &[f64]) -> Configuration;

    /// Canonical energy of a readout.
    fn energy(&self, config: &Configuration) -> f64;

    fn state(&self, y: &[f64], t: f64) -> OscillatorState;
}

pub(crate) fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Residual of a U(1)-symmetric field measured in the co-rotating frame.
///
/// The amplitudes occupy the first `2n` components as interleaved
/// `(re, im)` pairs. The common angular velocity `ω` is the least-squares
/// fit of `f_Ψ ≈ iωΨ`; locked states rotating at `ω` then have zero
/// residual.
pub(crate) fn corotating_residual(y: &[f64], slope: &[f64], n: usize) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let (x, v) = (y[2 * i], y[2 * i + 1]);
        let (fx, fv) = (slope[2 * i], slope[2 * i + 1]);
        // Im(conj(ψ)·f)
        num += x * fv - v * fx;
        den += x * x + v * v;
    }
    let omega = if den > 0.0 { num / den } else { 0.0 };
    let mut sum = 0.0;
    for i in 0..n {
        let (x, v) = (y[2 * i], y[2 * i + 1]);
        let rx = slope[2 * i] + omega * v;
        let rv = slope[2 * i + 1] - omega * x;
        sum += rx * rx + rv * rv;
    }
    for s in &slope[2 * n..] {
        sum += s * s;
    }
    sum.sqrt()
}

/// Integrates `machine` from `y0` under `schedule`.
///
/// Steps with RK4 while the noise amplitude is zero and with
/// Euler–Maruyama otherwise. Readouts happen every `sample_every` steps and
/// at the end; the lowest canonical energy seen is kept.
pub(crate) fn run<M: Machine>(
    machine: &M,
    y0: Vec<f64>,
    schedule: &SolverSchedule,
    rng: &mut RngStream,
) -> Result<RunResult> {
    let clock = Instant::now();
    let dim = machine.dim();
    debug_assert_eq!(y0.len(), dim);
    let dt = schedule.dt;
    let mut y = y0;
    let mut prev = y.clone();
    let mut rk = Rk4::new(dim);
    let mut em = EulerMaruyama::new(dim);
    let mut detector = ConvergenceDetector::new(schedule.convergence_tolerance, schedule.convergence_window);
    let mut samples = Vec::new();

    let first = machine.readout(&y);
    let first_energy = machine.energy(&first);
    if schedule.record_samples {
        samples.push(Sample { step: 0, energy: first_energy, amplitude_spread: machine.state(&y, 0.0).amplitude_spread() });
    }
    let mut best = (first_energy, first);
    let mut converged = false;
    let mut steps = 0;

    for step in 0..schedule.max_steps {
        let t = step as f64 * dt;
        let sigma = machine.noise(t);
        prev.copy_from_slice(&y);
        let stepped = if sigma > 0.0 {
            em.step(machine, t, &mut y, dt, sigma, machine.noisy_dims(), rng)
        } else {
            rk.step(machine, t, &mut y, dt)
        };
        stepped.map_err(|_| Error::Diverged { step })?;
        machine.project(&mut y);
        steps = step + 1;
        let slope = if sigma > 0.0 { em.slope() } else { rk.slope() };
        let residual = machine.residual(&prev, slope);

        if steps % schedule.sample_every == 0 {
            let cfg = machine.readout(&y);
            let e = machine.energy(&cfg);
            if schedule.record_samples {
                let spread = machine.state(&y, steps as f64 * dt).amplitude_spread();
                samples.push(Sample { step: steps, energy: e, amplitude_spread: spread });
            }
            if e < best.0 {
                best = (e, cfg);
            }
        }
        if detector.observe(residual) {
            converged = true;
            break;
        }
    }

    let t_end = steps as f64 * dt;
    let mut slope = vec![0.0; dim];
    machine.eval(t_end, &y, &mut slope);
    let final_residual = machine.residual(&y, &slope);
    converged &= final_residual < schedule.convergence_tolerance;

    let final_config = machine.readout(&y);
    let final_energy = machine.energy(&final_config);
    let state = machine.state(&y, t_end);
    if schedule.record_samples && samples.last().map(|s| s.step) != Some(steps) {
        samples.push(Sample { step: steps, energy: final_energy, amplitude_spread: state.amplitude_spread() });
    }
    if final_energy < best.0 {
        best = (final_energy, final_config.clone());
    }
    let below_threshold = state.amplitudes.iter().all(|z| z.norm() < 1e-9);

    Ok(RunResult {
        solver: machine.name().to_string(),
        best_energy: best.0,
        best_config: best.1,
        final_config,
        final_energy,
        converged,
        below_threshold,
        steps_taken: steps,
        final_residual,
        amplitude_spread: state.amplitude_spread(),
        wall_time: clock.elapsed().as_secs_f64(),
        seed: rng.seed(),
        stream: rng.stream(),
        final_state: state,
        samples,
    })
}

/// Complex Gaussian amplitudes with `E|Ψ|² = scale²`, written interleaved.
pub(crate) fn seed_amplitudes(y: &mut [f64], n: usize, scale: f64, rng: &mut RngStream) {
    let s = scale / std::f64::consts::SQRT_2;
    for v in y.iter_mut().take(2 * n) {
        *v = s * rng.gaussian();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corotating_residual_ignores_uniform_rotation() {
        // two unit amplitudes rotating together at ω = 3
        let y = [1.0, 0.0, 0.0, 1.0];
        let slope = [0.0, 3.0, -3.0, 0.0];
        assert!(corotating_residual(&y, &slope, 2) < 1e-15);
        assert!((l2(&slope) - 18f64.sqrt()).abs() < 1e-15);
        let slope2 = [0.0, 3.0, -1.0, 0.0];
        assert!(corotating_residual(&y, &slope2, 2) > 0.5);
    }
}
