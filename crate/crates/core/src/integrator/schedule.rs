use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear ramp of one named solver parameter.
///
/// The value moves from `start` to `end` over `steps` integration steps
/// (the whole schedule when unset) and then holds at `end`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ramp {
    pub name: String,
    pub start: f64,
    pub end: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

impl Ramp {
    pub fn new(name: impl Into<String>, start: f64, end: f64) -> Self {
        Ramp { name: name.into(), start, end, steps: None }
    }

    pub fn over_steps(mut self, steps: usize) -> Self {
        self.steps = Some(steps);
        self
    }

    /// Value at fractional step position `step`, clamped to the ramp span.
    pub fn value_at(&self, step: f64, max_steps: usize) -> f64 {
        let span = self.steps.unwrap_or(max_steps).max(1) as f64;
        let frac = (step / span).clamp(0.0, 1.0);
        self.start + (self.end - self.start) * frac
    }
}

/// `start + (end − start)·step/max_steps`.
pub fn ramp_value(ramp: &Ramp, step: usize, max_steps: usize) -> Result<f64> {
    if max_steps == 0 {
        return Err(Error::invalid("max_steps must be positive"));
    }
    if step > max_steps {
        return Err(Error::invalid(format!("step {step} beyond max_steps {max_steps}")));
    }
    Ok(ramp.start + (ramp.end - ramp.start) * step as f64 / max_steps as f64)
}

/// Time step, stopping rules and parameter ramps for one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSchedule {
    pub dt: f64,
    pub max_steps: usize,
    /// Readout and best-energy tracking interval, in steps.
    pub sample_every: usize,
    pub ramps: Vec<Ramp>,
    pub convergence_tolerance: f64,
    pub convergence_window: usize,
    /// Keep `(step, energy, spread)` samples in the result.
    pub record_samples: bool,
}

impl Default for SolverSchedule {
    fn default() -> Self {
        SolverSchedule {
            dt: 1e-2,
            max_steps: 20_000,
            sample_every: 10,
            ramps: Vec::new(),
            convergence_tolerance: 1e-6,
            convergence_window: 100,
            record_samples: false,
        }
    }
}

impl SolverSchedule {
    /// Checks positivity constraints and that every ramp targets one of
    /// `allowed`.
    pub fn validate(&self, allowed: &[&str]) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid("dt must be positive and finite"));
        }
        if self.max_steps == 0 || self.sample_every == 0 || self.convergence_window == 0 {
            return Err(Error::invalid("max_steps, sample_every and convergence_window must be positive"));
        }
        if !(self.convergence_tolerance > 0.0) {
            return Err(Error::invalid("convergence_tolerance must be positive"));
        }
        for ramp in &self.ramps {
            if !allowed.contains(&ramp.name.as_str()) {
                return Err(Error::invalid(format!(
                    "ramp '{}' does not match a parameter of this solver (expected one of {allowed:?})",
                    ramp.name
                )));
            }
            if !ramp.start.is_finite() || !ramp.end.is_finite() {
                return Err(Error::invalid(format!("ramp '{}' has non-finite endpoints", ramp.name)));
            }
            if ramp.steps == Some(0) {
                return Err(Error::invalid(format!("ramp '{}' has zero length", ramp.name)));
            }
        }
        Ok(())
    }

    pub fn ramp(&self, name: &str) -> Option<&Ramp> {
        self.ramps.iter().find(|r| r.name == name)
    }

    /// Total integration time `max_steps · dt`.
    pub fn horizon(&self) -> f64 {
        self.max_steps as f64 * self.dt
    }

    pub fn with_ramp(mut self, ramp: Ramp) -> Self {
        self.ramps.retain(|r| r.name != ramp.name);
        self.ramps.push(ramp);
        self
    }
}

/// Flags convergence once the residual stays below tolerance for a full
/// window of consecutive observations.
#[derive(Debug, Clone)]
pub struct ConvergenceDetector {
    tolerance: f64,
    window: usize,
    run: usize,
}

impl ConvergenceDetector {
    pub fn new(tolerance: f64, window: usize) -> Self {
        ConvergenceDetector { tolerance, window, run: 0 }
    }

    pub fn observe(&mut self, residual: f64) -> bool {
        if residual < self.tolerance {
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.run >= self.window
    }
}
